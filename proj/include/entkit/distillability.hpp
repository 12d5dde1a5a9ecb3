// K-copy distillability tests: minimization of <psi|(rho^TA)^(x)K|psi>
// over Schmidt-rank-2 vectors, verdict classification, and the
// symmetric/antisymmetric family scan.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "entkit/separability.hpp"
#include "entkit/states.hpp"

namespace entkit {

// psi = a |e1>|f1> + b |e2>|f2> with orthonormal pairs on the K-copy
// spaces.
struct SchmidtTwoVector {
    CVector e1, e2;
    CVector f1, f2;
    cdouble a = 0.0;
    cdouble b = 0.0;
    CVector assemble() const;
};

struct KCopyResult {
    double value = 0.0;  // re-verified by direct quadratic-form evaluation
    SchmidtTwoVector argmin;
    std::size_t restarts_used = 0;
};

KCopyResult kcopy_min_expectation(const DensityMatrix& rho, std::size_t copies,
                                  std::size_t restarts, std::uint64_t seed,
                                  std::size_t dimension_cap = 4096);

enum class DistillabilityKind { Distillable, UndistillablePpt, Inconclusive };

struct DistillabilityVerdict {
    DistillabilityKind kind = DistillabilityKind::Inconclusive;
    std::size_t copies = 0;     // K at which negativity was certified
    double value = 0.0;         // certified negative value, or best found
    std::optional<SchmidtTwoVector> argmin;
};

DistillabilityVerdict classify_distillability(const DensityMatrix& rho, std::size_t kmax,
                                              std::size_t restarts, std::uint64_t seed);

struct FamilyScanRow {
    double lambda = 0.0;
    bool ppt = false;
    double min_expectation = 0.0;
    std::size_t restarts_used = 0;
    std::uint64_t seed = 0;
};

std::vector<FamilyScanRow> family_scan(std::size_t d, const std::vector<double>& lambda_grid,
                                       std::size_t copies, std::size_t restarts,
                                       std::uint64_t seed);

}  // namespace entkit
