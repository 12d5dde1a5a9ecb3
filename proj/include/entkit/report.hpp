// Analysis pipelines and their reports: the full bipartite
// classification run and the identical-particle run, each emitted as
// human-readable text or a structured JSON document.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "entkit/distillability.hpp"
#include "entkit/fermionic.hpp"
#include "entkit/separability.hpp"
#include "entkit/state_io.hpp"
#include "entkit/states.hpp"
#include "entkit/witnesses.hpp"

namespace entkit {

struct AnalyzeOptions {
    double tol = 1e-9;
    std::size_t budget = 20000;
    std::size_t restarts = 2000;
    std::uint64_t seed = 1;
    std::size_t kmax = 2;
};

struct ClassificationReport {
    std::string input_digest;
    Dims dims;
    bool ppt = false;
    double pt_min_eigenvalue = 0.0;
    std::string separability;  // separable | entangled | ppt_undecided
    double bsa_lambda = 0.0;
    std::size_t bsa_terms = 0;
    std::string distillability;  // distillable | undistillable_ppt | inconclusive
    std::size_t distill_copies = 0;
    double distill_value = 0.0;
    std::optional<double> witness_detection;
    std::optional<double> witness_sep_floor;
    std::optional<std::size_t> pseudo_mixture_terms;
    AnalyzeOptions options;
    double wall_seconds = 0.0;

    bool inconclusive() const;
    std::string to_text() const;
    std::string to_json() const;
};

ClassificationReport analyze_state(const DensityMatrix& rho, const AnalyzeOptions& options,
                                   const std::string& digest);

struct IdenticalReport {
    std::string input_digest;
    std::string kind;  // fermion | boson
    std::size_t n_modes = 0;
    std::vector<double> z_spectrum;
    std::size_t slater_rank = 0;
    std::optional<double> concurrence;        // four modes (fermion) / two (boson)
    std::optional<double> mixed_consistency;  // |C_mixed(pure rho) - C_pure|
    AnalyzeOptions options;
    double wall_seconds = 0.0;

    std::string to_text() const;
    std::string to_json() const;
};

IdenticalReport analyze_identical(const LoadedIdentical& input, const AnalyzeOptions& options,
                                  const std::string& digest);

}  // namespace entkit
