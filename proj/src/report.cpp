#include "entkit/report.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

#include "entkit/eigen.hpp"
#include "entkit/errors.hpp"

namespace entkit {

namespace {

using nlohmann::json;

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    cdouble s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(j, i);
    return s.real();
}

// Decomposable witness from the negative eigenvector of the partial
// transpose: W = (|eta><eta|)^TA.
Witness nppt_witness(const DensityMatrix& rho, const PptResult& evidence,
                     const AnalyzeOptions& options) {
    Witness w;
    w.dims = rho.dims();
    w.op = partial_transpose(outer(evidence.eigenvector, evidence.eigenvector), rho.dims());
    hermitize(w.op);
    w.search_restarts = options.restarts;
    w.sep_floor =
        min_product_expectation(w.op, rho.dims(), options.restarts, options.seed).value;
    w.detected_value = trace_product(w.op, rho.matrix());
    return w;
}

}  // namespace

bool ClassificationReport::inconclusive() const {
    return separability == "ppt_undecided" || distillability == "inconclusive";
}

std::string ClassificationReport::to_text() const {
    std::ostringstream out;
    out << "input " << input_digest << "  (" << dims.m << "x" << dims.n << ")\n";
    out << "  partial transpose: " << (ppt ? "PPT" : "NPPT")
        << "  (min eigenvalue " << pt_min_eigenvalue << ")\n";
    out << "  separability: " << separability << "\n";
    out << "  best separable approximation: lambda = " << bsa_lambda << " with " << bsa_terms
        << " product terms\n";
    out << "  distillability: " << distillability;
    if (distillability == "distillable") out << " at K = " << distill_copies;
    out << "  (value " << distill_value << ")\n";
    if (witness_detection)
        out << "  witness: detection " << *witness_detection << ", separability floor "
            << (witness_sep_floor ? *witness_sep_floor : 0.0) << "\n";
    if (pseudo_mixture_terms)
        out << "  pseudo-mixture size: " << *pseudo_mixture_terms << "\n";
    out << "  seed " << options.seed << ", budget " << options.budget << ", restarts "
        << options.restarts << ", tol " << options.tol << ", kmax " << options.kmax << "\n";
    out << "  wall time " << wall_seconds << " s\n";
    return out.str();
}

std::string ClassificationReport::to_json() const {
    json j;
    j["input_digest"] = input_digest;
    j["dims"] = {dims.m, dims.n};
    j["ppt"] = ppt;
    j["pt_min_eigenvalue"] = pt_min_eigenvalue;
    j["separability"] = separability;
    j["bsa"] = {{"lambda", bsa_lambda}, {"terms", bsa_terms}};
    j["distillability"] = {{"verdict", distillability},
                           {"copies", distill_copies},
                           {"value", distill_value}};
    if (witness_detection) {
        j["witness"] = {{"detection", *witness_detection},
                        {"sep_floor", witness_sep_floor ? *witness_sep_floor : 0.0}};
        if (pseudo_mixture_terms) j["witness"]["pseudo_mixture_terms"] = *pseudo_mixture_terms;
    }
    j["options"] = {{"tol", options.tol},
                    {"budget", options.budget},
                    {"restarts", options.restarts},
                    {"seed", options.seed},
                    {"kmax", options.kmax}};
    j["wall_seconds"] = wall_seconds;
    return j.dump(2);
}

ClassificationReport analyze_state(const DensityMatrix& rho, const AnalyzeOptions& options,
                                   const std::string& digest) {
    const auto t0 = std::chrono::steady_clock::now();
    ClassificationReport report;
    report.input_digest = digest;
    report.dims = rho.dims();
    report.options = options;

    const PptResult ppt = is_ppt(rho, options.tol);
    report.ppt = ppt.ppt;
    report.pt_min_eigenvalue = ppt.min_eigenvalue;

    const Dims d = rho.dims();
    const bool low_dim = (d.m == 2 && d.n <= 3) || (d.n == 2 && d.m <= 3);

    SeparabilityVerdict verdict;
    if (low_dim) {
        verdict = classify_low_dim(rho, options.budget, options.seed);
    } else if (ppt.ppt) {
        verdict = low_rank_separability(rho, options.seed, options.budget);
    } else {
        verdict.kind = VerdictKind::Entangled;
        verdict.nppt_evidence = ppt;
    }
    switch (verdict.kind) {
        case VerdictKind::Separable: report.separability = "separable"; break;
        case VerdictKind::Entangled: report.separability = "entangled"; break;
        case VerdictKind::PptUndecided: report.separability = "ppt_undecided"; break;
    }

    Decomposition bsa;
    if (verdict.kind == VerdictKind::Separable && verdict.certificate) {
        bsa = *verdict.certificate;
    } else {
        bsa = best_separable_approximation(rho, ppt.ppt, options.budget, options.seed);
    }
    report.bsa_lambda = bsa.lambda;
    report.bsa_terms = bsa.separable_part.size();

    // Witness construction for entangled (or suspected-entangled) inputs.
    std::optional<Witness> witness;
    if (!ppt.ppt) {
        witness = nppt_witness(rho, ppt, options);
    } else if (bsa.lambda < 1.0 - 1e-6 && bsa.edge_part) {
        try {
            witness = canonical_edge_witness(*bsa.edge_part, rho, options.restarts,
                                             options.seed);
        } catch (const Error&) {
            // The edge part may fail the gap precondition; no witness then.
        }
    }
    if (witness) {
        report.witness_detection = witness->detected_value;
        report.witness_sep_floor = witness->sep_floor;
        if (d.total() <= 9) {
            try {
                report.pseudo_mixture_terms = local_decomposition(*witness).terms.size();
            } catch (const SingularFrame&) {
            }
        }
    }

    const DistillabilityVerdict distill =
        classify_distillability(rho, options.kmax, options.restarts / 10 + 8, options.seed);
    switch (distill.kind) {
        case DistillabilityKind::Distillable: report.distillability = "distillable"; break;
        case DistillabilityKind::UndistillablePpt:
            report.distillability = "undistillable_ppt";
            break;
        case DistillabilityKind::Inconclusive: report.distillability = "inconclusive"; break;
    }
    report.distill_copies = distill.copies;
    report.distill_value = distill.value;

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string IdenticalReport::to_text() const {
    std::ostringstream out;
    out << "input " << input_digest << "  (" << kind << ", " << n_modes << " modes)\n";
    out << "  slater rank: " << slater_rank << "\n";
    out << "  z spectrum:";
    for (double z : z_spectrum) out << " " << z;
    out << "\n";
    if (concurrence) out << "  concurrence: " << *concurrence << "\n";
    if (mixed_consistency)
        out << "  mixed-pure concurrence gap: " << *mixed_consistency << "\n";
    out << "  seed " << options.seed << ", wall time " << wall_seconds << " s\n";
    return out.str();
}

std::string IdenticalReport::to_json() const {
    json j;
    j["input_digest"] = input_digest;
    j["kind"] = kind;
    j["n_modes"] = n_modes;
    j["z_spectrum"] = z_spectrum;
    j["slater_rank"] = slater_rank;
    if (concurrence) j["concurrence"] = *concurrence;
    if (mixed_consistency) j["mixed_pure_gap"] = *mixed_consistency;
    j["options"] = {{"seed", options.seed}};
    j["wall_seconds"] = wall_seconds;
    return j.dump(2);
}

IdenticalReport analyze_identical(const LoadedIdentical& input, const AnalyzeOptions& options,
                                  const std::string& digest) {
    const auto t0 = std::chrono::steady_clock::now();
    IdenticalReport report;
    report.input_digest = digest;
    report.n_modes = input.n_modes;
    report.options = options;

    if (input.kind == ParticleKind::Fermion) {
        report.kind = "fermion";
        const FermionState state(input.n_modes, input.coefficients);
        const auto sd = slater_decompose(state);
        report.z_spectrum = sd.z;
        report.slater_rank = slater_rank(state);
        if (input.n_modes == 4) {
            report.concurrence = fermionic_concurrence(state);
            const MixedFermionState pure = MixedFermionState::from_ensemble({{1.0, state}});
            report.mixed_consistency =
                std::abs(mixed_fermionic_concurrence(pure) - *report.concurrence);
        }
    } else {
        report.kind = "boson";
        const BosonState state(input.n_modes, input.coefficients);
        const auto bd = bosonic_decompose(state);
        report.z_spectrum = bd.d;
        report.slater_rank = bosonic_slater_rank(state);
        if (input.n_modes == 2) report.concurrence = bosonic_concurrence(state);
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace entkit
