// entkit: classify bipartite states by separability and distillability,
// analyze identical-particle correlations, and generate named state
// families as state files.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "entkit/errors.hpp"
#include "entkit/report.hpp"
#include "entkit/state_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 2;
constexpr int kExitParse = 3;
constexpr int kExitInconclusive = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw entkit::Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw entkit::Error("cannot open '" + out_path + "' for writing");
        out << text;
    }
}

struct CommonFlags {
    entkit::AnalyzeOptions options;
    std::string format = "text";
    std::string out_path;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
    cmd->add_option("--tol", flags->options.tol, "positivity tolerance")
        ->envname("ENTKIT_TOL");
    cmd->add_option("--budget", flags->options.budget, "search budget")
        ->envname("ENTKIT_BUDGET");
    cmd->add_option("--restarts", flags->options.restarts, "multi-start restarts")
        ->envname("ENTKIT_RESTARTS");
    cmd->add_option("--seed", flags->options.seed, "random seed")->envname("ENTKIT_SEED");
    cmd->add_option("--kmax", flags->options.kmax, "maximum copy count for distillability")
        ->envname("ENTKIT_KMAX");
    cmd->add_option("--format", flags->format, "output format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->envname("ENTKIT_FORMAT");
    cmd->add_option("--out", flags->out_path, "write the report to a file")
        ->envname("ENTKIT_OUT");
}

int run_analyze(const std::string& path, const CommonFlags& flags) {
    const std::string bytes = slurp(path);
    std::istringstream in(bytes);
    const entkit::DensityMatrix rho = entkit::load_density(in);
    const entkit::ClassificationReport report =
        entkit::analyze_state(rho, flags.options, entkit::content_digest(bytes));
    emit(flags.format == "structured" ? report.to_json() : report.to_text(), flags.out_path);
    return report.inconclusive() ? kExitInconclusive : kExitOk;
}

int run_fermion(const std::string& path, const CommonFlags& flags) {
    const std::string bytes = slurp(path);
    std::istringstream in(bytes);
    const entkit::LoadedIdentical input = entkit::load_identical(in);
    const entkit::IdenticalReport report =
        entkit::analyze_identical(input, flags.options, entkit::content_digest(bytes));
    emit(flags.format == "structured" ? report.to_json() : report.to_text(), flags.out_path);
    return kExitOk;
}

struct GenerateFlags {
    std::string family;
    std::string out_path;
    std::size_t m = 2;
    std::size_t dim = 3;
    double p = 0.5;
    double lambda = 0.5;
    std::size_t rank = 4;
    std::size_t rows = 2;
    std::size_t cols = 2;
    std::uint64_t seed = 1;
};

int run_generate(const GenerateFlags& flags) {
    using namespace entkit;
    std::optional<DensityMatrix> rho;
    if (flags.family == "maximally_entangled") {
        rho = maximally_entangled(flags.m).to_density();
    } else if (flags.family == "werner_2x2") {
        rho = werner_2x2(flags.p);
    } else if (flags.family == "sym_antisym") {
        rho = sym_antisym_family(flags.dim, flags.lambda);
    } else if (flags.family == "random") {
        Rng rng(flags.seed);
        rho = random_density(Dims{flags.rows, flags.cols}, flags.rank, rng);
    } else {
        throw UnknownFamily("unknown family '" + flags.family + "'");
    }
    if (flags.out_path.empty()) {
        save_density(std::cout, *rho);
    } else {
        save_density_file(flags.out_path, *rho);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement classification toolkit"};
    app.require_subcommand(1);

    CommonFlags analyze_flags;
    std::string analyze_path;
    CLI::App* analyze = app.add_subcommand("analyze", "classify a bipartite state file");
    analyze->add_option("state_file", analyze_path, "input state file")->required();
    add_common_flags(analyze, &analyze_flags);

    CommonFlags fermion_flags;
    std::string fermion_path;
    CLI::App* fermion =
        app.add_subcommand("fermion", "analyze an identical-particle state file");
    fermion->add_option("state_file", fermion_path, "input state file")->required();
    add_common_flags(fermion, &fermion_flags);

    GenerateFlags generate_flags;
    CLI::App* generate = app.add_subcommand("generate", "write a named state family");
    generate
        ->add_option("--family", generate_flags.family,
                     "maximally_entangled | werner_2x2 | sym_antisym | random")
        ->required();
    generate->add_option("--m", generate_flags.m, "local dimension for maximally_entangled");
    generate->add_option("--d", generate_flags.dim, "local dimension for sym_antisym");
    generate->add_option("--p", generate_flags.p, "werner mixing parameter");
    generate->add_option("--lambda", generate_flags.lambda, "sym_antisym weight");
    generate->add_option("--rank", generate_flags.rank, "rank for random states");
    generate->add_option("--rows", generate_flags.rows, "Alice dimension for random states");
    generate->add_option("--cols", generate_flags.cols, "Bob dimension for random states");
    generate->add_option("--seed", generate_flags.seed, "random seed")
        ->envname("ENTKIT_SEED");
    generate->add_option("--out", generate_flags.out_path, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(analyze_path, analyze_flags);
        if (fermion->parsed()) return run_fermion(fermion_path, fermion_flags);
        if (generate->parsed()) return run_generate(generate_flags);
    } catch (const entkit::ParseError& err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return kExitParse;
    } catch (const entkit::InvariantViolation& err) {
        std::cerr << "invariant violation: " << err.what() << "\n";
        return kExitInvariant;
    } catch (const entkit::NotAntisymmetric& err) {
        std::cerr << "invariant violation: " << err.what() << "\n";
        return kExitInvariant;
    } catch (const entkit::NotSymmetric& err) {
        std::cerr << "invariant violation: " << err.what() << "\n";
        return kExitInvariant;
    } catch (const entkit::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return kExitOk;
}
