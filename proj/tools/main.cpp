// Command-line front end: generate synthetic problem instances, estimate
// the common subspace from cumulant or sample files, and run benchmark
// grids.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage or file-format error,
// 3 numerical failure (with a diagnostic on stderr).

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "polysub/bench.hpp"
#include "polysub/cumulants.hpp"
#include "polysub/errors.hpp"
#include "polysub/instance_io.hpp"
#include "polysub/synth.hpp"

namespace {

using namespace polysub;
using nlohmann::json;

struct GenerateArgs {
    int dim = 0;
    int subdim = 0;
    int epochs = 0;
    double sigma = -4.0;
    std::uint64_t seed = 1;
    bool no_disturb = false;
    std::string out;
};

struct EstimateArgs {
    std::string in;
    int subdim = 0;
    std::string method = "approx";
    std::string mode = "reference";
    std::string reference = "auto";
    bool use_means = false;
    std::uint64_t seed = 1;
    int ssa_restarts = 5;
    int ssa_max_iters = 300;
    double ssa_grad_tol = 1e-6;
    std::string ssa_variant = "full_kl";
    std::string out;
};

struct BenchmarkArgs {
    std::string grid;
    std::string out_dir;
    int jobs = 1;
};

void print_identifiability(const IdentifiabilityReport& rep) {
    std::cerr << "identifiability: D=" << rep.D << " d=" << rep.d
              << " m=" << rep.requested_m << " min_m=" << rep.min_m_identifiable
              << " min_quadrics=" << rep.min_quadrics_exact_alg << " verdict="
              << (rep.identifiable ? "identifiable" : "not_guaranteed")
              << (rep.exact_alg_regime ? "" : " (below the quadric-count floor)") << "\n";
}

int run_generate(const GenerateArgs& args) {
    const auto inst = generate(args.dim, args.subdim, args.epochs, args.sigma, args.seed,
                               {.disturb = !args.no_disturb});
    print_identifiability(identifiability(args.dim, args.subdim, args.epochs));
    write_instance(args.out, inst);
    return 0;
}

json matrix_rows(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_estimate(const EstimateArgs& args) {
    const bool from_samples = args.in.size() >= 4 &&
                              args.in.compare(args.in.size() - 4, 4, ".csv") == 0;

    std::vector<EpochCumulants> epochs;
    Eigen::MatrixXd truth;  // empty when unknown
    if (from_samples) {
        for (const auto& samples : read_samples_csv(args.in))
            epochs.push_back(estimate_epoch(samples));
    } else {
        const auto inst = read_instance(args.in);
        for (int i = 0; i < inst.m; ++i)
            epochs.push_back({inst.means[static_cast<std::size_t>(i)],
                              inst.covariances[static_cast<std::size_t>(i)]});
        truth = inst.true_basis;
    }
    for (const auto& e : epochs) validate_epoch(e);

    const int ambient = static_cast<int>(epochs.front().mean.size());
    if (args.method == "exact" && 0 < args.subdim && args.subdim < ambient)
        std::cerr << "elimination cost estimate: "
                  << complexity_estimate(ambient, args.subdim) << " operations\n";

    PipelineOptions options;
    if (args.method == "exact")
        options.method = Method::Exact;
    else if (args.method == "approx")
        options.method = Method::Approx;
    else if (args.method == "ssa")
        options.method = Method::Ssa;
    else
        throw std::invalid_argument("estimate: unknown --method " + args.method);

    if (args.mode == "reference")
        options.mode = SystemMode::Reference;
    else if (args.mode == "pairwise")
        options.mode = SystemMode::Pairwise;
    else
        throw std::invalid_argument("estimate: unknown --mode " + args.mode);

    // Instance files follow the last-epoch convention; sample files default
    // to whitening the average epoch.
    std::string reference = args.reference;
    if (reference == "auto") reference = from_samples ? "average" : "last";
    if (reference == "last")
        options.reference = WhitenReference::Last;
    else if (reference == "average")
        options.reference = WhitenReference::Average;
    else
        throw std::invalid_argument("estimate: unknown --reference " + args.reference);

    options.use_means = args.use_means;
    options.ssa.restarts = args.ssa_restarts;
    options.ssa.max_iters = args.ssa_max_iters;
    options.ssa.grad_tol = args.ssa_grad_tol;
    if (args.ssa_variant == "logdet")
        options.ssa.variant = SSAVariant::LogDet;
    else if (args.ssa_variant != "full_kl")
        throw std::invalid_argument("estimate: unknown --ssa-variant " + args.ssa_variant);
    options.ssa_seed = args.seed;

    const auto result = estimate_pipeline(epochs, args.subdim, options);

    json doc;
    doc["version"] = 1;
    doc["method"] = args.method;
    doc["mode"] = args.mode;
    doc["reference"] = reference;
    doc["D"] = result.estimate.dim_ambient;
    doc["d"] = result.estimate.dim_subspace;
    doc["basis"] = matrix_rows(result.estimate.basis);
    doc["generators"] = matrix_rows(linear_coefficient_matrix(result.estimate.generators));
    doc["runtime_s"] = result.runtime_s;
    doc["converged"] = result.converged;
    if (options.method == Method::Ssa) doc["iterations"] = result.iterations;
    if (truth.size() > 0)
        doc["angle_rad"] = principal_angle(result.estimate.basis, truth);

    std::ofstream out(args.out);
    if (!out) throw IoError("cannot open for writing: " + args.out);
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + args.out);
    return 0;
}

GridConfig parse_grid(const std::string& spec, int jobs) {
    json doc;
    try {
        if (!spec.empty() && spec.find_first_not_of(" \t\r\n") != std::string::npos &&
            spec[spec.find_first_not_of(" \t\r\n")] == '{') {
            doc = json::parse(spec);
        } else {
            std::ifstream in(spec);
            if (!in) throw IoError("cannot open grid file: " + spec);
            in >> doc;
        }
    } catch (const json::exception& e) {
        throw FileFormatError(std::string("grid: invalid JSON: ") + e.what());
    }

    try {
        GridConfig config;
        config.D = doc.at("D").get<int>();
        config.m = doc.at("m").get<int>();
        if (doc.at("d").is_array())
            config.d_values = doc.at("d").get<std::vector<int>>();
        else
            config.d_values = {doc.at("d").get<int>()};
        if (doc.at("sigma").is_array())
            config.sigmas = doc.at("sigma").get<std::vector<double>>();
        else
            config.sigmas = {doc.at("sigma").get<double>()};
        config.trials = doc.value("trials", 1);
        config.seed = doc.value("seed", std::uint64_t{0});
        config.disturb = doc.value("disturb", true);
        config.jobs = jobs;
        if (doc.contains("methods")) {
            config.methods.clear();
            for (const auto& name : doc.at("methods")) {
                if (name == "algebraic")
                    config.methods.push_back(Method::Approx);
                else if (name == "ssa")
                    config.methods.push_back(Method::Ssa);
                else
                    throw FileFormatError("grid: unknown method " +
                                          name.get<std::string>());
            }
        }
        if (doc.contains("ssa")) {
            const auto& s = doc.at("ssa");
            config.ssa.restarts = s.value("restarts", config.ssa.restarts);
            config.ssa.max_iters = s.value("max_iters", config.ssa.max_iters);
            config.ssa.grad_tol = s.value("grad_tol", config.ssa.grad_tol);
            config.ssa.step_init = s.value("step_init", config.ssa.step_init);
            const std::string variant = s.value("variant", std::string("full_kl"));
            if (variant == "logdet")
                config.ssa.variant = SSAVariant::LogDet;
            else if (variant != "full_kl")
                throw FileFormatError("grid: unknown ssa variant " + variant);
        }
        return config;
    } catch (const json::exception& e) {
        throw FileFormatError(std::string("grid: ") + e.what());
    }
}

int run_benchmark(const BenchmarkArgs& args) {
    const auto config = parse_grid(args.grid, args.jobs);

    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + args.out_dir);

    const auto result = run_grid(config);
    for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";

    const auto csv_path = args.out_dir + "/results.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw IoError("cannot open for writing: " + csv_path);
    csv << results_csv(result.results);
    if (!csv) throw IoError("write failed: " + csv_path);

    const auto summary_path = args.out_dir + "/summary.json";
    std::ofstream summary(summary_path);
    if (!summary) throw IoError("cannot open for writing: " + summary_path);
    summary << summary_json(result, config).dump(2) << "\n";
    if (!summary) throw IoError("write failed: " + summary_path);

    for (const auto& cell : result.cells) {
        std::cout << "cell d=" << cell.d << " sigma=" << cell.sigma << ":";
        for (const auto& [name, stats] : cell.methods)
            std::cout << " " << name << " median=" << stats.angle.q50 << " ("
                      << stats.converged << "/" << stats.trials << " converged)";
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recovery of the linear subspace on which a family of "
                 "distributions shares its first two cumulants"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "Write a synthetic problem instance");
    cmd_gen->add_option("--dim", gen.dim, "Ambient dimension D")->required();
    cmd_gen->add_option("--subdim", gen.subdim, "Common subspace dimension d")->required();
    cmd_gen->add_option("--epochs", gen.epochs, "Number of epochs m")->required();
    cmd_gen->add_option("--sigma", gen.sigma, "Disturbance level (mean log-eigenvalue)");
    cmd_gen->add_option("--seed", gen.seed, "Generator seed");
    cmd_gen->add_flag("--no-disturb", gen.no_disturb, "Skip the disturbance matrices");
    cmd_gen->add_option("--out", gen.out, "Output instance path")->required();

    EstimateArgs est;
    auto* cmd_est = app.add_subcommand(
        "estimate", "Estimate the common subspace from an instance or samples file");
    cmd_est->add_option("--in", est.in, "Instance JSON or samples CSV")->required();
    cmd_est->add_option("--subdim", est.subdim, "Target subspace dimension d")->required();
    cmd_est->add_option("--method", est.method, "exact | approx | ssa");
    cmd_est->add_option("--mode", est.mode, "reference | pairwise");
    cmd_est->add_option("--reference", est.reference, "last | average | auto");
    cmd_est->add_flag("--use-means", est.use_means,
                      "Include mean constraints in the system");
    cmd_est->add_option("--seed", est.seed, "Seed for the optimization baseline");
    cmd_est->add_option("--ssa-restarts", est.ssa_restarts, "Optimizer restarts");
    cmd_est->add_option("--ssa-max-iters", est.ssa_max_iters, "Optimizer iteration cap");
    cmd_est->add_option("--ssa-grad-tol", est.ssa_grad_tol, "Optimizer gradient tolerance");
    cmd_est->add_option("--ssa-variant", est.ssa_variant, "full_kl | logdet");
    cmd_est->add_option("--out", est.out, "Output result path")->required();

    BenchmarkArgs bench;
    auto* cmd_bench =
        app.add_subcommand("benchmark", "Run a benchmark grid and emit CSV + JSON");
    cmd_bench->add_option("--grid", bench.grid, "Inline JSON grid spec or path to one")
        ->required();
    cmd_bench->add_option("--out", bench.out_dir, "Output directory")->required();
    cmd_bench->add_option("--jobs", bench.jobs, "Parallel trial workers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_gen->parsed()) return run_generate(gen);
        if (cmd_est->parsed()) return run_estimate(est);
        if (cmd_bench->parsed()) return run_benchmark(bench);
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const FileFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
