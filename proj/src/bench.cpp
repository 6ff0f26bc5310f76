#include "polysub/bench.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "polysub/approx_radical.hpp"
#include "polysub/errors.hpp"
#include "polysub/linalg.hpp"

namespace polysub {

namespace {

void check_orthonormal_columns(const Eigen::MatrixXd& m, const char* name) {
    const Eigen::MatrixXd gram = m.transpose() * m;
    if ((gram - Eigen::MatrixXd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() > 1e-6) {
        std::ostringstream msg;
        msg << "principal_angle: " << name << " does not have orthonormal columns";
        throw std::invalid_argument(msg.str());
    }
}

std::string method_label(Method m) { return m == Method::Ssa ? "ssa" : "algebraic"; }

}  // namespace

double principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows())
        throw std::invalid_argument("principal_angle: ambient dimensions differ");
    if (a.cols() < 1 || b.cols() < 1)
        throw std::invalid_argument("principal_angle: empty subspace");
    check_orthonormal_columns(a, "first argument");
    check_orthonormal_columns(b, "second argument");

    const int k = static_cast<int>(std::min(a.cols(), b.cols()));

    Eigen::JacobiSVD<Eigen::MatrixXd> cos_svd(a.transpose() * b);
    const double c = std::clamp(cos_svd.singularValues()(k - 1), 0.0, 1.0);

    const Eigen::MatrixXd residual = b - a * (a.transpose() * b);
    Eigen::VectorXd sines = Eigen::JacobiSVD<Eigen::MatrixXd>(residual).singularValues();
    std::sort(sines.data(), sines.data() + sines.size());
    const double s = std::clamp(sines(k - 1), 0.0, 1.0);

    return std::atan2(s, c);
}

IdentifiabilityReport identifiability(int D, int d, int m) {
    if (!(0 < d && d < D)) throw std::invalid_argument("identifiability: need 0 < d < D");
    if (m < 1) throw std::invalid_argument("identifiability: need m >= 1");
    IdentifiabilityReport rep;
    rep.D = D;
    rep.d = d;
    rep.requested_m = m;
    rep.min_m_identifiable = (D - d + 2) / 2 + 1;  // ceil((D-d+1)/2) + 1
    rep.min_quadrics_exact_alg = triangular(D) - triangular(d);
    rep.identifiable = m >= rep.min_m_identifiable;
    rep.exact_alg_regime = m - 1 >= rep.min_quadrics_exact_alg;
    return rep;
}

PipelineResult estimate_pipeline(const std::vector<EpochCumulants>& epochs, int d,
                                 const PipelineOptions& options) {
    const auto start = std::chrono::steady_clock::now();

    const auto whitened = center_whiten(epochs, options.reference);
    PipelineResult out;
    Eigen::MatrixXd basis_w;

    if (options.method == Method::Ssa) {
        const auto res = ssa_optimize(whitened.epochs, d, options.ssa, options.ssa_seed);
        basis_w = res.p.transpose();
        out.converged = res.converged;
        out.iterations = res.iterations;
    } else {
        auto system = build_system(whitened.epochs, options.mode);
        if (!options.use_means) system.linears.clear();
        const auto est = options.method == Method::Exact
                             ? exact_subspace(system, d, options.exact)
                             : estimate_subspace(system, d);
        basis_w = est.basis;
    }

    // Directions transform contravariantly: a whitened-space direction v
    // corresponds to W^T v = W v in the original coordinates.
    out.estimate.dim_ambient = static_cast<int>(epochs.front().mean.size());
    out.estimate.dim_subspace = d;
    out.estimate.basis = orthonormalize_columns(whitened.transform * basis_w);
    const Eigen::MatrixXd gen_rows = orthonormal_complement(out.estimate.basis).transpose();
    for (Eigen::Index g = 0; g < gen_rows.rows(); ++g)
        out.estimate.generators.emplace_back(gen_rows.row(g).transpose());

    out.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

struct CellSpec {
    int d = 0;
    double sigma = 0.0;
    std::size_t index = 0;  // position in the d-major, sigma-minor grid
};

TrialResult run_trial(const GridConfig& config, const CellSpec& cell, int trial,
                      Method method) {
    // Declared seed derivation: one mix per level of the trial hierarchy.
    const std::uint64_t cell_seed = Rng::mix(config.seed, cell.index);
    const std::uint64_t trial_seed = Rng::mix(cell_seed, static_cast<std::uint64_t>(trial));

    const auto instance = generate(config.D, cell.d, config.m, cell.sigma, trial_seed,
                                   {.disturb = config.disturb});
    std::vector<EpochCumulants> epochs;
    epochs.reserve(static_cast<std::size_t>(instance.m));
    for (int i = 0; i < instance.m; ++i)
        epochs.push_back({instance.means[static_cast<std::size_t>(i)],
                          instance.covariances[static_cast<std::size_t>(i)]});

    PipelineOptions popt;
    popt.method = method;
    popt.ssa = config.ssa;
    popt.ssa_seed = Rng::mix(trial_seed, 0x55a11ceULL);

    TrialResult tr;
    tr.method = method_label(method);
    tr.D = config.D;
    tr.d = cell.d;
    tr.m = config.m;
    tr.sigma = cell.sigma;
    tr.seed = trial_seed;
    try {
        const auto res = estimate_pipeline(epochs, cell.d, popt);
        tr.angle_rad = principal_angle(res.estimate.basis, instance.true_basis);
        tr.runtime_s = res.runtime_s;
        tr.converged = res.converged;
    } catch (const std::exception&) {
        tr.angle_rad = std::numeric_limits<double>::quiet_NaN();
        tr.runtime_s = 0.0;
        tr.converged = false;
    }
    return tr;
}

}  // namespace

GridResult run_grid(const GridConfig& config) {
    if (config.d_values.empty() || config.sigmas.empty() || config.trials < 1)
        throw std::invalid_argument("run_grid: empty grid");

    GridResult out;
    std::vector<CellSpec> cells;
    std::size_t cell_index = 0;
    for (int d : config.d_values) {
        for (double sigma : config.sigmas) {
            const CellSpec cell{d, sigma, cell_index++};
            const auto rep = identifiability(config.D, d, config.m);
            if (!rep.identifiable) {
                std::ostringstream warn;
                warn << "cell d=" << d << " sigma=" << sigma
                     << " skipped: not identifiable (m=" << config.m << " < "
                     << rep.min_m_identifiable << ")";
                out.warnings.push_back(warn.str());
                continue;
            }
            cells.push_back(cell);
        }
    }

    struct Task {
        CellSpec cell;
        int trial = 0;
        Method method{};
    };
    std::vector<Task> tasks;
    for (const auto& cell : cells)
        for (int t = 0; t < config.trials; ++t)
            for (Method m : config.methods) tasks.push_back({cell, t, m});

    out.results.resize(tasks.size());
    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            out.results[i] =
                run_trial(config, tasks[i].cell, tasks[i].trial, tasks[i].method);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                out.results[i] =
                    run_trial(config, tasks[i].cell, tasks[i].trial, tasks[i].method);
            }
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& cell : cells) {
        CellSummary summary;
        summary.D = config.D;
        summary.d = cell.d;
        summary.m = config.m;
        summary.sigma = cell.sigma;
        for (Method m : config.methods) {
            MethodCellStats stats;
            std::vector<double> angles;
            std::vector<double> runtimes;
            for (const auto& tr : out.results) {
                if (tr.d != cell.d || tr.sigma != cell.sigma ||
                    tr.method != method_label(m))
                    continue;
                ++stats.trials;
                if (!tr.converged) continue;
                ++stats.converged;
                angles.push_back(tr.angle_rad);
                runtimes.push_back(tr.runtime_s);
            }
            stats.angle = {quantile(angles, 0.25), quantile(angles, 0.5),
                           quantile(angles, 0.75)};
            stats.runtime = {quantile(runtimes, 0.25), quantile(runtimes, 0.5),
                             quantile(runtimes, 0.75)};
            summary.methods[method_label(m)] = stats;
        }
        out.cells.push_back(std::move(summary));
    }
    return out;
}

std::string results_csv(std::span<const TrialResult> results) {
    std::string out = "method,D,d,m,sigma,seed,angle_rad,runtime_s,converged\n";
    char buf[256];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%.17g,%llu,%.17g,%.17g,%d\n",
                      r.method.c_str(), r.D, r.d, r.m, r.sigma,
                      static_cast<unsigned long long>(r.seed), r.angle_rad, r.runtime_s,
                      r.converged ? 1 : 0);
        out += buf;
    }
    return out;
}

nlohmann::json summary_json(const GridResult& result, const GridConfig& config) {
    nlohmann::json grid;
    grid["D"] = config.D;
    grid["m"] = config.m;
    grid["d"] = config.d_values;
    grid["sigma"] = config.sigmas;
    grid["trials"] = config.trials;
    grid["seed"] = config.seed;
    grid["disturb"] = config.disturb;
    std::vector<std::string> methods;
    for (Method m : config.methods) methods.push_back(method_label(m));
    grid["methods"] = methods;

    nlohmann::json pipeline;
    pipeline["whiten_reference"] = "last";
    pipeline["system_mode"] = "reference";
    pipeline["ssa"] = {{"restarts", config.ssa.restarts},
                       {"max_iters", config.ssa.max_iters},
                       {"grad_tol", config.ssa.grad_tol},
                       {"step_init", config.ssa.step_init},
                       {"variant", config.ssa.variant == SSAVariant::FullKL
                                       ? "full_kl"
                                       : "logdet"}};

    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : result.cells) {
        nlohmann::json jc;
        jc["D"] = cell.D;
        jc["d"] = cell.d;
        jc["m"] = cell.m;
        jc["sigma"] = cell.sigma;
        for (const auto& [name, stats] : cell.methods) {
            jc["methods"][name] = {
                {"trials", stats.trials},
                {"converged", stats.converged},
                {"angle", {{"q25", stats.angle.q25}, {"q50", stats.angle.q50},
                           {"q75", stats.angle.q75}}},
                {"runtime", {{"q25", stats.runtime.q25}, {"q50", stats.runtime.q50},
                             {"q75", stats.runtime.q75}}}};
        }
        cells.push_back(std::move(jc));
    }

    return {{"version", 1},
            {"grid", grid},
            {"pipeline", pipeline},
            {"cells", cells},
            {"warnings", result.warnings}};
}

}  // namespace polysub
