#include "polysub/ssa.hpp"

#include <Eigen/Cholesky>
#include <unsupported/Eigen/MatrixFunctions>

#include "polysub/errors.hpp"
#include "polysub/synth.hpp"

namespace polysub {

namespace {

void check_frame(const Eigen::MatrixXd& p) {
    const Eigen::MatrixXd gram = p * p.transpose();
    if ((gram - Eigen::MatrixXd::Identity(p.rows(), p.rows())).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("ssa: frame rows are not orthonormal");
}

struct Projected {
    Eigen::MatrixXd cov;       // P Sigma P^T
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::VectorXd mean;      // P mu
};

Projected project(const Eigen::MatrixXd& p, const EpochCumulants& e) {
    Projected out;
    out.cov = p * e.cov * p.transpose();
    out.llt.compute(out.cov);
    if (out.llt.info() != Eigen::Success)
        throw NumericalError("ssa: projected covariance is singular");
    out.mean = p * e.mean;
    return out;
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

double ssa_objective(const Eigen::MatrixXd& p, std::span<const EpochCumulants> epochs,
                     SSAVariant variant) {
    check_frame(p);
    const double d = static_cast<double>(p.rows());
    double total = 0.0;
    for (const auto& e : epochs) {
        const Projected pr = project(p, e);
        const double ld = log_det(pr.llt);
        const double msq = pr.mean.squaredNorm();
        if (variant == SSAVariant::LogDet)
            total += -ld + msq;
        else
            total += 0.5 * (pr.cov.trace() - ld - d + msq);
    }
    return total;
}

Eigen::MatrixXd ssa_objective_gradient(const Eigen::MatrixXd& p,
                                       std::span<const EpochCumulants> epochs,
                                       SSAVariant variant) {
    check_frame(p);
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(p.rows(), p.cols());
    for (const auto& e : epochs) {
        const Projected pr = project(p, e);
        const Eigen::MatrixXd psig = p * e.cov;
        const Eigen::MatrixXd inv_psig = pr.llt.solve(psig);
        const Eigen::MatrixXd mean_term = (p * e.mean) * e.mean.transpose();
        if (variant == SSAVariant::LogDet)
            grad += -2.0 * inv_psig + 2.0 * mean_term;
        else
            grad += psig - inv_psig + mean_term;
    }
    return grad;
}

SSAResult ssa_optimize(std::span<const EpochCumulants> epochs, int d,
                       const SSAConfig& config, std::uint64_t seed) {
    if (epochs.empty()) throw std::invalid_argument("ssa_optimize: no epochs");
    const int dim = static_cast<int>(epochs.front().mean.size());
    if (!(0 < d && d < dim)) throw std::invalid_argument("ssa_optimize: need 0 < d < D");
    if (config.restarts < 1 || config.max_iters < 1 || config.grad_tol <= 0.0)
        throw std::invalid_argument("ssa_optimize: invalid configuration");

    Rng rng(seed);
    SSAResult best;
    bool have_best = false;

    for (int restart = 0; restart < config.restarts; ++restart) {
        Eigen::MatrixXd frame = random_orthogonal(dim, rng);
        double obj = ssa_objective(frame.topRows(d), epochs, config.variant);

        SSAResult cur;
        cur.trace.push_back(obj);
        int iter = 0;
        bool line_failed = false;
        for (; iter < config.max_iters; ++iter) {
            const Eigen::MatrixXd gp =
                ssa_objective_gradient(frame.topRows(d), epochs, config.variant);
            Eigen::MatrixXd gfull = Eigen::MatrixXd::Zero(dim, dim);
            gfull.topRows(d) = gp;
            // Gradient in the antisymmetric chart at the current frame.
            const Eigen::MatrixXd m = gfull * frame.transpose();
            const Eigen::MatrixXd omega = 0.5 * (m - m.transpose());
            const double gnorm = omega.norm();
            if (gnorm < config.grad_tol) break;

            double step = config.step_init;
            bool accepted = false;
            for (int halving = 0; halving < 50; ++halving) {
                const Eigen::MatrixXd candidate =
                    ((-step * omega).exp() * frame).eval();
                double cand_obj;
                try {
                    cand_obj = ssa_objective(candidate.topRows(d), epochs, config.variant);
                } catch (const NumericalError&) {
                    step *= 0.5;  // stepped onto a degenerate projection
                    continue;
                }
                if (cand_obj <= obj - 1e-4 * step * gnorm * gnorm) {
                    frame = candidate;
                    obj = cand_obj;
                    cur.trace.push_back(obj);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                line_failed = true;
                break;
            }
        }

        cur.p = frame.topRows(d);
        cur.objective = obj;
        cur.iterations = iter;
        cur.converged = !line_failed;
        if (!have_best || cur.objective < best.objective) {
            best = std::move(cur);
            have_best = true;
        }
    }
    return best;
}

}  // namespace polysub
