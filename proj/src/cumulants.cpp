#include "polysub/cumulants.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "polysub/errors.hpp"

namespace polysub {

void validate_epoch(const EpochCumulants& epoch) {
    const Eigen::Index d = epoch.mean.size();
    if (epoch.cov.rows() != d || epoch.cov.cols() != d)
        throw std::invalid_argument("EpochCumulants: covariance shape does not match mean");
    if (!epoch.mean.allFinite() || !epoch.cov.allFinite())
        throw std::invalid_argument("EpochCumulants: non-finite entries");
    const double scale = epoch.cov.norm();
    if ((epoch.cov - epoch.cov.transpose()).norm() > 1e-10 * std::max(scale, 1e-300))
        throw std::invalid_argument("EpochCumulants: covariance not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(epoch.cov, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale)
        throw std::invalid_argument("EpochCumulants: covariance not positive semidefinite");
}

EpochCumulants estimate_epoch(const Eigen::MatrixXd& samples) {
    const Eigen::Index n = samples.rows();
    if (n < 2) throw std::invalid_argument("estimate_epoch: need at least two samples");
    if (!samples.allFinite())
        throw std::invalid_argument("estimate_epoch: non-finite sample entries");

    const Eigen::VectorXd mean = samples.colwise().mean();
    const Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
    Eigen::MatrixXd cov =
        (centered.transpose() * centered) / static_cast<double>(n - 1);
    cov = 0.5 * (cov + cov.transpose()).eval();
    return {mean, std::move(cov)};
}

WhitenResult center_whiten(const std::vector<EpochCumulants>& epochs,
                           WhitenReference reference) {
    if (epochs.empty()) throw std::invalid_argument("center_whiten: no epochs");
    const Eigen::Index d = epochs.front().mean.size();
    for (const auto& e : epochs)
        if (e.mean.size() != d || e.cov.rows() != d || e.cov.cols() != d)
            throw std::invalid_argument("center_whiten: inconsistent epoch dimensions");

    Eigen::MatrixXd ref_cov;
    Eigen::VectorXd ref_mean;
    if (reference == WhitenReference::Last) {
        ref_cov = epochs.back().cov;
        ref_mean = epochs.back().mean;
    } else {
        ref_cov = Eigen::MatrixXd::Zero(d, d);
        ref_mean = Eigen::VectorXd::Zero(d);
        for (const auto& e : epochs) {
            ref_cov += e.cov;
            ref_mean += e.mean;
        }
        ref_cov /= static_cast<double>(epochs.size());
        ref_mean /= static_cast<double>(epochs.size());
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ref_cov);
    const Eigen::VectorXd evals = eig.eigenvalues();
    if (evals.minCoeff() <= 1e-12 * evals.maxCoeff())
        throw NumericalError(
            "center_whiten: reference covariance is singular or close to it "
            "(condition failure); whitening requires a full-rank reference");

    // Symmetric inverse square root.
    const Eigen::VectorXd inv_sqrt = evals.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd w =
        eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();

    WhitenResult out;
    out.transform = w;
    out.shift = ref_mean;
    out.epochs.reserve(epochs.size());
    for (const auto& e : epochs) {
        EpochCumulants t;
        t.mean = w * (e.mean - ref_mean);
        t.cov = (w * e.cov * w).eval();
        t.cov = 0.5 * (t.cov + t.cov.transpose()).eval();
        out.epochs.push_back(std::move(t));
    }
    return out;
}

PolynomialSystem build_system(const std::vector<EpochCumulants>& epochs, SystemMode mode) {
    const std::size_t m = epochs.size();
    if (m < 2) throw std::invalid_argument("build_system: need at least two epochs");
    const int d = static_cast<int>(epochs.front().mean.size());

    PolynomialSystem sys;
    sys.dim = d;
    const double zero_tol = 1e-12;
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);

    auto push = [&](const Eigen::MatrixXd& gram, const Eigen::VectorXd& lin) {
        sys.quadrics.push_back(QuadraticForm::from_gram(gram));
        if (lin.norm() >= zero_tol) sys.linears.emplace_back(lin);
    };

    if (mode == SystemMode::Reference) {
        for (std::size_t i = 0; i + 1 < m; ++i)
            push(epochs[i].cov - identity, epochs[i].mean);
    } else {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                push(epochs[i].cov - epochs[j].cov, epochs[i].mean - epochs[j].mean);
    }
    return sys;
}

}  // namespace polysub
