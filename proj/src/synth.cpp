#include "polysub/synth.hpp"

#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "polysub/errors.hpp"
#include "polysub/linalg.hpp"

namespace polysub {

Eigen::MatrixXd random_orthogonal(int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("random_orthogonal: dim must be positive");
    Eigen::MatrixXd b(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) b(i, j) = rng.uniform(-1.0, 1.0);
    const Eigen::MatrixXd a = 0.5 * (b - b.transpose());
    return a.exp();
}

Eigen::MatrixXd disturbance(int dim, double sigma, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("disturbance: dim must be positive");
    // Raw log-eigenvalues uniform on (-1,1), shifted so their mean is
    // exactly sigma. Draws whose recentered values would leave (-1,1) are
    // rejected so each eigenvalue stays within a factor e of exp(sigma).
    Eigen::VectorXd logs(dim);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (int i = 0; i < dim; ++i) logs[i] = rng.uniform(-1.0, 1.0);
        const double mean = logs.mean();
        if ((logs.array() - mean).abs().maxCoeff() < 1.0) {
            logs.array() -= mean;
            break;
        }
        if (attempt == 999) logs.array() = (logs.array() - mean) * 0.5;
    }
    const Eigen::VectorXd eigenvalues = (logs.array() + sigma).exp();
    const Eigen::MatrixXd v = random_orthogonal(dim, rng);
    Eigen::MatrixXd e = v * eigenvalues.asDiagonal() * v.transpose();
    return 0.5 * (e + e.transpose()).eval();
}

std::vector<Eigen::MatrixXd> shared_block_factors(int D, int d, int m, Rng& rng) {
    if (!(0 < d && d < D)) throw std::invalid_argument("shared_block_factors: need 0 < d < D");
    if (m < 1) throw std::invalid_argument("shared_block_factors: need m >= 1");

    auto draw_entry = [&](int row, int col) {
        const double u = rng.uniform(-1.0, 1.0);
        return row == col ? std::abs(u) + 0.5 : u;
    };

    Eigen::MatrixXd shared = Eigen::MatrixXd::Zero(D, D);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) shared(i, j) = draw_entry(i, j);

    std::vector<Eigen::MatrixXd> factors;
    factors.reserve(static_cast<std::size_t>(m));
    for (int epoch = 0; epoch < m; ++epoch) {
        Eigen::MatrixXd l = shared;
        for (int i = d; i < D; ++i)
            for (int j = 0; j <= i; ++j) l(i, j) = draw_entry(i, j);
        factors.push_back(std::move(l));
    }
    return factors;
}

ProblemInstance generate(int D, int d, int m, double sigma, std::uint64_t seed,
                         const GenerateOptions& options) {
    if (!(0 < d && d < D)) throw std::invalid_argument("generate: need 0 < d < D");
    if (m < 2) throw std::invalid_argument("generate: need m >= 2");

    Rng rng(seed);
    ProblemInstance inst;
    inst.D = D;
    inst.d = d;
    inst.m = m;
    inst.sigma = sigma;
    inst.disturbed = options.disturb;
    inst.seed = seed;

    const auto factors = shared_block_factors(D, d, m, rng);
    std::vector<Eigen::MatrixXd> source_covs;
    source_covs.reserve(static_cast<std::size_t>(m));
    for (const auto& l : factors) {
        Eigen::MatrixXd c = l * l.transpose();
        if (options.disturb) c += disturbance(D, sigma, rng);
        source_covs.push_back(0.5 * (c + c.transpose()).eval());
    }

    // Random change of basis; columns 0..d-1 belong to the planted block,
    // columns d..D-1 to its complement. Severely ill-conditioned draws are
    // artifacts of the sampler and are redrawn.
    Eigen::MatrixXd mix(D, D);
    bool mix_ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
        for (int j = 0; j < D; ++j)
            for (int i = 0; i < D; ++i) mix(i, j) = rng.uniform(-1.0, 1.0);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(mix);
        if (svd.singularValues()(D - 1) > 0.0 &&
            svd.singularValues()(0) / svd.singularValues()(D - 1) <= 1e8) {
            mix_ok = true;
            break;
        }
    }
    if (!mix_ok) throw NumericalError("generate: could not draw a well-conditioned basis");

    inst.covariances.reserve(static_cast<std::size_t>(m));
    for (const auto& c : source_covs) {
        Eigen::MatrixXd s = mix * c * mix.transpose();
        inst.covariances.push_back(0.5 * (s + s.transpose()).eval());
    }

    // A direction v has epoch-independent projected variance iff mix^T v is
    // supported on the first d source coordinates, i.e. v is orthogonal to
    // the image of the last D-d basis vectors.
    const Eigen::MatrixXd complement_image = mix.rightCols(D - d);
    inst.true_basis = null_space_basis(complement_image.transpose(), d);

    const Eigen::MatrixXd complement_basis = orthonormalize_columns(complement_image);
    inst.means.reserve(static_cast<std::size_t>(m));
    for (int epoch = 0; epoch < m; ++epoch) {
        if (!options.mean_noise) {
            inst.means.push_back(Eigen::VectorXd::Zero(D));
            continue;
        }
        Eigen::VectorXd off(D - d);
        for (int k = 0; k < D - d; ++k) off[k] = rng.uniform(-1.0, 1.0);
        Eigen::VectorXd mu = complement_basis * off;
        if (options.disturb) {
            const double scale = std::exp(sigma);
            for (int k = 0; k < D; ++k) mu[k] += scale * rng.uniform(-1.0, 1.0);
        }
        inst.means.push_back(std::move(mu));
    }
    return inst;
}

}  // namespace polysub
