#include "fda/simulate.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>

#include "fda/errors.hpp"
#include "fda/rng.hpp"

namespace fda {

namespace {

constexpr double kRoadStretchMeters = 1000.0;

double require_uniform_step(const Grid& grid, const char* what) {
    if (!grid.uniform_step())
        throw ResolutionError(std::string(what) + " requires a uniform grid");
    return *grid.uniform_step();
}

// Bridge values at the grid points plus the walk endpoint W(1).
Eigen::VectorXd bridge_samples(const Grid& grid, Rng& rng) {
    const int m = grid.size();
    Eigen::VectorXd walk(m);
    walk[0] = 0.0;
    double t_prev = grid.point(0);
    if (t_prev > 0.0) walk[0] = std::sqrt(t_prev) * rng.gaussian();
    for (int j = 1; j < m; ++j) {
        const double dt = grid.point(j) - t_prev;
        walk[j] = walk[j - 1] + std::sqrt(dt) * rng.gaussian();
        t_prev = grid.point(j);
    }
    double w1 = walk[m - 1];
    if (t_prev < 1.0) w1 += std::sqrt(1.0 - t_prev) * rng.gaussian();
    Eigen::VectorXd bridge(m);
    for (int j = 0; j < m; ++j) bridge[j] = walk[j] - grid.point(j) * w1;
    return bridge;
}

}  // namespace

KlModel::KlModel(Eigen::MatrixXd mixing_in, Eigen::VectorXd lambda_in,
                 std::shared_ptr<const OrthoBasis> basis_in, double sigma0_in)
    : mixing(std::move(mixing_in)),
      lambda(std::move(lambda_in)),
      basis(std::move(basis_in)),
      sigma0(sigma0_in) {
    if (!basis) throw ContractError("KL model needs a basis");
    if (mixing.cols() != basis->size())
        throw DimensionError("mixing width must match the basis size");
    if (lambda.size() != mixing.rows())
        throw DimensionError("lambda length must match the mixing row count");
    const Eigen::MatrixXd orth =
        mixing * mixing.transpose() - Eigen::MatrixXd::Identity(mixing.rows(), mixing.rows());
    if (orth.cwiseAbs().maxCoeff() > 1e-9)
        throw ContractError("KL mixing rows must be orthonormal");
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        if (!(lambda[k] > 0.0)) throw ContractError("KL eigenvalues must be positive");
        if (k > 0 && lambda[k] > lambda[k - 1] + 1e-12)
            throw ContractError("KL eigenvalues must be nonincreasing");
    }
    if (sigma0 < 0.0) throw ContractError("sigma0 must be nonnegative");
}

KlModel kl_sparse_example(double sigma0) {
    const double h = 1.0 / std::sqrt(2.0);
    const double th = 1.0 / std::sqrt(3.0);
    Eigen::MatrixXd mixing = Eigen::MatrixXd::Zero(4, 9);
    mixing(0, 0) = h; mixing(0, 4) = h;
    mixing(1, 1) = h; mixing(1, 5) = h;
    mixing(2, 2) = h; mixing(2, 6) = h;
    mixing(3, 3) = th; mixing(3, 7) = th; mixing(3, 8) = th;
    Eigen::VectorXd lambda(4);
    lambda << 1.0, 0.5, 0.3, 0.01;
    auto basis = std::make_shared<const OrthoBasis>(
        OrthoBasis::splinet(KnotSet({0.1, 0.2, 0.4, 0.7, 0.85}), 3));
    return KlModel(std::move(mixing), std::move(lambda), std::move(basis), sigma0);
}

Eigen::VectorXd kl_curve(const KlModel& model, const Eigen::VectorXd& z, const Grid& grid) {
    if (z.size() != model.lambda.size())
        throw DimensionError("factor vector length must match lambda");
    const Eigen::MatrixXd eigencurves = model.mixing * model.basis->eval_on(grid);  // K x m
    return eigencurves.transpose() * (model.lambda.cwiseSqrt().asDiagonal() * z);
}

FunctionalDataset sample_kl(const KlModel& model, int n, const Grid& grid, std::uint64_t seed) {
    if (n < 1) throw SampleError("sample count must be positive");
    const double dt = require_uniform_step(grid, "sample_kl");
    const int m = grid.size();
    const int K = static_cast<int>(model.lambda.size());
    const Eigen::MatrixXd eigencurves = model.mixing * model.basis->eval_on(grid);
    const Eigen::VectorXd sqrt_lambda = model.lambda.cwiseSqrt();
    const double noise_std = model.sigma0 / std::sqrt(dt);

    Rng rng(seed);
    Eigen::MatrixXd values(n, m);
    Eigen::VectorXd z(K);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < K; ++k) z[k] = rng.gaussian();
        values.row(i) = (eigencurves.transpose() * (sqrt_lambda.asDiagonal() * z)).transpose();
        if (noise_std > 0.0)
            for (int j = 0; j < m; ++j) values(i, j) += noise_std * rng.gaussian();
    }
    return FunctionalDataset(grid, std::move(values));
}

Eigen::VectorXd brownian_bridge(const Grid& grid, std::uint64_t seed) {
    require_uniform_step(grid, "brownian_bridge");
    Rng rng(seed);
    return bridge_samples(grid, rng);
}

Eigen::VectorXd filtered_bridge(const Eigen::VectorXd& kernel, double kernel_step,
                                const Grid& grid, std::uint64_t seed) {
    const double dt = require_uniform_step(grid, "filtered_bridge");
    if (std::abs(kernel_step - dt) > 1e-12)
        throw ResolutionError("kernel step does not match the grid step");
    if (kernel.size() < 1) throw DimensionError("kernel must be nonempty");
    const int m = grid.size();
    Rng rng(seed);
    const Eigen::VectorXd bridge = bridge_samples(grid, rng);

    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int l = 0; l < kernel.size(); ++l) {
            const int d = j - l;
            if (d < 0 || d >= m - 1) continue;
            acc += kernel[l] * (bridge[d + 1] - bridge[d]);
        }
        out[j] = dt * acc;
    }
    return out;
}

VehicleResponse vehicle_response(const VehicleParams& params, const Eigen::VectorXd& road,
                                 const Grid& grid) {
    for (double p : {params.m_s, params.k_s, params.c_s, params.m_t, params.k_t, params.c_t,
                     params.v})
        if (!(p > 0.0)) throw ContractError("vehicle parameters must be strictly positive");
    const double du = require_uniform_step(grid, "vehicle_response");
    const int m = grid.size();
    if (road.size() != m) throw DimensionError("road profile must match the grid");

    const double dt = du * kRoadStretchMeters / params.v;  // physical step [s]
    const double omega_max =
        std::max(std::sqrt(params.k_t / params.m_t), std::sqrt(params.k_s / params.m_s));
    if (omega_max * dt > 0.1) {
        std::ostringstream msg;
        msg << "grid step too large for stable integration: omega*dt = " << omega_max * dt
            << ", need physical step <= " << 0.1 / omega_max << " s (grid step <= "
            << 0.1 / omega_max * params.v / kRoadStretchMeters << ")";
        throw ResolutionError(msg.str());
    }

    // Zero-order-held forcing from finite differences of the road.
    Eigen::VectorXd forcing(m);
    for (int j = 0; j + 1 < m; ++j) forcing[j] = (road[j + 1] - road[j]) / dt;
    forcing[m - 1] = m >= 2 ? forcing[m - 2] : 0.0;

    VehicleResponse resp;
    resp.x.resize(m);
    resp.u.resize(m);
    resp.y.resize(m);

    // State (U, U', X, X'); Y records the tire-stage residual m_s U''.
    Eigen::Vector4d state = Eigen::Vector4d::Zero();
    auto deriv = [&](const Eigen::Vector4d& s, double f) {
        Eigen::Vector4d d;
        d[0] = s[1];
        d[1] = (f - params.c_t * s[1] - params.k_t * s[0]) / params.m_t;
        d[2] = s[3];
        d[3] = (s[1] - params.c_s * s[3] - params.k_s * s[2]) / params.m_s;
        return d;
    };
    for (int j = 0; j < m; ++j) {
        resp.u[j] = state[0];
        resp.x[j] = state[2];
        resp.y[j] = params.m_s * (forcing[j] - params.c_t * state[1] - params.k_t * state[0]) /
                    params.m_t;
        if (j + 1 == m) break;
        const Eigen::Vector4d k1 = deriv(state, forcing[j]);
        const Eigen::Vector4d k2 = deriv(state + 0.5 * dt * k1, forcing[j]);
        const Eigen::Vector4d k3 = deriv(state + 0.5 * dt * k2, forcing[j]);
        const Eigen::Vector4d k4 = deriv(state + dt * k3, forcing[j]);
        state += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return resp;
}

SlepianGaussModel::SlepianGaussModel(std::function<double(double)> r,
                                     std::function<double(double)> r_prime, double u)
    : r_(std::move(r)), r_prime_(std::move(r_prime)), u_(u) {
    if (std::abs(r_(0.0) - 1.0) > 1e-6)
        throw ContractError("covariance must be normalized to r(0) = 1");
    // -r''(0) = 1 via Richardson-extrapolated second differences.
    auto second = [&](double h) { return (r_(h) - 2.0 * r_(0.0) + r_(-h)) / (h * h); };
    const double d2 = (4.0 * second(5e-3) - second(1e-2)) / 3.0;
    if (std::abs(-d2 - 1.0) > 1e-6)
        throw ContractError("covariance must be normalized to -r''(0) = 1");
}

SlepianGaussModel SlepianGaussModel::gaussian(double u) {
    return SlepianGaussModel([](double t) { return std::exp(-0.5 * t * t); },
                             [](double t) { return -t * std::exp(-0.5 * t * t); }, u);
}

FunctionalDataset sample_slepian_gauss(const SlepianGaussModel& model, int n, const Grid& grid,
                                       std::uint64_t seed) {
    if (n < 1) throw SampleError("sample count must be positive");
    const int m = grid.size();

    Eigen::VectorXd r_t(m), rp_t(m);
    for (int j = 0; j < m; ++j) {
        r_t[j] = model.r(grid.point(j));
        rp_t[j] = model.r_prime(grid.point(j));
    }
    Eigen::MatrixXd cov(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = model.r(grid.point(i) - grid.point(j)) - r_t[i] * r_t[j] -
                             rp_t[i] * rp_t[j];
            cov(i, j) = v;
            cov(j, i) = v;
        }

    // Escalating diagonal jitter until the Cholesky factorization succeeds.
    Eigen::MatrixXd chol;
    bool ok = false;
    for (double jitter = 1e-10; jitter <= 1e-6 * (1.0 + 1e-12); jitter *= 10.0) {
        Eigen::LLT<Eigen::MatrixXd> llt(cov + jitter * Eigen::MatrixXd::Identity(m, m));
        if (llt.info() == Eigen::Success) {
            chol = llt.matrixL();
            ok = true;
            break;
        }
    }
    if (!ok) throw NotPsdError("Slepian residual covariance is not positive semidefinite");

    Rng rng(seed);
    Eigen::MatrixXd values(n, m);
    Eigen::VectorXd g(m);
    for (int i = 0; i < n; ++i) {
        const double rayleigh = rng.rayleigh();
        for (int j = 0; j < m; ++j) g[j] = rng.gaussian();
        values.row(i) =
            (model.u() * r_t - rayleigh * rp_t + chol * g).transpose();
    }
    return FunctionalDataset(grid, std::move(values));
}

Eigen::VectorXd gaussian_smoothing_kernel(double width, double dt) {
    if (!(width > 0.0) || !(dt > 0.0))
        throw ContractError("kernel width and step must be positive");
    const int half = std::max(1, static_cast<int>(std::ceil(3.0 * width / dt)));
    Eigen::VectorXd kernel(2 * half + 1);
    for (int l = 0; l < kernel.size(); ++l) {
        const double x = (l - half) * dt;
        kernel[l] = std::exp(-0.5 * x * x / (width * width));
    }
    kernel /= kernel.sum() * dt;
    return kernel / dt;
}

FunctionalDataset random_functional_dataset(int n, const Grid& grid, std::uint64_t seed,
                                            const RandomFunctionalConfig& config) {
    if (n < 1) throw SampleError("sample count must be positive");
    const double dt = require_uniform_step(grid, "random_functional_dataset");
    const int m = grid.size();
    const Eigen::VectorXd kernel = gaussian_smoothing_kernel(config.kernel_width, dt);

    Eigen::MatrixXd values(n, m);
    for (int i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        auto uniform_in = [&](const std::array<double, 2>& range) {
            return range[0] + (range[1] - range[0]) * rng.uniform01();
        };
        const double amp = uniform_in(config.amplitude);
        const double loc = uniform_in(config.location);
        const double width = uniform_in(config.width);
        const Eigen::VectorXd rough = filtered_bridge(
            kernel, dt, grid, derive_seed(seed, 1000000 + static_cast<std::uint64_t>(i)));
        for (int j = 0; j < m; ++j) {
            const double t = grid.point(j);
            values(i, j) = amp * std::exp(-0.5 * (t - loc) * (t - loc) / (width * width)) +
                           config.noise_scale * rough[j];
        }
    }
    return FunctionalDataset(grid, std::move(values));
}

}  // namespace fda
