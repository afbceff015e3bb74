#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fda/errors.hpp"
#include "fda/rng.hpp"
#include "fda/simulate.hpp"

using namespace fda;

TEST_CASE("rng streams are deterministic and well scaled") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng g(7);
    double mean = 0.0, var = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = g.gaussian();
        mean += x;
        var += x * x;
    }
    mean /= n;
    var = var / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));

    Rng r(9);
    double rmean = 0.0;
    for (int i = 0; i < n; ++i) rmean += r.rayleigh();
    CHECK(rmean / n == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(0.01));

    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST_CASE("sample_kl reproduces the coefficient covariance identity") {
    const double sigma0 = std::sqrt(0.1);
    const KlModel model = kl_sparse_example(sigma0);
    const Grid grid = Grid::uniform_midpoint(500);

    const FunctionalDataset a = sample_kl(model, 50, grid, 42);
    const FunctionalDataset b = sample_kl(model, 50, grid, 42);
    CHECK(a.values() == b.values());  // bit-reproducible

    // Empirical covariance of the projected coefficients versus
    // A^T diag(lambda) A + sigma0^2 I, streamed over batches.
    const int batches = 40, per_batch = 500;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(9, 9);
    long total = 0;
    const Eigen::MatrixXd basis_values = model.basis->eval_on(grid);
    for (int batch = 0; batch < batches; ++batch) {
        const FunctionalDataset data =
            sample_kl(model, per_batch, grid, derive_seed(4242, static_cast<std::uint64_t>(batch)));
        const Eigen::MatrixXd weighted =
            data.values().array().rowwise() * grid.weights().transpose().array();
        const Eigen::MatrixXd coefs = weighted * basis_values.transpose();
        sum += coefs.transpose() * coefs;
        total += per_batch;
    }
    const Eigen::MatrixXd cov = sum / static_cast<double>(total - 1);
    const Eigen::MatrixXd target =
        model.mixing.transpose() * model.lambda.asDiagonal() * model.mixing +
        0.1 * Eigen::MatrixXd::Identity(9, 9);
    CHECK((cov - target).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("brownian bridge endpoints and covariance law") {
    const Grid grid = Grid::uniform_closed(51);
    const int replicates = 100000;
    double var_mid = 0.0, cov_q = 0.0;
    for (int r = 0; r < replicates; ++r) {
        const Eigen::VectorXd b = brownian_bridge(grid, static_cast<std::uint64_t>(r));
        if (r < 100) {
            CHECK(b[0] == 0.0);
            CHECK(b[grid.size() - 1] == 0.0);
        }
        var_mid += b[25] * b[25];        // t = 0.5
        cov_q += b[12] * b[38];          // t = 0.24, 0.76
    }
    var_mid /= replicates;
    cov_q /= replicates;
    CHECK(var_mid == doctest::Approx(0.25).epsilon(0.04));
    // s(1-t) for s = 0.24, t = 0.76.
    CHECK(std::abs(cov_q - 0.24 * (1.0 - 0.76)) < 0.01);

    CHECK(brownian_bridge(grid, 5) == brownian_bridge(grid, 5));
    CHECK_THROWS_AS(brownian_bridge(Grid({0.0, 0.1, 0.35}), 1), ResolutionError);
}

TEST_CASE("filtered bridge convolution conventions") {
    const int m = 256;
    const Grid grid = Grid::uniform(m);
    const double dt = *grid.uniform_step();

    // Dirac kernel (single sample scaled 1/dt) recovers the increments.
    Eigen::VectorXd dirac(1);
    dirac[0] = 1.0 / dt;
    const Eigen::VectorXd y = filtered_bridge(dirac, dt, grid, 31);
    const Eigen::VectorXd bridge = brownian_bridge(grid, 31);
    for (int j = 0; j + 1 < m; ++j)
        CHECK(y[j] == doctest::Approx(bridge[j + 1] - bridge[j]).epsilon(1e-12));
    CHECK(y[m - 1] == 0.0);

    // Constant kernel over a window telescopes to bridge differences.
    const int window = 8;
    Eigen::VectorXd box = Eigen::VectorXd::Constant(window, 2.0);
    const Eigen::VectorXd moving = filtered_bridge(box, dt, grid, 31);
    for (int j = window; j + 1 < m; ++j)
        CHECK(moving[j] ==
              doctest::Approx(2.0 * dt * (bridge[j + 1] - bridge[j + 1 - window])).epsilon(1e-10));

    CHECK(filtered_bridge(Eigen::VectorXd::Zero(5), dt, grid, 3).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(filtered_bridge(box, 2.0 * dt, grid, 3), ResolutionError);
}

TEST_CASE("vehicle response on simple roads") {
    const VehicleParams params;  // heavy-vehicle defaults
    const int m = 8192;
    const Grid grid = Grid::uniform(m);

    VehicleParams fast = params;
    fast.v = 100.0;  // 10 s of physical time over the kilometre

    const VehicleResponse zero = vehicle_response(fast, Eigen::VectorXd::Zero(m), grid);
    CHECK(zero.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.x.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.y.cwiseAbs().maxCoeff() == 0.0);

    // Ramp road: constant differentiated forcing settles at forcing/k_t.
    const double horizon = 1000.0 / fast.v;
    const double slope = 2.0;  // forcing value [N] after differencing
    Eigen::VectorXd ramp(m);
    for (int j = 0; j < m; ++j) ramp[j] = slope * grid.point(j) * horizon;
    const VehicleResponse settled = vehicle_response(fast, ramp, grid);
    CHECK(settled.u[m - 1] == doctest::Approx(slope / params.k_t).epsilon(0.05));
    CHECK(std::abs(settled.x[m - 1]) < 1e-4);

    // Resonant amplification ratio against the transfer-function magnitude.
    const double omega_res = std::sqrt(params.k_t / params.m_t);
    const double omega_off = 0.5 * omega_res;
    auto steady_amplitude = [&](double omega) {
        Eigen::VectorXd road(m);
        for (int j = 0; j < m; ++j) road[j] = 0.001 * std::sin(omega * grid.point(j) * horizon);
        const VehicleResponse resp = vehicle_response(fast, road, grid);
        double amp = 0.0;
        for (int j = static_cast<int>(0.8 * m); j < m; ++j)
            amp = std::max(amp, std::abs(resp.u[j]));
        return amp;
    };
    auto transfer = [&](double omega) {
        const double re = params.k_t - params.m_t * omega * omega;
        const double im = params.c_t * omega;
        return omega / std::hypot(re, im);  // forcing amplitude scales with omega
    };
    const double measured_ratio = steady_amplitude(omega_res) / steady_amplitude(omega_off);
    const double analytic_ratio = transfer(omega_res) / transfer(omega_off);
    CHECK(measured_ratio == doctest::Approx(analytic_ratio).epsilon(0.05));

    // Linearity to machine precision.
    Eigen::VectorXd r1(m), r2(m);
    Rng rng(17);
    for (int j = 0; j < m; ++j) {
        r1[j] = rng.gaussian();
        r2[j] = rng.gaussian();
    }
    const VehicleResponse a = vehicle_response(fast, r1, grid);
    const VehicleResponse b = vehicle_response(fast, r2, grid);
    const VehicleResponse combo = vehicle_response(fast, 2.0 * r1 - 0.5 * r2, grid);
    const double scale = combo.y.cwiseAbs().maxCoeff();
    CHECK((combo.y - (2.0 * a.y - 0.5 * b.y)).cwiseAbs().maxCoeff() < 1e-9 * scale);

    // Too-coarse grids are rejected with the required step in the message.
    const Grid coarse = Grid::uniform(500);
    try {
        vehicle_response(fast, Eigen::VectorXd::Zero(500), coarse);
        FAIL("expected ResolutionError");
    } catch (const ResolutionError& e) {
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("Slepian model normalization and sampling") {
    CHECK_THROWS_AS(SlepianGaussModel([](double t) { return std::exp(-t * t); },
                                      [](double t) { return -2.0 * t * std::exp(-t * t); }, 2.0),
                    ContractError);

    const SlepianGaussModel model = SlepianGaussModel::gaussian(4.5);
    const Grid grid = Grid::uniform_closed(41);
    const int n = 20000;
    const FunctionalDataset data = sample_slepian_gauss(model, n, grid, 2027);
    CHECK(sample_slepian_gauss(model, 5, grid, 11).values() ==
          sample_slepian_gauss(model, 5, grid, 11).values());

    const Eigen::VectorXd mean = data.values().colwise().mean();
    const double rayleigh_mean = std::sqrt(M_PI / 2.0);
    for (int j : {4, 10, 20, 30, 40}) {
        const double t = grid.point(j);
        const double expected = 4.5 * model.r(t) - rayleigh_mean * model.r_prime(t);
        CHECK(mean[j] == doctest::Approx(expected).epsilon(0.03));
    }

    // Pinned at the crossing: X(0) = u almost surely.
    double var0 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = data.values()(i, 0) - 4.5;
        var0 += d * d;
    }
    CHECK(var0 / n < 1e-4);

    // Covariance spot check at (0.5, 1.0): residual + Var[R] r'(s) r'(t).
    const double var_r = 2.0 - M_PI / 2.0;
    auto cov_expected = [&](double s, double t) {
        return model.r(t - s) - model.r(s) * model.r(t) - model.r_prime(s) * model.r_prime(t) +
               var_r * model.r_prime(s) * model.r_prime(t);
    };
    double cov_hat = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ds = data.values()(i, 20) - mean[20];
        const double dt = data.values()(i, 40) - mean[40];
        cov_hat += ds * dt;
    }
    cov_hat /= n - 1;
    CHECK(cov_hat == doctest::Approx(cov_expected(0.5, 1.0)).epsilon(0.1));
}

TEST_CASE("random functional generator") {
    const Grid grid = Grid::uniform(400);

    RandomFunctionalConfig degenerate;
    degenerate.amplitude = {1.5, 1.5};
    degenerate.location = {0.5, 0.5};
    degenerate.width = {0.05, 0.05};
    degenerate.noise_scale = 0.0;
    const FunctionalDataset same = random_functional_dataset(6, grid, 3, degenerate);
    for (int i = 1; i < 6; ++i)
        CHECK((same.values().row(i) - same.values().row(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(same.values()(0, 200) == doctest::Approx(1.5).epsilon(1e-3));

    const FunctionalDataset a = random_functional_dataset(10, grid, 8);
    const FunctionalDataset b = random_functional_dataset(10, grid, 8);
    CHECK(a.values() == b.values());
    CHECK(a.n_curves() == 10);

    const FunctionalDataset c = random_functional_dataset(10, grid, 9);
    CHECK(a.values() != c.values());
}
