#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fda/basis.hpp"
#include "fda/errors.hpp"
#include "fda/fpca.hpp"
#include "fda/rng.hpp"
#include "fda/simulate.hpp"

using namespace fda;

namespace {

// Coefficient vectors drawn directly from the mixing model:
// c = A^T diag(sqrt(lambda)) z + sigma0 * eps.
Eigen::MatrixXd model_coefficients(const KlModel& model, int n, double sigma0, Rng& rng) {
    const int K = static_cast<int>(model.lambda.size());
    const int I = static_cast<int>(model.mixing.cols());
    Eigen::MatrixXd coefs(n, I);
    Eigen::VectorXd z(K);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < K; ++k) z[k] = std::sqrt(model.lambda[k]) * rng.gaussian();
        coefs.row(i) = (model.mixing.transpose() * z).transpose();
        for (int j = 0; j < I; ++j) coefs(i, j) += sigma0 * rng.gaussian();
    }
    return coefs;
}

}  // namespace

TEST_CASE("estimate_covariance basics") {
    Eigen::MatrixXd same(2, 3);
    same << 1.0, 2.0, 3.0, 1.0, 2.0, 3.0;
    const CoefCovariance cov = estimate_covariance(same, true);
    CHECK(cov.matrix.cwiseAbs().maxCoeff() == 0.0);
    CHECK(cov.mean_coefs[1] == doctest::Approx(2.0));

    CHECK_THROWS_AS(estimate_covariance(Eigen::MatrixXd::Ones(1, 3), false), SampleError);
}

TEST_CASE("coefficient covariance converges to the mixing closed form") {
    const KlModel model = kl_sparse_example(0.0);
    const Eigen::MatrixXd target =
        model.mixing.transpose() * model.lambda.asDiagonal() * model.mixing;

    Rng rng(2024);
    const Eigen::MatrixXd clean = model_coefficients(model, 100000, 0.0, rng);
    const CoefCovariance cov0 = estimate_covariance(clean, false);
    CHECK((cov0.matrix - target).cwiseAbs().maxCoeff() < 0.02);

    const double sigma0 = std::sqrt(0.1);
    const Eigen::MatrixXd noisy = model_coefficients(model, 100000, sigma0, rng);
    const CoefCovariance cov1 = estimate_covariance(noisy, false);
    const Eigen::MatrixXd shifted = target + 0.1 * Eigen::MatrixXd::Identity(9, 9);
    CHECK((cov1.matrix - shifted).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("eig_sym closed-form cases") {
    const EigSym id = eig_sym(Eigen::MatrixXd::Identity(4, 4));
    for (int k = 0; k < 4; ++k) CHECK(id.values[k] == doctest::Approx(1.0).epsilon(1e-14));

    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(4, 4);
    diag.diagonal() << 0.01, 1.0, 0.3, 0.5;
    const EigSym sorted = eig_sym(diag);
    CHECK(sorted.values[0] == doctest::Approx(1.0));
    CHECK(sorted.values[1] == doctest::Approx(0.5));
    CHECK(sorted.values[2] == doctest::Approx(0.3));
    CHECK(sorted.values[3] == doctest::Approx(0.01));

    Eigen::MatrixXd two(2, 2);
    two << 2.0, 1.0, 1.0, 2.0;
    const EigSym pair = eig_sym(two);
    CHECK(pair.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(pair.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(pair.vectors(0, 0)) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(std::abs(pair.vectors(1, 0)) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(pair.vectors(0, 0) * pair.vectors(1, 0) > 0.0);  // same sign on (1,1)
    CHECK(pair.vectors(0, 1) * pair.vectors(1, 1) < 0.0);  // opposite on (1,-1)

    // Tridiagonal 3x3 with eigenvalues 2 - sqrt(2), 2, 2 + sqrt(2).
    Eigen::MatrixXd tri(3, 3);
    tri << 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0;
    const EigSym t = eig_sym(tri);
    CHECK(t.values[0] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(t.values[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(t.values[2] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.1, 1.0;
    CHECK_THROWS_AS(eig_sym(asym), ContractError);
}

TEST_CASE("eig_sym reconstruction, orthonormality, and diagonal shift") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 20);
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                a(i, j) = rng.gaussian();
                a(j, i) = a(i, j);
            }
        const EigSym es = eig_sym(a);
        const double scale = a.cwiseAbs().maxCoeff();
        const Eigen::MatrixXd rebuilt =
            es.vectors * es.values.asDiagonal() * es.vectors.transpose();
        CHECK((rebuilt - a).cwiseAbs().maxCoeff() < 1e-9 * scale);
        CHECK((es.vectors.transpose() * es.vectors - Eigen::MatrixXd::Identity(n, n))
                  .cwiseAbs()
                  .maxCoeff() < 1e-9);
        for (int k = 1; k < n; ++k) CHECK(es.values[k] <= es.values[k - 1] + 1e-14);

        // Adding c*I shifts every eigenvalue by c.
        const EigSym shifted = eig_sym(a + 0.1 * Eigen::MatrixXd::Identity(n, n));
        for (int k = 0; k < n; ++k)
            CHECK(shifted.values[k] == doctest::Approx(es.values[k] + 0.1).epsilon(1e-9));
    }
}

TEST_CASE("fpca recovers the generating model") {
    const KlModel model = kl_sparse_example(0.0);
    const Grid grid = Grid::uniform_midpoint(1000);
    const FunctionalDataset data = sample_kl(model, 10000, grid, 77);
    const FpcaResult res = fpca(data, model.basis, false);

    CHECK(res.eigenvalues[0] == doctest::Approx(1.0).epsilon(0.10));
    CHECK(res.eigenvalues[1] == doctest::Approx(0.5).epsilon(0.10));
    CHECK(res.eigenvalues[2] == doctest::Approx(0.3).epsilon(0.10));
    CHECK(res.eigenvalues[3] == doctest::Approx(0.01).epsilon(0.10));
    for (int k = 4; k < 9; ++k) CHECK(std::abs(res.eigenvalues[k]) < 1e-3);

    // Deterministic sign convention: repeated runs are bit-identical.
    const FpcaResult res2 = fpca(data, model.basis, false);
    CHECK(res.eigenvectors == res2.eigenvectors);
    CHECK(res.eigenvalues == res2.eigenvalues);
}

TEST_CASE("fpca on a repeated curve yields one nonzero eigenvalue") {
    const Grid grid = Grid::uniform_midpoint(400);
    const auto basis = std::make_shared<const OrthoBasis>(OrthoBasis::fourier(6));
    Eigen::VectorXd curve(grid.size());
    for (int j = 0; j < grid.size(); ++j)
        curve[j] = std::sin(2 * M_PI * grid.point(j)) + 0.5;
    Eigen::MatrixXd values(3, grid.size());
    values.row(0) = curve.transpose();
    values.row(1) = curve.transpose();
    values.row(2) = curve.transpose();
    const FpcaResult res = fpca(FunctionalDataset(grid, values), basis, false);
    CHECK(res.eigenvalues[0] > 0.1);
    for (int k = 1; k < 6; ++k) CHECK(std::abs(res.eigenvalues[k]) < 1e-12);
}

TEST_CASE("reconstruct truncations") {
    const KlModel model = kl_sparse_example(std::sqrt(0.1));
    const Grid grid = Grid::uniform_midpoint(2000);
    const FunctionalDataset data = sample_kl(model, 500, grid, 99);

    const FpcaResult res = fpca(data, model.basis, false);
    CHECK_THROWS_AS(reconstruct(data, res, 0), RangeError);
    CHECK_THROWS_AS(reconstruct(data, res, 10), RangeError);

    // K = I reproduces the plain basis projection.
    const FunctionalDataset full = reconstruct(data, res, 9);
    const Eigen::MatrixXd projected = synthesize(grid, *model.basis, project(data, *model.basis));
    CHECK((full.values() - projected).cwiseAbs().maxCoeff() < 1e-9);

    // Four components capture everything but coordinate-wise noise.
    const FunctionalDataset k4 = reconstruct(data, res, 4);
    const Eigen::MatrixXd resid_full = data.values() - projected;
    const Eigen::MatrixXd resid_k4 = data.values() - k4.values();
    const auto w = grid.weights().transpose().array();
    const double amse_full = (resid_full.array().square().rowwise() * w).sum() / data.n_curves();
    const double amse_k4 = (resid_k4.array().square().rowwise() * w).sum() / data.n_curves();
    CHECK(amse_k4 == doctest::Approx(amse_full).epsilon(0.05));

    // Rank-1 data reconstructs exactly from a single component.
    const Grid small = Grid::uniform_midpoint(300);
    const auto fourier = std::make_shared<const OrthoBasis>(OrthoBasis::fourier(4));
    Eigen::MatrixXd rank1(3, small.size());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < small.size(); ++j)
            rank1(i, j) = (i + 1) * std::sin(2 * M_PI * small.point(j));
    const FunctionalDataset rank1_data(small, rank1);
    const FpcaResult rank1_res = fpca(rank1_data, fourier, false);
    const FunctionalDataset rebuilt = reconstruct(rank1_data, rank1_res, 1);
    const Eigen::MatrixXd diff = rank1_data.values() - rebuilt.values();
    const double resid = (diff.array().square().rowwise() * small.weights().transpose().array())
                             .sum() / 3.0;
    CHECK(resid < 1e-9);
}

TEST_CASE("truncation error formula and Monte Carlo oracle") {
    const KlModel model = kl_sparse_example(0.0);
    const Eigen::MatrixXd& mixing = model.mixing;
    const Eigen::VectorXd& lambda = model.lambda;

    const std::vector<int> all = {0, 1, 2, 3, 4, 5, 6, 7, 8};
    CHECK(truncation_error(mixing, lambda, all) == 0.0);

    // Keeping f_3..f_9 drops the first two coordinates.
    const std::vector<int> tail = {2, 3, 4, 5, 6, 7, 8};
    const double err_tail = truncation_error(mixing, lambda, tail);
    CHECK(err_tail == doctest::Approx(0.75).epsilon(1e-12));

    // Keeping f_1..f_7 drops the last two.
    const std::vector<int> head = {0, 1, 2, 3, 4, 5, 6};
    const double err_head = truncation_error(mixing, lambda, head);
    CHECK(err_head == doctest::Approx(0.02 / 3.0).epsilon(1e-12));

    // Monte Carlo oracle: empirical mean of |X - P_S X|^2 in coefficient space.
    Rng rng(31337);
    auto mc_error = [&](const std::vector<int>& kept) {
        std::vector<bool> is_kept(9, false);
        for (int i : kept) is_kept[static_cast<std::size_t>(i)] = true;
        const int draws = 1000000;
        double acc = 0.0;
        Eigen::VectorXd z(4);
        for (int d = 0; d < draws; ++d) {
            for (int k = 0; k < 4; ++k) z[k] = std::sqrt(lambda[k]) * rng.gaussian();
            const Eigen::VectorXd c = mixing.transpose() * z;
            for (int i = 0; i < 9; ++i)
                if (!is_kept[static_cast<std::size_t>(i)]) acc += c[i] * c[i];
        }
        return acc / draws;
    };
    CHECK(mc_error(tail) == doctest::Approx(err_tail).epsilon(0.01));
    CHECK(mc_error(head) == doctest::Approx(err_head).epsilon(0.01));

    // Monotone in the kept set, additive over a partition of dropped indices.
    double prev = truncation_error(mixing, lambda, {});
    std::vector<int> grow;
    for (int i = 0; i < 9; ++i) {
        grow.push_back(i);
        const double cur = truncation_error(mixing, lambda, grow);
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
    const double drop01 = truncation_error(mixing, lambda, {2, 3, 4, 5, 6, 7, 8});
    const double drop0 = truncation_error(mixing, lambda, {1, 2, 3, 4, 5, 6, 7, 8});
    const double drop1 = truncation_error(mixing, lambda, {0, 2, 3, 4, 5, 6, 7, 8});
    CHECK(drop01 == doctest::Approx(drop0 + drop1).epsilon(1e-12));

    Eigen::MatrixXd bad = mixing;
    bad(0, 0) *= 2.0;
    CHECK_THROWS_AS(truncation_error(bad, lambda, all), ContractError);
}
