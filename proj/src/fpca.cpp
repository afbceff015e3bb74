#include "fda/fpca.hpp"

#include <cmath>

#include "fda/errors.hpp"

namespace fda {

CoefCovariance estimate_covariance(const Eigen::MatrixXd& coefs, bool center) {
    const Eigen::Index n = coefs.rows();
    if (n < 2) throw SampleError("covariance estimation needs at least two samples");

    CoefCovariance out;
    out.centered = center;
    out.mean_coefs = Eigen::VectorXd::Zero(coefs.cols());
    Eigen::MatrixXd work = coefs;
    if (center) {
        out.mean_coefs = coefs.colwise().mean();
        work.rowwise() -= out.mean_coefs.transpose();
    }
    out.matrix = (work.transpose() * work) / static_cast<double>(n - 1);
    out.matrix = 0.5 * (out.matrix + out.matrix.transpose());
    return out;
}

Eigen::VectorXd FpcaResult::eigenfunction(int k, const Grid& grid) const {
    if (k < 0 || k >= eigenvectors.cols()) throw RangeError("eigenfunction index out of range");
    const Eigen::MatrixXd b = basis->eval_on(grid);
    return b.transpose() * eigenvectors.col(k);
}

FpcaResult fpca(const FunctionalDataset& dataset, std::shared_ptr<const OrthoBasis> basis,
                bool center) {
    const Eigen::MatrixXd coefs = project(dataset, *basis);
    const CoefCovariance cov = estimate_covariance(coefs, center);
    EigSym es = eig_sym(cov.matrix);

    // Deterministic sign: first coefficient above 1e-9 in magnitude is positive.
    for (int k = 0; k < es.vectors.cols(); ++k) {
        for (int i = 0; i < es.vectors.rows(); ++i) {
            const double v = es.vectors(i, k);
            if (std::abs(v) > 1e-9) {
                if (v < 0.0) es.vectors.col(k) = -es.vectors.col(k);
                break;
            }
        }
    }

    FpcaResult out;
    out.eigenvalues = std::move(es.values);
    out.eigenvectors = std::move(es.vectors);
    out.mean_coefs = cov.mean_coefs;
    out.basis = std::move(basis);
    return out;
}

FunctionalDataset reconstruct(const FunctionalDataset& dataset, const FpcaResult& result, int K) {
    const int total = static_cast<int>(result.eigenvectors.cols());
    if (K < 1 || K > total) throw RangeError("component count K must be in [1, basis size]");

    const Eigen::MatrixXd coefs = project(dataset, *result.basis);
    const Eigen::MatrixXd centered = coefs.rowwise() - result.mean_coefs.transpose();
    // Scores <x_i - mean, e_k> coincide with coefficient-space dot products
    // because the discrete inner product is linear in the basis expansion.
    const Eigen::MatrixXd scores = centered * result.eigenvectors.leftCols(K);
    const Eigen::MatrixXd truncated =
        (scores * result.eigenvectors.leftCols(K).transpose()).rowwise() +
        result.mean_coefs.transpose();
    return FunctionalDataset(dataset.grid(),
                             synthesize(dataset.grid(), *result.basis, truncated),
                             dataset.labels());
}

double truncation_error(const Eigen::MatrixXd& mixing, const Eigen::VectorXd& lambda,
                        const std::vector<int>& kept) {
    const Eigen::Index K = mixing.rows();
    const Eigen::Index I = mixing.cols();
    if (lambda.size() != K) throw DimensionError("lambda length must match the mixing row count");
    const Eigen::MatrixXd orth = mixing * mixing.transpose() - Eigen::MatrixXd::Identity(K, K);
    if (orth.cwiseAbs().maxCoeff() > 1e-9)
        throw ContractError("mixing matrix rows must be orthonormal (A A^T = I)");

    std::vector<bool> is_kept(static_cast<std::size_t>(I), false);
    for (int idx : kept) {
        if (idx < 0 || idx >= I) throw RangeError("kept index out of range");
        is_kept[static_cast<std::size_t>(idx)] = true;
    }

    double err = 0.0;
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index i = 0; i < I; ++i)
            if (!is_kept[static_cast<std::size_t>(i)]) err += lambda[k] * mixing(k, i) * mixing(k, i);
    return err;
}

}  // namespace fda
