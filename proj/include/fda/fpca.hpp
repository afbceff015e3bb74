#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "fda/basis.hpp"
#include "fda/eig.hpp"
#include "fda/grid.hpp"

namespace fda {

/// Sample covariance of basis coefficients, optionally centered.
struct CoefCovariance {
    Eigen::MatrixXd matrix;
    bool centered = false;
    Eigen::VectorXd mean_coefs;  // zero vector when uncentered
};

/// Sample covariance with divisor n-1.  Requires at least two rows.
CoefCovariance estimate_covariance(const Eigen::MatrixXd& coefs, bool center);

struct FpcaResult {
    Eigen::VectorXd eigenvalues;       // nonincreasing
    Eigen::MatrixXd eigenvectors;      // orthonormal columns of coefficient vectors
    Eigen::VectorXd mean_coefs;
    std::shared_ptr<const OrthoBasis> basis;

    /// Eigenfunction k sampled on a grid: sum_i eigenvectors(i,k) f_i(t).
    Eigen::VectorXd eigenfunction(int k, const Grid& grid) const;
};

/// project -> estimate_covariance -> eig_sym.  Eigenvector signs are fixed so
/// the first coefficient larger than 1e-9 in magnitude is positive.
FpcaResult fpca(const FunctionalDataset& dataset, std::shared_ptr<const OrthoBasis> basis,
                bool center);

/// Karhunen-Loeve truncation: mean + sum of the first K score-weighted
/// eigenfunctions, sampled on the dataset grid.
FunctionalDataset reconstruct(const FunctionalDataset& dataset, const FpcaResult& result, int K);

/// Expected squared L2 error of representing the noiseless mixing model in
/// span{f_i : i in kept}: sum_k lambda_k sum_{i not kept} a_ki^2.  Rows of
/// `mixing` must be orthonormal.  Indices are zero-based.
double truncation_error(const Eigen::MatrixXd& mixing, const Eigen::VectorXd& lambda,
                        const std::vector<int>& kept);

}  // namespace fda
