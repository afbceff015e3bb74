#pragma once

#include <Eigen/Core>

namespace fda {

struct EigSym {
    Eigen::VectorXd values;   // sorted nonincreasing
    Eigen::MatrixXd vectors;  // orthonormal columns, vectors.col(k) pairs with values[k]
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations, sweeping until the
/// largest off-diagonal entry falls below 1e-12 times the input magnitude.
/// Deterministic: identical input yields bit-identical output.  Throws
/// ContractError when the input is not symmetric within 1e-9 (relative).
EigSym eig_sym(const Eigen::MatrixXd& matrix);

}  // namespace fda
