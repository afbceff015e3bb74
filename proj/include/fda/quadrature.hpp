#pragma once

#include <Eigen/Core>
#include <functional>

namespace fda {

/// Gauss-Legendre quadrature rule on the reference interval [-1,1].
/// A rule with q nodes integrates polynomials up to degree 2q-1 exactly;
/// weights are positive and sum to the interval length.
struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
    int exact_degree = 0;

    static QuadratureRule gauss_legendre(int q);

    /// Integrates f over [a,b] by affine mapping of the reference rule.
    double integrate(const std::function<double(double)>& f, double a, double b) const;
};

}  // namespace fda
