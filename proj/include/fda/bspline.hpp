#pragma once

#include <Eigen/Core>
#include <vector>

#include "fda/knots.hpp"
#include "fda/piecewise_poly.hpp"

namespace fda {

/// Value of the B-spline B_{index,degree} on the given nondecreasing knot
/// sequence, via the Cox-de Boor recursion.  0/0 terms resolve to 0, the
/// rightmost nonempty interval is closed on the right, and the value is zero
/// outside [knots[index], knots[index+degree+1]].
double eval_bspline(const std::vector<double>& knots, int degree, int index, double t);

/// The clamped B-spline family of a given degree: boundary knots 0 and 1 carry
/// multiplicity degree+1, giving size() = #internal knots + degree + 1
/// elements.  Elements are nonnegative, sum to one on [0,1], and are kept in
/// exact piecewise-polynomial form.
class BsplineFamily {
public:
    BsplineFamily(KnotSet knots, int degree);

    int size() const { return static_cast<int>(elements_.size()); }
    int degree() const { return degree_; }
    const KnotSet& knots() const { return knots_; }
    const std::vector<double>& extended_knots() const { return extended_; }
    const PiecewisePoly& element(int i) const { return elements_[static_cast<std::size_t>(i)]; }

    /// Exact Gram matrix; banded with bandwidth degree().
    Eigen::MatrixXd gram() const;

private:
    KnotSet knots_;
    int degree_;
    std::vector<double> extended_;
    std::vector<PiecewisePoly> elements_;
};

}  // namespace fda
