#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "fda/grid.hpp"
#include "fda/knots.hpp"
#include "fda/piecewise_poly.hpp"

namespace fda {

enum class BasisKind { piecewise_constant, fourier, splinet };

/// An ordered orthonormal family on [0,1].
///
/// Spline-backed kinds keep their elements in exact piecewise-polynomial form,
/// so the Gram matrix can be integrated exactly; the Fourier family is
/// evaluated analytically.  Instances are immutable and safe to share across
/// threads.
class OrthoBasis {
public:
    /// Normalized indicators of the knot intervals; size = #internal knots + 1.
    static OrthoBasis piecewise_constant(const KnotSet& knots);

    /// 1, sqrt2*sin(2*pi*t), sqrt2*cos(2*pi*t), sqrt2*sin(4*pi*t), ...
    /// interleaved by frequency and truncated at `size`.
    static OrthoBasis fourier(int size);

    /// Orthonormal spline basis spanning the same space as the clamped
    /// B-spline family on the same knots, built by dyadic hierarchical
    /// orthogonalization.  Requires at least degree+1 internal knots.
    static OrthoBasis splinet(const KnotSet& knots, int degree);

    BasisKind kind() const { return kind_; }
    int size() const { return size_; }
    int degree() const { return degree_; }
    const std::optional<KnotSet>& knots() const { return knots_; }

    double eval(int j, double t) const;

    /// size() x grid.size() matrix of element values.
    Eigen::MatrixXd eval_on(const Grid& grid) const;

    /// Exact Gram matrix (identity for Fourier by orthogonality).
    Eigen::MatrixXd gram() const;

    /// Dyadic level per element (splinet only; empty otherwise).  An element
    /// at level l spans at most (degree+1)*2^l inter-knot intervals.
    const std::vector<int>& levels() const { return levels_; }

    /// Piecewise-polynomial form; spline-backed kinds only.
    const PiecewisePoly& element(int j) const;

private:
    OrthoBasis(BasisKind kind, int degree, std::optional<KnotSet> knots,
               std::vector<PiecewisePoly> elements, std::vector<int> levels, int size);

    BasisKind kind_;
    int degree_;
    std::optional<KnotSet> knots_;
    std::vector<PiecewisePoly> elements_;
    std::vector<int> levels_;
    int size_;
};

/// Coefficient matrix c_ij = <x_i, f_j> of the dataset in the basis (discrete
/// inner products on the dataset grid); n x size().
Eigen::MatrixXd project(const FunctionalDataset& dataset, const OrthoBasis& basis);

/// Curves synthesized from coefficient rows, sampled on `grid`.
Eigen::MatrixXd synthesize(const Grid& grid, const OrthoBasis& basis,
                           const Eigen::MatrixXd& coefs);

/// Average (over curves) squared L2 distance between each curve and its
/// projection onto the basis span.
double amse(const FunctionalDataset& dataset, const OrthoBasis& basis);

}  // namespace fda
