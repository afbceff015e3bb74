#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fda/errors.hpp"

namespace fda {

/// Strictly increasing sampling points in [0,1].
///
/// Discrete integrals over a grid use left-Riemann weights: w_j = t_{j+1}-t_j,
/// with the last weight repeating the previous one.  For the canonical uniform
/// grid t_j = j/m these weights sum to exactly 1, so discrete inner products of
/// the Fourier elements and of piecewise-constant bases with knots at grid
/// points are orthonormal to machine precision.
class Grid {
public:
    explicit Grid(std::vector<double> points);

    /// Uniform left-endpoint grid t_j = j/m, j = 0..m-1.  Knots placed at
    /// grid points make piecewise-constant projections exact here.
    static Grid uniform(int m);
    /// Uniform midpoint grid t_j = (j+1/2)/m.  The same left-Riemann weights
    /// act as a midpoint rule, giving O(1/m^2) quadrature error for smooth
    /// integrands; preferred for sampling simulated smooth curves.
    static Grid uniform_midpoint(int m);
    /// Uniform grid including both endpoints, t_j = j/(m-1).
    static Grid uniform_closed(int m);

    int size() const { return static_cast<int>(points_.size()); }
    const std::vector<double>& points() const { return points_; }
    double point(int j) const { return points_[static_cast<std::size_t>(j)]; }
    std::optional<double> uniform_step() const { return uniform_step_; }

    /// Left-Riemann weights; always sums to the covered length plus one
    /// trailing step.
    const Eigen::VectorXd& weights() const { return weights_; }

    bool operator==(const Grid& other) const { return points_ == other.points_; }

private:
    std::vector<double> points_;
    Eigen::VectorXd weights_;
    std::optional<double> uniform_step_;
};

/// Discrete L2 inner product of two functions sampled on `grid`.
double inner_product(const Grid& grid, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Squared L2 norm, inner_product(x, x).
double l2_norm_sq(const Grid& grid, const Eigen::VectorXd& x);

/// A shared grid plus an n x m matrix of curve values (row i = curve i).
class FunctionalDataset {
public:
    FunctionalDataset(Grid grid, Eigen::MatrixXd values,
                      std::vector<std::string> labels = {});

    const Grid& grid() const { return grid_; }
    int n_curves() const { return static_cast<int>(values_.rows()); }
    int n_points() const { return static_cast<int>(values_.cols()); }
    const Eigen::MatrixXd& values() const { return values_; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Original time interval before affine rescaling to [0,1].
    std::pair<double, double> source_interval() const { return source_interval_; }
    void set_source_interval(double lo, double hi) { source_interval_ = {lo, hi}; }

    /// Maps a grid coordinate back to the source interval.
    double to_source(double t) const {
        return source_interval_.first + t * (source_interval_.second - source_interval_.first);
    }

    FunctionalDataset subset(const std::vector<int>& rows) const;

private:
    Grid grid_;
    Eigen::MatrixXd values_;
    std::vector<std::string> labels_;
    std::pair<double, double> source_interval_{0.0, 1.0};
};

}  // namespace fda
