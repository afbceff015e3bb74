#include "fda/grid.hpp"

#include <cmath>

namespace fda {

namespace {
constexpr double kUniformTol = 1e-12;
}

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    const int m = size();
    if (m < 1) throw DimensionError("grid must contain at least one point");
    if (points_.front() < 0.0 || points_.back() > 1.0)
        throw DomainError("grid points must lie in [0,1]");
    for (int j = 0; j + 1 < m; ++j) {
        if (!(points_[j] < points_[j + 1]))
            throw DomainError("grid points must be strictly increasing");
    }
    for (double t : points_) {
        if (!std::isfinite(t)) throw DomainError("grid points must be finite");
    }

    weights_.resize(m);
    if (m == 1) {
        weights_[0] = 1.0;
        uniform_step_ = std::nullopt;
        return;
    }
    for (int j = 0; j + 1 < m; ++j) weights_[j] = points_[j + 1] - points_[j];
    weights_[m - 1] = weights_[m - 2];

    const double step = weights_[0];
    bool uniform = true;
    for (int j = 0; j + 1 < m; ++j) {
        if (std::abs(weights_[j] - step) >= kUniformTol) {
            uniform = false;
            break;
        }
    }
    if (uniform) uniform_step_ = step;
}

Grid Grid::uniform(int m) {
    if (m < 1) throw DimensionError("grid size must be positive");
    std::vector<double> pts(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) pts[static_cast<std::size_t>(j)] = static_cast<double>(j) / m;
    return Grid(std::move(pts));
}

Grid Grid::uniform_midpoint(int m) {
    if (m < 1) throw DimensionError("grid size must be positive");
    std::vector<double> pts(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        pts[static_cast<std::size_t>(j)] = (static_cast<double>(j) + 0.5) / m;
    return Grid(std::move(pts));
}

Grid Grid::uniform_closed(int m) {
    if (m < 2) throw DimensionError("closed grid needs at least two points");
    std::vector<double> pts(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        pts[static_cast<std::size_t>(j)] = static_cast<double>(j) / (m - 1);
    pts.back() = 1.0;
    return Grid(std::move(pts));
}

double inner_product(const Grid& grid, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != grid.size() || y.size() != grid.size())
        throw DimensionError("sampled functions do not match the grid size");
    return (x.array() * y.array() * grid.weights().array()).sum();
}

double l2_norm_sq(const Grid& grid, const Eigen::VectorXd& x) {
    return inner_product(grid, x, x);
}

FunctionalDataset::FunctionalDataset(Grid grid, Eigen::MatrixXd values,
                                     std::vector<std::string> labels)
    : grid_(std::move(grid)), values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.rows() < 1) throw SampleError("dataset needs at least one curve");
    if (values_.cols() != grid_.size())
        throw DimensionError("value matrix width does not match the grid");
    if (!values_.allFinite()) throw DomainError("dataset values must be finite");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n_curves())
        throw DimensionError("label count does not match the curve count");
}

FunctionalDataset FunctionalDataset::subset(const std::vector<int>& rows) const {
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), values_.cols());
    std::vector<std::string> sub_labels;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 0 || rows[i] >= n_curves()) throw RangeError("row index out of range");
        sub.row(static_cast<Eigen::Index>(i)) = values_.row(rows[i]);
        if (!labels_.empty()) sub_labels.push_back(labels_[static_cast<std::size_t>(rows[i])]);
    }
    FunctionalDataset out(grid_, std::move(sub), std::move(sub_labels));
    out.source_interval_ = source_interval_;
    return out;
}

}  // namespace fda
