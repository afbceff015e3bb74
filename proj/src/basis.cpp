#include "fda/basis.hpp"

#include <cmath>

#include "fda/errors.hpp"

namespace fda {

OrthoBasis::OrthoBasis(BasisKind kind, int degree, std::optional<KnotSet> knots,
                       std::vector<PiecewisePoly> elements, std::vector<int> levels, int size)
    : kind_(kind),
      degree_(degree),
      knots_(std::move(knots)),
      elements_(std::move(elements)),
      levels_(std::move(levels)),
      size_(size) {}

OrthoBasis OrthoBasis::piecewise_constant(const KnotSet& knots) {
    const std::vector<double> cuts = knots.with_boundaries();
    std::vector<PiecewisePoly> elements;
    elements.reserve(cuts.size() - 1);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        const double height = 1.0 / std::sqrt(cuts[j + 1] - cuts[j]);
        elements.emplace_back(std::vector<double>{cuts[j], cuts[j + 1]},
                              std::vector<Eigen::VectorXd>{Eigen::VectorXd::Constant(1, height)});
    }
    const int n = static_cast<int>(elements.size());
    return OrthoBasis(BasisKind::piecewise_constant, 0, knots, std::move(elements), {}, n);
}

OrthoBasis OrthoBasis::fourier(int size) {
    if (size < 1) throw RangeError("Fourier basis size must be positive");
    return OrthoBasis(BasisKind::fourier, 0, std::nullopt, {}, {}, size);
}

double OrthoBasis::eval(int j, double t) const {
    if (j < 0 || j >= size_) throw RangeError("basis element index out of range");
    if (t < 0.0 || t > 1.0) throw DomainError("basis evaluation point outside [0,1]");
    if (kind_ == BasisKind::fourier) {
        if (j == 0) return 1.0;
        const int freq = (j + 1) / 2;
        const double arg = 2.0 * M_PI * freq * t;
        return std::sqrt(2.0) * (j % 2 == 1 ? std::sin(arg) : std::cos(arg));
    }
    return elements_[static_cast<std::size_t>(j)](t);
}

Eigen::MatrixXd OrthoBasis::eval_on(const Grid& grid) const {
    const int m = grid.size();
    Eigen::MatrixXd b(size_, m);
    for (int j = 0; j < size_; ++j)
        for (int i = 0; i < m; ++i) b(j, i) = eval(j, grid.point(i));
    return b;
}

Eigen::MatrixXd OrthoBasis::gram() const {
    if (kind_ == BasisKind::fourier) return Eigen::MatrixXd::Identity(size_, size_);
    Eigen::MatrixXd g(size_, size_);
    for (int i = 0; i < size_; ++i) {
        for (int j = i; j < size_; ++j) {
            const double v = exact_poly_inner_product(element(i), element(j));
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

const PiecewisePoly& OrthoBasis::element(int j) const {
    if (kind_ == BasisKind::fourier)
        throw ContractError("Fourier elements have no piecewise-polynomial form");
    if (j < 0 || j >= size_) throw RangeError("basis element index out of range");
    return elements_[static_cast<std::size_t>(j)];
}

Eigen::MatrixXd project(const FunctionalDataset& dataset, const OrthoBasis& basis) {
    const Eigen::MatrixXd b = basis.eval_on(dataset.grid());
    const Eigen::MatrixXd weighted =
        dataset.values().array().rowwise() * dataset.grid().weights().transpose().array();
    return weighted * b.transpose();
}

Eigen::MatrixXd synthesize(const Grid& grid, const OrthoBasis& basis,
                           const Eigen::MatrixXd& coefs) {
    if (coefs.cols() != basis.size())
        throw DimensionError("coefficient width does not match the basis size");
    return coefs * basis.eval_on(grid);
}

double amse(const FunctionalDataset& dataset, const OrthoBasis& basis) {
    const Eigen::MatrixXd b = basis.eval_on(dataset.grid());
    const Eigen::MatrixXd weighted =
        dataset.values().array().rowwise() * dataset.grid().weights().transpose().array();
    const Eigen::MatrixXd coefs = weighted * b.transpose();
    const Eigen::MatrixXd residual = dataset.values() - coefs * b;
    const double total =
        (residual.array().square().rowwise() * dataset.grid().weights().transpose().array()).sum();
    return total / dataset.n_curves();
}

}  // namespace fda
