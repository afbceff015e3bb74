#include "fda/bspline.hpp"

#include <algorithm>
#include <cmath>

#include "fda/errors.hpp"

namespace fda {

namespace {

// Indicator of [knots[i], knots[i+1]), closed on the right when the interval
// ends at the rightmost knot value.
double indicator(const std::vector<double>& knots, int i, double t) {
    const double a = knots[static_cast<std::size_t>(i)];
    const double b = knots[static_cast<std::size_t>(i) + 1];
    if (a >= b) return 0.0;
    if (t >= a && t < b) return 1.0;
    if (t == b && b == knots.back()) return 1.0;
    return 0.0;
}

}  // namespace

double eval_bspline(const std::vector<double>& knots, int degree, int index, double t) {
    if (t < 0.0 || t > 1.0) throw DomainError("B-spline evaluation point outside [0,1]");
    if (degree < 0) throw RangeError("B-spline degree must be nonnegative");
    const int len = static_cast<int>(knots.size());
    if (index < 0 || index > len - degree - 2)
        throw RangeError("B-spline index out of range for the knot sequence");
    for (int j = 0; j + 1 < len; ++j)
        if (knots[static_cast<std::size_t>(j)] > knots[static_cast<std::size_t>(j) + 1])
            throw KnotError("knot sequence must be nondecreasing");

    std::vector<double> n(static_cast<std::size_t>(degree) + 1);
    for (int j = 0; j <= degree; ++j) n[static_cast<std::size_t>(j)] = indicator(knots, index + j, t);

    for (int r = 1; r <= degree; ++r) {
        for (int j = 0; j <= degree - r; ++j) {
            const double left_den = knots[static_cast<std::size_t>(index + j + r)] -
                                    knots[static_cast<std::size_t>(index + j)];
            const double right_den = knots[static_cast<std::size_t>(index + j + r + 1)] -
                                     knots[static_cast<std::size_t>(index + j + 1)];
            const double left =
                left_den > 0.0
                    ? (t - knots[static_cast<std::size_t>(index + j)]) / left_den * n[static_cast<std::size_t>(j)]
                    : 0.0;
            const double right = right_den > 0.0
                                     ? (knots[static_cast<std::size_t>(index + j + r + 1)] - t) /
                                           right_den * n[static_cast<std::size_t>(j) + 1]
                                     : 0.0;
            n[static_cast<std::size_t>(j)] = left + right;
        }
    }
    return n[0];
}

BsplineFamily::BsplineFamily(KnotSet knots, int degree)
    : knots_(std::move(knots)), degree_(degree), extended_(knots_.extended(degree)) {
    if (degree < 0) throw RangeError("B-spline degree must be nonnegative");

    // Distinct knot values define the global piece layout.
    const std::vector<double> distinct = knots_.with_boundaries();
    const int n_pieces = static_cast<int>(distinct.size()) - 1;
    const int n_b = static_cast<int>(extended_.size()) - degree - 1;

    // Coefficient-level Cox-de Boor: carry every spline of the current degree
    // as per-piece local-coordinate coefficients and multiply through the two
    // affine weights of the recursion.
    using Pieces = std::vector<Eigen::VectorXd>;  // one (possibly empty) coef vector per piece
    auto piece_of = [&](double a) {
        auto it = std::upper_bound(distinct.begin(), distinct.end(), a);
        return static_cast<int>(it - distinct.begin()) - 1;
    };

    std::vector<Pieces> level(static_cast<std::size_t>(n_b + degree));
    for (int i = 0; i < n_b + degree; ++i) {
        Pieces cur(static_cast<std::size_t>(n_pieces));
        const double a = extended_[static_cast<std::size_t>(i)];
        const double b = extended_[static_cast<std::size_t>(i) + 1];
        if (a < b) {
            const int p = piece_of(a);
            cur[static_cast<std::size_t>(p)] = Eigen::VectorXd::Ones(1);
        }
        level[static_cast<std::size_t>(i)] = std::move(cur);
    }

    for (int r = 1; r <= degree; ++r) {
        std::vector<Pieces> next(static_cast<std::size_t>(n_b + degree - r));
        for (int i = 0; i < n_b + degree - r; ++i) {
            Pieces cur(static_cast<std::size_t>(n_pieces));
            const double e_i = extended_[static_cast<std::size_t>(i)];
            const double e_ir = extended_[static_cast<std::size_t>(i + r)];
            const double e_i1 = extended_[static_cast<std::size_t>(i + 1)];
            const double e_ir1 = extended_[static_cast<std::size_t>(i + r + 1)];
            const double left_den = e_ir - e_i;
            const double right_den = e_ir1 - e_i1;
            for (int p = 0; p < n_pieces; ++p) {
                const double local0 = distinct[static_cast<std::size_t>(p)];
                Eigen::VectorXd acc = Eigen::VectorXd::Zero(r + 1);
                bool used = false;
                const Eigen::VectorXd& lc = level[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
                if (left_den > 0.0 && lc.size() > 0) {
                    // (t - e_i)/left_den == (x + (local0 - e_i))/left_den in local x
                    const double c = local0 - e_i;
                    for (int k = 0; k < lc.size(); ++k) {
                        acc[k + 1] += lc[k] / left_den;
                        acc[k] += c * lc[k] / left_den;
                    }
                    used = true;
                }
                const Eigen::VectorXd& rc = level[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(p)];
                if (right_den > 0.0 && rc.size() > 0) {
                    const double c = e_ir1 - local0;  // (e_{i+r+1} - t) == (c - x)
                    for (int k = 0; k < rc.size(); ++k) {
                        acc[k + 1] -= rc[k] / right_den;
                        acc[k] += c * rc[k] / right_den;
                    }
                    used = true;
                }
                if (used) cur[static_cast<std::size_t>(p)] = std::move(acc);
            }
            next[static_cast<std::size_t>(i)] = std::move(cur);
        }
        level = std::move(next);
    }

    elements_.reserve(static_cast<std::size_t>(n_b));
    for (int i = 0; i < n_b; ++i) {
        const Pieces& cur = level[static_cast<std::size_t>(i)];
        int first = -1, last = -1;
        for (int p = 0; p < n_pieces; ++p) {
            if (cur[static_cast<std::size_t>(p)].size() > 0) {
                if (first < 0) first = p;
                last = p;
            }
        }
        if (first < 0) throw KnotError("degenerate B-spline element");
        std::vector<double> breaks(distinct.begin() + first, distinct.begin() + last + 2);
        std::vector<Eigen::VectorXd> coefs;
        coefs.reserve(static_cast<std::size_t>(last - first + 1));
        for (int p = first; p <= last; ++p) {
            const Eigen::VectorXd& c = cur[static_cast<std::size_t>(p)];
            coefs.push_back(c.size() > 0 ? c : Eigen::VectorXd::Zero(1));
        }
        elements_.emplace_back(std::move(breaks), std::move(coefs));
    }
}

Eigen::MatrixXd BsplineFamily::gram() const {
    const int n = size();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j <= std::min(n - 1, i + degree_); ++j) {
            const double v = exact_poly_inner_product(element(i), element(j));
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

}  // namespace fda
