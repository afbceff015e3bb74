#include "fda/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>

#include "fda/errors.hpp"
#include "fda/quadrature.hpp"

namespace fda {

namespace {

constexpr int kMaxDegree = 10;
constexpr double kBreakTol = 1e-14;

double horner(const Eigen::VectorXd& c, double x) {
    double v = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) v = v * x + c[k];
    return v;
}

// Re-expands local coefficients around an origin shifted right by s >= 0.
Eigen::VectorXd taylor_shift(const Eigen::VectorXd& c, double s) {
    const int n = static_cast<int>(c.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) {
        double binom = 1.0;
        double power = 1.0;
        for (int j = k; j >= 0; --j) {
            out[j] += c[k] * binom * power;
            if (j > 0) {
                binom = binom * j / (k - j + 1);
                power *= s;
            }
        }
    }
    return out;
}

std::vector<double> merge_breaks(const std::vector<double>& a, const std::vector<double>& b,
                                 double lo, double hi) {
    std::vector<double> merged;
    merged.reserve(a.size() + b.size());
    for (double t : a)
        if (t > lo + kBreakTol && t < hi - kBreakTol) merged.push_back(t);
    for (double t : b)
        if (t > lo + kBreakTol && t < hi - kBreakTol) merged.push_back(t);
    merged.push_back(lo);
    merged.push_back(hi);
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](double x, double y) { return y - x < kBreakTol; }),
                 merged.end());
    return merged;
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<Eigen::VectorXd> coefs)
    : breaks_(std::move(breaks)), coefs_(std::move(coefs)) {
    if (coefs_.empty()) {
        breaks_.clear();
        return;
    }
    if (breaks_.size() != coefs_.size() + 1)
        throw DimensionError("piecewise poly needs pieces()+1 breakpoints");
    for (std::size_t p = 0; p + 1 < breaks_.size(); ++p) {
        if (!(breaks_[p] < breaks_[p + 1]))
            throw DomainError("piecewise poly breakpoints must be strictly increasing");
    }
}

int PiecewisePoly::degree() const {
    int d = 0;
    for (const auto& c : coefs_) d = std::max(d, static_cast<int>(c.size()) - 1);
    return d;
}

double PiecewisePoly::operator()(double t) const {
    if (is_zero() || t < breaks_.front() || t > breaks_.back()) return 0.0;
    // The support is half-open on the right unless it reaches the domain end,
    // so indicator-type pieces stay orthogonal on grids that hit their knots.
    if (t == breaks_.back() && breaks_.back() != 1.0) return 0.0;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    int p = static_cast<int>(it - breaks_.begin()) - 1;
    if (p >= pieces()) p = pieces() - 1;  // right endpoint belongs to the last piece
    return horner(coefs_[static_cast<std::size_t>(p)], t - breaks_[static_cast<std::size_t>(p)]);
}

PiecewisePoly& PiecewisePoly::operator*=(double scale) {
    for (auto& c : coefs_) c *= scale;
    return *this;
}

PiecewisePoly PiecewisePoly::linear_combination(const std::vector<const PiecewisePoly*>& polys,
                                                const Eigen::VectorXd& w) {
    if (static_cast<Eigen::Index>(polys.size()) != w.size())
        throw DimensionError("weight count does not match poly count");

    double lo = 0.0, hi = 0.0;
    bool any = false;
    int deg = 0;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const PiecewisePoly& p = *polys[i];
        if (p.is_zero() || w[static_cast<Eigen::Index>(i)] == 0.0) continue;
        deg = std::max(deg, p.degree());
        if (!any) {
            lo = p.breaks().front();
            hi = p.breaks().back();
            any = true;
        } else {
            lo = std::min(lo, p.breaks().front());
            hi = std::max(hi, p.breaks().back());
        }
    }
    if (!any) return PiecewisePoly();

    std::vector<double> merged{lo, hi};
    for (std::size_t i = 0; i < polys.size(); ++i) {
        if (polys[i]->is_zero() || w[static_cast<Eigen::Index>(i)] == 0.0) continue;
        merged = merge_breaks(merged, polys[i]->breaks(), lo, hi);
    }

    std::vector<Eigen::VectorXd> coefs(merged.size() - 1,
                                       Eigen::VectorXd::Zero(deg + 1));
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const PiecewisePoly& p = *polys[i];
        const double wi = w[static_cast<Eigen::Index>(i)];
        if (p.is_zero() || wi == 0.0) continue;
        for (std::size_t m = 0; m + 1 < merged.size(); ++m) {
            const double a = merged[m];
            const double mid = 0.5 * (a + merged[m + 1]);
            if (mid < p.breaks().front() || mid > p.breaks().back()) continue;
            auto it = std::upper_bound(p.breaks().begin(), p.breaks().end(), mid);
            const int piece = static_cast<int>(it - p.breaks().begin()) - 1;
            const Eigen::VectorXd shifted =
                taylor_shift(p.coefs_[static_cast<std::size_t>(piece)],
                             a - p.breaks()[static_cast<std::size_t>(piece)]);
            coefs[m].head(shifted.size()) += wi * shifted;
        }
    }
    return PiecewisePoly(std::move(merged), std::move(coefs));
}

double exact_poly_inner_product(const PiecewisePoly& p, const PiecewisePoly& q) {
    if (p.is_zero() || q.is_zero()) return 0.0;
    const int dp = p.degree(), dq = q.degree();
    if (dp > kMaxDegree || dq > kMaxDegree)
        throw DegreeError("exact inner products support degrees up to 10");

    const double lo = std::max(p.breaks().front(), q.breaks().front());
    const double hi = std::min(p.breaks().back(), q.breaks().back());
    if (!(lo < hi)) return 0.0;

    const std::vector<double> merged = merge_breaks(p.breaks(), q.breaks(), lo, hi);
    const int n_nodes = (dp + dq + 1 + 1) / 2;
    const QuadratureRule rule = QuadratureRule::gauss_legendre(n_nodes);

    double acc = 0.0;
    for (std::size_t m = 0; m + 1 < merged.size(); ++m) {
        const double a = merged[m], b = merged[m + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double piece = 0.0;
        for (int i = 0; i < rule.nodes.size(); ++i) {
            const double t = mid + half * rule.nodes[i];
            piece += rule.weights[i] * p(t) * q(t);
        }
        acc += half * piece;
    }
    return acc;
}

}  // namespace fda
