#pragma once

#include <Eigen/Core>
#include <vector>

namespace fda {

/// Piecewise polynomial on consecutive breakpoint intervals, zero outside.
///
/// Piece p covers [breaks[p], breaks[p+1]) and stores monomial coefficients in
/// the local coordinate x = t - breaks[p] (constant term first).  The last
/// piece is closed on the right.  Splines and the orthonormal bases derived
/// from them are stored in this form so that Gram matrices can be integrated
/// exactly.
class PiecewisePoly {
public:
    PiecewisePoly() = default;  // identically zero
    PiecewisePoly(std::vector<double> breaks, std::vector<Eigen::VectorXd> coefs);

    bool is_zero() const { return coefs_.empty(); }
    int pieces() const { return static_cast<int>(coefs_.size()); }
    int degree() const;
    const std::vector<double>& breaks() const { return breaks_; }
    const Eigen::VectorXd& piece_coefs(int p) const { return coefs_[static_cast<std::size_t>(p)]; }

    double operator()(double t) const;

    PiecewisePoly& operator*=(double scale);

    /// Sum of w[i] * polys[i] over the merged breakpoint set.
    static PiecewisePoly linear_combination(const std::vector<const PiecewisePoly*>& polys,
                                            const Eigen::VectorXd& w);

private:
    std::vector<double> breaks_;            // pieces()+1 entries when nonzero
    std::vector<Eigen::VectorXd> coefs_;

    friend double exact_poly_inner_product(const PiecewisePoly&, const PiecewisePoly&);
};

/// Exact integral of p*q over [0,1] via per-piece Gauss-Legendre with
/// ceil((deg p + deg q + 1)/2) nodes.  Degrees above 10 are rejected.
double exact_poly_inner_product(const PiecewisePoly& p, const PiecewisePoly& q);

}  // namespace fda
