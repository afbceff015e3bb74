#include "fda/quadrature.hpp"

#include <cmath>

#include "fda/errors.hpp"

namespace fda {

QuadratureRule QuadratureRule::gauss_legendre(int q) {
    if (q < 1 || q > 64) throw RangeError("Gauss-Legendre node count must be in [1,64]");
    QuadratureRule rule;
    rule.nodes.resize(q);
    rule.weights.resize(q);
    rule.exact_degree = 2 * q - 1;

    // Roots of the Legendre polynomial P_q by Newton iteration from the
    // Chebyshev-based initial guesses; symmetric pairs share the computation.
    for (int i = 0; i < (q + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= q; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[q - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[q - 1 - i] = w;
    }
    if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
    return rule;
}

double QuadratureRule::integrate(const std::function<double(double)>& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (int i = 0; i < nodes.size(); ++i) acc += weights[i] * f(mid + half * nodes[i]);
    return half * acc;
}

}  // namespace fda
