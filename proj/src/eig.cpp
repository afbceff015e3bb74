#include "fda/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fda/errors.hpp"

namespace fda {

EigSym eig_sym(const Eigen::MatrixXd& matrix) {
    const int n = static_cast<int>(matrix.rows());
    if (matrix.cols() != n) throw ContractError("eig_sym requires a square matrix");

    const double scale = matrix.cwiseAbs().maxCoeff();
    const double sym_tol = 1e-9 * std::max(scale, 1e-300);
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > sym_tol)
        throw ContractError("eig_sym requires a symmetric matrix (within 1e-9 relative)");

    Eigen::MatrixXd a = 0.5 * (matrix + matrix.transpose());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double off_tol = 1e-12 * scale;

    if (scale > 0.0) {
        const int max_sweeps = 100;
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            double off_max = 0.0;
            for (int p = 0; p < n - 1; ++p)
                for (int q = p + 1; q < n; ++q) off_max = std::max(off_max, std::abs(a(p, q)));
            if (off_max <= off_tol) break;
            if (sweep == max_sweeps - 1)
                throw ContractError("Jacobi eigensolver failed to converge");

            for (int p = 0; p < n - 1; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    const double apq = a(p, q);
                    if (std::abs(apq) <= off_tol) continue;
                    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    const double tau = s / (1.0 + c);

                    const double app = a(p, p), aqq = a(q, q);
                    a(p, p) = app - t * apq;
                    a(q, q) = aqq + t * apq;
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    for (int i = 0; i < n; ++i) {
                        if (i == p || i == q) continue;
                        const double aip = a(i, p), aiq = a(i, q);
                        a(i, p) = aip - s * (aiq + tau * aip);
                        a(p, i) = a(i, p);
                        a(i, q) = aiq + s * (aip - tau * aiq);
                        a(q, i) = a(i, q);
                    }
                    for (int i = 0; i < n; ++i) {
                        const double vip = v(i, p), viq = v(i, q);
                        v(i, p) = vip - s * (viq + tau * vip);
                        v(i, q) = viq + s * (vip - tau * viq);
                    }
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    EigSym out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

}  // namespace fda
