#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "fda/basis.hpp"
#include "fda/bspline.hpp"
#include "fda/eig.hpp"
#include "fda/errors.hpp"

namespace fda {

namespace {

// Dyadic support tree over consecutive B-spline indices.  A terminal node owns
// every index in its range; an internal node keeps a separator of `degree`
// indices between its children and owns only those.  Two B-splines whose
// indices differ by more than `degree` have interior-disjoint supports, so the
// separators make all non-ancestor groups exactly orthogonal by support; only
// ancestor/descendant pairs need explicit projection.  A node of height h
// covers at most (degree+1)*2^h - degree indices, which bounds every element
// support by (degree+1)*2^h inter-knot intervals.
struct SupportNode {
    int lo, hi;          // covered index range [lo, hi)
    int own_lo, own_hi;  // indices orthogonalized at this node
    int height;
};

void build_tree(int lo, int hi, int degree, std::vector<SupportNode>& nodes, int& height) {
    const int span = hi - lo;
    if (span <= degree + 1) {
        height = span <= 1 ? 0 : 1;
        nodes.push_back({lo, hi, lo, hi, height});
        return;
    }
    const int rest = span - degree;
    const int left_n = (rest + 1) / 2;  // smaller terminal groups end up on the right
    const int right_n = rest - left_n;
    int hl = 0, hr = 0;
    build_tree(lo, lo + left_n, degree, nodes, hl);
    build_tree(hi - right_n, hi, degree, nodes, hr);
    height = 1 + std::max(hl, hr);
    nodes.push_back({lo, hi, lo + left_n, hi - right_n, height});
}

}  // namespace

OrthoBasis OrthoBasis::splinet(const KnotSet& knots, int degree) {
    if (knots.size() < degree + 1)
        throw KnotError("splinet needs at least degree+1 internal knots");

    const BsplineFamily family(knots, degree);
    const int n = family.size();
    const Eigen::MatrixXd gram = family.gram();

    std::vector<SupportNode> nodes;
    int root_height = 0;
    build_tree(0, n, degree, nodes, root_height);
    std::stable_sort(nodes.begin(), nodes.end(), [](const SupportNode& a, const SupportNode& b) {
        return a.height != b.height ? a.height < b.height : a.lo < b.lo;
    });

    // Coefficient vectors of the orthonormal elements over the B-splines.
    Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(n, n);
    std::vector<int> levels(static_cast<std::size_t>(n));
    int produced = 0;

    for (const SupportNode& node : nodes) {
        const int count = node.own_hi - node.own_lo;
        if (count == 0) continue;

        // Residuals of the owned B-splines after removing everything already
        // produced.  Entries of gram vanish exactly beyond the spline
        // bandwidth, so only descendants contribute and the coefficient
        // window stays inside [node.lo, node.hi).
        Eigen::MatrixXd residual = Eigen::MatrixXd::Zero(n, count);
        for (int c = 0; c < count; ++c) residual(node.own_lo + c, c) = 1.0;
        if (produced > 0) {
            const auto prev = coef.leftCols(produced);
            residual -= prev * (prev.transpose() * (gram * residual));
        }

        // Symmetric (Loewdin) orthonormalization of the residual block.
        Eigen::MatrixXd overlap = residual.transpose() * gram * residual;
        overlap = 0.5 * (overlap + overlap.transpose());
        const EigSym es = eig_sym(overlap);
        if (es.values[count - 1] <= 1e-13 * std::max(es.values[0], 1e-300))
            throw KnotError("knot configuration is numerically degenerate for this degree");
        const Eigen::MatrixXd inv_sqrt = es.vectors *
                                         es.values.cwiseSqrt().cwiseInverse().asDiagonal() *
                                         es.vectors.transpose();
        coef.middleCols(produced, count) = residual * inv_sqrt;
        for (int c = 0; c < count; ++c)
            levels[static_cast<std::size_t>(produced + c)] = node.height;
        produced += count;
    }

    std::vector<const PiecewisePoly*> raw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) raw[static_cast<std::size_t>(i)] = &family.element(i);
    std::vector<PiecewisePoly> elements;
    elements.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        elements.push_back(PiecewisePoly::linear_combination(raw, coef.col(j)));

    return OrthoBasis(BasisKind::splinet, degree, knots, std::move(elements),
                      std::move(levels), n);
}

}  // namespace fda
