#pragma once

#include <vector>

namespace fda {

/// Strictly increasing internal knots in the open interval (0,1); the boundary
/// knots 0 and 1 are implicit.  All knots are simple.
class KnotSet {
public:
    KnotSet() = default;
    explicit KnotSet(std::vector<double> internal);

    static KnotSet equispaced(int count);  // j/(count+1), j = 1..count

    int size() const { return static_cast<int>(internal_.size()); }
    bool empty() const { return internal_.empty(); }
    const std::vector<double>& internal() const { return internal_; }

    /// 0, internal knots, 1.
    std::vector<double> with_boundaries() const;

    /// Clamped sequence for degree k: boundary knots with multiplicity k+1.
    std::vector<double> extended(int degree) const;

    bool contains(double xi, double tol = 1e-12) const;
    KnotSet inserted(double xi) const;

private:
    std::vector<double> internal_;
};

}  // namespace fda
