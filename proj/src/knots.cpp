#include "fda/knots.hpp"

#include <algorithm>
#include <cmath>

#include "fda/errors.hpp"

namespace fda {

namespace {
constexpr double kDupTol = 1e-12;
}

KnotSet::KnotSet(std::vector<double> internal) : internal_(std::move(internal)) {
    for (double xi : internal_) {
        if (!(xi > 0.0 && xi < 1.0))
            throw KnotError("internal knots must lie strictly inside (0,1)");
    }
    for (std::size_t i = 0; i + 1 < internal_.size(); ++i) {
        if (!(internal_[i] < internal_[i + 1]))
            throw KnotError("internal knots must be strictly increasing");
        if (internal_[i + 1] - internal_[i] < kDupTol)
            throw KnotError("duplicate knots within 1e-12");
    }
}

KnotSet KnotSet::equispaced(int count) {
    if (count < 0) throw KnotError("knot count must be nonnegative");
    std::vector<double> internal(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j)
        internal[static_cast<std::size_t>(j - 1)] = static_cast<double>(j) / (count + 1);
    return KnotSet(std::move(internal));
}

std::vector<double> KnotSet::with_boundaries() const {
    std::vector<double> all;
    all.reserve(internal_.size() + 2);
    all.push_back(0.0);
    all.insert(all.end(), internal_.begin(), internal_.end());
    all.push_back(1.0);
    return all;
}

std::vector<double> KnotSet::extended(int degree) const {
    if (degree < 0) throw KnotError("degree must be nonnegative");
    std::vector<double> ext;
    ext.reserve(internal_.size() + 2 * static_cast<std::size_t>(degree + 1));
    ext.insert(ext.end(), static_cast<std::size_t>(degree + 1), 0.0);
    ext.insert(ext.end(), internal_.begin(), internal_.end());
    ext.insert(ext.end(), static_cast<std::size_t>(degree + 1), 1.0);
    return ext;
}

bool KnotSet::contains(double xi, double tol) const {
    for (double k : internal_)
        if (std::abs(k - xi) <= tol) return true;
    return false;
}

KnotSet KnotSet::inserted(double xi) const {
    std::vector<double> next = internal_;
    next.insert(std::upper_bound(next.begin(), next.end(), xi), xi);
    return KnotSet(std::move(next));
}

}  // namespace fda
