#include "fda/ddk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fda/errors.hpp"
#include "fda/rng.hpp"

namespace fda {

namespace {

// Prefix-sum machinery for one-pass candidate scans.  For a piece [a,b) whose
// grid points span indices [ja,jb), the residual of the optimal projection
// onto the normalized indicator of [a,b) is
//   sum_i Q_i - (2/L - mu/L^2) * sum_i s_i^2,
// with s_i the weighted curve sum over the piece, Q the weighted square sum,
// mu the discrete piece measure and L = b-a.  On grids whose knots are grid
// points mu == L and this is the familiar variance decomposition.
class PieceScanner {
public:
    explicit PieceScanner(const FunctionalDataset& data)
        : grid_(&data.grid()), n_(data.n_curves()) {
        const int m = grid_->size();
        const Eigen::VectorXd& w = grid_->weights();
        curve_prefix_.resize(n_, m + 1);
        curve_prefix_.col(0).setZero();
        square_prefix_.resize(m + 1);
        square_prefix_[0] = 0.0;
        weight_prefix_.resize(m + 1);
        weight_prefix_[0] = 0.0;
        for (int j = 0; j < m; ++j) {
            const auto col = data.values().col(j);
            curve_prefix_.col(j + 1) = curve_prefix_.col(j) + col * w[j];
            square_prefix_[j + 1] = square_prefix_[j] + col.squaredNorm() * w[j];
            weight_prefix_[j + 1] = weight_prefix_[j] + w[j];
        }
    }

    const Grid& grid() const { return *grid_; }
    int n_curves() const { return n_; }

    // First grid index with point >= t.
    int index_of(double t) const {
        const auto& pts = grid_->points();
        return static_cast<int>(std::lower_bound(pts.begin(), pts.end(), t) - pts.begin());
    }

    double piece_residual(int ja, int jb, double length) const {
        if (ja >= jb) return 0.0;
        const double q = square_prefix_[jb] - square_prefix_[ja];
        const double mu = weight_prefix_[jb] - weight_prefix_[ja];
        const double s2 = (curve_prefix_.col(jb) - curve_prefix_.col(ja)).squaredNorm();
        return q - (2.0 / length - mu / (length * length)) * s2;
    }

    std::vector<double> piece_residuals(const KnotSet& knots) const {
        const std::vector<double> bounds = knots.with_boundaries();
        std::vector<double> residuals(bounds.size() - 1);
        for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
            const int ja = index_of(bounds[p]);
            const int jb = p + 2 == bounds.size() ? grid_->size() : index_of(bounds[p + 1]);
            residuals[p] = piece_residual(ja, jb, bounds[p + 1] - bounds[p]);
        }
        return residuals;
    }

    struct Candidate {
        bool found = false;
        double xi = 0.0;
        int piece = 0;
        double left_res = 0.0;
        double right_res = 0.0;
        double total_after = 0.0;
    };

    // One pass over all pieces and their interior grid points.
    Candidate scan(const KnotSet& knots, const std::vector<double>& residuals) const {
        const std::vector<double> bounds = knots.with_boundaries();
        const double total = std::accumulate(residuals.begin(), residuals.end(), 0.0);
        const double tie_eps = 1e-12 * total;

        Candidate best;
        for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
            const double a = bounds[p], b = bounds[p + 1];
            const int ja = index_of(a);
            const int jb = p + 2 == bounds.size() ? grid_->size() : index_of(b);
            int c = ja;
            while (c < jb && grid_->point(c) <= a) ++c;
            for (; c < jb; ++c) {
                const double xi = grid_->point(c);
                if (xi <= a || xi >= b) continue;
                const double left = piece_residual(ja, c, xi - a);
                const double right = piece_residual(c, jb, b - xi);
                const double after = total - residuals[p] + left + right;
                if (!best.found || after < best.total_after - tie_eps) {
                    best = {true, xi, static_cast<int>(p), left, right, after};
                }
            }
        }
        return best;
    }

private:
    const Grid* grid_;
    int n_;
    Eigen::MatrixXd curve_prefix_;   // n x (m+1)
    Eigen::VectorXd square_prefix_;  // m+1
    Eigen::VectorXd weight_prefix_;  // m+1
};

}  // namespace

std::pair<FunctionalDataset, FunctionalDataset> split_dataset(const FunctionalDataset& dataset,
                                                              const SplitSpec& spec) {
    const int n = dataset.n_curves();
    if (n < 2) throw SampleError("splitting needs at least two curves");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw RangeError("train fraction must lie in (0,1)");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(spec.seed);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }

    int n_train = static_cast<int>(std::llround(spec.train_fraction * n));
    n_train = std::clamp(n_train, 1, n - 1);
    std::vector<int> train_rows(order.begin(), order.begin() + n_train);
    std::vector<int> valid_rows(order.begin() + n_train, order.end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(valid_rows.begin(), valid_rows.end());
    return {dataset.subset(train_rows), dataset.subset(valid_rows)};
}

BestSplit best_split(const FunctionalDataset& train, const KnotSet& knots) {
    const PieceScanner scanner(train);
    const std::vector<double> residuals = scanner.piece_residuals(knots);
    const PieceScanner::Candidate best = scanner.scan(knots, residuals);
    if (!best.found) throw SaturationError("no admissible split candidate remains");
    return {best.xi, best.total_after / train.n_curves()};
}

DdkResult select_knots(const FunctionalDataset& train, const FunctionalDataset& valid,
                       const DdkConfig& config) {
    if (!(train.grid() == valid.grid()))
        throw DimensionError("train and validation sets must share a grid");
    if (!(config.theta > 0.0)) throw RangeError("theta must be positive");
    if (config.max_knots < 1) throw RangeError("max_knots must be at least 1");

    const PieceScanner train_scan(train);
    const PieceScanner valid_scan(valid);

    DdkResult result;
    KnotSet knots;
    std::vector<double> train_res = train_scan.piece_residuals(knots);
    std::vector<double> valid_res = valid_scan.piece_residuals(knots);
    auto total = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0);
    };
    result.train_amse.push_back(total(train_res) / train.n_curves());
    result.valid_amse.push_back(total(valid_res) / valid.n_curves());
    result.stop_reason = StopReason::max_knots;

    while (static_cast<int>(result.selection_order.size()) < config.max_knots) {
        const PieceScanner::Candidate best = train_scan.scan(knots, train_res);
        if (!best.found) break;  // saturated: report what we have under max_knots

        knots = knots.inserted(best.xi);
        result.selection_order.push_back(best.xi);
        train_res[static_cast<std::size_t>(best.piece)] = best.left_res;
        train_res.insert(train_res.begin() + best.piece + 1, best.right_res);
        result.train_amse.push_back(best.total_after / train.n_curves());

        // Validation update touches only the split piece.
        const std::vector<double> bounds = knots.with_boundaries();
        const std::size_t p = static_cast<std::size_t>(best.piece);
        const int ja = valid_scan.index_of(bounds[p]);
        const int jc = valid_scan.index_of(bounds[p + 1]);
        const int jb = p + 3 == bounds.size() ? valid.grid().size() : valid_scan.index_of(bounds[p + 2]);
        const double left = valid_scan.piece_residual(ja, jc, bounds[p + 1] - bounds[p]);
        const double right = valid_scan.piece_residual(jc, jb, bounds[p + 2] - bounds[p + 1]);
        valid_res[p] = left;
        valid_res.insert(valid_res.begin() + best.piece + 1, right);
        result.valid_amse.push_back(total(valid_res) / valid.n_curves());

        const std::size_t s = result.valid_amse.size() - 1;
        const double step = std::abs(result.valid_amse[s] - result.valid_amse[s - 1]);
        const double bound = config.criterion == StepCriterion::absolute_step
                                 ? config.theta
                                 : config.theta * std::abs(result.valid_amse[s]);
        if (step < bound) {
            result.stop_reason = StopReason::threshold;
            break;
        }
    }

    result.knots = knots;
    result.stopped_at = static_cast<int>(result.selection_order.size());
    if (result.valid_amse.size() >= 3) result.elbow = elbow_index(result.valid_amse);
    return result;
}

int elbow_index(const std::vector<double>& valid_amse) {
    const int last = static_cast<int>(valid_amse.size()) - 1;
    if (last < 2) throw SampleError("elbow detection needs at least three trajectory points");

    // Normalized kneedle: distance of (s, v_s) to the chord through the
    // endpoints, scanned over interior indices only.
    const double v0 = valid_amse.front(), vl = valid_amse.back();
    const double span = v0 - vl;
    int best = 1;
    double best_dist = -1.0;
    for (int s = 1; s < last; ++s) {
        const double x = static_cast<double>(s) / last;
        double dist;
        if (span != 0.0) {
            const double y = (valid_amse[static_cast<std::size_t>(s)] - vl) / span;
            dist = std::abs(x + y - 1.0);  // scaled distance to the (0,1)-(1,0) chord
        } else {
            dist = std::abs(valid_amse[static_cast<std::size_t>(s)] - v0);
        }
        if (dist > best_dist + 1e-12) {
            best_dist = dist;
            best = s;
        }
    }
    return best;
}

}  // namespace fda
