#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fda/grid.hpp"
#include "fda/knots.hpp"

namespace fda {

/// Random per-curve train/validation assignment.
struct SplitSpec {
    double train_fraction = 0.6;
    std::uint64_t seed = 0;
};

enum class StepCriterion { absolute_step, relative_step };

struct DdkConfig {
    double theta = 0.0;  // stopping threshold, must be positive
    StepCriterion criterion = StepCriterion::absolute_step;
    int max_knots = 1;
};

enum class StopReason { threshold, max_knots };

/// Outcome of the greedy knot selection.
struct DdkResult {
    KnotSet knots;                        // sorted
    std::vector<double> selection_order;  // same knots in the order chosen
    std::vector<double> train_amse;       // indexed by iteration s = 0..stopped_at
    std::vector<double> valid_amse;
    int stopped_at = 0;
    StopReason stop_reason = StopReason::max_knots;
    std::optional<int> elbow;  // absent when the trajectory is too short
};

/// Deterministic per-curve split; both parts keep the original grid.
std::pair<FunctionalDataset, FunctionalDataset> split_dataset(const FunctionalDataset& dataset,
                                                              const SplitSpec& spec);

struct BestSplit {
    double xi = 0.0;
    double amse_after = 0.0;
};

/// Scans every admissible candidate (grid points strictly inside the current
/// knot intervals) and returns the one minimizing the post-insertion training
/// AMSE over the piecewise-constant basis.  Candidates tied within 1e-12 of
/// the incumbent resolve to the smallest xi.
BestSplit best_split(const FunctionalDataset& train, const KnotSet& knots);

/// Greedy training loop with validation-side stopping: at each iteration the
/// best training split is inserted, the validation AMSE is evaluated, and the
/// run stops at the first iteration whose validation step satisfies the
/// configured criterion, or at max_knots (also on candidate saturation).
DdkResult select_knots(const FunctionalDataset& train, const FunctionalDataset& valid,
                       const DdkConfig& config);

/// Index (among interior trajectory points) with maximal perpendicular
/// distance to the chord joining the first and last points; ties resolve to
/// the smallest index.  Requires at least three values.
int elbow_index(const std::vector<double>& valid_amse);

}  // namespace fda
