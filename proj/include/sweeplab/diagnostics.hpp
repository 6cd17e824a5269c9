#pragma once

// Tallies over stored trajectories, used to check the embedded chain and
// the one-step ancestry probabilities against their closed forms.

#include <array>
#include <cstdint>
#include <vector>

#include "sweeplab/model.hpp"

namespace sweeplab {

/// Per-level move counts of the full proposal chain (rejections count as
/// holds). Index k = 0..2N.
struct LevelMoves {
    std::vector<std::uint64_t> up, down, hold;
};

/// Counts over all t >= tau_j, with j = 1 meaning the whole trajectory.
LevelMoves count_level_moves(const SweepTrajectory& traj, std::uint32_t j = 1);

/// One cell of the one-step tally, keyed by (X_{t-1}, X_t).
///
/// Each proposal contributes one step. Within a step at most one individual
/// (the newborn) can switch allele background relative to its neutral
/// parent, and at most one pair (newborn, neutral parent) can merge, so
/// every hit counter below is a per-step 0/1 indicator.
struct OneStepCell {
    std::uint64_t steps = 0;
    std::uint64_t B_from_b = 0;   ///< newborn carries B, neutral parent carried b
    std::uint64_t b_from_B = 0;   ///< newborn carries b, neutral parent carried B
    std::uint64_t merge_BB = 0;
    std::uint64_t merge_bb = 0;
    std::uint64_t merge_Bb = 0;
};

class OneStepTally {
  public:
    explicit OneStepTally(std::uint32_t population);

    void add(const SweepTrajectory& traj);
    void merge(const OneStepTally& other);

    /// l must be k-1, k or k+1.
    const OneStepCell& cell(std::uint32_t k, std::uint32_t l) const;
    std::uint32_t population() const noexcept { return population_; }

  private:
    OneStepCell& at(std::uint32_t k, std::uint32_t l);

    std::uint32_t population_;
    std::vector<std::array<OneStepCell, 3>> cells_;
};

} // namespace sweeplab
