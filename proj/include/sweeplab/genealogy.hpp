#pragma once

// Ancestry of a sample taken at fixation, traced back through a stored
// sweep trajectory.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "sweeplab/model.hpp"
#include "sweeplab/partition.hpp"
#include "sweeplab/rng.hpp"

namespace sweeplab {

/// Event time standing for "never" (supremum of the empty set).
inline constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::min();

class IntegrityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct AncestryTrace {
    std::vector<std::uint32_t> sample_indices;      ///< individuals 0..n-1 at fixation
    std::vector<std::uint32_t> ancestor_at_0;
    std::vector<std::uint8_t> ancestor_has_B_at_0;
    /// Largest event time at which the lineage sits on a b chromosome.
    std::vector<std::int64_t> escape_time;
    /// Packed upper triangle, see `coalescence_time`.
    std::vector<std::int64_t> coalescence_times;
    /// first_passage[J] = first event time with X >= J, J = 0..2N.
    std::vector<std::size_t> first_passage;

    std::size_t n() const noexcept { return sample_indices.size(); }

    /// Largest event time at which lineages i and j (0-based sample
    /// positions) share an ancestor, or kNever.
    std::int64_t coalescence_time(std::size_t i, std::size_t j) const;

    static std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);
};

/// Walks the events of a fixed trajectory backwards from fixation, undoing
/// the allele array one event at a time. Throws IntegrityError when the
/// stored events disagree with x_path or the founding state.
AncestryTrace trace_ancestry(const SweepTrajectory& traj, std::size_t n);

/// i ~ j iff they share a time-0 ancestor; the mutant's descendants form
/// the marked block.
MarkedPartition theta_partition(const AncestryTrace& trace);

/// Same construction from raw ancestor indices.
MarkedPartition partition_by_ancestor(std::span<const std::uint32_t> ancestors,
                                      std::uint32_t initial_mutant);

struct PairDiagnostics {
    std::size_t escaped_after = 0;        ///< #{i : R(i) >= tau_J}
    std::vector<std::uint8_t> coalesced_after; ///< packed pairs, G(i,j) >= tau_J
};

PairDiagnostics pair_diagnostics(const AncestryTrace& trace, std::uint32_t J);

/// Escape means the time-0 ancestor carries b. Throws std::invalid_argument
/// on empty input or when a trace does not have exactly two lineages.
PairStats pair_stats_from_traces(std::span<const AncestryTrace> traces);
PairCounts pair_counts_from_trace(const AncestryTrace& trace);

/// Time-0 ancestors of individuals 0..n-1 at fixation.
struct SampleAncestry {
    std::vector<std::uint32_t> ancestor_at_0;
    std::uint32_t initial_mutant = 0;
    std::size_t attempts = 0;
    std::size_t events = 0;
};

/// Conditioned sweep that propagates time-0 ancestor labels forward instead
/// of storing events. For the same rng state it follows exactly the
/// trajectory simulate_conditioned_sweep would, so its ancestors agree
/// with trace_ancestry on that trajectory.
SampleAncestry simulate_sample_ancestry(const Params& params, Rng& rng);

} // namespace sweeplab
