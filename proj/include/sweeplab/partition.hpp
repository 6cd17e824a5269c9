#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sweeplab {

/// Partition of {1..n} with at most one marked block.
///
/// Always held in canonical form: blocks are numbered by their least
/// element, so two partitions are equal iff their block assignments and
/// marks coincide.
class MarkedPartition {
  public:
    MarkedPartition() = default;

    /// Blocks hold 1-based elements in any order; `marked` indexes into
    /// `blocks` as given. Throws std::invalid_argument unless the blocks
    /// are non-empty, disjoint and cover {1..n}.
    MarkedPartition(std::size_t n, const std::vector<std::vector<std::uint32_t>>& blocks,
                    std::optional<std::size_t> marked);

    /// Element i+1 belongs to the block labelled labels[i]; the block
    /// whose label equals `marked_label` (if present) is marked.
    static MarkedPartition from_labels(std::span<const std::uint64_t> labels,
                                       std::optional<std::uint64_t> marked_label);

    /// Element i+1 is in block `block_of[i]`; `block_of` must already be
    /// a restricted growth string (first occurrences in increasing order).
    static MarkedPartition from_canonical(std::vector<std::uint32_t> block_of,
                                          std::optional<std::uint32_t> marked);

    std::size_t n() const noexcept { return block_of_.size(); }
    std::size_t block_count() const noexcept { return block_count_; }
    std::optional<std::uint32_t> marked() const noexcept { return marked_; }

    /// Blocks of 1-based elements, ordered by least element.
    std::vector<std::vector<std::uint32_t>> blocks() const;

    /// Block index of 1-based element i.
    std::uint32_t block_of(std::uint32_t element) const { return block_of_.at(element - 1); }
    bool same_block(std::uint32_t i, std::uint32_t j) const { return block_of(i) == block_of(j); }
    bool in_marked(std::uint32_t element) const
    {
        return marked_.has_value() && block_of(element) == *marked_;
    }
    std::size_t block_size(std::uint32_t block) const;

    const std::vector<std::uint32_t>& assignment() const noexcept { return block_of_; }

    /// Canonical text form, e.g. "{1,2}*{3}" (marked block starred).
    std::string to_string() const;

    friend bool operator==(const MarkedPartition&, const MarkedPartition&) = default;

  private:
    std::vector<std::uint32_t> block_of_;
    std::optional<std::uint32_t> marked_;
    std::size_t block_count_ = 0;
};

/// Every canonical marked partition of {1..n} (unmarked plus each choice
/// of marked block). Sizes grow like Bell numbers; intended for n <= 8.
std::vector<MarkedPartition> enumerate_marked_partitions(std::size_t n);

/// The four two-lineage sweep statistics.
///
///   pinb   - a lineage escapes (is outside the marked block)
///   p2inb  - both escape, different blocks
///   p2cinb - both escape, same block
///   p1B1b  - exactly one escapes
struct PairStats {
    double pinb = 0.0;
    double p2inb = 0.0;
    double p2cinb = 0.0;
    double p1B1b = 0.0;
    std::uint64_t n_reps = 0;            ///< 0 for analytic values
    std::array<double, 4> se{};          ///< same order as the fields

    std::array<double, 4> values() const noexcept { return {pinb, p2inb, p2cinb, p1B1b}; }

    /// pinb - (p2inb + p2cinb + p1B1b / 2).
    double identity_residual() const noexcept { return pinb - (p2inb + p2cinb + 0.5 * p1B1b); }
};

inline constexpr std::array<const char*, 4> kPairStatNames = {"pinb", "p2inb", "p2cinb", "p1B1b"};

/// Integer tallies behind an estimated PairStats. Merging is a commutative
/// monoid, so aggregation order never changes the result.
struct PairCounts {
    std::uint64_t reps = 0;
    std::uint64_t neither = 0;
    std::uint64_t one = 0;
    std::uint64_t both_distinct = 0;
    std::uint64_t both_same = 0;

    void add(bool escaped1, bool escaped2, bool same_block);
    /// Uses elements 1 and 2; throws std::invalid_argument when n < 2.
    void add(const MarkedPartition& pi);
    void merge(const PairCounts& other);

    /// Throws std::invalid_argument when reps == 0.
    PairStats stats() const;

    friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

} // namespace sweeplab
