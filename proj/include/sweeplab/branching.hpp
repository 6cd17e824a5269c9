#pragma once

// Branching-process side of the sweep: the Yule skeleton with types that
// generates the partition law Upsilon_n, the infinite/finite line
// decomposition of a supercritical birth-death process, and the Polya urn
// probability q_{k,a,n}.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sweeplab/partition.hpp"
#include "sweeplab/rng.hpp"

namespace sweeplab {

struct SkeletonState {
    std::vector<std::uint64_t> lineage_types;  ///< root type is 0
    std::vector<double> split_times;           ///< gamma_2..gamma_H (gamma_1 = 0)
    double end_time = 0.0;                     ///< gamma_{H+1}, where the state is read off
    std::size_t H = 1;
    std::uint64_t mutations = 0;
};

/// Grows the skeleton from one lineage of type 0 until just before the
/// split that would create lineage H+1. Splits occur at rate j*s, type
/// changes at rate j*r*(1-s); a newborn gets a fresh type with
/// probability r. Requires 0 <= r < s < 1 and H >= 1.
SkeletonState grow_yule_skeleton(double r, double s, std::size_t H, Rng& rng);

/// n distinct lineages chosen uniformly, grouped by type; the type-0
/// lineages form the marked block.
MarkedPartition sample_skeleton_partition(const SkeletonState& state, std::size_t n, Rng& rng);

/// Throws std::domain_error if n > H.
MarkedPartition simulate_yule_skeleton_partition(std::size_t n, double r, double s,
                                                 std::size_t H, Rng& rng);

/// Count paths at each jump time (entry 0 is the initial state at t = 0).
struct BranchingPath {
    std::vector<double> time;
    std::vector<std::uint64_t> infinite;
    std::vector<std::uint64_t> finite;
    bool truncated = false;  ///< stopped early at max_population
};

/// Two-type branching: infinite-line individuals split into two at rate s
/// and throw off a finite-line child at rate 2(1-s); finite-line
/// individuals live Exp(2-s) and then split with probability
/// (1-s)/(2-s), dying otherwise.
BranchingPath simulate_two_type_branching(double s, double horizon, Rng& rng,
                                          std::uint64_t infinite0 = 1, std::uint64_t finite0 = 0,
                                          std::uint64_t max_population = 10'000'000);

struct UrnSpec {
    std::uint32_t k = 2;          ///< 1 red ball, k-1 black
    std::uint32_t additions = 0;
    std::uint32_t a = 0;
    std::uint32_t n = 0;
};

/// Probability that a prescribed set of a among the first n reinforced
/// draws are red and the other n-a are black:
/// (k-1) a! (n-a+k-2)! / (n+k-1)!.
double polya_q(std::uint32_t k, std::uint32_t a, std::uint32_t n);
double polya_q(const UrnSpec& spec);

/// Starting from k lineages with one tagged, grows a type-free Yule tree
/// to H lineages and returns the tagged share.
double yule_tagged_fraction(std::size_t k, std::size_t H, Rng& rng);

} // namespace sweeplab
