#pragma once

// Stick-breaking paintbox law Q_{r,s,L} and its thinned variant.
//
// For k = 2..L a stick piece V_k = zeta_k W_k is broken off, with
// W_k ~ Beta(1, k-1) and zeta_k ~ Bernoulli(r/s). Lineage i lands at level
// Z_i = k with probability Y_k = V_k prod_{j>k} (1 - V_j) (Y_1 takes the
// rest). Lineages sharing a level share a block; the level-1 block is
// marked with probability s / (r(1-s) + s).

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "sweeplab/partition.hpp"
#include "sweeplab/rng.hpp"

namespace sweeplab {

/// Latent variables behind one paintbox sample. Vectors are indexed by
/// level; W, zeta and V use indices 2..L (entries 0 and 1 are unused),
/// Y uses 1..L (entry 0 unused).
struct PaintboxDraw {
    std::size_t L = 1;
    std::vector<double> W;
    std::vector<std::uint8_t> zeta;
    std::vector<double> V;
    std::vector<double> Y;
    std::vector<std::uint32_t> Z;   ///< Z[i] is the level of lineage i+1
    bool mark_assigned = true;
};

/// Probability that the level-1 block is marked.
double mark_probability(double r, double s);

/// Throws std::domain_error unless 0 <= r < s < 1, L >= 1, n >= 1.
void check_paintbox_args(std::size_t n, double r, double s, std::size_t L);

/// Full draw with every latent variable materialised.
std::pair<PaintboxDraw, MarkedPartition> sample_paintbox(std::size_t n, double r, double s,
                                                         std::size_t L, Rng& rng);

/// Same law as sample_paintbox, but only the levels with zeta_k = 1 are
/// generated (geometric skipping), which makes large L cheap.
MarkedPartition sample_paintbox_partition(std::size_t n, double r, double s, std::size_t L,
                                          Rng& rng);

/// Q_{r,s,L,q}: lineages with an independent Bernoulli(q) flag become
/// unmarked singletons, the others keep their paintbox blocks.
MarkedPartition sample_paintbox_thinned(std::size_t n, double r, double s, std::size_t L,
                                        double q, Rng& rng);

struct StickMoments {
    double EV = 0.0;   ///< E[V_k]   = r / (s k)
    double EV2 = 0.0;  ///< E[V_k^2] = 2r / (s k (k+1))
};

/// Requires 0 <= r < s and k >= 2.
StickMoments paintbox_moments(double r, double s, std::size_t k);

/// Exact two-lineage statistics of Q_{r,s,L}, from independence of the
/// sticks across levels.
PairStats paintbox_pair_stats_exact(double r, double s, std::size_t L);

} // namespace sweeplab
