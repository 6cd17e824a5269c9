#pragma once

// Coin-flip partition law Q_p: each lineage independently stays with the
// mutant (heads, probability p) or escapes into a singleton (tails).

#include <cstddef>
#include <cstdint>

#include "sweeplab/partition.hpp"
#include "sweeplab/rng.hpp"

namespace sweeplab {

struct PParams {
    double p = 1.0;
    std::size_t n = 1;
};

/// Throws std::domain_error unless 0 <= p <= 1.
PParams validate_pparams(double p, std::size_t n);

struct AlphaP {
    double alpha = 0.0;  ///< r ln(2N) / s
    double p = 1.0;      ///< exp(-alpha)
};

AlphaP alpha_and_p(std::uint32_t N, double r, double s);

MarkedPartition sample_p_partition(std::size_t n, double p, Rng& rng);

/// Q_p(pi); zero for any partition with an unmarked non-singleton block.
double qp_probability(const MarkedPartition& pi, double p);

PairStats qp_pair_stats(double p);

} // namespace sweeplab
