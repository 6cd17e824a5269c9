#pragma once

// Closed-form quantities for the Moran sweep: hitting probabilities of the
// embedded walk, expected visit counts, one-step ancestry probabilities,
// the late-escape probability q_J, and the deterministic-sweep formulas.

#include <cstdint>

namespace sweeplab {

/// Probability that the B count reaches b before a, starting from k.
/// Requires 0 <= a < k < b and 0 < s < 1; throws std::domain_error.
double hitting_prob(std::uint32_t a, std::uint32_t b, std::uint32_t k, double s);

/// P(B fixes) from a single copy in a population of `population`.
double fixation_prob(std::uint32_t population, double s);

/// 1 - exp(-(r/s) * sum_{k=J+1}^{2N} 1/k).
double q_J_value(std::uint32_t N, std::uint32_t J, double r, double s);

struct JumpCountSummary {
    double EU = 0.0;     ///< expected up-jumps from k after tau_j
    double ED = 0.0;     ///< expected down-jumps from k after tau_j
    double EH = 0.0;     ///< expected holds at k after tau_j
    double q_k = 0.0;    ///< P(never return to k | just stepped up from k)
    double r_kj = 0.0;   ///< P(k visited after tau_j)
    double beta_k = 0.0;
};

/// Requires 1 <= j, k <= 2N-1; throws std::domain_error.
JumpCountSummary expected_jump_counts(std::uint32_t N, double s, std::uint32_t k, std::uint32_t j);

/// Probability that one lineage's ancestor at t-1 carries the other
/// allele, given (X_{t-1}, X_t) = (k, l).
struct RecombProbs {
    double pB = 0.0;  ///< lineage on B at t
    double pb = 0.0;  ///< lineage on b at t
};

/// Probability that two lineages share their ancestor at t-1 given
/// (X_{t-1}, X_t) = (k, l), by the alleles they carry at t.
struct CoalProbs {
    double pBB = 0.0;
    double pbb = 0.0;
    double pBb = 0.0;
};

/// Both require 1 <= k <= 2N-1, 1 <= l <= 2N and |k - l| <= 1.
RecombProbs one_step_recomb_probs(std::uint32_t N, double r, double s, std::uint32_t k,
                                  std::uint32_t l);
CoalProbs one_step_coal_probs(std::uint32_t N, double r, double s, std::uint32_t k,
                              std::uint32_t l);

/// beta_k = k(2N-k) / (k^2 + (2N-k)^2 + s k (2N-k)).
double beta_k(std::uint32_t N, double s, std::uint32_t k);

/// Frequency of a neutral allele after a deterministic sweep started at B
/// frequency p0 (the Maynard Smith-Haigh series); the tail is dropped once
/// R0 (1-r)^{n+1} < tol.
double msh_frequency(double R0, double p0, double s, double r, double tol = 1e-12);

/// Solution of dp/dt = s p (1 - p) started at p0.
double logistic_frequency(double p0, double s, double t);

} // namespace sweeplab
