#include "sweeplab/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace sweeplab {

namespace {

/// 1 - (1-s)^m, accurate for small s and large m.
double one_minus_pow(double s, double m)
{
    return -std::expm1(m * std::log1p(-s));
}

void check_s(double s)
{
    if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("s must lie in (0,1)");
}

/// hitting_prob extended to the boundary cases k == a and k == b.
double hit(std::uint32_t a, std::uint32_t b, std::uint32_t k, double s)
{
    if (k <= a)
        return 0.0;
    if (k >= b)
        return 1.0;
    return one_minus_pow(s, k - a) / one_minus_pow(s, b - a);
}

double q_level(std::uint32_t M, double s, std::uint32_t k)
{
    if (k == 0)
        return 1.0;
    return hit(k, M, k + 1, s) / hit(0, M, k + 1, s);
}

double r_level(std::uint32_t M, double s, std::uint32_t k, std::uint32_t j)
{
    if (j <= k)
        return k == 0 ? 0.0 : 1.0;
    if (k == 0)
        return 0.0;
    return 1.0 - hit(k, M, j, s) / hit(0, M, j, s);
}

void check_transition(std::uint32_t M, std::uint32_t k, std::uint32_t l)
{
    if (k < 1 || k > M - 1)
        throw std::domain_error("k must lie in [1, 2N-1]");
    if (l < 1 || l > M || l + 1 < k || l > k + 1)
        throw std::domain_error("invalid transition: need 1 <= l <= 2N and |k - l| <= 1");
}

} // namespace

double hitting_prob(std::uint32_t a, std::uint32_t b, std::uint32_t k, double s)
{
    check_s(s);
    if (!(a < k && k < b))
        throw std::domain_error("hitting_prob requires a < k < b");
    return hit(a, b, k, s);
}

double fixation_prob(std::uint32_t population, double s)
{
    check_s(s);
    if (population < 2)
        throw std::domain_error("population must hold at least two individuals");
    return hitting_prob(0, population, 1, s);
}

double q_J_value(std::uint32_t N, std::uint32_t J, double r, double s)
{
    check_s(s);
    const std::uint32_t M = 2 * N;
    if (J < 1 || J > M)
        throw std::domain_error("J must lie in [1, 2N]");
    // summed from the small terms up
    double h = 0.0;
    for (std::uint32_t k = M; k > J; --k)
        h += 1.0 / k;
    return -std::expm1(-(r / s) * h);
}

double beta_k(std::uint32_t N, double s, std::uint32_t k)
{
    const double M = 2.0 * N;
    const double kk = k;
    const double other = M - kk;
    return kk * other / (kk * kk + other * other + s * kk * other);
}

JumpCountSummary expected_jump_counts(std::uint32_t N, double s, std::uint32_t k, std::uint32_t j)
{
    check_s(s);
    const std::uint32_t M = 2 * N;
    if (k < 1 || k > M - 1 || j < 1 || j > M - 1)
        throw std::domain_error("expected_jump_counts requires 1 <= j, k <= 2N-1");

    JumpCountSummary out;
    out.q_k = q_level(M, s, k);
    out.r_kj = r_level(M, s, k, j);
    out.beta_k = beta_k(N, s, k);
    out.EU = out.r_kj / out.q_k;
    const double q_below = q_level(M, s, k - 1);
    if (k > j)
        out.ED = 1.0 / q_below - 1.0;
    else
        out.ED = r_level(M, s, k - 1, j) / q_below;
    out.EH = (out.EU + out.ED) / ((2.0 - s) * out.beta_k);
    return out;
}

RecombProbs one_step_recomb_probs(std::uint32_t N, double r, double s, std::uint32_t k,
                                  std::uint32_t l)
{
    const std::uint32_t M = 2 * N;
    check_transition(M, k, l);
    const double m = M;
    RecombProbs p;
    if (l == k + 1) {
        p.pB = r * (m - k) / ((k + 1.0) * m);
    } else if (l + 1 == k) {
        p.pb = r * k / ((m - k + 1.0) * m);
    } else {
        p.pB = p.pb = r * beta_k(N, s, k) / m;
    }
    return p;
}

CoalProbs one_step_coal_probs(std::uint32_t N, double r, double s, std::uint32_t k,
                              std::uint32_t l)
{
    const std::uint32_t M = 2 * N;
    check_transition(M, k, l);
    const double m = M;
    const double kk = k;
    const double other = m - kk;
    CoalProbs p;
    if (l == k + 1) {
        p.pBB = 2.0 / (kk * (kk + 1.0)) * (1.0 - r * other / m);
        p.pBb = r / (m * (kk + 1.0));
    } else if (l + 1 == k) {
        p.pbb = 2.0 / (other * (other + 1.0)) * (1.0 - r * kk / m);
        p.pBb = r / (m * (other + 1.0));
    } else {
        const double b = beta_k(N, s, k);
        p.pbb = 2.0 * b / (kk * other) * (1.0 - r * kk / m);
        p.pBB = 2.0 * b / (kk * other) * (1.0 - r * other / m);
        p.pBb = r * b / (kk * other);
    }
    return p;
}

double msh_frequency(double R0, double p0, double s, double r, double tol)
{
    if (!(R0 >= 0.0 && R0 <= 1.0) || !(p0 >= 0.0 && p0 <= 1.0))
        throw std::domain_error("R0 and p0 must lie in [0,1]");
    if (!(tol > 0.0))
        throw std::domain_error("tol must be positive");
    if (r <= 0.0 || p0 >= 1.0 || R0 == 0.0)
        return 0.0;
    const double log_growth = std::log1p(s);
    const double log_p0 = std::log(p0);
    double sum = 0.0;
    double stay = 1.0; // (1-r)^n
    for (std::uint64_t n = 0;; ++n) {
        // p0 (1+s)^{n+1}, kept finite
        const double e = log_p0 + static_cast<double>(n + 1) * log_growth;
        const double grown = e > 700.0 ? HUGE_VAL : std::exp(e);
        sum += r * stay * (1.0 - p0) / (1.0 - p0 + grown);
        stay *= 1.0 - r;
        if (R0 * stay < tol)
            break;
    }
    return R0 * sum;
}

double logistic_frequency(double p0, double s, double t)
{
    if (!(p0 > 0.0 && p0 < 1.0))
        throw std::domain_error("p0 must lie in (0,1)");
    return p0 / (p0 + (1.0 - p0) * std::exp(-s * t));
}

} // namespace sweeplab
