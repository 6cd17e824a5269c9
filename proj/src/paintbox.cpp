#include "sweeplab/paintbox.hpp"

#include <cmath>
#include <stdexcept>

namespace sweeplab {

double mark_probability(double r, double s)
{
    return s / (r * (1.0 - s) + s);
}

void check_paintbox_args(std::size_t n, double r, double s, std::size_t L)
{
    if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("s must lie in (0,1)");
    if (!(r >= 0.0))
        throw std::domain_error("r must be non-negative");
    if (!(r < s))
        throw std::domain_error("paintbox requires r < s");
    if (L < 1)
        throw std::domain_error("L must be at least 1");
    if (n < 1)
        throw std::domain_error("n must be at least 1");
}

namespace {

/// Beta(1, k-1) by inversion.
double draw_stick(Rng& rng, std::size_t k)
{
    return -std::expm1(std::log(rng.uniform_pos()) / static_cast<double>(k - 1));
}

/// Z for one lineage: walk the broken sticks from the top level down.
std::uint32_t draw_level(const std::vector<std::pair<std::uint32_t, double>>& active, Rng& rng)
{
    for (const auto& [level, v] : active)
        if (rng.uniform() < v)
            return level;
    return 1;
}

MarkedPartition partition_from_levels(const std::vector<std::uint32_t>& Z, bool mark)
{
    std::vector<std::uint64_t> labels(Z.begin(), Z.end());
    std::optional<std::uint64_t> marked;
    if (mark)
        marked = 1;
    return MarkedPartition::from_labels(labels, marked);
}

} // namespace

std::pair<PaintboxDraw, MarkedPartition> sample_paintbox(std::size_t n, double r, double s,
                                                         std::size_t L, Rng& rng)
{
    check_paintbox_args(n, r, s, L);
    const double hit = r / s;

    PaintboxDraw d;
    d.L = L;
    d.W.assign(L + 1, 0.0);
    d.zeta.assign(L + 1, 0);
    d.V.assign(L + 1, 0.0);
    d.Y.assign(L + 1, 0.0);
    for (std::size_t k = 2; k <= L; ++k) {
        d.W[k] = draw_stick(rng, k);
        d.zeta[k] = rng.bernoulli(hit) ? 1 : 0;
        d.V[k] = d.zeta[k] ? d.W[k] : 0.0;
    }

    std::vector<std::pair<std::uint32_t, double>> active;
    double rest = 1.0;
    for (std::size_t k = L; k >= 2; --k) {
        d.Y[k] = d.V[k] * rest;
        rest *= 1.0 - d.V[k];
        if (d.zeta[k])
            active.emplace_back(static_cast<std::uint32_t>(k), d.V[k]);
    }
    d.Y[1] = rest;

    d.Z.resize(n);
    for (auto& z : d.Z)
        z = draw_level(active, rng);
    d.mark_assigned = rng.bernoulli(mark_probability(r, s));

    MarkedPartition pi = partition_from_levels(d.Z, d.mark_assigned);
    return {std::move(d), std::move(pi)};
}

MarkedPartition sample_paintbox_partition(std::size_t n, double r, double s, std::size_t L,
                                          Rng& rng)
{
    check_paintbox_args(n, r, s, L);
    const double hit = r / s;
    std::vector<std::pair<std::uint32_t, double>> active;
    if (hit > 0.0 && L >= 2) {
        const double log_miss = std::log1p(-hit);
        // levels with zeta = 1, visited from L downwards
        std::int64_t k = static_cast<std::int64_t>(L);
        while (true) {
            const double gap = std::floor(std::log(rng.uniform_pos()) / log_miss);
            if (gap >= static_cast<double>(k))
                break;
            k -= static_cast<std::int64_t>(gap);
            if (k < 2)
                break;
            active.emplace_back(static_cast<std::uint32_t>(k),
                                draw_stick(rng, static_cast<std::size_t>(k)));
            --k;
        }
    }
    std::vector<std::uint32_t> Z(n);
    for (auto& z : Z)
        z = draw_level(active, rng);
    return partition_from_levels(Z, rng.bernoulli(mark_probability(r, s)));
}

MarkedPartition sample_paintbox_thinned(std::size_t n, double r, double s, std::size_t L,
                                        double q, Rng& rng)
{
    if (!(q >= 0.0 && q <= 1.0))
        throw std::domain_error("q must lie in [0,1]");
    const MarkedPartition base = sample_paintbox_partition(n, r, s, L, rng);
    std::vector<std::uint64_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool thinned = rng.bernoulli(q);
        labels[i] = thinned ? n + i : base.assignment()[i];
    }
    std::optional<std::uint64_t> marked;
    if (base.marked())
        marked = *base.marked();
    return MarkedPartition::from_labels(labels, marked);
}

StickMoments paintbox_moments(double r, double s, std::size_t k)
{
    if (!(s > 0.0) || !(r >= 0.0) || !(r < s))
        throw std::domain_error("paintbox moments require 0 <= r < s");
    if (k < 2)
        throw std::domain_error("k must be at least 2");
    const double kk = static_cast<double>(k);
    return {r / (s * kk), 2.0 * r / (s * kk * (kk + 1.0))};
}

PairStats paintbox_pair_stats_exact(double r, double s, std::size_t L)
{
    check_paintbox_args(2, r, s, L);
    double single_at_1 = 1.0;   // P(Z_1 = 1)
    double suffix_b = 1.0;      // prod_{k>m} E[(1 - V_k)^2]
    double same_above_1 = 0.0;  // sum_{m>=2} P(Z_1 = Z_2 = m)
    for (std::size_t k = L; k >= 2; --k) {
        const auto mom = paintbox_moments(r, s, k);
        same_above_1 += mom.EV2 * suffix_b;
        suffix_b *= 1.0 - 2.0 * mom.EV + mom.EV2;
        single_at_1 *= 1.0 - mom.EV;
    }
    const double both_at_1 = suffix_b;
    const double mp = mark_probability(r, s);

    PairStats st;
    st.pinb = 1.0 - mp * single_at_1;
    st.p2cinb = same_above_1 + (1.0 - mp) * both_at_1;
    const double both_escape = 1.0 - 2.0 * mp * single_at_1 + mp * both_at_1;
    st.p2inb = both_escape - st.p2cinb;
    st.p1B1b = 2.0 * (mp * single_at_1 - mp * both_at_1);
    return st;
}

} // namespace sweeplab
