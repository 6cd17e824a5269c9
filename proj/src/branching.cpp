#include "sweeplab/branching.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace sweeplab {

namespace {

void check_skeleton_args(double r, double s, std::size_t H)
{
    if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("s must lie in (0,1)");
    if (!(r >= 0.0 && r < s))
        throw std::domain_error("skeleton requires 0 <= r < s");
    if (H < 1)
        throw std::domain_error("H must be at least 1");
}

} // namespace

SkeletonState grow_yule_skeleton(double r, double s, std::size_t H, Rng& rng)
{
    check_skeleton_args(r, s, H);
    SkeletonState st;
    st.H = H;
    st.lineage_types.reserve(H);
    st.lineage_types.push_back(0);
    st.split_times.reserve(H);

    const double mutation_rate = r * (1.0 - s);
    const double split_share = s / (s + mutation_rate);
    const BernoulliThreshold newborn_fresh(r);
    std::uint64_t next_type = 1;
    double t = 0.0;

    while (true) {
        const std::size_t j = st.lineage_types.size();
        t += rng.exponential(static_cast<double>(j) * (s + mutation_rate));
        const auto who = rng.below(static_cast<std::uint32_t>(j));
        if (rng.uniform() < split_share) {
            if (j == H)
                break;
            const std::uint64_t type = newborn_fresh(rng) ? next_type++ : st.lineage_types[who];
            st.lineage_types.push_back(type);
            st.split_times.push_back(t);
        } else {
            st.lineage_types[who] = next_type++;
            ++st.mutations;
        }
    }
    st.end_time = t;
    return st;
}

MarkedPartition sample_skeleton_partition(const SkeletonState& state, std::size_t n, Rng& rng)
{
    const std::size_t j = state.lineage_types.size();
    if (n < 1 || n > j)
        throw std::domain_error("sample size must lie in [1, H]");
    std::vector<std::uint32_t> idx(j);
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<std::uint64_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto pick = i + rng.below(static_cast<std::uint32_t>(j - i));
        std::swap(idx[i], idx[pick]);
        labels[i] = state.lineage_types[idx[i]];
    }
    return MarkedPartition::from_labels(labels, std::uint64_t{0});
}

MarkedPartition simulate_yule_skeleton_partition(std::size_t n, double r, double s,
                                                 std::size_t H, Rng& rng)
{
    check_skeleton_args(r, s, H);
    if (n < 1)
        throw std::domain_error("n must be at least 1");
    if (n > H)
        throw std::domain_error("n exceeds H");
    const SkeletonState st = grow_yule_skeleton(r, s, H, rng);
    return sample_skeleton_partition(st, n, rng);
}

BranchingPath simulate_two_type_branching(double s, double horizon, Rng& rng,
                                          std::uint64_t infinite0, std::uint64_t finite0,
                                          std::uint64_t max_population)
{
    if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("s must lie in (0,1)");
    if (!(horizon >= 0.0))
        throw std::domain_error("horizon must be non-negative");

    BranchingPath path;
    std::uint64_t inf = infinite0;
    std::uint64_t fin = finite0;
    double t = 0.0;
    path.time.push_back(t);
    path.infinite.push_back(inf);
    path.finite.push_back(fin);

    // every individual carries total event rate 2 - s
    const double per_capita = 2.0 - s;
    const double inf_split = s / per_capita;
    const double fin_split = (1.0 - s) / per_capita;
    while (inf + fin > 0) {
        if (inf + fin >= max_population) {
            path.truncated = true;
            break;
        }
        t += rng.exponential(per_capita * static_cast<double>(inf + fin));
        if (t > horizon)
            break;
        const double u = rng.uniform();
        const bool infinite_acts =
            rng.uniform() * static_cast<double>(inf + fin) < static_cast<double>(inf);
        if (infinite_acts) {
            if (u < inf_split)
                ++inf;
            else
                ++fin;
        } else if (u < fin_split) {
            ++fin;
        } else {
            --fin;
        }
        path.time.push_back(t);
        path.infinite.push_back(inf);
        path.finite.push_back(fin);
    }
    return path;
}

double polya_q(std::uint32_t k, std::uint32_t a, std::uint32_t n)
{
    if (k < 2)
        throw std::domain_error("k must be at least 2");
    if (a > n)
        throw std::domain_error("a must not exceed n");
    const double base = static_cast<double>(n - a) + k - 1.0;
    if (a <= 64) {
        double q = (k - 1.0) / base;
        for (std::uint32_t i = 1; i <= a; ++i)
            q *= i / (base + i);
        return q;
    }
    return std::exp(std::log(k - 1.0) + std::lgamma(a + 1.0) + std::lgamma(base) -
                    std::lgamma(base + a + 1.0));
}

double polya_q(const UrnSpec& spec)
{
    if (spec.n > spec.additions)
        throw std::domain_error("sample description exceeds the number of additions");
    return polya_q(spec.k, spec.a, spec.n);
}

double yule_tagged_fraction(std::size_t k, std::size_t H, Rng& rng)
{
    if (k < 1 || H < k)
        throw std::domain_error("need 1 <= k <= H");
    // uniform splitting of lineages is a Polya urn on the tagged count
    std::size_t tagged = 1;
    for (std::size_t j = k; j < H; ++j)
        if (rng.below(static_cast<std::uint32_t>(j)) < tagged)
            ++tagged;
    return static_cast<double>(tagged) / static_cast<double>(H);
}

} // namespace sweeplab
