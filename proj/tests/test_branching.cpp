#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "sweeplab/branching.hpp"
#include "sweeplab/harness.hpp"
#include "sweeplab/paintbox.hpp"

using namespace sweeplab;

TEST_CASE("urn probability: closed values and normalization")
{
    CHECK(polya_q(2, 1, 1) == doctest::Approx(0.5));
    CHECK(polya_q(2, 0, 1) == doctest::Approx(0.5));
    CHECK(polya_q(3, 0, 0) == 1.0);
    for (std::uint32_t k = 2; k <= 10; ++k)
        for (std::uint32_t n = 0; n <= 8; ++n) {
            double total = 0.0, binom = 1.0;
            for (std::uint32_t a = 0; a <= n; ++a) {
                const double q = polya_q(k, a, n);
                CHECK(q >= 0.0);
                CHECK(q <= 1.0);
                total += binom * q;
                binom = binom * (n - a) / (a + 1.0);
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    for (std::uint32_t n = 1; n <= 8; ++n)
        for (std::uint32_t k = n + 2; k <= n + 6; ++k)
            for (std::uint32_t a = 0; a < n; ++a)
                CHECK(polya_q(k, a + 1, n) < polya_q(k, a, n));

    // the log-space branch against a long double product
    for (auto [k, a, n] : {std::tuple{5u, 100u, 200u}, std::tuple{40u, 300u, 310u}}) {
        long double q = (k - 1.0L) / (n - a + k - 1.0L);
        for (std::uint32_t i = 1; i <= a; ++i)
            q *= i / (n - a + k - 1.0L + i);
        CHECK(polya_q(k, a, n) == doctest::Approx(static_cast<double>(q)).epsilon(1e-10));
    }

    CHECK_THROWS_AS(polya_q(1, 0, 1), std::domain_error);
    CHECK_THROWS_AS(polya_q(3, 2, 1), std::domain_error);
    CHECK(polya_q(UrnSpec{5, 10, 2, 4}) == polya_q(5, 2, 4));
    CHECK_THROWS_AS(polya_q(UrnSpec{5, 3, 2, 4}), std::domain_error);
}

TEST_CASE("urn probability matches urn simulation")
{
    std::mt19937_64 gen(12345);
    const int trials = 1000000;
    int hits = 0;
    for (int i = 0; i < trials; ++i)
        hits += oracle::urn_pattern(5, 2, 4, gen);
    const double q = polya_q(5, 2, 4);
    const double se = std::sqrt(q * (1 - q) / trials);
    CHECK(std::abs(hits / double(trials) - q) <= 3 * se);
}

TEST_CASE("skeleton degenerate cases and errors")
{
    Rng rng(1);
    for (int i = 0; i < 200; ++i)
        CHECK(simulate_yule_skeleton_partition(4, 0.0, 0.1, 30, rng).to_string() == "{1,2,3,4}*");
    CHECK_THROWS_AS(simulate_yule_skeleton_partition(5, 0.01, 0.1, 4, rng), std::domain_error);
    CHECK_THROWS_AS(simulate_yule_skeleton_partition(2, 0.1, 0.1, 4, rng), std::domain_error);
    CHECK_THROWS_AS(grow_yule_skeleton(0.01, 0.1, 0, rng), std::domain_error);

    const auto st = grow_yule_skeleton(0.02, 0.1, 50, rng);
    CHECK(st.lineage_types.size() == 50);
    CHECK(st.split_times.size() == 49);
    CHECK(std::is_sorted(st.split_times.begin(), st.split_times.end()));
    CHECK(st.end_time >= st.split_times.back());
}

TEST_CASE("single lineage is marked with probability s/(r(1-s)+s)")
{
    Rng rng(2);
    const double r = 0.05, s = 0.1;
    const int draws = 100000;
    int marked = 0;
    for (int i = 0; i < draws; ++i)
        marked += simulate_yule_skeleton_partition(1, r, s, 1, rng).marked().has_value();
    const double expect = mark_probability(r, s);
    const double se = std::sqrt(expect * (1 - expect) / draws);
    CHECK(std::abs(marked / double(draws) - expect) <= 3 * se);
}

TEST_CASE("skeleton law is close to the paintbox law")
{
    Rng a(3), b(4);
    std::vector<MarkedPartition> sk, pb;
    for (int i = 0; i < 40000; ++i) {
        sk.push_back(simulate_yule_skeleton_partition(2, 0.002, 0.1, 200, a));
        pb.push_back(sample_paintbox_partition(2, 0.002, 0.1, 200, b));
    }
    CHECK(estimate_tv_distance(sk, pb) <= 0.02);
}

TEST_CASE("skeleton partitions are exchangeable (n = 3)")
{
    Rng rng(5);
    std::map<std::string, int> freq;
    const int draws = 100000;
    std::vector<MarkedPartition> draws_v;
    for (int i = 0; i < draws; ++i)
        draws_v.push_back(simulate_yule_skeleton_partition(3, 0.03, 0.1, 40, rng));
    for (const auto& pi : draws_v)
        ++freq[pi.to_string()];
    // relabel 1 <-> 3 and compare each atom with its image
    for (const auto& pi : enumerate_marked_partitions(3)) {
        std::vector<std::uint64_t> labels(3);
        for (std::uint32_t e = 1; e <= 3; ++e)
            labels[3 - e] = pi.block_of(e);
        std::optional<std::uint64_t> mark;
        if (pi.marked())
            mark = *pi.marked();
        const auto image = MarkedPartition::from_labels(labels, mark);
        const double x = freq[pi.to_string()] / double(draws);
        const double y = freq[image.to_string()] / double(draws);
        const double se = std::sqrt((x * (1 - x) + y * (1 - y)) / draws);
        CAPTURE(pi.to_string());
        CHECK(std::abs(x - y) <= 4 * std::max(se, 1e-9));
    }
}

TEST_CASE("tagged share of a Yule tree has mean 1/k")
{
    Rng rng(6);
    for (std::size_t k : {2u, 5u, 10u}) {
        double s1 = 0, s2 = 0;
        const int reps = 20000;
        for (int i = 0; i < reps; ++i) {
            const double f = yule_tagged_fraction(k, 400, rng);
            s1 += f;
            s2 += f * f;
        }
        const double mean = s1 / reps;
        const double se = std::sqrt((s2 / reps - mean * mean) / reps);
        CHECK(std::abs(mean - 1.0 / k) <= 3 * se);
    }
}

TEST_CASE("infinite lines form a Yule process")
{
    Rng rng(7);
    const double s = 0.2;
    const std::uint64_t level = 3;
    std::vector<double> waits;
    while (waits.size() < 10000) {
        const auto path = simulate_two_type_branching(s, 1e9, rng, 1, 0, 2000);
        double entered = -1.0;
        for (std::size_t i = 0; i < path.time.size(); ++i) {
            if (path.infinite[i] == level && entered < 0 &&
                (i == 0 || path.infinite[i - 1] != level))
                entered = path.time[i];
            if (entered >= 0 && path.infinite[i] == level + 1) {
                waits.push_back(path.time[i] - entered);
                break;
            }
        }
    }
    const double d = oracle::ks_exponential(waits, level * s);
    CHECK(d < oracle::ks_critical_5pct(waits.size()));
}

TEST_CASE("finite lines die out")
{
    Rng rng(8);
    for (int i = 0; i < 2000; ++i) {
        const auto path = simulate_two_type_branching(0.3, 1e6, rng, 0, 1);
        CHECK(path.finite.back() == 0);
        CHECK(path.infinite.back() == 0);
        CHECK_FALSE(path.truncated);
    }
}

TEST_CASE("long-run share of infinite lines is s")
{
    Rng rng(9);
    const double s = 0.5;
    const int reps = 1000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < reps; ++i) {
        const auto path = simulate_two_type_branching(s, 18.0, rng);
        const double inf = double(path.infinite.back());
        const double frac = inf / (inf + double(path.finite.back()));
        s1 += frac;
        s2 += frac * frac;
    }
    const double mean = s1 / reps;
    const double se = std::sqrt((s2 / reps - mean * mean) / reps);
    CHECK(std::abs(mean - s) <= 3 * se);

    const auto capped = simulate_two_type_branching(0.5, 1e9, rng, 1, 0, 1000);
    CHECK(capped.truncated);
}
