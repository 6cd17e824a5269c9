#include "doctest.h"

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "sweeplab/analytics.hpp"
#include "sweeplab/genealogy.hpp"
#include "sweeplab/model.hpp"

using namespace sweeplab;

namespace {

EventRecord ev(std::uint32_t victim, std::uint32_t parent, Allele prev,
               std::optional<std::uint32_t> source = std::nullopt)
{
    EventRecord e;
    e.victim = victim;
    e.parent = parent;
    e.victim_prev_allele = prev;
    e.recombined = source.has_value();
    e.neutral_source = source.value_or(parent);
    return e;
}

/// 2N = 4, mutant 0. Individual 1 copies the mutant, 2 is born on B but
/// takes its neutral allele from 3 (a b), and 3 is finally replaced by a
/// copy of 2.
SweepTrajectory hand_built()
{
    SweepTrajectory tr;
    tr.params = validate_params({2, 0.5, 0.2, 4, 0});
    tr.initial_mutant = 0;
    tr.events = {ev(1, 0, Allele::b), ev(2, 1, Allele::b, 3u), ev(3, 2, Allele::b)};
    tr.x_path = {1, 2, 3, 4};
    tr.fixed = true;
    return tr;
}

} // namespace

TEST_CASE("hand-built trajectory")
{
    const auto tr = hand_built();
    const auto a = trace_ancestry(tr, 4);
    CHECK(a.ancestor_at_0 == std::vector<std::uint32_t>{0, 0, 3, 3});
    CHECK(a.ancestor_has_B_at_0 == std::vector<std::uint8_t>{1, 1, 0, 0});
    CHECK(a.escape_time == std::vector<std::int64_t>{kNever, kNever, 1, 1});
    CHECK(a.coalescence_time(0, 1) == 0);
    CHECK(a.coalescence_time(2, 3) == 2);
    CHECK(a.coalescence_time(3, 2) == 2);
    CHECK(a.coalescence_time(0, 2) == kNever);
    CHECK(a.coalescence_time(1, 3) == kNever);
    CHECK(theta_partition(a).to_string() == "{1,2}*{3,4}");

    const auto d = pair_diagnostics(a, 1);
    CHECK(d.escaped_after == 2);
    const auto d3 = pair_diagnostics(a, 3);   // tau_3 = 2
    CHECK(d3.escaped_after == 0);
    CHECK(d3.coalesced_after[AncestryTrace::pair_index(2, 3, 4)] == 1);
    CHECK(d3.coalesced_after[AncestryTrace::pair_index(0, 1, 4)] == 0);
}

TEST_CASE("corrupted trajectories are rejected")
{
    auto bad_x = hand_built();
    bad_x.x_path[2] = 2;
    CHECK_THROWS_AS(trace_ancestry(bad_x, 2), IntegrityError);

    auto bad_prev = hand_built();
    bad_prev.events[1].victim_prev_allele = Allele::B;
    CHECK_THROWS_AS(trace_ancestry(bad_prev, 2), IntegrityError);

    auto bad_mutant = hand_built();
    bad_mutant.initial_mutant = 2;
    CHECK_THROWS_AS(trace_ancestry(bad_mutant, 2), IntegrityError);

    auto unfixed = hand_built();
    unfixed.fixed = false;
    CHECK_THROWS_AS(trace_ancestry(unfixed, 2), std::invalid_argument);
    CHECK_THROWS_AS(trace_ancestry(hand_built(), 5), std::invalid_argument);
}

TEST_CASE("backward trace agrees with the brute-force ancestry matrix")
{
    Rng rng(31337);
    const Params p = validate_params({6, 0.3, 0.2, 12, 0});
    for (int rep = 0; rep < 300; ++rep) {
        const auto tr = simulate_conditioned_sweep(p, rng);
        const auto a = trace_ancestry(tr, 12);
        const auto b = oracle::brute_ancestry(tr, 12);
        REQUIRE(a.ancestor_at_0 == b.ancestor_at_0);
        REQUIRE(a.escape_time == b.escape_time);
        for (std::size_t i = 0; i < 12; ++i) {
            CHECK(bool(a.ancestor_has_B_at_0[i]) == (a.ancestor_at_0[i] == tr.initial_mutant));
            for (std::size_t j = i + 1; j < 12; ++j) {
                REQUIRE(a.coalescence_time(i, j) == b.coalescence[i][j]);
                CHECK(a.coalescence_time(i, j) == a.coalescence_time(j, i));
            }
        }
    }
}

TEST_CASE("forward label propagation reproduces the trace")
{
    for (auto [N, r] : {std::pair{10u, 0.3}, std::pair{200u, 0.02}, std::pair{1000u, 0.005}}) {
        const Params p = validate_params({N, 0.2, r, 5, 0});
        for (std::uint64_t i = 0; i < 20; ++i) {
            Rng a = Rng::stream(9, i), b = Rng::stream(9, i);
            const auto tr = simulate_conditioned_sweep(p, a);
            const auto trace = trace_ancestry(tr, 5);
            const auto fwd = simulate_sample_ancestry(p, b);
            CHECK(fwd.ancestor_at_0 == trace.ancestor_at_0);
            CHECK(fwd.initial_mutant == tr.initial_mutant);
            CHECK(fwd.attempts == tr.attempts);
            CHECK(fwd.events == tr.events.size());
            CHECK(partition_by_ancestor(fwd.ancestor_at_0, fwd.initial_mutant) ==
                  theta_partition(trace));
        }
    }
}

TEST_CASE("pair statistics from traces")
{
    const auto a = trace_ancestry(hand_built(), 2);
    const auto c = pair_counts_from_trace(a);
    CHECK(c.reps == 1);
    CHECK(c.neither == 1);

    const auto b = trace_ancestry(hand_built(), 4);
    CHECK_THROWS_AS(pair_counts_from_trace(b), std::invalid_argument);
    CHECK_THROWS_AS(pair_stats_from_traces({}), std::invalid_argument);

    Rng rng(2);
    const Params p = validate_params({20, 0.2, 0.05, 2, 0});
    std::vector<AncestryTrace> traces;
    for (int i = 0; i < 400; ++i)
        traces.push_back(trace_ancestry(simulate_conditioned_sweep(p, rng), 2));
    const auto st = pair_stats_from_traces(traces);
    CHECK(st.n_reps == 400);
    CHECK(std::abs(st.identity_residual()) < 1e-12);
}

TEST_CASE("lineages rarely switch background twice at N = 10^4")
{
    // Count background switches along each sampled lineage by undoing the
    // allele array while following the lineage back.
    const Params p = validate_params({10000, 0.1, 0.00106, 20, 0});
    std::uint64_t lineages = 0, multiple = 0, single = 0;
    for (std::uint64_t rep = 0; rep < 40; ++rep) {
        Rng rng = Rng::stream(404, rep);
        const auto tr = simulate_conditioned_sweep(p, rng);
        std::vector<std::uint8_t> alle(p.population(), 1);
        std::vector<std::uint32_t> pos(p.n);
        std::iota(pos.begin(), pos.end(), 0u);
        std::vector<std::uint8_t> bg(p.n, 1);
        std::vector<int> switches(p.n, 0);
        for (std::size_t t = tr.events.size(); t >= 1; --t) {
            const auto& e = tr.events[t - 1];
            alle[e.victim] = static_cast<std::uint8_t>(e.victim_prev_allele);
            for (std::size_t i = 0; i < p.n; ++i) {
                if (pos[i] != e.victim)
                    continue;
                pos[i] = e.neutral_parent();
                if (alle[pos[i]] != bg[i]) {
                    bg[i] = alle[pos[i]];
                    ++switches[i];
                }
            }
        }
        for (int sw : switches) {
            ++lineages;
            multiple += sw >= 2;
            single += sw == 1;
        }
    }
    CHECK(single > 0);
    CHECK(double(multiple) / double(lineages) < 0.01);
}

TEST_CASE("escape count after tau_J is roughly binomial")
{
    // Small version of the acceptance comparison: mean K_{tau_J} vs n q_J.
    const Params p = validate_params({500, 0.1, 0.004, 4, 0});
    const std::uint32_t J = 10;
    double total = 0.0;
    const int reps = 1500;
    for (int i = 0; i < reps; ++i) {
        Rng rng = Rng::stream(77, i);
        const auto a = trace_ancestry(simulate_conditioned_sweep(p, rng), 4);
        total += pair_diagnostics(a, J).escaped_after;
    }
    const double qJ = q_J_value(500, J, 0.004, 0.1);
    const double mean = total / reps;
    CHECK(mean == doctest::Approx(4 * qJ).epsilon(0.25));
}
