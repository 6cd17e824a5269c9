#include "sweeplab/genealogy.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace sweeplab {

std::size_t AncestryTrace::pair_index(std::size_t i, std::size_t j, std::size_t n)
{
    if (i == j || i >= n || j >= n)
        throw std::out_of_range("invalid lineage pair");
    if (i > j)
        std::swap(i, j);
    // row-major upper triangle without the diagonal
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::int64_t AncestryTrace::coalescence_time(std::size_t i, std::size_t j) const
{
    return coalescence_times[pair_index(i, j, n())];
}

AncestryTrace trace_ancestry(const SweepTrajectory& traj, std::size_t n)
{
    const std::uint32_t M = traj.params.population();
    if (!traj.fixed)
        throw std::invalid_argument("ancestry is traced from fixed trajectories only");
    if (n == 0 || n > M)
        throw std::invalid_argument("sample size must lie in [1, 2N]");
    const std::size_t T = traj.events.size();
    if (traj.x_path.size() != T + 1 || traj.x_path.front() != 1 || traj.x_path.back() != M)
        throw IntegrityError("x_path does not match the event list");
    if (traj.initial_mutant >= M)
        throw IntegrityError("initial mutant index out of range");

    AncestryTrace tr;
    tr.sample_indices.resize(n);
    std::iota(tr.sample_indices.begin(), tr.sample_indices.end(), 0u);
    tr.escape_time.assign(n, kNever);
    tr.coalescence_times.assign(n * (n - 1) / 2, kNever);
    tr.first_passage = traj.first_passage_table();

    std::vector<std::uint8_t> alleles(M, 1); // state at fixation
    std::vector<std::uint32_t> pos = tr.sample_indices;
    std::uint32_t x = M;

    auto check_coalescence = [&](std::size_t moved, std::int64_t t) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == moved || pos[j] != pos[moved])
                continue;
            auto& g = tr.coalescence_times[AncestryTrace::pair_index(moved, j, n)];
            if (g == kNever)
                g = t;
        }
    };

    for (std::size_t t = T; t >= 1; --t) {
        const EventRecord& ev = traj.events[t - 1];
        if (ev.victim >= M || ev.parent >= M || ev.neutral_source >= M)
            throw IntegrityError("event " + std::to_string(t) + " references an unknown individual");
        // The newborn carries its parent's allele; the parent is untouched
        // by the event unless it is the victim itself.
        const std::uint8_t newborn = alleles[ev.victim];
        const std::uint8_t prev = static_cast<std::uint8_t>(ev.victim_prev_allele);
        if (ev.parent != ev.victim && alleles[ev.parent] != newborn)
            throw IntegrityError("event " + std::to_string(t) + " allele does not match its parent");
        if (ev.parent == ev.victim && prev != newborn)
            throw IntegrityError("event " + std::to_string(t) + " self-replacement changed allele");
        alleles[ev.victim] = prev;
        x = x - newborn + prev;
        if (x != traj.x_path[t - 1])
            throw IntegrityError("x_path inconsistent at event " + std::to_string(t));

        const auto before = static_cast<std::int64_t>(t - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (pos[i] != ev.victim)
                continue;
            pos[i] = ev.neutral_parent();
            if (tr.escape_time[i] == kNever && alleles[pos[i]] == 0)
                tr.escape_time[i] = before;
        }
        // Lineages sharing the victim move together; only a move can
        // create a new coincidence.
        for (std::size_t i = 0; i < n; ++i)
            if (pos[i] == ev.neutral_parent())
                check_coalescence(i, before);
    }

    if (x != 1 || alleles[traj.initial_mutant] != 1)
        throw IntegrityError("founding state does not have a single B at the initial mutant");

    tr.ancestor_at_0 = pos;
    tr.ancestor_has_B_at_0.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        tr.ancestor_has_B_at_0[i] = alleles[pos[i]];
    return tr;
}

MarkedPartition partition_by_ancestor(std::span<const std::uint32_t> ancestors,
                                      std::uint32_t initial_mutant)
{
    std::vector<std::uint64_t> labels(ancestors.begin(), ancestors.end());
    return MarkedPartition::from_labels(labels, std::uint64_t{initial_mutant});
}

MarkedPartition theta_partition(const AncestryTrace& trace)
{
    // The marked block is defined through the time-0 allele, which holds
    // for the mutant and nobody else.
    std::vector<std::uint64_t> labels(trace.ancestor_at_0.begin(), trace.ancestor_at_0.end());
    std::optional<std::uint64_t> marked;
    for (std::size_t i = 0; i < trace.n(); ++i)
        if (trace.ancestor_has_B_at_0[i])
            marked = trace.ancestor_at_0[i];
    return MarkedPartition::from_labels(labels, marked);
}

PairDiagnostics pair_diagnostics(const AncestryTrace& trace, std::uint32_t J)
{
    if (J == 0 || J >= trace.first_passage.size())
        throw std::invalid_argument("level J must lie in [1, 2N]");
    const auto tau = static_cast<std::int64_t>(trace.first_passage[J]);
    PairDiagnostics d;
    d.escaped_after = static_cast<std::size_t>(
        std::count_if(trace.escape_time.begin(), trace.escape_time.end(),
                      [tau](std::int64_t r) { return r >= tau; }));
    d.coalesced_after.resize(trace.coalescence_times.size());
    for (std::size_t k = 0; k < trace.coalescence_times.size(); ++k)
        d.coalesced_after[k] = trace.coalescence_times[k] >= tau;
    return d;
}

PairCounts pair_counts_from_trace(const AncestryTrace& trace)
{
    if (trace.n() != 2)
        throw std::invalid_argument("pair statistics need traces with exactly two lineages");
    PairCounts c;
    c.add(!trace.ancestor_has_B_at_0[0], !trace.ancestor_has_B_at_0[1],
          trace.ancestor_at_0[0] == trace.ancestor_at_0[1]);
    return c;
}

PairStats pair_stats_from_traces(std::span<const AncestryTrace> traces)
{
    if (traces.empty())
        throw std::invalid_argument("no traces to summarize");
    PairCounts total;
    for (const auto& tr : traces)
        total.merge(pair_counts_from_trace(tr));
    return total.stats();
}

namespace {

struct LabelSink {
    std::vector<std::uint32_t>& label;
    std::uint32_t mutant = 0;
    std::size_t events = 0;

    void on_start(std::uint32_t m)
    {
        std::iota(label.begin(), label.end(), 0u);
        mutant = m;
        events = 0;
    }
    void on_reject() {}
    void on_event(const EventRecord& ev, std::uint32_t)
    {
        label[ev.victim] = label[ev.neutral_parent()];
        ++events;
    }
};

} // namespace

SampleAncestry simulate_sample_ancestry(const Params& params, Rng& rng)
{
    std::vector<std::uint8_t> alleles;
    std::vector<std::uint32_t> label(params.population());
    LabelSink sink{label};
    SampleAncestry out;
    bool fixed = false;
    while (!fixed) {
        ++out.attempts;
        fixed = detail::run_sweep(params, rng, alleles, sink);
    }
    out.ancestor_at_0.assign(label.begin(), label.begin() + params.n);
    out.initial_mutant = sink.mutant;
    out.events = sink.events;
    return out;
}

} // namespace sweeplab
