#pragma once

// Forward simulation of the two-locus Moran sweep.
//
// Individuals are indexed 0 .. 2N-1. Time is the index of an accepted
// replacement event: the state "at time t" is the population after t
// accepted events, so t = 0 is the founding state with a single B copy.
// Rejected proposals (a B victim replaced by a b offspring, refused with
// probability s) never enter the event list; they are only counted so that
// the holding-time statistics of the embedded chain can be recovered.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sweeplab/rng.hpp"

namespace sweeplab {

enum class Allele : std::uint8_t { b = 0, B = 1 };

struct Params {
    std::uint32_t N = 1;   ///< population is 2N haploids
    double s = 0.1;        ///< selective advantage, in (0,1)
    double r = 0.0;        ///< recombination probability per birth, in [0,1)
    std::uint32_t n = 1;   ///< sample size, 1 <= n <= 2N
    std::uint64_t seed = 0;

    std::uint32_t population() const noexcept { return 2 * N; }
};

/// Unvalidated user input.
struct RawParams {
    std::int64_t N = 0;
    double s = 0.0;
    double r = 0.0;
    std::int64_t n = 1;
    std::uint64_t seed = 0;
};

/// Throws std::domain_error naming the violated bound.
Params validate_params(const RawParams& raw);

struct EventRecord {
    std::uint32_t victim = 0;
    std::uint32_t parent = 0;
    std::uint32_t neutral_source = 0; ///< meaningful only when recombined
    bool recombined = false;
    Allele victim_prev_allele = Allele::b;

    /// Individual at t-1 the newborn took its neutral allele from.
    std::uint32_t neutral_parent() const noexcept
    {
        return recombined ? neutral_source : parent;
    }
};

/// `count` rejected proposals happened immediately before event
/// `before_event` (1-based event index).
struct RejectionRun {
    std::size_t before_event = 0;
    std::uint64_t count = 0;
};

struct SweepTrajectory {
    Params params;
    std::vector<EventRecord> events;          ///< event t is events[t-1]
    std::uint32_t initial_mutant = 0;
    std::vector<std::uint32_t> x_path;        ///< x_path[t] = X_t, x_path[0] = 1
    std::vector<RejectionRun> rejections;     ///< sparse; empty runs omitted
    bool fixed = false;
    std::size_t attempts = 1;                 ///< simulations run to obtain this one

    std::size_t size() const noexcept { return events.size(); }

    /// First event index with X_t >= J; throws std::out_of_range when the
    /// level is never reached.
    std::size_t first_passage(std::uint32_t J) const;

    /// first_passage for every level J = 0..2N (entries for unreached
    /// levels hold SIZE_MAX).
    std::vector<std::size_t> first_passage_table() const;
};

/// Runs one unconditioned sweep until B is lost or fixed.
SweepTrajectory simulate_sweep(const Params& params, Rng& rng);

/// Resimulates until fixation; `attempts` records how many runs it took.
SweepTrajectory simulate_conditioned_sweep(const Params& params, Rng& rng);

namespace detail {

/// Core stepping loop shared by every consumer of the forward model.
///
/// Sink must provide
///   void on_start(std::uint32_t mutant);
///   void on_reject();
///   void on_event(const EventRecord& ev, std::uint32_t x_after);
/// `on_event` is invoked before `alleles` is updated, so the sink still
/// sees the state at t-1. Returns true when B fixes.
template <class Sink>
bool run_sweep(const Params& params, Rng& rng, std::vector<std::uint8_t>& alleles, Sink& sink)
{
    const std::uint32_t M = params.population();
    alleles.assign(M, 0);
    const std::uint32_t mutant = rng.below(M);
    alleles[mutant] = 1;
    sink.on_start(mutant);

    const BernoulliThreshold reject(params.s);
    const BernoulliThreshold recombine(params.r);
    const bool no_recombination = recombine.never();

    std::uint32_t x = 1;
    std::uint8_t* a = alleles.data();
    while (x != 0 && x != M) {
        std::uint32_t victim, parent;
        rng.below_pair(M, victim, parent);
        const std::uint8_t old_allele = a[victim];
        const std::uint8_t new_allele = a[parent];
        if (old_allele > new_allele && reject(rng)) {
            sink.on_reject();
            continue;
        }
        EventRecord ev;
        ev.victim = victim;
        ev.parent = parent;
        ev.victim_prev_allele = static_cast<Allele>(old_allele);
        if (!no_recombination && recombine(rng)) {
            ev.recombined = true;
            ev.neutral_source = rng.below(M);
        } else {
            ev.neutral_source = parent;
        }
        x = x + new_allele - old_allele;
        sink.on_event(ev, x);
        a[victim] = new_allele;
    }
    return x == M;
}

} // namespace detail

} // namespace sweeplab
