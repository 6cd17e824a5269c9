#include "sweeplab/model.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace sweeplab {

Params validate_params(const RawParams& raw)
{
    if (raw.N < 1)
        throw std::domain_error("N must be a positive integer");
    if (raw.N > std::numeric_limits<std::uint32_t>::max() / 2)
        throw std::domain_error("N is too large (2N must fit in 32 bits)");
    if (!(raw.s > 0.0 && raw.s < 1.0))
        throw std::domain_error("s must lie in (0,1)");
    if (!(raw.r >= 0.0 && raw.r < 1.0))
        throw std::domain_error("r must lie in [0,1)");
    if (raw.n < 1)
        throw std::domain_error("n must be at least 1");
    if (raw.n > 2 * raw.N)
        throw std::domain_error("n exceeds 2N");

    Params p;
    p.N = static_cast<std::uint32_t>(raw.N);
    p.s = raw.s;
    p.r = raw.r;
    p.n = static_cast<std::uint32_t>(raw.n);
    p.seed = raw.seed;
    return p;
}

std::size_t SweepTrajectory::first_passage(std::uint32_t J) const
{
    for (std::size_t t = 0; t < x_path.size(); ++t)
        if (x_path[t] >= J)
            return t;
    throw std::out_of_range("level " + std::to_string(J) + " never reached");
}

std::vector<std::size_t> SweepTrajectory::first_passage_table() const
{
    const std::uint32_t M = params.population();
    std::vector<std::size_t> tau(M + 1, std::numeric_limits<std::size_t>::max());
    std::uint32_t reached = 0;
    for (std::size_t t = 0; t < x_path.size(); ++t) {
        while (reached < x_path[t]) {
            ++reached;
            tau[reached] = t;
        }
    }
    tau[0] = 0;
    return tau;
}

namespace {

struct RecordingSink {
    SweepTrajectory& traj;
    std::uint64_t pending_rejections = 0;

    void on_start(std::uint32_t mutant)
    {
        traj.initial_mutant = mutant;
        traj.events.clear();
        traj.rejections.clear();
        traj.x_path.assign(1, 1);
        pending_rejections = 0;
    }

    void on_reject() { ++pending_rejections; }

    void on_event(const EventRecord& ev, std::uint32_t x_after)
    {
        traj.events.push_back(ev);
        traj.x_path.push_back(x_after);
        if (pending_rejections != 0) {
            traj.rejections.push_back({traj.events.size(), pending_rejections});
            pending_rejections = 0;
        }
    }
};

} // namespace

SweepTrajectory simulate_sweep(const Params& params, Rng& rng)
{
    SweepTrajectory traj;
    traj.params = params;
    std::vector<std::uint8_t> alleles;
    RecordingSink sink{traj};
    traj.fixed = detail::run_sweep(params, rng, alleles, sink);
    traj.attempts = 1;
    return traj;
}

SweepTrajectory simulate_conditioned_sweep(const Params& params, Rng& rng)
{
    SweepTrajectory traj;
    traj.params = params;
    std::vector<std::uint8_t> alleles;
    RecordingSink sink{traj};
    std::size_t attempts = 0;
    do {
        ++attempts;
        traj.fixed = detail::run_sweep(params, rng, alleles, sink);
    } while (!traj.fixed);
    traj.attempts = attempts;
    return traj;
}

} // namespace sweeplab
