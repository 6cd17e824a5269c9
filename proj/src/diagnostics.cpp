#include "sweeplab/diagnostics.hpp"

#include <stdexcept>

namespace sweeplab {

LevelMoves count_level_moves(const SweepTrajectory& traj, std::uint32_t j)
{
    const std::uint32_t M = traj.params.population();
    LevelMoves m;
    m.up.assign(M + 1, 0);
    m.down.assign(M + 1, 0);
    m.hold.assign(M + 1, 0);
    const std::size_t start = traj.first_passage(j);

    auto rej = traj.rejections.begin();
    for (std::size_t t = 1; t < traj.x_path.size(); ++t) {
        const std::uint32_t k = traj.x_path[t - 1];
        const std::uint32_t l = traj.x_path[t];
        // rejected proposals preceding event t happen at level k
        std::uint64_t rejected = 0;
        while (rej != traj.rejections.end() && rej->before_event < t)
            ++rej;
        if (rej != traj.rejections.end() && rej->before_event == t)
            rejected = rej->count;
        if (t - 1 < start)
            continue;
        m.hold[k] += rejected;
        if (l == k + 1)
            ++m.up[k];
        else if (l + 1 == k)
            ++m.down[k];
        else
            ++m.hold[k];
    }
    return m;
}

OneStepTally::OneStepTally(std::uint32_t population)
    : population_(population), cells_(population + 1)
{
}

OneStepCell& OneStepTally::at(std::uint32_t k, std::uint32_t l)
{
    if (k > population_ || l + 1 < k || l > k + 1)
        throw std::out_of_range("one-step cell must have |k - l| <= 1");
    return cells_[k][l + 1 - k];
}

const OneStepCell& OneStepTally::cell(std::uint32_t k, std::uint32_t l) const
{
    return const_cast<OneStepTally*>(this)->at(k, l);
}

void OneStepTally::add(const SweepTrajectory& traj)
{
    if (traj.params.population() != population_)
        throw std::invalid_argument("trajectory population does not match tally");
    std::vector<std::uint8_t> alleles(population_, 0);
    alleles[traj.initial_mutant] = 1;

    auto rej = traj.rejections.begin();
    for (std::size_t t = 1; t <= traj.events.size(); ++t) {
        const std::uint32_t k = traj.x_path[t - 1];
        const std::uint32_t l = traj.x_path[t];
        if (rej != traj.rejections.end() && rej->before_event == t) {
            at(k, k).steps += rej->count;
            ++rej;
        }
        const EventRecord& ev = traj.events[t - 1];
        const std::uint32_t src = ev.neutral_parent();
        const std::uint8_t newborn = alleles[ev.parent];
        const std::uint8_t source_allele = alleles[src];

        OneStepCell& c = at(k, l);
        ++c.steps;
        if (newborn == 1 && source_allele == 0)
            ++c.B_from_b;
        if (newborn == 0 && source_allele == 1)
            ++c.b_from_B;
        // The pair (victim, src) merges at t-1 unless src is the victim
        // itself; src keeps its allele across the event.
        if (src != ev.victim) {
            if (newborn == 1 && source_allele == 1)
                ++c.merge_BB;
            else if (newborn == 0 && source_allele == 0)
                ++c.merge_bb;
            else
                ++c.merge_Bb;
        }
        alleles[ev.victim] = newborn;
    }
}

void OneStepTally::merge(const OneStepTally& other)
{
    if (other.population_ != population_)
        throw std::invalid_argument("cannot merge tallies of different populations");
    for (std::size_t k = 0; k < cells_.size(); ++k)
        for (std::size_t d = 0; d < 3; ++d) {
            auto& a = cells_[k][d];
            const auto& b = other.cells_[k][d];
            a.steps += b.steps;
            a.B_from_b += b.B_from_b;
            a.b_from_B += b.b_from_B;
            a.merge_BB += b.merge_BB;
            a.merge_bb += b.merge_bb;
            a.merge_Bb += b.merge_Bb;
        }
}

} // namespace sweeplab
