#include "sweeplab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace sweeplab {

MarkedPartition::MarkedPartition(std::size_t n,
                                 const std::vector<std::vector<std::uint32_t>>& blocks,
                                 std::optional<std::size_t> marked)
{
    constexpr std::uint64_t unset = ~std::uint64_t{0};
    std::vector<std::uint64_t> labels(n, unset);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty())
            throw std::invalid_argument("partition blocks must be non-empty");
        for (auto e : blocks[b]) {
            if (e < 1 || e > n)
                throw std::invalid_argument("partition element out of range");
            if (labels[e - 1] != unset)
                throw std::invalid_argument("partition blocks overlap");
            labels[e - 1] = b;
        }
    }
    if (std::find(labels.begin(), labels.end(), unset) != labels.end())
        throw std::invalid_argument("partition blocks do not cover {1..n}");
    if (marked && *marked >= blocks.size())
        throw std::invalid_argument("marked block does not exist");
    std::optional<std::uint64_t> marked_label;
    if (marked)
        marked_label = *marked;
    *this = from_labels(labels, marked_label);
}

MarkedPartition MarkedPartition::from_labels(std::span<const std::uint64_t> labels,
                                             std::optional<std::uint64_t> marked_label)
{
    MarkedPartition pi;
    pi.block_of_.resize(labels.size());
    // Linear scan is fine: samples are small.
    std::vector<std::uint64_t> seen;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = std::find(seen.begin(), seen.end(), labels[i]);
        std::uint32_t idx;
        if (it == seen.end()) {
            idx = static_cast<std::uint32_t>(seen.size());
            seen.push_back(labels[i]);
        } else {
            idx = static_cast<std::uint32_t>(it - seen.begin());
        }
        pi.block_of_[i] = idx;
    }
    pi.block_count_ = seen.size();
    if (marked_label) {
        auto it = std::find(seen.begin(), seen.end(), *marked_label);
        if (it != seen.end())
            pi.marked_ = static_cast<std::uint32_t>(it - seen.begin());
    }
    return pi;
}

MarkedPartition MarkedPartition::from_canonical(std::vector<std::uint32_t> block_of,
                                                std::optional<std::uint32_t> marked)
{
    MarkedPartition pi;
    std::uint32_t next = 0;
    for (auto b : block_of) {
        if (b > next)
            throw std::invalid_argument("assignment is not a restricted growth string");
        if (b == next)
            ++next;
    }
    if (marked && *marked >= next)
        throw std::invalid_argument("marked block does not exist");
    pi.block_of_ = std::move(block_of);
    pi.block_count_ = next;
    pi.marked_ = marked;
    return pi;
}

std::vector<std::vector<std::uint32_t>> MarkedPartition::blocks() const
{
    std::vector<std::vector<std::uint32_t>> out(block_count_);
    for (std::size_t i = 0; i < block_of_.size(); ++i)
        out[block_of_[i]].push_back(static_cast<std::uint32_t>(i + 1));
    return out;
}

std::size_t MarkedPartition::block_size(std::uint32_t block) const
{
    return static_cast<std::size_t>(std::count(block_of_.begin(), block_of_.end(), block));
}

std::string MarkedPartition::to_string() const
{
    std::string out;
    const auto bs = blocks();
    for (std::size_t b = 0; b < bs.size(); ++b) {
        out += '{';
        for (std::size_t k = 0; k < bs[b].size(); ++k) {
            if (k)
                out += ',';
            out += std::to_string(bs[b][k]);
        }
        out += '}';
        if (marked_ && *marked_ == b)
            out += '*';
    }
    return out;
}

std::vector<MarkedPartition> enumerate_marked_partitions(std::size_t n)
{
    std::vector<MarkedPartition> out;
    std::vector<std::uint32_t> rgs(n, 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t pos, std::uint32_t blocks) {
        if (pos == n) {
            out.push_back(MarkedPartition::from_canonical(rgs, std::nullopt));
            for (std::uint32_t m = 0; m < blocks; ++m)
                out.push_back(MarkedPartition::from_canonical(rgs, m));
            return;
        }
        for (std::uint32_t b = 0; b <= blocks; ++b) {
            rgs[pos] = b;
            rec(pos + 1, b == blocks ? blocks + 1 : blocks);
        }
    };
    if (n == 0)
        return out;
    rgs[0] = 0;
    rec(1, 1);
    return out;
}

void PairCounts::add(bool escaped1, bool escaped2, bool same_block)
{
    ++reps;
    if (escaped1 && escaped2) {
        if (same_block)
            ++both_same;
        else
            ++both_distinct;
    } else if (escaped1 || escaped2) {
        ++one;
    } else {
        ++neither;
    }
}

void PairCounts::add(const MarkedPartition& pi)
{
    if (pi.n() < 2)
        throw std::invalid_argument("pair statistics need at least two lineages");
    add(!pi.in_marked(1), !pi.in_marked(2), pi.same_block(1, 2));
}

void PairCounts::merge(const PairCounts& other)
{
    reps += other.reps;
    neither += other.neither;
    one += other.one;
    both_distinct += other.both_distinct;
    both_same += other.both_same;
}

PairStats PairCounts::stats() const
{
    if (reps == 0)
        throw std::invalid_argument("no replicates to summarize");
    const double n = static_cast<double>(reps);
    auto prop = [n](std::uint64_t c) { return static_cast<double>(c) / n; };
    auto binom_se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };

    PairStats st;
    st.n_reps = reps;
    st.p2inb = prop(both_distinct);
    st.p2cinb = prop(both_same);
    st.p1B1b = prop(one);
    // Per-replicate escape fraction x in {0, 1/2, 1}; the two lineages of a
    // replicate are dependent, so the s.e. comes from the spread of x.
    const double both = static_cast<double>(both_distinct + both_same);
    const double one_d = static_cast<double>(one);
    st.pinb = (both + 0.5 * one_d) / n;
    const double second = (both + 0.25 * one_d) / n;
    const double var = std::max(0.0, second - st.pinb * st.pinb);
    st.se = {std::sqrt(var / n), binom_se(st.p2inb), binom_se(st.p2cinb), binom_se(st.p1B1b)};
    return st;
}

} // namespace sweeplab
