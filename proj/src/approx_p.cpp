#include "sweeplab/approx_p.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sweeplab {

PParams validate_pparams(double p, std::size_t n)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("p must lie in [0,1]");
    return {p, n};
}

AlphaP alpha_and_p(std::uint32_t N, double r, double s)
{
    if (N < 1)
        throw std::domain_error("N must be a positive integer");
    if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("s must lie in (0,1)");
    if (!(r >= 0.0 && r < 1.0))
        throw std::domain_error("r must lie in [0,1)");
    AlphaP out;
    out.alpha = r * std::log(2.0 * N) / s;
    out.p = std::exp(-out.alpha);
    return out;
}

MarkedPartition sample_p_partition(std::size_t n, double p, Rng& rng)
{
    validate_pparams(p, n);
    // heads share label 0, each tail gets its own label
    std::vector<std::uint64_t> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = rng.bernoulli(p) ? 0 : i + 1;
    return MarkedPartition::from_labels(labels, std::uint64_t{0});
}

double qp_probability(const MarkedPartition& pi, double p)
{
    validate_pparams(p, pi.n());
    std::size_t marked_size = 0;
    for (std::uint32_t b = 0; b < pi.block_count(); ++b) {
        const std::size_t size = pi.block_size(b);
        if (pi.marked() && *pi.marked() == b)
            marked_size = size;
        else if (size > 1)
            return 0.0;
    }
    const auto heads = static_cast<double>(marked_size);
    const auto tails = static_cast<double>(pi.n() - marked_size);
    return std::pow(p, heads) * std::pow(1.0 - p, tails);
}

PairStats qp_pair_stats(double p)
{
    validate_pparams(p, 2);
    PairStats st;
    st.pinb = 1.0 - p;
    st.p2inb = (1.0 - p) * (1.0 - p);
    st.p2cinb = 0.0;
    st.p1B1b = 2.0 * p * (1.0 - p);
    return st;
}

} // namespace sweeplab
