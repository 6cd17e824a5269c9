#pragma once

// Experiment orchestration: replicate fan-out with per-replicate RNG
// streams, aggregation into report rows, law comparison and writers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sweeplab/model.hpp"
#include "sweeplab/partition.hpp"
#include "sweeplab/rng.hpp"

namespace sweeplab {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Mode { moran, qp, paintbox, paintbox_thinned, skeleton, table, validate };
enum class Format { csv, json };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);
Format parse_format(const std::string& name);

struct ExperimentConfig {
    Mode mode = Mode::moran;
    RawParams raw{10000, 0.1, 0.00106, 2, 1};
    std::uint64_t reps = 1000;
    std::optional<std::int64_t> L;   ///< defaults to floor(2Ns)
    std::optional<double> q;         ///< paintbox_thinned only
    std::optional<std::int64_t> H;   ///< skeleton only
    std::string preset;              ///< table only; empty uses the params
    unsigned threads = 0;            ///< 0 picks hardware_concurrency
    std::string out;                 ///< empty or "-" is stdout
    Format format = Format::csv;
    bool progress = false;           ///< per-10% notes on stderr
};

/// Everything run_experiment will use, after every check has passed.
struct ResolvedConfig {
    ExperimentConfig cfg;
    Params params;
    std::size_t L = 1;
    double q = 0.0;
    std::size_t H = 0;
    std::vector<double> r_values;
    unsigned threads = 1;
};

/// Throws ConfigError describing the first bad field.
ResolvedConfig resolve_config(const ExperimentConfig& cfg);

/// Counts over canonical marked partitions, keyed by to_string().
using LawCounts = std::map<std::string, std::uint64_t>;

struct ReportRow {
    std::string source;       ///< e.g. "moran", "paintbox-exact"
    Params params;
    std::optional<std::size_t> L;
    std::optional<double> q;
    std::optional<std::size_t> H;
    std::optional<double> p;  ///< coin-flip probability for qp rows
    bool analytic = false;
    PairStats stats;
    PairCounts counts;        ///< empty for analytic rows
    LawCounts law;            ///< empty for analytic rows

    /// Source plus every parameter needed to regenerate the row.
    std::string label() const;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ReportTable {
    std::vector<ReportRow> rows;
    std::map<std::string, std::string> metadata;
    std::vector<CheckResult> checks;

    bool all_checks_passed() const;
};

unsigned default_thread_count();

namespace detail {
void progress_note(const std::string& label, std::uint64_t done, std::uint64_t total);
}

/// Runs fn(rng, i) for i in [0, count) across `threads` workers, where
/// rng = Rng::stream(master_seed, i). Results come back in index order, so
/// they never depend on the thread count or on scheduling.
template <class Fn>
auto run_replicates(std::uint64_t count, std::uint64_t master_seed, unsigned threads, Fn fn,
                    const std::string& progress_label = {})
    -> std::vector<decltype(fn(std::declval<Rng&>(), std::uint64_t{}))>
{
    using Result = decltype(fn(std::declval<Rng&>(), std::uint64_t{}));
    std::vector<Result> out(count);
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> done{0};
    std::mutex err_mu;
    std::exception_ptr error;

    auto worker = [&] {
        while (true) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                Rng rng = Rng::stream(master_seed, i);
                out[i] = fn(rng, i);
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (!error)
                    error = std::current_exception();
                next.store(count);
                return;
            }
            const std::uint64_t d = done.fetch_add(1) + 1;
            if (!progress_label.empty() && count >= 10 && d % (count / 10) == 0)
                detail::progress_note(progress_label, d, count);
        }
    };

    threads = std::max(1u, threads);
    if (threads == 1 || count < 2) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const auto n = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (error)
        std::rethrow_exception(error);
    return out;
}

/// Half the L1 distance between the empirical laws. Throws
/// std::invalid_argument on empty input or differing n.
double estimate_tv_distance(std::span<const MarkedPartition> a,
                            std::span<const MarkedPartition> b);
double tv_distance(const LawCounts& a, const LawCounts& b);

/// Folds sampled partitions into pair counts (elements 1, 2) and the law.
void tally(const MarkedPartition& pi, PairCounts& counts, LawCounts& law);

ReportTable run_experiment(const ExperimentConfig& cfg);

void write_csv(const ReportTable& table, std::ostream& os);
void write_json(const ReportTable& table, std::ostream& os);

/// Writes to `path` (stdout when empty or "-"); throws IoError.
void write_report(const ReportTable& table, const std::string& path, Format format);

} // namespace sweeplab
