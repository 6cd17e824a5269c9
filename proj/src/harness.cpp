#include "sweeplab/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "sweeplab/approx_p.hpp"
#include "sweeplab/branching.hpp"
#include "sweeplab/genealogy.hpp"
#include "sweeplab/paintbox.hpp"

namespace sweeplab {

namespace {

constexpr const char* kPreset = "sweep-2004";

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::size_t default_L(const Params& p)
{
    const auto L = static_cast<std::size_t>(std::floor(2.0 * p.N * p.s));
    return std::max<std::size_t>(1, L);
}

ReportRow mc_row(std::string source, const Params& params,
                 const std::vector<MarkedPartition>& draws)
{
    ReportRow row;
    row.source = std::move(source);
    row.params = params;
    for (const auto& pi : draws)
        tally(pi, row.counts, row.law);
    row.stats = row.counts.stats();
    return row;
}

ReportRow analytic_row(std::string source, const Params& params, const PairStats& stats)
{
    ReportRow row;
    row.source = std::move(source);
    row.params = params;
    row.analytic = true;
    row.stats = stats;
    return row;
}

void add_identity_checks(ReportTable& table)
{
    for (const auto& row : table.rows) {
        const double resid = std::abs(row.stats.identity_residual());
        double se2 = 0.0;
        for (double e : row.stats.se)
            se2 += e * e;
        const double tol = row.analytic ? 1e-12 : std::max(1e-12, 4.0 * std::sqrt(se2));
        table.checks.push_back({"identity:" + row.label(), resid <= tol,
                                "residual=" + fmt(resid) + " tol=" + fmt(tol)});
    }
}

struct Runner {
    const ResolvedConfig& rc;
    ReportTable& table;

    std::string tag(const std::string& what) const
    {
        return rc.cfg.progress ? what : std::string{};
    }

    std::vector<MarkedPartition> moran_draws(const Params& p, unsigned threads) const
    {
        return run_replicates(
            rc.cfg.reps, p.seed, threads,
            [&p](Rng& rng, std::uint64_t) {
                const SampleAncestry sa = simulate_sample_ancestry(p, rng);
                return partition_by_ancestor(sa.ancestor_at_0, sa.initial_mutant);
            },
            tag("moran r=" + fmt(p.r)));
    }

    std::vector<MarkedPartition> paintbox_draws(const Params& p, std::size_t L, std::uint64_t reps,
                                                unsigned threads) const
    {
        return run_replicates(
            reps, p.seed, threads,
            [&p, L](Rng& rng, std::uint64_t) {
                return sample_paintbox_partition(p.n, p.r, p.s, L, rng);
            },
            tag("paintbox"));
    }

    void moran(const Params& p)
    {
        table.rows.push_back(mc_row("moran", p, moran_draws(p, rc.threads)));
    }

    void qp(const Params& p)
    {
        const double prob = alpha_and_p(p.N, p.r, p.s).p;
        auto exact = analytic_row("qp-analytic", p, qp_pair_stats(prob));
        exact.p = prob;
        table.rows.push_back(exact);
        auto draws = run_replicates(
            rc.cfg.reps, p.seed, rc.threads,
            [&p, prob](Rng& rng, std::uint64_t) { return sample_p_partition(p.n, prob, rng); },
            tag("qp"));
        auto row = mc_row("qp", p, draws);
        row.p = prob;
        table.rows.push_back(std::move(row));
    }

    void paintbox_exact(const Params& p, std::size_t L)
    {
        auto row = analytic_row("paintbox-exact", p, paintbox_pair_stats_exact(p.r, p.s, L));
        row.L = L;
        table.rows.push_back(std::move(row));
    }

    void paintbox(const Params& p)
    {
        paintbox_exact(p, rc.L);
        auto row = mc_row("paintbox", p,
                          paintbox_draws(p, rc.L, rc.cfg.reps, rc.threads));
        row.L = rc.L;
        table.rows.push_back(std::move(row));
    }

    void paintbox_thinned(const Params& p)
    {
        const std::size_t L = rc.L;
        const double q = rc.q;
        auto draws = run_replicates(
            rc.cfg.reps, p.seed, rc.threads,
            [&p, L, q](Rng& rng, std::uint64_t) {
                return sample_paintbox_thinned(p.n, p.r, p.s, L, q, rng);
            },
            tag("paintbox-thinned"));
        auto row = mc_row("paintbox-thinned", p, draws);
        row.L = L;
        row.q = q;
        table.rows.push_back(std::move(row));
    }

    void skeleton(const Params& p)
    {
        const std::size_t H = rc.H;
        auto draws = run_replicates(
            rc.cfg.reps, p.seed, rc.threads,
            [&p, H](Rng& rng, std::uint64_t) {
                return simulate_yule_skeleton_partition(p.n, p.r, p.s, H, rng);
            },
            tag("skeleton"));
        auto row = mc_row("skeleton", p, draws);
        row.H = H;
        table.rows.push_back(std::move(row));
        paintbox_exact(p, H);
    }

    void table_mode()
    {
        for (double r : rc.r_values) {
            Params p = rc.params;
            p.r = r;
            const std::size_t L = default_L(p);
            const double prob = alpha_and_p(p.N, p.r, p.s).p;
            auto exact = analytic_row("qp-analytic", p, qp_pair_stats(prob));
            exact.p = prob;
            table.rows.push_back(std::move(exact));
            moran(p);
            paintbox_exact(p, L);
        }
    }

    void validate()
    {
        Params p = rc.params;
        p.n = std::max<std::uint32_t>(p.n, 2);
        auto& checks = table.checks;

        // coin-flip law normalizes
        const double prob = alpha_and_p(p.N, p.r, p.s).p;
        double worst = 0.0;
        for (std::size_t n = 1; n <= 6; ++n) {
            double total = 0.0;
            for (const auto& pi : enumerate_marked_partitions(n))
                total += qp_probability(pi, prob);
            worst = std::max(worst, std::abs(total - 1.0));
        }
        checks.push_back({"qp-normalization", worst < 1e-12, "max deviation=" + fmt(worst)});

        // urn probabilities normalize
        worst = 0.0;
        for (std::uint32_t k = 2; k <= 10; ++k)
            for (std::uint32_t n = 0; n <= 8; ++n) {
                double total = 0.0;
                double binom = 1.0;
                for (std::uint32_t a = 0; a <= n; ++a) {
                    total += binom * polya_q(k, a, n);
                    binom = binom * (n - a) / (a + 1.0);
                }
                worst = std::max(worst, std::abs(total - 1.0));
            }
        checks.push_back({"polya-normalization", worst < 1e-12, "max deviation=" + fmt(worst)});

        // sticks sum to one
        worst = 0.0;
        bool nonneg = true;
        for (std::uint64_t i = 0; i < 100; ++i) {
            Rng rng = Rng::stream(p.seed ^ 0xa5a5a5a5ULL, i);
            const auto [draw, pi] = sample_paintbox(p.n, p.r, p.s, rc.L, rng);
            double total = 0.0;
            for (std::size_t k = 1; k <= draw.L; ++k) {
                total += draw.Y[k];
                nonneg = nonneg && draw.Y[k] >= 0.0;
            }
            worst = std::max(worst, std::abs(total - 1.0));
        }
        checks.push_back({"stick-sum", nonneg && worst < 1e-12, "max deviation=" + fmt(worst)});

        // sampler against the closed form
        paintbox(p);
        const auto& exact = table.rows[table.rows.size() - 2].stats;
        const auto& mc = table.rows.back().stats;
        double worst_z = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
            const double se = std::max(mc.se[c], 1e-300);
            worst_z = std::max(worst_z, std::abs(mc.values()[c] - exact.values()[c]) / se);
        }
        checks.push_back({"paintbox-mc-vs-exact", worst_z <= 4.0, "max |z|=" + fmt(worst_z)});

        // thread count never changes counts
        const std::uint64_t small = std::min<std::uint64_t>(rc.cfg.reps, 2000);
        PairCounts one, many;
        LawCounts law_one, law_many;
        for (const auto& pi : paintbox_draws(p, rc.L, small, 1))
            tally(pi, one, law_one);
        for (const auto& pi : paintbox_draws(p, rc.L, small, std::max(2u, rc.threads)))
            tally(pi, many, law_many);
        checks.push_back({"determinism", one == many && law_one == law_many,
                          std::to_string(small) + " paintbox draws"});

        // forward label propagation agrees with the backward trace
        bool agree = true;
        const std::uint64_t sweeps = std::min<std::uint64_t>(rc.cfg.reps, 2);
        for (std::uint64_t i = 0; i < sweeps; ++i) {
            Rng a = Rng::stream(p.seed, i);
            Rng b = Rng::stream(p.seed, i);
            const SweepTrajectory traj = simulate_conditioned_sweep(p, a);
            const AncestryTrace trace = trace_ancestry(traj, p.n);
            const SampleAncestry fwd = simulate_sample_ancestry(p, b);
            agree = agree && fwd.ancestor_at_0 == trace.ancestor_at_0 &&
                    fwd.initial_mutant == traj.initial_mutant;
        }
        checks.push_back({"trace-vs-forward", agree, std::to_string(sweeps) + " sweeps"});
    }
};

} // namespace

namespace detail {
void progress_note(const std::string& label, std::uint64_t done, std::uint64_t total)
{
    static std::mutex mu;
    std::lock_guard lock(mu);
    std::cerr << "[" << label << "] " << done << "/" << total << "\n";
}
} // namespace detail

Mode parse_mode(const std::string& name)
{
    static const std::map<std::string, Mode> modes = {
        {"moran", Mode::moran},       {"qp", Mode::qp},
        {"paintbox", Mode::paintbox}, {"paintbox_thinned", Mode::paintbox_thinned},
        {"skeleton", Mode::skeleton}, {"table", Mode::table},
        {"validate", Mode::validate}};
    const auto it = modes.find(name);
    if (it == modes.end())
        throw ConfigError("unknown mode '" + name + "'");
    return it->second;
}

std::string mode_name(Mode mode)
{
    switch (mode) {
    case Mode::moran: return "moran";
    case Mode::qp: return "qp";
    case Mode::paintbox: return "paintbox";
    case Mode::paintbox_thinned: return "paintbox_thinned";
    case Mode::skeleton: return "skeleton";
    case Mode::table: return "table";
    case Mode::validate: return "validate";
    }
    return "?";
}

Format parse_format(const std::string& name)
{
    if (name == "csv")
        return Format::csv;
    if (name == "json")
        return Format::json;
    throw ConfigError("format must be csv or json");
}

unsigned default_thread_count()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

ResolvedConfig resolve_config(const ExperimentConfig& cfg)
{
    ResolvedConfig rc;
    rc.cfg = cfg;
    RawParams raw = cfg.raw;
    if (cfg.mode == Mode::table && !cfg.preset.empty()) {
        if (cfg.preset != kPreset)
            throw ConfigError("unknown preset '" + cfg.preset + "'");
        raw.N = 10000;
        raw.s = 0.1;
        raw.r = 0.00106;
        rc.r_values = {0.00106, 0.00516};
    } else if (cfg.mode == Mode::table) {
        rc.r_values = {cfg.raw.r};
    } else if (!cfg.preset.empty()) {
        throw ConfigError("preset only applies to table mode");
    }

    try {
        rc.params = validate_params(raw);
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    if (cfg.reps < 1)
        throw ConfigError("reps must be at least 1");
    if (cfg.mode != Mode::validate && rc.params.n < 2)
        throw ConfigError("sample-size must be at least 2 for pair statistics");

    const bool uses_paintbox = cfg.mode == Mode::paintbox || cfg.mode == Mode::paintbox_thinned ||
                               cfg.mode == Mode::skeleton || cfg.mode == Mode::table ||
                               cfg.mode == Mode::validate;
    if (uses_paintbox)
        for (double r : rc.r_values.empty() ? std::vector<double>{rc.params.r} : rc.r_values)
            if (!(r < rc.params.s))
                throw ConfigError("paintbox requires r < s");

    if (cfg.L) {
        if (*cfg.L < 1)
            throw ConfigError("L must be at least 1");
        rc.L = static_cast<std::size_t>(*cfg.L);
    } else {
        rc.L = default_L(rc.params);
    }

    if (cfg.mode == Mode::paintbox_thinned) {
        if (!cfg.q)
            throw ConfigError("paintbox_thinned requires q");
        if (!(*cfg.q >= 0.0 && *cfg.q <= 1.0))
            throw ConfigError("q must lie in [0,1]");
        rc.q = *cfg.q;
    } else if (cfg.q && cfg.mode != Mode::paintbox) {
        throw ConfigError("q only applies to paintbox mode");
    }

    if (cfg.mode == Mode::skeleton) {
        if (!cfg.H)
            throw ConfigError("skeleton requires H");
        if (*cfg.H < 1)
            throw ConfigError("H must be at least 1");
        rc.H = static_cast<std::size_t>(*cfg.H);
        if (rc.params.n > rc.H)
            throw ConfigError("sample-size exceeds H");
    } else if (cfg.H) {
        throw ConfigError("H only applies to skeleton mode");
    }

    rc.threads = cfg.threads == 0 ? default_thread_count() : cfg.threads;
    return rc;
}

std::string ReportRow::label() const
{
    std::ostringstream os;
    os << source << "(N=" << params.N << " s=" << fmt(params.s) << " r=" << fmt(params.r)
       << " n=" << params.n;
    if (!analytic)
        os << " seed=" << params.seed;
    if (L)
        os << " L=" << *L;
    if (q)
        os << " q=" << fmt(*q);
    if (H)
        os << " H=" << *H;
    os << ")";
    return os.str();
}

bool ReportTable::all_checks_passed() const
{
    for (const auto& c : checks)
        if (!c.passed)
            return false;
    return true;
}

double estimate_tv_distance(std::span<const MarkedPartition> a, std::span<const MarkedPartition> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("tv distance needs non-empty samples");
    const std::size_t n = a.front().n();
    LawCounts la, lb;
    for (const auto& pi : a) {
        if (pi.n() != n)
            throw std::invalid_argument("samples have different n");
        ++la[pi.to_string()];
    }
    for (const auto& pi : b) {
        if (pi.n() != n)
            throw std::invalid_argument("samples have different n");
        ++lb[pi.to_string()];
    }
    return tv_distance(la, lb);
}

double tv_distance(const LawCounts& a, const LawCounts& b)
{
    double na = 0.0, nb = 0.0;
    for (const auto& [k, c] : a)
        na += static_cast<double>(c);
    for (const auto& [k, c] : b)
        nb += static_cast<double>(c);
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("tv distance needs non-empty samples");
    double sum = 0.0;
    for (const auto& [k, c] : a) {
        const auto it = b.find(k);
        const double fb = it == b.end() ? 0.0 : static_cast<double>(it->second) / nb;
        sum += std::abs(static_cast<double>(c) / na - fb);
    }
    for (const auto& [k, c] : b)
        if (!a.count(k))
            sum += static_cast<double>(c) / nb;
    return 0.5 * sum;
}

void tally(const MarkedPartition& pi, PairCounts& counts, LawCounts& law)
{
    counts.add(pi);
    ++law[pi.to_string()];
}

ReportTable run_experiment(const ExperimentConfig& cfg)
{
    const ResolvedConfig rc = resolve_config(cfg);
    const auto start = std::chrono::steady_clock::now();
    ReportTable table;
    Runner run{rc, table};

    switch (cfg.mode) {
    case Mode::moran: run.moran(rc.params); break;
    case Mode::qp: run.qp(rc.params); break;
    case Mode::paintbox: run.paintbox(rc.params); break;
    case Mode::paintbox_thinned: run.paintbox_thinned(rc.params); break;
    case Mode::skeleton: run.skeleton(rc.params); break;
    case Mode::table: run.table_mode(); break;
    case Mode::validate: run.validate(); break;
    }
    add_identity_checks(table);

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto& md = table.metadata;
    md["mode"] = mode_name(cfg.mode);
    md["N"] = std::to_string(rc.params.N);
    md["s"] = fmt(rc.params.s);
    md["r"] = fmt(rc.params.r);
    md["n"] = std::to_string(rc.params.n);
    md["seed"] = std::to_string(rc.params.seed);
    md["reps"] = std::to_string(cfg.reps);
    md["threads"] = std::to_string(rc.threads);
    md["runtime_seconds"] = fmt(secs);
    if (!cfg.preset.empty())
        md["preset"] = cfg.preset;
    return table;
}

void write_csv(const ReportTable& table, std::ostream& os)
{
    os << "statistic,estimate,std_error,replicates\n";
    for (const auto& row : table.rows) {
        const std::string label = row.label();
        const auto vals = row.stats.values();
        for (std::size_t c = 0; c < 4; ++c)
            os << csv_field(label + "." + kPairStatNames[c]) << ',' << fmt(vals[c]) << ','
               << fmt(row.stats.se[c]) << ',' << row.stats.n_reps << '\n';
        const double reps = static_cast<double>(row.counts.reps);
        for (const auto& [key, count] : row.law) {
            const double f = static_cast<double>(count) / reps;
            os << csv_field(label + ".law:" + key) << ',' << fmt(f) << ','
               << fmt(std::sqrt(f * (1.0 - f) / reps)) << ',' << row.counts.reps << '\n';
        }
    }
    if (table.metadata.count("mode") && table.metadata.at("mode") == "validate")
        for (const auto& c : table.checks)
            os << csv_field("check:" + c.name) << ',' << (c.passed ? 1 : 0) << ",0,0\n";
}

void write_json(const ReportTable& table, std::ostream& os)
{
    using nlohmann::json;
    json doc;
    doc["metadata"] = table.metadata;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json j;
        j["source"] = row.source;
        j["label"] = row.label();
        j["analytic"] = row.analytic;
        j["params"] = {{"N", row.params.N},
                       {"s", row.params.s},
                       {"r", row.params.r},
                       {"n", row.params.n},
                       {"seed", row.params.seed}};
        if (row.L)
            j["params"]["L"] = *row.L;
        if (row.q)
            j["params"]["q"] = *row.q;
        if (row.H)
            j["params"]["H"] = *row.H;
        if (row.p)
            j["params"]["p"] = *row.p;
        const auto vals = row.stats.values();
        for (std::size_t c = 0; c < 4; ++c) {
            j["estimate"][kPairStatNames[c]] = vals[c];
            j["std_error"][kPairStatNames[c]] = row.stats.se[c];
        }
        j["replicates"] = row.stats.n_reps;
        if (!row.analytic) {
            j["counts"] = {{"reps", row.counts.reps},
                           {"neither", row.counts.neither},
                           {"one", row.counts.one},
                           {"both_distinct", row.counts.both_distinct},
                           {"both_same", row.counts.both_same}};
            j["law"] = row.law;
        }
        rows.push_back(std::move(j));
    }
    doc["rows"] = std::move(rows);
    json checks = json::array();
    for (const auto& c : table.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    doc["checks"] = std::move(checks);
    os << doc.dump(2) << '\n';
}

void write_report(const ReportTable& table, const std::string& path, Format format)
{
    auto emit = [&](std::ostream& os) {
        if (format == Format::csv)
            write_csv(table, os);
        else
            write_json(table, os);
    };
    if (path.empty() || path == "-") {
        emit(std::cout);
        std::cout.flush();
        if (!std::cout)
            throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path + "' for writing");
    emit(f);
    f.flush();
    if (!f)
        throw IoError("failed writing '" + path + "'");
}

} // namespace sweeplab
