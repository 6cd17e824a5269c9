// Command-line front end for the sweep laboratory.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "sweeplab/harness.hpp"

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// Appending creates a missing file but never clobbers an existing one.
bool output_writable(const std::string& path)
{
    if (path.empty() || path == "-")
        return true;
    std::ofstream probe(path, std::ios::app);
    return static_cast<bool>(probe);
}

} // namespace

int main(int argc, char** argv)
{
    using namespace sweeplab;

    CLI::App app{"Monte-Carlo laboratory for the two-locus Moran selective sweep"};
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    ExperimentConfig cfg;
    std::string format = "csv";
    std::int64_t L = 0, H = 0;
    double q = 0.0;

    app.add_option("--N", cfg.raw.N, "half the population size (2N haploids)");
    app.add_option("--s", cfg.raw.s, "selective advantage in (0,1)");
    app.add_option("--r", cfg.raw.r, "recombination probability per birth in [0,1)");
    app.add_option("--sample-size", cfg.raw.n, "number of sampled lineages");
    app.add_option("--reps", cfg.reps, "replicate count");
    app.add_option("--seed", cfg.raw.seed, "master seed");
    app.add_option("--out", cfg.out, "output path (stdout if omitted)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    app.add_flag("--progress", cfg.progress, "progress notes on stderr");

    auto* moran = app.add_subcommand("moran", "Moran model sweeps, pair statistics of the sample");
    auto* qp = app.add_subcommand("qp", "coin-flip partition law");
    auto* paintbox = app.add_subcommand("paintbox", "stick-breaking paintbox law");
    auto* L_opt = paintbox->add_option("--L", L, "number of levels (default floor(2Ns))");
    auto* q_opt = paintbox->add_option("--q", q, "thinning probability");
    auto* skeleton = app.add_subcommand("skeleton", "Yule skeleton with types");
    auto* H_opt = skeleton->add_option("--H", H, "skeleton size")->required();
    auto* table = app.add_subcommand("table", "comparison table (coin-flip, Moran, paintbox)");
    table->add_option("--preset", cfg.preset, "named parameter set, e.g. sweep-2004");
    auto* validate = app.add_subcommand("validate", "internal consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (moran->parsed())
            cfg.mode = Mode::moran;
        else if (qp->parsed())
            cfg.mode = Mode::qp;
        else if (paintbox->parsed())
            cfg.mode = q_opt->count() ? Mode::paintbox_thinned : Mode::paintbox;
        else if (skeleton->parsed())
            cfg.mode = Mode::skeleton;
        else if (table->parsed())
            cfg.mode = Mode::table;
        else if (validate->parsed())
            cfg.mode = Mode::validate;
        if (L_opt->count())
            cfg.L = L;
        if (q_opt->count())
            cfg.q = q;
        if (H_opt->count())
            cfg.H = H;
        cfg.format = parse_format(format);
        resolve_config(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (!output_writable(cfg.out)) {
        std::cerr << "I/O error: cannot write '" << cfg.out << "'\n";
        return kExitIo;
    }

    try {
        const ReportTable report = run_experiment(cfg);
        write_report(report, cfg.out, cfg.format);
        std::cerr << "done in " << report.metadata.at("runtime_seconds") << " s\n";
        if (!report.all_checks_passed()) {
            for (const auto& c : report.checks)
                if (!c.passed)
                    std::cerr << "FAILED " << c.name << ": " << c.detail << "\n";
            return kExitChecksFailed;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
