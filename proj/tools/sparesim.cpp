#include "sparesim/closed_form.hpp"
#include "sparesim/config.hpp"
#include "sparesim/report.hpp"
#include "sparesim/sim.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace sparesim;

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_config = 2;
constexpr int exit_interrupted = 130;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted.store(true); }

int env_workers() {
    if (const char* env = std::getenv("SPARESIM_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;
}

int resolve_workers(int flag_workers, int config_workers) {
    if (flag_workers > 0) return flag_workers;
    if (config_workers > 0) return config_workers;
    return env_workers();  // 0 lets the engine pick the hardware concurrency
}

struct SchemeFlags {
    int twod = 0;
    std::string raid6;
    std::string tp;

    void attach(CLI::App* cmd) {
        auto* a = cmd->add_option("--twod", twod, "two-dimensional array with N parity stripes");
        auto* b = cmd->add_option("--raid6", raid6, "RAID-6 groups, MxN (M groups of N disks)");
        auto* c = cmd->add_option("--tp", tp, "triple-parity groups, MxN");
        a->excludes(b)->excludes(c);
        b->excludes(c);
    }

    ArrayScheme build() const {
        if (twod > 0) return ArrayScheme::two_d(twod);
        if (!raid6.empty()) return ArrayScheme::parse("raid6:" + raid6);
        if (!tp.empty()) return ArrayScheme::parse("tp:" + tp);
        throw ConfigError("pick a scheme: --twod N, --raid6 MxN or --tp MxN");
    }
};

SurvivalProfile profile_for(const ArrayScheme& scheme) {
    if (scheme.is_grouped())
        return profile_from_closed_form(scheme.group_count(), scheme.group_size(),
                                        scheme.parity_per_group());
    return survival_profile(scheme);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_campaign_outputs(const std::string& out_dir, const std::string& name,
                            const SimConfig& cfg, const ReliabilityEstimate& est,
                            double wall_seconds) {
    if (out_dir.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    fs::path csv_path = fs::path(out_dir) / "results.csv";
    bool fresh = !fs::exists(csv_path) || fs::file_size(csv_path) == 0;
    std::ofstream csv(csv_path, std::ios::app);
    if (fresh) csv << results_csv_header() << "\n";
    csv << results_csv_row(name, cfg, est, wall_seconds) << "\n";

    std::ofstream json_out(fs::path(out_dir) / (name + ".json"));
    json_out << campaign_record(name, cfg, est, wall_seconds).dump(2) << "\n";
}

// ---- analyze ---------------------------------------------------------------

int cmd_analyze(const SchemeFlags& flags, const EnumerationOptions& opts,
                const std::string& out_dir) {
    ArrayScheme scheme = flags.build();
    SurvivalProfile enumerated = survival_profile(scheme, opts);

    auto print_profile = [&](const char* method, const SurvivalProfile& p) {
        std::cout << method << ": size=" << p.size << " tolerated=" << p.tolerated;
        for (int i = 0; i < 3; ++i) {
            const Rational& f = p.survivable[i];
            std::cout << " f" << i + 1 << "=" << boost::multiprecision::numerator(f) << "/"
                      << boost::multiprecision::denominator(f) << " (" << decimal_string(f, 12)
                      << ")";
            if (p.sampled[i]) std::cout << " [sampled, se=" << p.std_error[i] << "]";
        }
        std::cout << "\n";
    };

    std::cout << "scheme " << scheme.describe() << ": " << scheme.total_disks() << " disks ("
              << scheme.data_disks() << " data, " << scheme.parity_disks() << " parity)\n";
    print_profile("enumeration", enumerated);

    std::vector<ProfileDump> dumps;
    dumps.push_back({scheme.describe(), "enumeration", enumerated});

    if (scheme.is_grouped()) {
        SurvivalProfile closed = profile_for(scheme);
        print_profile("closed_form", closed);
        dumps.push_back({scheme.describe(), "closed_form", closed});
        bool equal = true;
        for (int i = 0; i < 3; ++i) {
            if (enumerated.sampled[i]) continue;  // sampled levels are estimates
            if (closed.survivable[i] != enumerated.survivable[i]) equal = false;
        }
        if (equal) {
            std::cout << "verdict: closed-form = enumeration (exact rational agreement)\n";
        } else {
            std::cout << "verdict: MISMATCH between closed form and enumeration\n";
            for (int i = 0; i < 3; ++i) {
                if (enumerated.sampled[i] ||
                    closed.survivable[i] == enumerated.survivable[i])
                    continue;
                std::cout << "  f" << i + 1 << ": enumeration "
                          << decimal_string(enumerated.survivable[i], 12) << " vs closed form "
                          << decimal_string(closed.survivable[i], 12) << "\n";
            }
        }
    } else {
        std::uint64_t closed_triples = fatal_triple_count_closed(scheme.stripe_count());
        BigInt patterns = binomial(scheme.total_disks(), 3);
        BigInt fatal_enumerated =
            patterns - count_recoverable(scheme, 3, opts).survivors;
        std::cout << "fatal triples: closed form " << closed_triples << ", enumeration "
                  << fatal_enumerated << " of " << patterns << " patterns\n";
    }

    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        std::string base = scheme.describe();
        for (auto& c : base)
            if (c == ':') c = '_';
        std::ofstream csv(fs::path(out_dir) / (base + "_profile.csv"));
        csv << profile_csv_header() << "\n";
        for (const auto& d : dumps) csv << profile_csv_row(d) << "\n";
        nlohmann::json records = nlohmann::json::array();
        for (const auto& d : dumps) records.push_back(profile_record(d));
        std::ofstream json_out(fs::path(out_dir) / (base + "_profile.json"));
        json_out << records.dump(2) << "\n";
    }
    return exit_ok;
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const std::string& config_path, std::uint64_t runs_override,
                 bool has_seed_override, std::uint64_t seed_override, int flag_workers,
                 const std::string& mode_override, const std::string& interp_override,
                 const std::string& exhaustion_override, const std::string& out_override) {
    CampaignConfig campaign = load_campaign_file(config_path);
    std::string out_dir = !out_override.empty() ? out_override : campaign.out_dir;
    int workers = resolve_workers(flag_workers, campaign.workers);

    std::cout << results_table_header() << "\n";
    for (auto& named : campaign.configs) {
        if (g_interrupted.load()) {
            std::cerr << "interrupted; completed rows were flushed\n";
            return exit_interrupted;
        }
        SimConfig& cfg = named.sim;
        if (runs_override > 0) cfg.runs = runs_override;
        if (has_seed_override) cfg.seed = seed_override;
        if (mode_override == "exact") cfg.loss_mode = LossMode::exact;
        if (mode_override == "profile") cfg.loss_mode = LossMode::profile;
        if (interp_override == "hazard") cfg.interp = RateInterpretation::hazard_rate;
        if (interp_override == "afr") cfg.interp = RateInterpretation::annualized_probability;
        if (exhaustion_override == "continue")
            cfg.exhaustion = ExhaustionPolicy::continue_unrepaired;
        if (exhaustion_override == "loss") cfg.exhaustion = ExhaustionPolicy::immediate_loss;
        if (cfg.loss_mode == LossMode::profile && !cfg.profile) cfg.profile = profile_for(cfg.scheme);
        cfg.validate();

        auto start = std::chrono::steady_clock::now();
        ReliabilityEstimate est;
        try {
            est = simulate(cfg, workers, &g_interrupted);
        } catch (const CancelledError&) {
            std::cerr << "interrupted; completed rows were flushed\n";
            return exit_interrupted;
        }
        double wall = seconds_since(start);
        std::cout << results_table_row(cfg, est) << "\n";
        write_campaign_outputs(out_dir, named.name, cfg, est, wall);
    }
    return exit_ok;
}

// ---- sweep -----------------------------------------------------------------

int cmd_sweep(const SchemeFlags& flags, double target, std::uint64_t runs, std::uint64_t seed,
              int flag_workers, const std::string& mode, const std::string& interp) {
    SimConfig base;
    base.scheme = flags.build();
    base.runs = runs;
    base.seed = seed;
    if (mode == "profile") {
        base.loss_mode = LossMode::profile;
        base.profile = profile_for(base.scheme);
    }
    if (interp == "afr") base.interp = RateInterpretation::annualized_probability;
    int workers = resolve_workers(flag_workers, 0);

    SpareSearchResult result = min_spares_for_target(base, target, workers);
    std::cout << "search trace (" << runs << " runs per probe, seed " << seed << "):\n";
    for (const auto& probe : result.trace) {
        std::cout << "  spares=" << (probe.spares ? std::to_string(*probe.spares) : "unlimited")
                  << " losses=" << probe.estimate.losses << " nines CI=("
                  << format_nines(probe.estimate.nines_ci.low) << ", "
                  << format_nines(probe.estimate.nines_ci.high) << ")\n";
    }
    if (!result.reachable) {
        std::cout << "verdict: UNREACHABLE -- even an unlimited spare pool misses "
                  << format_nines(target) << " nines over the mission\n";
        return exit_ok;
    }
    std::cout << "verdict: " << result.min_spares << " spares reach a lower CI bound of "
              << format_nines(target) << " nines\n";
    return exit_ok;
}

// ---- table -----------------------------------------------------------------

int cmd_table(int id, std::uint64_t runs, std::uint64_t seed, int flag_workers,
              const std::string& out_dir) {
    const auto& rows = reference_table(id);
    int workers = resolve_workers(flag_workers, 0);
    std::cout << results_table_header() << "   " << "reference CI     verdict\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (g_interrupted.load()) return exit_interrupted;
        const ReferenceRow& row = rows[i];
        SimConfig cfg;
        cfg.scheme = row.scheme;
        cfg.spares = row.spares;
        cfg.runs = runs;
        cfg.seed = seed;

        auto start = std::chrono::steady_clock::now();
        ReliabilityEstimate est;
        try {
            est = simulate(cfg, workers, &g_interrupted);
        } catch (const CancelledError&) {
            return exit_interrupted;
        }
        double wall = seconds_since(start);
        bool overlap = est.nines_ci.low <= row.reference_nines.high &&
                       row.reference_nines.low <= est.nines_ci.high;
        std::cout << results_table_row(cfg, est) << "   (" << format_nines(row.reference_nines.low)
                  << ", " << format_nines(row.reference_nines.high) << ")     "
                  << (overlap ? "overlap" : "NO overlap") << "\n";
        write_campaign_outputs(out_dir, "table" + std::to_string(id) + "_row" + std::to_string(i),
                               cfg, est, wall);
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    CLI::App app{"reliability analysis of self-repairing disk arrays"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand(
        "analyze", "survival profile of a scheme by exhaustive enumeration (and closed form)");
    SchemeFlags analyze_scheme;
    analyze_scheme.attach(analyze);
    EnumerationOptions enum_opts;
    analyze->add_flag("--sample", enum_opts.allow_sampling,
                      "estimate levels over the subset budget by stratified sampling");
    analyze->add_option("--budget", enum_opts.subset_budget, "exhaustive enumeration budget");
    analyze->add_option("--samples", enum_opts.sample_count, "sample count past the budget");
    analyze->add_option("--sample-seed", enum_opts.sample_seed, "sampling seed");
    analyze->add_option("--threads", enum_opts.threads, "enumeration threads (0 = hardware)");
    std::string analyze_out;
    analyze->add_option("--out", analyze_out, "directory for profile CSV/JSON dumps");

    // simulate
    auto* simulate_cmd =
        app.add_subcommand("simulate", "run the campaigns of a config file");
    std::string config_path;
    simulate_cmd->add_option("config", config_path, "campaign config file")->required();
    std::uint64_t runs_override = 0;
    simulate_cmd->add_option("--runs", runs_override, "override run count for every campaign");
    std::uint64_t seed_override = 0;
    auto* seed_opt = simulate_cmd->add_option("--seed", seed_override, "override the seed");
    int sim_workers = 0;
    simulate_cmd->add_option("--workers", sim_workers,
                             "worker threads (default: config, then $SPARESIM_WORKERS)");
    std::string sim_mode, sim_interp, sim_exhaustion, sim_out;
    simulate_cmd->add_option("--mode", sim_mode, "override loss mode: exact|profile")
        ->check(CLI::IsMember({"exact", "profile"}));
    simulate_cmd->add_option("--interp", sim_interp, "override rate reading: hazard|afr")
        ->check(CLI::IsMember({"hazard", "afr"}));
    simulate_cmd
        ->add_option("--exhaustion", sim_exhaustion, "override exhaustion policy: continue|loss")
        ->check(CLI::IsMember({"continue", "loss"}));
    simulate_cmd->add_option("--out", sim_out, "output directory (overrides config)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "smallest spare count reaching a nines target");
    SchemeFlags sweep_scheme;
    sweep_scheme.attach(sweep);
    double sweep_target = 5.0;
    sweep->add_option("--target", sweep_target, "target nines (lower CI bound)")->required();
    std::uint64_t sweep_runs = 2'000'000;
    sweep->add_option("--runs", sweep_runs, "runs per probe");
    std::uint64_t sweep_seed = 0;
    sweep->add_option("--seed", sweep_seed, "seed (shared across probes)");
    int sweep_workers = 0;
    sweep->add_option("--workers", sweep_workers, "worker threads");
    std::string sweep_mode = "exact", sweep_interp = "hazard";
    sweep->add_option("--mode", sweep_mode, "loss mode: exact|profile")
        ->check(CLI::IsMember({"exact", "profile"}));
    sweep->add_option("--interp", sweep_interp, "rate reading: hazard|afr")
        ->check(CLI::IsMember({"hazard", "afr"}));

    // table
    auto* table = app.add_subcommand("table", "re-measure a built-in reference table");
    int table_id = 0;
    table->add_option("id", table_id, "reference table id: 1, 2 or 3")
        ->required()
        ->check(CLI::Range(1, 3));
    std::uint64_t table_runs = 20'000'000;
    table->add_option("--runs", table_runs, "runs per row");
    std::uint64_t table_seed = 0;
    table->add_option("--seed", table_seed, "seed");
    int table_workers = 0;
    table->add_option("--workers", table_workers, "worker threads");
    std::string table_out;
    table->add_option("--out", table_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (app.got_subcommand(analyze))
            return cmd_analyze(analyze_scheme, enum_opts, analyze_out);
        if (app.got_subcommand(simulate_cmd))
            return cmd_simulate(config_path, runs_override, seed_opt->count() > 0, seed_override,
                                sim_workers, sim_mode, sim_interp, sim_exhaustion, sim_out);
        if (app.got_subcommand(sweep))
            return cmd_sweep(sweep_scheme, sweep_target, sweep_runs, sweep_seed, sweep_workers,
                             sweep_mode, sweep_interp);
        if (app.got_subcommand(table))
            return cmd_table(table_id, table_runs, table_seed, table_workers, table_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const EnumerationBudgetError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_ok;
}
