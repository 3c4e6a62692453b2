#pragma once

#include "sparesim/bathtub.hpp"
#include "sparesim/scheme.hpp"
#include "sparesim/stats.hpp"
#include "sparesim/survival.hpp"

#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

namespace sparesim {

enum class LossMode { exact, profile };
enum class ExhaustionPolicy { continue_unrepaired, immediate_loss };

struct SimConfig {
    ArrayScheme scheme;
    std::optional<std::int64_t> spares;  // nullopt = unlimited pool
    double mission_years = 4.0;
    double repair_years = 1.0 / 365.25;  // 24 hours
    BathtubProfile bathtub;
    RateInterpretation interp = RateInterpretation::hazard_rate;
    ExhaustionPolicy exhaustion = ExhaustionPolicy::continue_unrepaired;
    LossMode loss_mode = LossMode::exact;
    std::optional<SurvivalProfile> profile;  // required in profile mode
    std::uint64_t runs = 20'000'000;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument

    bool operator==(const SimConfig&) const = default;
};

class CancelledError : public std::runtime_error {
  public:
    CancelledError() : std::runtime_error("campaign cancelled") {}
};

enum class LossTrigger { fatal_pattern, policy_exhaustion };

struct RunOutcome {
    bool survived = true;
    double loss_time = 0.0;  // valid when !survived
    LossTrigger trigger = LossTrigger::fatal_pattern;
    std::optional<double> spares_exhausted_at;
    int peak_concurrent_failures = 0;
};

// One mission of one array. Every disk (including spares) is new at t = 0
// and ages in wall-clock time; a rebuilt position carries the committed
// spare's own failure clock. Deterministic given (config, run_index).
RunOutcome simulate_run(const SimConfig& config, std::uint64_t run_index);

// Monte Carlo campaign over config.runs independent missions. Outcomes
// depend only on (seed, run_index), and aggregation is commutative, so the
// estimate is identical for every worker count. workers = 0 picks the
// hardware concurrency. The optional cancel flag abandons the campaign
// between chunks (no partial estimate is produced).
ReliabilityEstimate simulate(const SimConfig& config, int workers = 0,
                             const std::atomic<bool>* cancel = nullptr);

struct SpareProbe {
    std::optional<std::int64_t> spares;
    ReliabilityEstimate estimate;
};

struct SpareSearchResult {
    bool reachable = false;
    std::int64_t min_spares = 0;  // valid when reachable
    std::vector<SpareProbe> trace;
};

// Smallest spare count whose lower Wilson bound, in nines, meets the
// target. Probes the unlimited pool first (otherwise the target is
// unreachable), then grows the count exponentially and bisects. All probes
// reuse the config's seed schedule, so estimates are monotone-consistent
// across the search.
SpareSearchResult min_spares_for_target(const SimConfig& base, double target_nines,
                                        int workers = 0);

}  // namespace sparesim
