#pragma once

#include "sparesim/closed_form.hpp"
#include "sparesim/sim.hpp"
#include "sparesim/stats.hpp"
#include "sparesim/survival.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sparesim {

// ---- campaign results ----------------------------------------------------

// CSV schema for campaign results; one row per named configuration.
std::string results_csv_header();
std::string results_csv_row(const std::string& name, const SimConfig& config,
                            const ReliabilityEstimate& est, double wall_seconds);

// Full provenance record for one campaign: config echo plus results,
// including both CI methods.
nlohmann::json campaign_record(const std::string& name, const SimConfig& config,
                               const ReliabilityEstimate& est, double wall_seconds);

// Human-readable result row in the layout of the reference tables:
// data, parity, spares, overhead, nines CI.
std::string results_table_header();
std::string results_table_row(const SimConfig& config, const ReliabilityEstimate& est);

// ---- survival profile dumps ----------------------------------------------

struct ProfileDump {
    std::string scheme;
    std::string method;  // "enumeration" | "closed_form"
    SurvivalProfile profile;
};

std::string profile_csv_header();
std::string profile_csv_row(const ProfileDump& dump);
nlohmann::json profile_record(const ProfileDump& dump);

// ---- reference tables ----------------------------------------------------

// Published reference results for the built-in `table` workloads:
// reliability intervals (in nines) for selected self-repairing arrays over
// a four-year mission.
struct ReferenceRow {
    ArrayScheme scheme;
    std::optional<std::int64_t> spares;
    Interval reference_nines;
};

// id: 1 = two-dimensional arrays, 2 = RAID-6 groups of 12 disks,
// 3 = triple-parity groups of 15 disks.
const std::vector<ReferenceRow>& reference_table(int id);

}  // namespace sparesim
