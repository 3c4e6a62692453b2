#pragma once

#include "sparesim/sim.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sparesim {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct NamedConfig {
    std::string name;
    SimConfig sim;

    bool operator==(const NamedConfig&) const = default;
};

// A campaign file: global keys followed by one [section] per named
// configuration. Dialect (documented in the README):
//
//   # comment
//   seed = 42            (global; per-section override allowed)
//   runs = 20000000      (global default, per-section override)
//   workers = 8          (optional)
//   out = results        (optional output directory)
//
//   [twod10-s33]
//   scheme = twod:10     (twod:N | raid6:MxN | tp:MxN)
//   spares = 33          (integer or "unlimited")
//   mission_years = 4
//   repair_hours = 24
//   mode = exact         (exact | profile)
//   interp = hazard      (hazard | afr)
//   exhaustion = continue  (continue | loss)
//   bathtub = 0:0.051, 1.5:0.014, 3:0.118
//
// Unknown keys are rejected; a misspelled key never silently becomes a
// default.
struct CampaignConfig {
    std::uint64_t seed = 0;
    int workers = 0;           // 0 = unset (env/hardware decides)
    std::string out_dir;
    std::vector<NamedConfig> configs;

    bool operator==(const CampaignConfig&) const = default;
};

CampaignConfig parse_campaign(const std::string& text);
std::string serialize_campaign(const CampaignConfig& campaign);
CampaignConfig load_campaign_file(const std::string& path);

// Value-level helpers shared by the CLI flag parsing.
std::optional<std::int64_t> parse_spares(const std::string& value);
BathtubProfile parse_bathtub(const std::string& value);
std::string format_bathtub(const BathtubProfile& profile);
std::string format_double(double v);  // shortest round-trip form

}  // namespace sparesim
