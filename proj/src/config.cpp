#include "sparesim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sparesim {

namespace {

constexpr double hours_per_year = 24.0 * 365.25;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::uint64_t parse_u64(std::string_view value, const std::string& key) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("bad unsigned integer for '" + key + "': '" + std::string(value) + "'");
    return out;
}

double parse_number(std::string_view value, const std::string& key) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("bad number for '" + key + "': '" + std::string(value) + "'");
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::optional<std::int64_t> parse_spares(const std::string& value) {
    if (value == "unlimited" || value == "inf") return std::nullopt;
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || out < 0)
        throw ConfigError("spares must be a nonnegative integer or 'unlimited', got '" + value +
                          "'");
    return out;
}

BathtubProfile parse_bathtub(const std::string& value) {
    std::vector<BathtubPhase> phases;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto sep = item.find(':');
        if (sep == std::string::npos)
            throw ConfigError("bathtub phases are start:rate pairs, got '" + item + "'");
        BathtubPhase phase{};
        phase.start_age = parse_number(trim(std::string_view(item).substr(0, sep)), "bathtub");
        phase.rate = parse_number(trim(std::string_view(item).substr(sep + 1)), "bathtub");
        phases.push_back(phase);
    }
    try {
        return BathtubProfile(phases);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bathtub: ") + e.what());
    }
}

std::string format_bathtub(const BathtubProfile& profile) {
    std::string out;
    for (const auto& phase : profile.phases()) {
        if (!out.empty()) out += ", ";
        out += format_double(phase.start_age) + ":" + format_double(phase.rate);
    }
    return out;
}

namespace {

struct SectionState {
    NamedConfig config;
    bool saw_scheme = false;
    bool saw_spares = false;
    bool saw_runs = false;
    bool saw_seed = false;
    bool saw_repair = false;
};

void apply_section_key(SectionState& s, const std::string& key, const std::string& value) {
    SimConfig& sim = s.config.sim;
    if (key == "scheme") {
        try {
            sim.scheme = ArrayScheme::parse(value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("scheme: ") + e.what());
        }
        s.saw_scheme = true;
    } else if (key == "spares") {
        sim.spares = parse_spares(value);
        s.saw_spares = true;
    } else if (key == "runs") {
        sim.runs = parse_u64(value, key);
        s.saw_runs = true;
    } else if (key == "seed") {
        sim.seed = parse_u64(value, key);
        s.saw_seed = true;
    } else if (key == "mission_years") {
        sim.mission_years = parse_number(value, key);
    } else if (key == "repair_hours") {
        if (s.saw_repair) throw ConfigError("repair time given twice in [" + s.config.name + "]");
        sim.repair_years = parse_number(value, key) / hours_per_year;
        s.saw_repair = true;
    } else if (key == "repair_years") {
        if (s.saw_repair) throw ConfigError("repair time given twice in [" + s.config.name + "]");
        sim.repair_years = parse_number(value, key);
        s.saw_repair = true;
    } else if (key == "mode") {
        if (value == "exact")
            sim.loss_mode = LossMode::exact;
        else if (value == "profile")
            sim.loss_mode = LossMode::profile;
        else
            throw ConfigError("mode must be 'exact' or 'profile', got '" + value + "'");
    } else if (key == "interp") {
        if (value == "hazard")
            sim.interp = RateInterpretation::hazard_rate;
        else if (value == "afr")
            sim.interp = RateInterpretation::annualized_probability;
        else
            throw ConfigError("interp must be 'hazard' or 'afr', got '" + value + "'");
    } else if (key == "exhaustion") {
        if (value == "continue")
            sim.exhaustion = ExhaustionPolicy::continue_unrepaired;
        else if (value == "loss")
            sim.exhaustion = ExhaustionPolicy::immediate_loss;
        else
            throw ConfigError("exhaustion must be 'continue' or 'loss', got '" + value + "'");
    } else if (key == "bathtub") {
        sim.bathtub = parse_bathtub(value);
    } else {
        throw ConfigError("unknown key '" + key + "' in section [" + s.config.name + "]");
    }
}

void structural_check(const NamedConfig& named) {
    const SimConfig& sim = named.sim;
    const std::string where = " in [" + named.name + "]";
    if (sim.runs < 1) throw ConfigError("runs must be >= 1" + where);
    if (!(sim.mission_years > 0.0)) throw ConfigError("mission_years must be positive" + where);
    if (!(sim.repair_years >= 0.0)) throw ConfigError("repair time must be >= 0" + where);
}

}  // namespace

CampaignConfig parse_campaign(const std::string& text) {
    CampaignConfig campaign;
    std::uint64_t global_runs = SimConfig{}.runs;
    bool saw_global_runs = false;

    std::vector<SectionState> sections;
    std::set<std::string> names;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
            std::string name(trim(line.substr(1, line.size() - 2)));
            if (name.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
            if (!names.insert(name).second)
                throw ConfigError("duplicate configuration name '" + name + "'");
            sections.emplace_back();
            sections.back().config.name = name;
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");

        if (sections.empty()) {
            if (key == "seed")
                campaign.seed = parse_u64(value, key);
            else if (key == "workers")
                campaign.workers = static_cast<int>(parse_u64(value, key));
            else if (key == "out")
                campaign.out_dir = value;
            else if (key == "runs") {
                global_runs = parse_u64(value, key);
                saw_global_runs = true;
            } else
                throw ConfigError("unknown global key '" + key + "'");
            continue;
        }
        apply_section_key(sections.back(), key, value);
    }

    if (sections.empty()) throw ConfigError("campaign file has no [configuration] sections");
    for (auto& s : sections) {
        if (!s.saw_scheme) throw ConfigError("section [" + s.config.name + "] is missing 'scheme'");
        if (!s.saw_spares) throw ConfigError("section [" + s.config.name + "] is missing 'spares'");
        if (!s.saw_runs && saw_global_runs) s.config.sim.runs = global_runs;
        if (!s.saw_seed) s.config.sim.seed = campaign.seed;
        structural_check(s.config);
        campaign.configs.push_back(std::move(s.config));
    }
    return campaign;
}

std::string serialize_campaign(const CampaignConfig& campaign) {
    std::string out;
    out += "seed = " + std::to_string(campaign.seed) + "\n";
    if (campaign.workers > 0) out += "workers = " + std::to_string(campaign.workers) + "\n";
    if (!campaign.out_dir.empty()) out += "out = " + campaign.out_dir + "\n";
    for (const auto& named : campaign.configs) {
        const SimConfig& sim = named.sim;
        out += "\n[" + named.name + "]\n";
        out += "scheme = " + sim.scheme.describe() + "\n";
        out += "spares = " + (sim.spares ? std::to_string(*sim.spares) : std::string("unlimited")) +
               "\n";
        out += "runs = " + std::to_string(sim.runs) + "\n";
        out += "seed = " + std::to_string(sim.seed) + "\n";
        out += "mission_years = " + format_double(sim.mission_years) + "\n";
        out += "repair_years = " + format_double(sim.repair_years) + "\n";
        out += std::string("mode = ") + (sim.loss_mode == LossMode::exact ? "exact" : "profile") +
               "\n";
        out += std::string("interp = ") +
               (sim.interp == RateInterpretation::hazard_rate ? "hazard" : "afr") + "\n";
        out += std::string("exhaustion = ") +
               (sim.exhaustion == ExhaustionPolicy::continue_unrepaired ? "continue" : "loss") +
               "\n";
        out += "bathtub = " + format_bathtub(sim.bathtub) + "\n";
    }
    return out;
}

CampaignConfig load_campaign_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open campaign file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_campaign(buffer.str());
}

}  // namespace sparesim
