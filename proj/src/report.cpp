#include "sparesim/report.hpp"

#include "sparesim/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

namespace sparesim {

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string spares_str(const std::optional<std::int64_t>& spares) {
    return spares ? std::to_string(*spares) : "unlimited";
}

}  // namespace

std::string results_csv_header() {
    return "scheme,data,parity,spares,runs,losses,exhaustions,R,ci_low,ci_high,nines_low,"
           "nines_high,wall_seconds";
}

std::string results_csv_row(const std::string& name, const SimConfig& config,
                            const ReliabilityEstimate& est, double wall_seconds) {
    (void)name;
    const ArrayScheme& s = config.scheme;
    std::string row = s.describe();
    row += "," + std::to_string(s.data_disks());
    row += "," + std::to_string(s.parity_disks());
    row += "," + spares_str(config.spares);
    row += "," + std::to_string(est.runs);
    row += "," + std::to_string(est.losses);
    row += "," + std::to_string(est.exhaustions);
    row += "," + fmt("%.12g", est.reliability);
    row += "," + fmt("%.12g", est.ci.low);
    row += "," + fmt("%.12g", est.ci.high);
    row += "," + fmt("%.6f", est.nines_ci.low);
    row += "," + (std::isinf(est.nines_ci.high) ? std::string("inf") : fmt("%.6f", est.nines_ci.high));
    row += "," + fmt("%.3f", wall_seconds);
    return row;
}

nlohmann::json campaign_record(const std::string& name, const SimConfig& config,
                               const ReliabilityEstimate& est, double wall_seconds) {
    nlohmann::json j;
    j["name"] = name;
    j["config"] = {
        {"scheme", config.scheme.describe()},
        {"data_disks", config.scheme.data_disks()},
        {"parity_disks", config.scheme.parity_disks()},
        {"spares", config.spares ? nlohmann::json(*config.spares) : nlohmann::json("unlimited")},
        {"mission_years", config.mission_years},
        {"repair_years", config.repair_years},
        {"mode", config.loss_mode == LossMode::exact ? "exact" : "profile"},
        {"interp",
         config.interp == RateInterpretation::hazard_rate ? "hazard" : "afr"},
        {"exhaustion",
         config.exhaustion == ExhaustionPolicy::continue_unrepaired ? "continue" : "loss"},
        {"bathtub", format_bathtub(config.bathtub)},
        {"runs", config.runs},
        {"seed", config.seed},
    };
    if (config.loss_mode == LossMode::profile && config.profile) {
        nlohmann::json fractions = nlohmann::json::array();
        for (int i = 0; i < 3; ++i)
            fractions.push_back(decimal_string(config.profile->survivable[i], 12));
        j["config"]["profile_fractions"] = fractions;
    }
    auto interval = [](const Interval& i) { return nlohmann::json{{"low", i.low}, {"high", i.high}}; };
    j["results"] = {
        {"runs", est.runs},
        {"losses", est.losses},
        {"exhaustions", est.exhaustions},
        {"reliability", est.reliability},
        {"wilson_ci", interval(est.ci)},
        {"wilson_nines_ci",
         {{"low", est.nines_ci.low},
          {"high", std::isinf(est.nines_ci.high) ? nlohmann::json("inf")
                                                 : nlohmann::json(est.nines_ci.high)}}},
        {"normal_ci", interval(est.normal_ci)},
        {"normal_nines_ci",
         {{"low", est.normal_nines_ci.low},
          {"high", std::isinf(est.normal_nines_ci.high)
                       ? nlohmann::json("inf")
                       : nlohmann::json(est.normal_nines_ci.high)}}},
        {"mean_peak_failures", est.mean_peak_failures},
        {"wall_seconds", wall_seconds},
    };
    return j;
}

std::string results_table_header() {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-12s %6s %7s %10s %10s %16s", "scheme", "data", "parity",
                  "spares", "overhead", "nines 95% CI");
    return buf;
}

std::string results_table_row(const SimConfig& config, const ReliabilityEstimate& est) {
    const ArrayScheme& s = config.scheme;
    std::string overhead = format_overhead(s.data_disks(), s.parity_disks(), config.spares);
    std::string ci = "(" + format_nines(est.nines_ci.low) + ", " + format_nines(est.nines_ci.high) + ")";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %6d %7d %10s %10s %16s", s.describe().c_str(),
                  s.data_disks(), s.parity_disks(), spares_str(config.spares).c_str(),
                  overhead.c_str(), ci.c_str());
    return buf;
}

std::string profile_csv_header() {
    return "scheme,method,size,tolerated,f1_num,f1_den,f1,f1_sampled,f1_se,f2_num,f2_den,f2,"
           "f2_sampled,f2_se,f3_num,f3_den,f3,f3_sampled,f3_se";
}

std::string profile_csv_row(const ProfileDump& dump) {
    std::string row = dump.scheme + "," + dump.method + "," + std::to_string(dump.profile.size) +
                      "," + std::to_string(dump.profile.tolerated);
    for (int i = 0; i < 3; ++i) {
        const Rational& f = dump.profile.survivable[i];
        row += "," + boost::multiprecision::numerator(f).str();
        row += "," + boost::multiprecision::denominator(f).str();
        row += "," + decimal_string(f, 12);
        row += dump.profile.sampled[i] ? ",1" : ",0";
        row += "," + fmt("%.6g", dump.profile.std_error[i]);
    }
    return row;
}

nlohmann::json profile_record(const ProfileDump& dump) {
    nlohmann::json j;
    j["scheme"] = dump.scheme;
    j["method"] = dump.method;
    j["size"] = dump.profile.size;
    j["tolerated"] = dump.profile.tolerated;
    nlohmann::json fractions = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) {
        const Rational& f = dump.profile.survivable[i];
        nlohmann::json level;
        level["level"] = dump.profile.tolerated + i + 1;
        level["numerator"] = boost::multiprecision::numerator(f).str();
        level["denominator"] = boost::multiprecision::denominator(f).str();
        level["decimal"] = decimal_string(f, 12);
        level["sampled"] = dump.profile.sampled[i];
        if (dump.profile.sampled[i]) level["std_error"] = dump.profile.std_error[i];
        fractions.push_back(level);
    }
    j["survivable_fractions"] = fractions;
    return j;
}

const std::vector<ReferenceRow>& reference_table(int id) {
    // Reference nines intervals for the built-in workloads, from published
    // four-year reliability measurements of the same organizations.
    static const std::vector<ReferenceRow> two_d = {
        {ArrayScheme::two_d(7), 19, {4.99, 5.05}},
        {ArrayScheme::two_d(7), 20, {5.17, 5.25}},
        {ArrayScheme::two_d(8), 23, {5.00, 5.06}},
        {ArrayScheme::two_d(8), 24, {5.12, 5.20}},
        {ArrayScheme::two_d(9), 27, {4.89, 4.94}},
        {ArrayScheme::two_d(9), 28, {5.03, 5.09}},
        {ArrayScheme::two_d(10), 33, {4.98, 5.04}},
        {ArrayScheme::two_d(10), 34, {5.07, 5.13}},
        {ArrayScheme::two_d(11), 53, {4.98, 5.04}},
        {ArrayScheme::two_d(11), 54, {5.00, 5.06}},
        {ArrayScheme::two_d(12), std::nullopt, {4.79, 4.84}},
    };
    static const std::vector<ReferenceRow> raid6 = {
        {ArrayScheme::raid6_groups(1, 12), 18, {5.02, 5.09}},
        {ArrayScheme::raid6_groups(2, 12), std::nullopt, {4.48, 4.84}},
        {ArrayScheme::raid6_groups(3, 12), std::nullopt, {4.35, 4.64}},
        {ArrayScheme::raid6_groups(4, 12), std::nullopt, {4.33, 4.63}},
    };
    static const std::vector<ReferenceRow> triple = {
        {ArrayScheme::triple_parity_groups(1, 15), 13, {4.98, 5.17}},
        {ArrayScheme::triple_parity_groups(1, 15), 14, {5.36, 5.66}},
        {ArrayScheme::triple_parity_groups(2, 15), 20, {4.90, 5.19}},
        {ArrayScheme::triple_parity_groups(3, 15), 26, {4.98, 5.30}},
        {ArrayScheme::triple_parity_groups(3, 15), 27, {5.23, 5.97}},
    };
    switch (id) {
        case 1: return two_d;
        case 2: return raid6;
        case 3: return triple;
        default: throw std::invalid_argument("reference table id must be 1, 2 or 3");
    }
}

}  // namespace sparesim
