#include "sparesim/stats.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace sparesim {

double nines(double reliability) {
    if (!(reliability >= 0.0) || reliability >= 1.0)
        throw std::domain_error("nines: reliability must lie in [0, 1)");
    return -std::log10(1.0 - reliability);
}

double nines_from_loss_probability(double p) {
    if (!(p >= 0.0) || p > 1.0)
        throw std::domain_error("nines_from_loss_probability: p must lie in [0, 1]");
    if (p == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log10(p);
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse_normal_cdf: p outside (0,1)");
    // Acklam's algorithm.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double q, r;
    if (p < p_low) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        q = p - 0.5;
        r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

namespace {

double z_for_level(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence level outside (0,1)");
    return inverse_normal_cdf(0.5 + level / 2.0);
}

}  // namespace

Interval wilson_loss_interval(std::uint64_t losses, std::uint64_t runs, double level) {
    if (runs == 0) throw std::invalid_argument("wilson_loss_interval: need runs >= 1");
    if (losses > runs) throw std::invalid_argument("wilson_loss_interval: losses > runs");
    const double z = z_for_level(level);
    const double n = static_cast<double>(runs);
    const double p = static_cast<double>(losses) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Interval out{center - half, center + half};
    // the endpoints are exactly 0 and 1 at the degenerate counts; keep the
    // floating evaluation from leaving an ulp of residue there
    if (losses == 0) out.low = 0.0;
    if (losses == runs) out.high = 1.0;
    if (out.low < 0.0) out.low = 0.0;
    if (out.high > 1.0) out.high = 1.0;
    return out;
}

Interval normal_loss_interval(std::uint64_t losses, std::uint64_t runs, double level) {
    if (runs == 0) throw std::invalid_argument("normal_loss_interval: need runs >= 1");
    if (losses > runs) throw std::invalid_argument("normal_loss_interval: losses > runs");
    const double z = z_for_level(level);
    const double n = static_cast<double>(runs);
    const double p = static_cast<double>(losses) / n;
    const double half = z * std::sqrt(p * (1.0 - p) / n);
    Interval out{p - half, p + half};
    if (out.low < 0.0) out.low = 0.0;
    if (out.high > 1.0) out.high = 1.0;
    return out;
}

namespace {

Interval loss_to_reliability(Interval loss) { return {1.0 - loss.high, 1.0 - loss.low}; }

Interval loss_to_nines(Interval loss) {
    // computed from the loss side to keep precision at p ~ 1e-5
    return {nines_from_loss_probability(loss.high), nines_from_loss_probability(loss.low)};
}

}  // namespace

ReliabilityEstimate estimate_reliability(std::uint64_t runs, std::uint64_t losses,
                                         std::uint64_t exhaustions, double mean_peak_failures,
                                         double level) {
    ReliabilityEstimate est;
    est.runs = runs;
    est.losses = losses;
    est.exhaustions = exhaustions;
    est.mean_peak_failures = mean_peak_failures;
    est.reliability = 1.0 - static_cast<double>(losses) / static_cast<double>(runs);
    Interval wilson = wilson_loss_interval(losses, runs, level);
    Interval normal = normal_loss_interval(losses, runs, level);
    est.ci = loss_to_reliability(wilson);
    est.nines_ci = loss_to_nines(wilson);
    est.normal_ci = loss_to_reliability(normal);
    est.normal_nines_ci = loss_to_nines(normal);
    return est;
}

std::optional<double> space_overhead(std::int64_t data, std::int64_t parity,
                                     std::optional<std::int64_t> spares) {
    if (data < 1) throw std::invalid_argument("space_overhead: need data >= 1");
    if (parity < 0 || (spares && *spares < 0))
        throw std::invalid_argument("space_overhead: negative disk count");
    if (!spares) return std::nullopt;
    return static_cast<double>(parity + *spares) / static_cast<double>(data + parity + *spares);
}

std::string format_overhead(std::int64_t data, std::int64_t parity,
                            std::optional<std::int64_t> spares) {
    auto value = space_overhead(data, parity, spares);
    if (!value) return "∞";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", *value * 100.0);
    return buf;
}

std::string format_nines(double n) {
    if (std::isinf(n)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", n);
    return buf;
}

}  // namespace sparesim
