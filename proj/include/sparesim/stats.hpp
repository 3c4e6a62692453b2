#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace sparesim {

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

// Reliability in "nines": -log10(1 - R). Rejects R outside [0,1); R = 1
// would be infinitely many nines.
double nines(double reliability);

// Same scale computed from the loss-probability side, -log10(p), which
// avoids the 1-R cancellation for p below ~1e-4. p = 0 maps to +infinity.
double nines_from_loss_probability(double p);

// Wilson score interval for the loss probability. Well behaved at the
// p ~ 1e-5 regime and at zero observed losses, where the normal
// approximation collapses.
Interval wilson_loss_interval(std::uint64_t losses, std::uint64_t runs, double level = 0.95);

// Normal-approximation (Wald) interval, emitted alongside for comparison.
Interval normal_loss_interval(std::uint64_t losses, std::uint64_t runs, double level = 0.95);

// Acklam's rational approximation of the standard normal quantile,
// |relative error| < 1.15e-9 over (0,1).
double inverse_normal_cdf(double p);

struct ReliabilityEstimate {
    std::uint64_t runs = 0;
    std::uint64_t losses = 0;
    std::uint64_t exhaustions = 0;
    double reliability = 1.0;      // 1 - losses/runs
    Interval ci;                   // Wilson, on reliability
    Interval nines_ci;             // ci endpoints in nines (high may be +inf)
    Interval normal_ci;            // Wald, on reliability
    Interval normal_nines_ci;
    double mean_peak_failures = 0.0;
};

ReliabilityEstimate estimate_reliability(std::uint64_t runs, std::uint64_t losses,
                                         std::uint64_t exhaustions, double mean_peak_failures,
                                         double level = 0.95);

// (parity + spares) / (data + parity + spares); empty when the spare
// supply is unlimited.
std::optional<double> space_overhead(std::int64_t data, std::int64_t parity,
                                     std::optional<std::int64_t> spares);

// Two-decimal percentage, "48.86%", or the infinity sign for unlimited
// spares.
std::string format_overhead(std::int64_t data, std::int64_t parity,
                            std::optional<std::int64_t> spares);

std::string format_nines(double n);  // two decimals; "inf" when unbounded

}  // namespace sparesim
