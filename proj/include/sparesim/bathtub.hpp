#pragma once

#include <vector>

namespace sparesim {

struct BathtubPhase {
    double start_age;     // years
    double rate;          // stated per-year failure rate

    bool operator==(const BathtubPhase&) const = default;
};

// Piecewise-constant age-dependent failure rates. The default profile is
// the observed bathtub shape for commodity drives: 5.1%/yr for the first
// 18 months, 1.4%/yr for the next 18 months, 11.8%/yr afterwards.
class BathtubProfile {
  public:
    BathtubProfile() : BathtubProfile(standard_phases()) {}
    explicit BathtubProfile(std::vector<BathtubPhase> phases);

    static BathtubProfile standard() { return BathtubProfile(); }

    const std::vector<BathtubPhase>& phases() const { return phases_; }

    bool operator==(const BathtubProfile&) const = default;

  private:
    static std::vector<BathtubPhase> standard_phases() {
        return {{0.0, 0.051}, {1.5, 0.014}, {3.0, 0.118}};
    }
    std::vector<BathtubPhase> phases_;
};

// How the stated per-year values are read: directly as hazard rates, or as
// annualized failure probabilities converted via lambda = -ln(1 - value).
// At the magnitudes involved the two differ by a few percent.
enum class RateInterpretation { hazard_rate, annualized_probability };

// Hazard at the given age; right-continuous at phase boundaries (age 1.5
// already uses the second phase).
double hazard_at(const BathtubProfile& profile, RateInterpretation interp, double age);

// Integral of the hazard over [from_age, to_age]; exact for the piecewise-
// constant rates.
double cumulative_hazard(const BathtubProfile& profile, RateInterpretation interp,
                         double from_age, double to_age);

// Inverse-transform sample: the smallest t > current_age with
// cumulative_hazard(current_age, t) = -ln(u), walking the phases. Returns
// +infinity when the remaining hazard never reaches the budget (all later
// rates zero).
double sample_failure_time(const BathtubProfile& profile, RateInterpretation interp,
                           double current_age, double u);

// Precomputed form of the above for hot loops: converted rates and phase
// hazard prefix sums.
class FailureSampler {
  public:
    FailureSampler(const BathtubProfile& profile, RateInterpretation interp);

    double sample(double current_age, double u) const;
    double cumulative(double from_age, double to_age) const;

    // P(failure time > horizon | new disk) -- a uniform draw below this
    // threshold means the disk outlives the horizon, letting callers skip
    // the log() of the full inverse transform.
    double survival_probability(double horizon) const;

  private:
    std::vector<double> starts_;
    std::vector<double> lambdas_;
    std::vector<double> hazard_before_;  // cumulative hazard from age 0 to starts_[i]
};

}  // namespace sparesim
