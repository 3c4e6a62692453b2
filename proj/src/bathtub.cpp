#include "sparesim/bathtub.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sparesim {

BathtubProfile::BathtubProfile(std::vector<BathtubPhase> phases) : phases_(std::move(phases)) {
    if (phases_.empty()) throw std::invalid_argument("bathtub profile needs at least one phase");
    if (phases_.front().start_age != 0.0)
        throw std::invalid_argument("bathtub profile must start at age 0");
    for (std::size_t i = 0; i < phases_.size(); ++i) {
        if (phases_[i].rate < 0.0) throw std::invalid_argument("bathtub rate must be >= 0");
        if (i > 0 && phases_[i].start_age <= phases_[i - 1].start_age)
            throw std::invalid_argument("bathtub phase ages must increase strictly");
    }
}

FailureSampler::FailureSampler(const BathtubProfile& profile, RateInterpretation interp) {
    for (const auto& phase : profile.phases()) {
        starts_.push_back(phase.start_age);
        if (interp == RateInterpretation::hazard_rate) {
            lambdas_.push_back(phase.rate);
        } else {
            if (phase.rate >= 1.0)
                throw std::invalid_argument(
                    "annualized probability of 1 or more cannot be converted to a hazard");
            lambdas_.push_back(-std::log1p(-phase.rate));
        }
    }
    hazard_before_.resize(starts_.size(), 0.0);
    for (std::size_t i = 1; i < starts_.size(); ++i)
        hazard_before_[i] = hazard_before_[i - 1] + lambdas_[i - 1] * (starts_[i] - starts_[i - 1]);
}

double FailureSampler::cumulative(double from_age, double to_age) const {
    if (from_age < 0.0 || to_age < from_age)
        throw std::invalid_argument("cumulative hazard needs 0 <= from <= to");
    double total = 0.0;
    for (std::size_t i = 0; i < starts_.size(); ++i) {
        double lo = std::max(from_age, starts_[i]);
        double hi = i + 1 < starts_.size() ? std::min(to_age, starts_[i + 1]) : to_age;
        if (hi > lo) total += lambdas_[i] * (hi - lo);
    }
    return total;
}

double FailureSampler::sample(double current_age, double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("sample_failure_time needs u strictly inside (0,1)");
    if (current_age < 0.0) throw std::invalid_argument("sample_failure_time needs age >= 0");
    double budget = -std::log(u);
    // Walk phases from current_age, consuming each phase's hazard capacity.
    std::size_t i = starts_.size() - 1;
    while (i > 0 && starts_[i] > current_age) --i;
    double pos = current_age;
    for (; i < starts_.size(); ++i) {
        double end = i + 1 < starts_.size() ? starts_[i + 1] : std::numeric_limits<double>::infinity();
        double lambda = lambdas_[i];
        if (lambda > 0.0) {
            double capacity = (end - pos) * lambda;
            if (budget <= capacity) return pos + budget / lambda;
            budget -= capacity;
        }
        pos = end;
    }
    return std::numeric_limits<double>::infinity();  // hazard never accumulates enough
}

double FailureSampler::survival_probability(double horizon) const {
    return std::exp(-cumulative(0.0, horizon));
}

double hazard_at(const BathtubProfile& profile, RateInterpretation interp, double age) {
    if (age < 0.0) throw std::invalid_argument("hazard_at needs age >= 0");
    // right-continuous phase lookup
    const auto& phases = profile.phases();
    std::size_t i = phases.size() - 1;
    while (i > 0 && phases[i].start_age > age) --i;
    if (interp == RateInterpretation::hazard_rate) return phases[i].rate;
    if (phases[i].rate >= 1.0)
        throw std::invalid_argument(
            "annualized probability of 1 or more cannot be converted to a hazard");
    return -std::log1p(-phases[i].rate);
}

double cumulative_hazard(const BathtubProfile& profile, RateInterpretation interp, double from_age,
                         double to_age) {
    return FailureSampler(profile, interp).cumulative(from_age, to_age);
}

double sample_failure_time(const BathtubProfile& profile, RateInterpretation interp,
                           double current_age, double u) {
    return FailureSampler(profile, interp).sample(current_age, u);
}

}  // namespace sparesim
