#pragma once

#include "sparesim/parity_check.hpp"
#include "sparesim/rational.hpp"
#include "sparesim/scheme.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace sparesim {

struct EnumerationOptions {
    // Exhaustive enumeration is used whenever C(N, k) stays within this
    // budget; the largest tabulated layout needs C(78,5) ~ 2.1e7.
    std::uint64_t subset_budget = 30'000'000;
    bool allow_sampling = false;
    std::uint64_t sample_count = 2'000'000;
    std::uint64_t sample_seed = 0x5eed5eed5eed5eedULL;
    int threads = 0;  // 0 = hardware concurrency
};

// The five-number characterization of an array: size, the failure count
// n_f always tolerated, and the fractions of (n_f+1)-, (n_f+2)- and
// (n_f+3)-failure patterns that are survivable.
struct SurvivalProfile {
    int size = 0;
    int tolerated = 0;
    std::array<Rational, 3> survivable{};   // f1, f2, f3
    std::array<bool, 3> sampled{};          // true when estimated by sampling
    std::array<double, 3> std_error{};      // standard error of sampled levels

    double fraction(int level) const { return to_double(survivable[level - 1]); }

    bool operator==(const SurvivalProfile&) const = default;
};

struct LevelCount {
    BigInt patterns;    // C(N, k)
    BigInt survivors;   // recoverable k-patterns (estimated mean if sampled)
    Rational fraction;  // survivors / patterns
    bool sampled = false;
    double std_error = 0.0;
};

// Exhaustively counts (or, past the budget and when allowed, estimates by
// stratified sampling) the recoverable k-failure patterns of a scheme.
LevelCount count_recoverable(const ArrayScheme& scheme, int k, const EnumerationOptions& opts = {});

// f_j for j = 1..3 from count_recoverable at k = n_f + j.
SurvivalProfile survival_profile(const ArrayScheme& scheme, const EnumerationOptions& opts = {});

// Number of fatal triple-failure patterns of a two-dimensional array with
// n parity stripes: C(n,2) patterns hitting a data disk with both of its
// parity disks plus C(n,3) patterns hitting three data disks that pairwise
// share a stripe.
std::uint64_t fatal_triple_count_closed(int n);

class EnumerationBudgetError : public std::runtime_error {
  public:
    EnumerationBudgetError(std::string message, BigInt subsets)
        : std::runtime_error(std::move(message)), subsets(std::move(subsets)) {}
    BigInt subsets;
};

}  // namespace sparesim
