#include "sparesim/closed_form.hpp"

#include <stdexcept>

namespace sparesim {

namespace {

void check_group_args(int m, int n, int k, int min_n) {
    if (m < 1) throw std::invalid_argument("group fatal fraction: need m >= 1");
    if (n < min_n)
        throw std::invalid_argument("group fatal fraction: need n >= " + std::to_string(min_n));
    if (static_cast<std::int64_t>(m) * n < k)
        throw std::invalid_argument("group fatal fraction: fewer than k disks");
}

}  // namespace

Rational raid6_fatal_fraction(int m, int n, int k) {
    check_group_args(m, n, k, 3);
    const BigInt mm = m;
    BigInt fatal;
    switch (k) {
        case 3:
            fatal = mm * binomial(n, 3);
            break;
        case 4:
            fatal = mm * binomial(n, 4) + mm * (m - 1) * n * binomial(n, 3);
            break;
        case 5:
            fatal = mm * binomial(n, 5) + mm * (m - 1) * n * binomial(n, 4) +
                    mm * binomial(static_cast<std::int64_t>(m - 1) * n, 2) * binomial(n, 3);
            break;
        default:
            throw std::invalid_argument("raid6_fatal_fraction: k must be 3, 4 or 5");
    }
    return Rational(fatal, binomial(static_cast<std::int64_t>(m) * n, k));
}

Rational triple_parity_fatal_fraction(int m, int n, int k) {
    check_group_args(m, n, k, 4);
    const BigInt mm = m;
    BigInt fatal;
    switch (k) {
        case 4:
            fatal = mm * binomial(n, 4);
            break;
        case 5:
            fatal = mm * binomial(n, 5) + mm * (m - 1) * n * binomial(n, 4);
            break;
        case 6:
            fatal = mm * binomial(n, 6) + mm * (m - 1) * n * binomial(n, 5) +
                    mm * binomial(static_cast<std::int64_t>(m - 1) * n, 2) * binomial(n, 4);
            break;
        default:
            throw std::invalid_argument("triple_parity_fatal_fraction: k must be 4, 5 or 6");
    }
    return Rational(fatal, binomial(static_cast<std::int64_t>(m) * n, k));
}

SurvivalProfile profile_from_closed_form(int m, int n, int parity_equiv) {
    if (parity_equiv != 2 && parity_equiv != 3)
        throw std::invalid_argument("profile_from_closed_form: parity_equiv must be 2 or 3");
    SurvivalProfile profile;
    profile.size = m * n;
    profile.tolerated = parity_equiv;
    for (int j = 1; j <= 3; ++j) {
        int k = parity_equiv + j;
        if (k > profile.size) {
            profile.survivable[j - 1] = 0;
            continue;
        }
        Rational fatal = parity_equiv == 2 ? raid6_fatal_fraction(m, n, k)
                                           : triple_parity_fatal_fraction(m, n, k);
        profile.survivable[j - 1] = Rational(1) - fatal;
    }
    return profile;
}

}  // namespace sparesim
