#include "sparesim/rational.hpp"

#include <stdexcept>

namespace sparesim {

BigInt binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0) throw std::invalid_argument("binomial: negative argument");
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;  // exact: result is C(n-k+i, i) after each step
    }
    return result;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

BigInt pow10(int e) {
    BigInt p = 1;
    for (int i = 0; i < e; ++i) p *= 10;
    return p;
}

}  // namespace

std::string decimal_string(const Rational& r, int significant_digits) {
    if (significant_digits < 1) throw std::invalid_argument("decimal_string: need >= 1 digit");
    if (r == 0) return "0";
    BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    std::string sign;
    if (num < 0) {
        sign = "-";
        num = -num;
    }

    // Decimal exponent e with value in [10^e, 10^(e+1)).
    int e = 0;
    if (num >= den) {
        while (num >= den * pow10(e + 1)) ++e;
    } else {
        BigInt t = num;
        while (t < den) {
            t *= 10;
            --e;
        }
    }

    // First `significant_digits` digits, rounded half away from zero.
    BigInt scaled;
    {
        int shift = significant_digits - 1 - e;
        if (shift >= 0)
            scaled = num * pow10(shift);
        else
            scaled = num / pow10(-shift);  // cannot happen with shift<0 unless huge e; kept exact below
        if (shift >= 0)
            scaled = (2 * scaled + den) / (2 * den);
        else
            scaled = (2 * num + den * pow10(-shift)) / (2 * den * pow10(-shift));
    }
    std::string digits = scaled.str();
    if (static_cast<int>(digits.size()) > significant_digits) {
        ++e;  // rounding carried, e.g. 0.999... -> 1.00
        digits.pop_back();
    }

    std::string out;
    if (e < 0) {
        out = "0.";
        out.append(-e - 1, '0');
        out += digits;
    } else if (e + 1 >= static_cast<int>(digits.size())) {
        out = digits;
        out.append(e + 1 - static_cast<int>(digits.size()), '0');
    } else {
        out = digits.substr(0, e + 1) + "." + digits.substr(e + 1);
    }
    return sign + out;
}

}  // namespace sparesim
