#pragma once
// Exact rational scalars (GMP mpq_class) plus small parsing/printing helpers.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace acilab {

using Q = mpq_class;

inline Q q_of(long num, long den = 1) {
    Q q(num, den);
    q.canonicalize();
    return q;
}

// "123", "-7/4", "+5" -> rational; nullopt on anything else.
inline std::optional<Q> parse_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') ++i;
    if (i == s.size()) return std::nullopt;
    bool seen_slash = false;
    for (std::size_t j = i; j < s.size(); ++j) {
        if (s[j] == '/') {
            if (seen_slash || j == i || j + 1 == s.size()) return std::nullopt;
            seen_slash = true;
        } else if (s[j] < '0' || s[j] > '9') {
            return std::nullopt;
        }
    }
    if (seen_slash) {
        // reject zero denominators before GMP tries to canonicalize them
        auto pos = s.find('/');
        bool all_zero = true;
        for (std::size_t j = pos + 1; j < s.size(); ++j)
            if (s[j] != '0') all_zero = false;
        if (all_zero) return std::nullopt;
    }
    Q q;
    // GMP does not accept a leading '+'
    const std::string body = (s[0] == '+') ? s.substr(1) : s;
    if (q.set_str(body, 10) != 0) return std::nullopt;
    q.canonicalize();
    return q;
}

inline std::string q_str(const Q& q) { return q.get_str(); }

inline double q_double(const Q& q) { return q.get_d(); }

inline Q q_pow(const Q& q, std::uint32_t k) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num().get_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), q.get_den().get_mpz_t(), k);
    Q r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace acilab
