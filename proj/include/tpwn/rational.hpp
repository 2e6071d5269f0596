#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "tpwn/errors.hpp"

namespace tpwn {

// Exact rational arithmetic. mpq_class keeps values canonical (lowest terms,
// positive denominator) as long as every value is produced by its operators
// or canonicalized after raw construction; parse_rational below does so.
using Rational = mpq_class;

inline Rational rational_from_int(long n) { return Rational(n); }

// mpq_class(num, den) does NOT reduce; GMP arithmetic assumes canonical
// operands. Anything built from a raw numerator/denominator pair must go
// through here.
inline Rational make_rational(long num, long den) {
    if (den == 0) throw ValidationError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw ValidationError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

namespace detail {

inline bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace detail

// Accepts "123", "-4", "a/b" with integer a,b (b > 0 after sign folding),
// and plain decimals like "0.25", "-3.5", ".5". No exponents, no hex.
inline Rational parse_rational(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) throw ValidationError("empty rational literal: '" + text + "'");

    Rational value;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den))
            throw ValidationError("malformed fraction: '" + text + "'");
        mpz_class n(num, 10), d(den, 10);
        if (d == 0) throw ValidationError("zero denominator: '" + text + "'");
        value = Rational(n, d);
        value.canonicalize();
    } else if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot);
        std::string fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty())
            throw ValidationError("malformed decimal: '" + text + "'");
        if (!ip.empty() && !detail::all_digits(ip))
            throw ValidationError("malformed decimal: '" + text + "'");
        if (!fp.empty() && !detail::all_digits(fp))
            throw ValidationError("malformed decimal: '" + text + "'");
        mpz_class n(ip.empty() ? std::string("0") : ip, 10);
        mpz_class scale(1);
        for (char c : fp) {
            n = n * 10 + (c - '0');
            scale *= 10;
        }
        value = Rational(n, scale);
        value.canonicalize();
    } else {
        if (!detail::all_digits(s))
            throw ValidationError("malformed rational: '" + text + "'");
        value = Rational(mpz_class(s, 10));
    }
    if (negative) value = -value;
    return value;
}

// "47/5" for proper fractions, "9" for integers.
inline std::string to_fraction_string(const Rational& q) {
    return q.get_str();
}

// Correctly rounded decimal rendering: `digits` significant digits,
// round half to even. Positional for moderate magnitudes (trailing
// fractional zeros trimmed), scientific d.dd...e+NN otherwise.
inline std::string to_decimal_string(const Rational& q, int digits = 10) {
    if (digits < 1) digits = 1;
    if (q == 0) return "0";
    mpz_class n = abs(q.get_num());
    const mpz_class& d = q.get_den();

    // e10: unique exponent with 10^e10 <= |q| < 10^(e10+1).
    long e10;
    mpz_class ip = n / d;
    if (ip > 0) {
        e10 = static_cast<long>(ip.get_str().size()) - 1;
    } else {
        e10 = 0;
        mpz_class scaled = n;
        while (scaled < d) {
            scaled *= 10;
            --e10;
        }
    }

    // m = |q| * 10^(digits-1-e10), rounded half to even; m has `digits` digits.
    long shift = digits - 1 - e10;
    mpz_class num = n, den = d, pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10,
                  static_cast<unsigned long>(shift >= 0 ? shift : -shift));
    if (shift >= 0)
        num *= pow10;
    else
        den *= pow10;

    mpz_class m, r;
    mpz_fdiv_qr(m.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class twice = r * 2;
    if (twice > den || (twice == den && mpz_odd_p(m.get_mpz_t())))
        m += 1;

    std::string ds = m.get_str();
    if (static_cast<int>(ds.size()) > digits) {
        // 9.99... rounded up to 10.0...: drop the extra zero, bump exponent.
        ds.pop_back();
        ++e10;
    }

    std::string out;
    if (e10 >= -4 && e10 <= 14) {
        if (e10 >= 0) {
            auto split = std::min(static_cast<std::size_t>(e10) + 1, ds.size());
            std::string head = ds.substr(0, split);
            std::string tail = ds.substr(split);
            if (static_cast<long>(head.size()) < e10 + 1)
                head.append(static_cast<std::size_t>(e10 + 1) - head.size(), '0');
            while (!tail.empty() && tail.back() == '0') tail.pop_back();
            out = tail.empty() ? head : head + "." + tail;
        } else {
            std::string tail = ds;
            while (!tail.empty() && tail.back() == '0') tail.pop_back();
            if (tail.empty()) tail = "0";
            out = "0." + std::string(static_cast<std::size_t>(-e10 - 1), '0') + tail;
        }
    } else {
        std::string tail = ds.substr(1);
        while (!tail.empty() && tail.back() == '0') tail.pop_back();
        out = ds.substr(0, 1);
        if (!tail.empty()) out += "." + tail;
        out += "e" + std::string(e10 < 0 ? "-" : "+") + std::to_string(e10 < 0 ? -e10 : e10);
    }
    if (q < 0) out = "-" + out;
    return out;
}

}  // namespace tpwn
