#pragma once

// Exact arithmetic primitives shared by every module: big integers, rationals,
// rational intervals with outward rounding, certified logarithms, parsing and
// decimal rendering.

#include <boost/multiprecision/cpp_int.hpp>
#include <random>
#include <stdexcept>
#include <string>

namespace unibase {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Thrown when a certified computation cannot reach the requested precision
// within its bit budget.
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

inline int sign_of(const Rat& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

inline Int ipow(Int base, unsigned long e) {
    Int acc = 1;
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

// q^e for integer e of either sign (q != 0 when e < 0).
Rat rpow(const Rat& q, long e);

// 2^e as an exact rational, e of either sign.
Rat pow2(long e);

// floor(r) as a big integer (works for negative r).
Int rfloor(const Rat& r);

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

// A closed rational interval [lo, hi]; the basic certified-bounds carrier.
struct RatInterval {
    Rat lo, hi;
    RatInterval() = default;
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::invalid_argument("RatInterval: lo > hi");
    }
    static RatInterval point(const Rat& v) { return {v, v}; }
    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool contains(const Rat& v) const { return lo <= v && v <= hi; }
};

RatInterval iv_add(const RatInterval& a, const RatInterval& b);
RatInterval iv_sub(const RatInterval& a, const RatInterval& b);
RatInterval iv_mul(const RatInterval& a, const RatInterval& b);
RatInterval iv_div(const RatInterval& a, const RatInterval& b);  // 0 not in b
RatInterval iv_pow(const RatInterval& a, unsigned long e);       // a.lo >= 0
RatInterval iv_scale(const RatInterval& a, const Rat& c);

// Certified natural logarithm of a positive rational: an interval of width
// <= 2^-bits containing ln(x). atanh power series with explicit tail bound.
RatInterval log_interval(const Rat& x, int bits);
// ln over an interval (monotone).
RatInterval log_interval(const RatInterval& x, int bits);

// Natural log of a big positive integer, accurate to ~1e-15 relative error.
double log_big(const Int& n);

// Exact uniform draw from [0, n) for a big positive integer, by rejection
// on the top bits of the generator's output.
Int rand_below(const Int& n, std::mt19937_64& rng);

// Parses "p/q", plain integers, decimals ("1.25") and scientific decimals
// ("1e-5", "2.5e3") into exact rationals. Throws std::invalid_argument.
Rat parse_rational(const std::string& s);

// Fixed-point decimal rendering with `digits` fractional digits, truncated
// toward zero (exact prefix of the decimal expansion).
std::string decimal_string(const Rat& r, int digits);

}  // namespace unibase
