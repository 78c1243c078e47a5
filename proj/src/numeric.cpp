#include "unibase/numeric.hpp"

#include <cctype>
#include <cmath>

namespace unibase {

Rat rpow(const Rat& q, long e) {
    if (e == 0) return Rat(1);
    bool inv = e < 0;
    unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Int n = ipow(numerator(q), k);
    Int d = ipow(denominator(q), k);
    if (inv) {
        if (n == 0) throw std::domain_error("rpow: 0 to negative power");
        return Rat(d, n);
    }
    return Rat(n, d);
}

Rat pow2(long e) {
    if (e >= 0) return Rat(ipow(2, static_cast<unsigned long>(e)));
    return Rat(1, ipow(2, static_cast<unsigned long>(-e)));
}

Int rfloor(const Rat& r) {
    Int n = numerator(r), d = denominator(r);
    Int q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

RatInterval iv_add(const RatInterval& a, const RatInterval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

RatInterval iv_sub(const RatInterval& a, const RatInterval& b) {
    return {a.lo - b.hi, a.hi - b.lo};
}

RatInterval iv_mul(const RatInterval& a, const RatInterval& b) {
    Rat c1 = a.lo * b.lo, c2 = a.lo * b.hi, c3 = a.hi * b.lo, c4 = a.hi * b.hi;
    Rat lo = c1, hi = c1;
    for (const Rat* p : {&c2, &c3, &c4}) {
        if (*p < lo) lo = *p;
        if (*p > hi) hi = *p;
    }
    return {lo, hi};
}

RatInterval iv_div(const RatInterval& a, const RatInterval& b) {
    if (b.lo <= 0 && b.hi >= 0) throw std::domain_error("iv_div: divisor interval contains 0");
    return iv_mul(a, {Rat(1) / b.hi, Rat(1) / b.lo});
}

RatInterval iv_pow(const RatInterval& a, unsigned long e) {
    if (a.lo < 0) throw std::domain_error("iv_pow: negative base");
    return {rpow(a.lo, static_cast<long>(e)), rpow(a.hi, static_cast<long>(e))};
}

RatInterval iv_scale(const RatInterval& a, const Rat& c) {
    if (c >= 0) return {a.lo * c, a.hi * c};
    return {a.hi * c, a.lo * c};
}

namespace {

// ln(x) for x in [1/2, 2], via ln x = 2 * sum_{k>=0} t^(2k+1)/(2k+1),
// t = (x-1)/(x+1), |t| <= 1/3. Tail after K terms is bounded by
// 2|t|^(2K+1) / ((2K+1)(1-t^2)).
RatInterval log_core(const Rat& x, int bits) {
    Rat t = (x - 1) / (x + 1);
    Rat t2 = t * t;
    Rat term = t;       // t^(2k+1)
    Rat sum = 0;
    Rat eps = pow2(-bits - 2);
    Rat one_minus_t2 = 1 - t2;
    unsigned long k = 0;
    while (true) {
        sum += term / Rat(2 * k + 1);
        term *= t2;
        ++k;
        Rat tail = term / (Rat(2 * k + 1) * one_minus_t2);
        if (tail < 0) tail = -tail;
        if (2 * tail < eps) {
            Rat lo = 2 * sum, hi = 2 * sum;
            Rat pad = 2 * tail;
            if (t >= 0) hi += pad; else lo -= pad;
            return {lo, hi};
        }
        if (k > 100000) throw precision_error("log_core: series did not converge");
    }
}

}  // namespace

RatInterval log_interval(const Rat& x, int bits) {
    if (x <= 0) throw std::domain_error("log_interval: nonpositive argument");
    // Scale into [1/2, 2] by powers of 2, then ln x = m*ln2 + ln(core).
    long m = 0;
    Rat y = x;
    while (y > 2) { y /= 2; ++m; }
    while (y < Rat(1, 2)) { y *= 2; --m; }
    int core_bits = bits + 4;
    RatInterval lny = log_core(y, core_bits);
    if (m == 0) return lny;
    RatInterval ln2 = log_core(Rat(2), core_bits + 64);
    RatInterval part = iv_scale(ln2, Rat(m));
    return iv_add(lny, part);
}

RatInterval log_interval(const RatInterval& x, int bits) {
    RatInterval a = log_interval(x.lo, bits + 1);
    RatInterval b = log_interval(x.hi, bits + 1);
    return {a.lo, b.hi};
}

double log_big(const Int& n) {
    if (n <= 0) throw std::domain_error("log_big: nonpositive argument");
    // n = m * 2^e with m in [2^52, 2^53): convert m exactly to double.
    long bits = static_cast<long>(msb(n)) + 1;
    long shift = bits - 53;
    if (shift <= 0) return std::log(static_cast<double>(n));
    Int m = n >> shift;
    return std::log(static_cast<double>(m)) + static_cast<double>(shift) * M_LN2;
}

Rat parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat num = parse_rational(s.substr(0, slash));
        Rat den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        return num / den;
    }
    // [sign] digits [. digits] [e [sign] digits]
    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') { neg = s[i] == '-'; ++i; }
    Int mantissa = 0;
    long frac_digits = 0;
    bool any = false, seen_dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa = mantissa * 10 + (c - '0');
            if (seen_dot) ++frac_digits;
            any = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && any) {
            break;
        } else {
            throw std::invalid_argument("parse_rational: bad character in \"" + s + "\"");
        }
    }
    if (!any) throw std::invalid_argument("parse_rational: no digits in \"" + s + "\"");
    long exp10 = 0;
    if (i < s.size()) {  // exponent part
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) { eneg = s[i] == '-'; ++i; }
        if (i >= s.size()) throw std::invalid_argument("parse_rational: bad exponent");
        long e = 0;
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw std::invalid_argument("parse_rational: bad exponent");
            e = e * 10 + (s[i] - '0');
            if (e > 1000000) throw std::invalid_argument("parse_rational: exponent too large");
        }
        exp10 = eneg ? -e : e;
    }
    Rat r(mantissa);
    long net = exp10 - frac_digits;
    if (net > 0) r *= Rat(ipow(10, static_cast<unsigned long>(net)));
    else if (net < 0) r /= Rat(ipow(10, static_cast<unsigned long>(-net)));
    return neg ? -r : r;
}

std::string decimal_string(const Rat& r, int digits) {
    if (digits < 0) throw std::invalid_argument("decimal_string: negative digit count");
    Rat a = r < 0 ? -r : r;
    Int ip = rfloor(a);
    Rat frac = a - Rat(ip);
    std::string out;
    if (r < 0) out += '-';
    out += ip.str();
    if (digits == 0) return out;
    out += '.';
    Int scaled = rfloor(frac * Rat(ipow(10, static_cast<unsigned long>(digits))));
    std::string fs = scaled.str();
    out += std::string(static_cast<size_t>(digits) - fs.size(), '0');
    out += fs;
    return out;
}

Int rand_below(const Int& n, std::mt19937_64& rng) {
    if (n <= 0) throw std::invalid_argument("rand_below: bound must be positive");
    size_t bits = msb(n) + 1;
    for (;;) {
        Int r = 0;
        for (size_t got = 0; got < bits; got += 64) r = (r << 64) | Int(rng());
        r >>= (64 - bits % 64) % 64;
        if (r < n) return r;
    }
}

}  // namespace unibase
