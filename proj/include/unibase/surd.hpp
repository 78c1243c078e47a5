#pragma once

// Exact arithmetic in a real quadratic field Q(sqrt(D)): values a + b*sqrt(D)
// with rational a, b and a fixed non-square positive integer D. Used for
// expansion remainders at quadratic bases, where interval refinement alone
// can never decide an exact tie.

#include "unibase/numeric.hpp"

#include <cmath>
#include <compare>

namespace unibase {

class Surd {
public:
    Surd() : a_(0), b_(0), d_(0) {}
    /*implicit*/ Surd(Rat a) : a_(std::move(a)), b_(0), d_(0) {}
    Surd(Rat a, Rat b, Int d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
        if (b_ == 0) d_ = 0;
        else if (d_ <= 0) throw std::invalid_argument("Surd: radicand must be positive");
    }

    const Rat& rational_part() const { return a_; }
    const Rat& radical_part() const { return b_; }
    const Int& radicand() const { return d_; }
    bool is_rational() const { return b_ == 0; }
    const Rat& as_rational() const {
        if (!is_rational()) throw std::domain_error("Surd: not rational");
        return a_;
    }

    int sign() const {
        if (b_ == 0) return sign_of(a_);
        if (a_ == 0) return sign_of(b_);
        int sa = sign_of(a_), sb = sign_of(b_);
        if (sa == sb) return sa;
        // a and b*sqrt(D) pull in opposite directions: compare a^2 with b^2*D.
        Rat lhs = a_ * a_, rhs = b_ * b_ * Rat(d_);
        if (lhs == rhs) return 0;
        return lhs > rhs ? sa : sb;
    }

    Surd operator-() const { return Surd(-a_, -b_, d_); }

    friend Surd operator+(const Surd& x, const Surd& y) {
        Int d = join(x, y);
        return Surd(x.a_ + y.a_, x.b_ + y.b_, d);
    }
    friend Surd operator-(const Surd& x, const Surd& y) { return x + (-y); }
    friend Surd operator*(const Surd& x, const Surd& y) {
        Int d = join(x, y);
        Rat a = x.a_ * y.a_ + x.b_ * y.b_ * Rat(d);
        Rat b = x.a_ * y.b_ + x.b_ * y.a_;
        return Surd(std::move(a), std::move(b), std::move(d));
    }
    Surd inverse() const {
        Rat norm = a_ * a_ - b_ * b_ * Rat(d_);
        if (norm == 0) throw std::domain_error("Surd: inverse of zero");
        return Surd(a_ / norm, -b_ / norm, d_);
    }
    friend Surd operator/(const Surd& x, const Surd& y) { return x * y.inverse(); }

    friend bool operator==(const Surd& x, const Surd& y) { return (x - y).sign() == 0; }
    friend std::strong_ordering operator<=>(const Surd& x, const Surd& y) {
        int s = (x - y).sign();
        if (s < 0) return std::strong_ordering::less;
        if (s > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // floor as a big integer; exact, verified by field comparisons.
    Int floor_int() const {
        if (b_ == 0) return rfloor(a_);
        double est = static_cast<double>(a_) + static_cast<double>(b_) * sqrt_double();
        Int n = std::isfinite(est) ? Int(static_cast<long long>(std::floor(est))) : Int(0);
        while (*this < Surd(Rat(n))) --n;
        while (*this >= Surd(Rat(n + 1))) ++n;
        return n;
    }

    // Rational enclosure [lo, hi] with hi - lo <= 2^-bits.
    RatInterval enclosure(int bits) const;

private:
    static Int join(const Surd& x, const Surd& y) {
        if (x.b_ == 0) return y.d_;
        if (y.b_ == 0) return x.d_;
        if (x.d_ != y.d_) throw std::invalid_argument("Surd: mixed radicands");
        return x.d_;
    }
    double sqrt_double() const { return std::sqrt(static_cast<double>(d_)); }

    Rat a_, b_;
    Int d_;
};

// [lo, hi] with lo^2 <= D <= hi^2 and hi - lo <= 2^-bits, by bisection from
// integer sqrt bounds.
RatInterval sqrt_enclosure(const Int& d, int bits);

}  // namespace unibase
