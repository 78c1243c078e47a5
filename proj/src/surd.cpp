#include "unibase/surd.hpp"

#include <cmath>

namespace unibase {

RatInterval sqrt_enclosure(const Int& d, int bits) {
    if (d <= 0) throw std::domain_error("sqrt_enclosure: nonpositive radicand");
    Int r = boost::multiprecision::sqrt(d);  // integer sqrt, r^2 <= d
    Rat lo(r), hi(r + 1);
    if (lo * lo == Rat(d)) return {lo, lo};
    Rat eps = pow2(-bits);
    while (hi - lo > eps) {
        Rat mid = (lo + hi) / 2;
        if (mid * mid <= Rat(d)) lo = mid; else hi = mid;
    }
    return {lo, hi};
}

RatInterval Surd::enclosure(int bits) const {
    if (b_ == 0) return RatInterval::point(a_);
    // width of the result is |b| * width(root): ask for enough extra bits.
    Int mag = rfloor(abs(b_)) + 1;
    int extra = static_cast<int>(msb(mag)) + 2;
    RatInterval root = sqrt_enclosure(d_, bits + extra);
    RatInterval scaled = iv_scale(root, b_);
    return {a_ + scaled.lo, a_ + scaled.hi};
}

}  // namespace unibase
