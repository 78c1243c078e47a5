#pragma once

// CertifiedReal: a real number carried as a shrinking rational interval,
// optionally backed by an exact value (rational or quadratic surd) or by a
// refinement procedure (e.g. a bisection solver). Value semantics: copies
// refine independently, so sharing across threads is copy-on-refine.

#include "unibase/numeric.hpp"
#include "unibase/surd.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace unibase {

class CertifiedReal {
public:
    // Improves the interval to width <= 2^-bits (or throws precision_error).
    // Receives the current interval; must return a subinterval of it.
    using RefineStep = std::function<RatInterval(const RatInterval&, int bits)>;

    static CertifiedReal exact(Rat v) {
        CertifiedReal r;
        r.iv_ = RatInterval::point(std::move(v));
        return r;
    }
    static CertifiedReal algebraic(Surd s) {
        if (s.is_rational()) return exact(s.as_rational());
        CertifiedReal r;
        r.surd_ = std::move(s);
        r.iv_ = r.surd_->enclosure(64);
        return r;
    }
    CertifiedReal(RatInterval iv, RefineStep step) : iv_(std::move(iv)), step_(std::move(step)) {}

    const RatInterval& interval() const { return iv_; }
    const Rat& lo() const { return iv_.lo; }
    const Rat& hi() const { return iv_.hi; }
    Rat width() const { return iv_.width(); }

    bool is_exact_rational() const { return !surd_ && iv_.lo == iv_.hi; }
    bool is_exact() const { return surd_.has_value() || iv_.lo == iv_.hi; }
    const Rat& exact_rational() const {
        if (!is_exact_rational()) throw std::domain_error("CertifiedReal: not an exact rational");
        return iv_.lo;
    }
    // Exact value as a surd (rationals included); nullopt when only an
    // interval is known.
    std::optional<Surd> exact_value() const {
        if (surd_) return surd_;
        if (iv_.lo == iv_.hi) return Surd(iv_.lo);
        return std::nullopt;
    }

    void refine(int bits) {
        Rat target = pow2(-bits);
        if (iv_.width() <= target) return;
        if (surd_) {
            iv_ = intersect(surd_->enclosure(bits), iv_);
            return;
        }
        if (!step_) throw precision_error("CertifiedReal: no refiner attached");
        RatInterval improved = step_(iv_, bits);
        if (improved.lo < iv_.lo || improved.hi > iv_.hi)
            throw std::logic_error("CertifiedReal: refiner widened the interval");
        iv_ = improved;
        if (iv_.width() > target)
            throw precision_error("CertifiedReal: refiner failed to reach requested width");
    }
    CertifiedReal refined(int bits) const {
        CertifiedReal copy = *this;
        copy.refine(bits);
        return copy;
    }

    std::string decimal(int digits) const { return decimal_string(iv_.mid(), digits); }

private:
    CertifiedReal() = default;
    static RatInterval intersect(const RatInterval& a, const RatInterval& b) {
        return {a.lo > b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi};
    }

    RatInterval iv_{Rat(0), Rat(0)};
    std::optional<Surd> surd_;
    RefineStep step_;
};

// Certified sign of (a - b): -1, 0 or +1, or nullopt when the comparison is
// not decidable within the bit budget.
std::optional<int> certified_compare(const CertifiedReal& a, const CertifiedReal& b, int max_bits);

}  // namespace unibase
