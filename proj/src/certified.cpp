#include "unibase/certified.hpp"

namespace unibase {

std::optional<int> certified_compare(const CertifiedReal& a, const CertifiedReal& b, int max_bits) {
    auto sa = a.exact_value();
    auto sb = b.exact_value();
    if (sa && sb) {
        // Same field (or one side rational): decide exactly.
        bool joinable = sa->is_rational() || sb->is_rational() || sa->radicand() == sb->radicand();
        if (joinable) return (*sa - *sb).sign();
    }
    CertifiedReal x = a, y = b;
    for (int bits = 64; bits <= max_bits; bits *= 2) {
        try {
            x.refine(bits);
            y.refine(bits);
        } catch (const precision_error&) {
            return std::nullopt;
        }
        if (x.hi() < y.lo()) return -1;
        if (x.lo() > y.hi()) return 1;
        if (x.width() == 0 && y.width() == 0) return 0;  // exact and overlapping
    }
    return std::nullopt;
}

}  // namespace unibase
