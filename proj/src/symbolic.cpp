#include "unibase/symbolic.hpp"

#include <algorithm>
#include <numeric>

namespace unibase {

namespace {

// Length of the primitive period of w (w = u^k with |u| minimal), via the
// classic failure function.
size_t primitive_period_length(const Digits& w) {
    size_t n = w.size();
    std::vector<size_t> fail(n, 0);
    for (size_t i = 1; i < n; ++i) {
        size_t j = fail[i - 1];
        while (j > 0 && w[i] != w[j]) j = fail[j - 1];
        if (w[i] == w[j]) ++j;
        fail[i] = j;
    }
    size_t cand = n - fail[n - 1];
    return (n % cand == 0) ? cand : n;
}

}  // namespace

PeriodicSeq::PeriodicSeq(Alphabet a, Digits preperiod, Digits period)
    : alphabet_(a), pre_(std::move(preperiod)), per_(std::move(period)) {
    if (per_.empty()) throw std::invalid_argument("PeriodicSeq: empty period");
    for (Digit d : pre_)
        if (d > alphabet_.max_digit) throw std::invalid_argument("PeriodicSeq: digit out of range");
    for (Digit d : per_)
        if (d > alphabet_.max_digit) throw std::invalid_argument("PeriodicSeq: digit out of range");
    // Canonical form: primitive period, then shortest preperiod.
    size_t p = primitive_period_length(per_);
    per_.resize(p);
    while (!pre_.empty() && pre_.back() == per_.back()) {
        std::rotate(per_.begin(), per_.end() - 1, per_.end());
        pre_.pop_back();
    }
}

Digits PeriodicSeq::prefix(size_t n) const {
    Digits out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(digit(i));
    return out;
}

Ordering lex_compare(const PeriodicSeq& s, const PeriodicSeq& t) {
    if (!(s.alphabet() == t.alphabet()))
        throw std::invalid_argument("lex_compare: alphabet mismatch");
    size_t bound = s.preperiod().size() + t.preperiod().size() +
                   std::lcm(s.period().size(), t.period().size());
    for (size_t i = 0; i < bound; ++i) {
        Digit a = s.digit(i), b = t.digit(i);
        if (a != b) return a < b ? Ordering::LT : Ordering::GT;
    }
    return Ordering::EQ;
}

Rat rho_distance(const PeriodicSeq& s, const PeriodicSeq& t) {
    if (!(s.alphabet() == t.alphabet()))
        throw std::invalid_argument("rho_distance: alphabet mismatch");
    size_t bound = s.preperiod().size() + t.preperiod().size() +
                   std::lcm(s.period().size(), t.period().size());
    for (size_t i = 0; i < bound; ++i) {
        if (s.digit(i) != t.digit(i))
            return Rat(1, ipow(s.alphabet().max_digit + 1, i + 1));
    }
    return Rat(0);
}

PeriodicSeq shift(const PeriodicSeq& s, size_t n) {
    const Digits& pre = s.preperiod();
    const Digits& per = s.period();
    if (n <= pre.size())
        return {s.alphabet(), Digits(pre.begin() + static_cast<long>(n), pre.end()), per};
    size_t k = (n - pre.size()) % per.size();
    Digits rotated(per.begin() + static_cast<long>(k), per.end());
    rotated.insert(rotated.end(), per.begin(), per.begin() + static_cast<long>(k));
    return {s.alphabet(), {}, std::move(rotated)};
}

Digits reflect(const Digits& w, unsigned max_digit) {
    Digits out;
    out.reserve(w.size());
    for (Digit d : w) out.push_back(static_cast<Digit>(max_digit - d));
    return out;
}

PeriodicSeq reflect(const PeriodicSeq& s) {
    unsigned m = s.alphabet().max_digit;
    return {s.alphabet(), reflect(s.preperiod(), m), reflect(s.period(), m)};
}

size_t digit_count(const Digits& w, Digit b) {
    return static_cast<size_t>(std::count(w.begin(), w.end(), b));
}

size_t digit_count(const Word& w, Digit b) { return digit_count(w.digits, b); }

size_t max_run(const Digits& w, Digit b) {
    size_t best = 0, cur = 0;
    for (Digit d : w) {
        cur = (d == b) ? cur + 1 : 0;
        best = std::max(best, cur);
    }
    return best;
}

size_t max_run(const Word& w, Digit b) { return max_run(w.digits, b); }

std::optional<size_t> max_run(const PeriodicSeq& s, Digit b) {
    const Digits& per = s.period();
    if (std::all_of(per.begin(), per.end(), [&](Digit d) { return d == b; }))
        return std::nullopt;
    // Any run is finite and visible in pre + per + per (runs may cross the
    // preperiod boundary or wrap around one period boundary, never more).
    Digits flat = s.preperiod();
    flat.insert(flat.end(), per.begin(), per.end());
    flat.insert(flat.end(), per.begin(), per.end());
    return max_run(flat, b);
}

std::string to_string(const Digits& w, unsigned max_digit) {
    std::string out;
    bool commas = max_digit > 9;
    for (size_t i = 0; i < w.size(); ++i) {
        if (commas && i) out += ',';
        out += std::to_string(static_cast<unsigned>(w[i]));
    }
    return out;
}

std::string to_string(const PeriodicSeq& s) {
    unsigned m = s.alphabet().max_digit;
    return to_string(s.preperiod(), m) + "(" + to_string(s.period(), m) + ")";
}

Digits parse_digits(const std::string& text, unsigned max_digit) {
    Digits out;
    if (text.empty()) return out;
    if (max_digit > 9) {
        size_t pos = 0;
        while (pos <= text.size()) {
            size_t next = text.find(',', pos);
            std::string tok = text.substr(pos, next == std::string::npos ? next : next - pos);
            if (tok.empty()) throw std::invalid_argument("parse_digits: empty digit token");
            unsigned long v = std::stoul(tok);
            if (v > max_digit) throw std::invalid_argument("parse_digits: digit out of range");
            out.push_back(static_cast<Digit>(v));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
    } else {
        for (char c : text) {
            if (c < '0' || c > '9') throw std::invalid_argument("parse_digits: bad digit character");
            unsigned v = static_cast<unsigned>(c - '0');
            if (v > max_digit) throw std::invalid_argument("parse_digits: digit out of range");
            out.push_back(static_cast<Digit>(v));
        }
    }
    return out;
}

PeriodicSeq parse_seq(const std::string& text, Alphabet a) {
    auto open = text.find('(');
    if (open == std::string::npos)
        return PeriodicSeq::from_finite(a, parse_digits(text, a.max_digit));
    auto close = text.find(')', open);
    if (close == std::string::npos || close != text.size() - 1)
        throw std::invalid_argument("parse_seq: malformed \"pre(period)\" text");
    Digits pre = parse_digits(text.substr(0, open), a.max_digit);
    Digits per = parse_digits(text.substr(open + 1, close - open - 1), a.max_digit);
    if (per.empty()) throw std::invalid_argument("parse_seq: empty period");
    return {a, std::move(pre), std::move(per)};
}

}  // namespace unibase
