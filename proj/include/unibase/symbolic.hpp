#pragma once

// Digit-sequence algebra: finite words and eventually periodic sequences over
// {0,...,M}, lexicographic order, the (M+1)^-k metric, shifts, reflections.

#include "unibase/numeric.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace unibase {

using Digit = std::uint8_t;
using Digits = std::vector<Digit>;

struct Alphabet {
    unsigned max_digit;  // digits are {0, ..., max_digit}

    explicit Alphabet(unsigned m) : max_digit(m) {
        if (m < 1 || m > 254) throw std::invalid_argument("Alphabet: M must be in [1, 254]");
    }
    friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

struct Word {
    Alphabet alphabet;
    Digits digits;

    Word(Alphabet a, Digits d) : alphabet(a), digits(std::move(d)) {
        for (Digit x : digits)
            if (x > alphabet.max_digit) throw std::invalid_argument("Word: digit out of range");
    }
    size_t size() const { return digits.size(); }
};

// An infinite sequence pre (per)^infinity, held in canonical form: the period
// is primitive and the preperiod is as short as possible, so that equal
// sequences are structurally equal.
class PeriodicSeq {
public:
    PeriodicSeq(Alphabet a, Digits preperiod, Digits period);

    static PeriodicSeq constant(Alphabet a, Digit d) { return {a, {}, {d}}; }
    // w followed by zeros (the sequence of a finite expansion).
    static PeriodicSeq from_finite(Alphabet a, Digits w) { return {a, std::move(w), {0}}; }

    const Alphabet& alphabet() const { return alphabet_; }
    const Digits& preperiod() const { return pre_; }
    const Digits& period() const { return per_; }

    Digit digit(size_t i) const {  // 0-based
        if (i < pre_.size()) return pre_[i];
        return per_[(i - pre_.size()) % per_.size()];
    }
    Digits prefix(size_t n) const;

    // True when the sequence is w 0^infinity for some finite w.
    bool eventually_zero() const { return per_.size() == 1 && per_[0] == 0; }

    friend bool operator==(const PeriodicSeq& s, const PeriodicSeq& t) {
        return s.alphabet_ == t.alphabet_ && s.pre_ == t.pre_ && s.per_ == t.per_;
    }

private:
    Alphabet alphabet_;
    Digits pre_, per_;
};

enum class Ordering { LT, EQ, GT };

// Exact lexicographic comparison; decided on a finite prefix of length
// |pre_s| + |pre_t| + lcm(|per_s|, |per_t|).
Ordering lex_compare(const PeriodicSeq& s, const PeriodicSeq& t);

inline bool lex_less(const PeriodicSeq& s, const PeriodicSeq& t) {
    return lex_compare(s, t) == Ordering::LT;
}
inline bool lex_leq(const PeriodicSeq& s, const PeriodicSeq& t) {
    return lex_compare(s, t) != Ordering::GT;
}

// (M+1)^-k with k the 1-based index of the first disagreement; 0 when equal.
Rat rho_distance(const PeriodicSeq& s, const PeriodicSeq& t);

// Drops the first n digits.
PeriodicSeq shift(const PeriodicSeq& s, size_t n);

// Digitwise d -> M - d.
PeriodicSeq reflect(const PeriodicSeq& s);
Digits reflect(const Digits& w, unsigned max_digit);

// Number of occurrences of digit b in w.
size_t digit_count(const Word& w, Digit b);
size_t digit_count(const Digits& w, Digit b);

// Length of the longest run of digit b in w.
size_t max_run(const Word& w, Digit b);
size_t max_run(const Digits& w, Digit b);

// Longest run of b anywhere in the infinite sequence; nullopt when some run
// is infinite (the period is all-b).
std::optional<size_t> max_run(const PeriodicSeq& s, Digit b);

// Text form "pre(period)", digits comma-separated when M > 9.
std::string to_string(const PeriodicSeq& s);
std::string to_string(const Digits& w, unsigned max_digit);
PeriodicSeq parse_seq(const std::string& text, Alphabet a);
Digits parse_digits(const std::string& text, unsigned max_digit);

}  // namespace unibase
