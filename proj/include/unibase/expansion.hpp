#pragma once

// Base-q digit expansions: evaluation of eventually periodic sequences,
// greedy / quasi-greedy / lazy algorithms with certified digit decisions,
// univoqueness testing, and the structural base constants.

#include "unibase/certified.hpp"
#include "unibase/symbolic.hpp"

#include <optional>

namespace unibase {

// Result of expanding to depth n: the digit prefix plus bounds on what the
// unseen tail can contribute to the value.
struct ExpansionPrefix {
    Word digits;
    Rat tail_lo;  // always 0
    Rat tail_hi;  // M * q_lo^{-n} / (q_lo - 1)

    // The expansion continues with 0^infinity after the prefix, exactly.
    bool terminated = false;
    // Exact eventually periodic form, when the remainder state cycled
    // (exact rational / quadratic inputs only).
    std::optional<PeriodicSeq> full;
};

inline constexpr int kDefaultMaxBits = 4096;

// Value of s in base q: sum_i s_i q^-i via the closed geometric form.
// Exact inputs give an exact result; interval inputs give a refinable one.
CertifiedReal eval_seq(const PeriodicSeq& s, const CertifiedReal& q);

// Value of a finite word prefix, exact rational q.
Rat eval_word(const Digits& w, const Rat& q);

ExpansionPrefix greedy_expand(const CertifiedReal& x, const CertifiedReal& q, Alphabet a,
                              size_t n, int max_bits = kDefaultMaxBits);
ExpansionPrefix quasi_greedy_expand(const CertifiedReal& x, const CertifiedReal& q, Alphabet a,
                                    size_t n, int max_bits = kDefaultMaxBits);
ExpansionPrefix lazy_expand(const CertifiedReal& x, const CertifiedReal& q, Alphabet a,
                            size_t n, int max_bits = kDefaultMaxBits);

// Quasi-greedy expansion of 1 in base q.
ExpansionPrefix alpha(const CertifiedReal& q, Alphabet a, size_t n,
                      int max_bits = kDefaultMaxBits);

// True iff every tail of s is strictly above 0^inf and lexicographically at
// most s itself (the exact characterization of quasi-greedy expansions of 1).
bool is_valid_alpha(const PeriodicSeq& s);

enum class Univoqueness { UNIQUE_CERTIFIED, NOT_UNIQUE, UNDECIDED_AT_DEPTH };

// Does x have exactly one expansion in base q? Decided by comparing the
// greedy and lazy expansions to depth n; exact inputs let equal periodic
// expansions be certified, interval inputs can only refute or stay undecided.
Univoqueness is_univoque_point(const CertifiedReal& x, const CertifiedReal& q, Alphabet a,
                               size_t n, int max_bits = kDefaultMaxBits);

// The generalized golden ratio: the base below which no x in (0, M/(q-1)]
// has a unique expansion. Exact: k+1 for M = 2k, quadratic for M = 2k+1.
CertifiedReal q_G(Alphabet a);

// Base-(M+1) expansion data of a rational x in (0, 1].
struct BaseM1Expansion {
    // Finite digit word with x = sum e_i (M+1)^-i, when one exists.
    std::optional<Digits> finite;
    // The quasi-greedy expansion of x in base M+1 (exact, eventually
    // periodic). For finite x this is e_1..e_{m-1}(e_m - 1) M^infinity.
    PeriodicSeq quasi_greedy;
    // Length m of the quasi-greedy prefix before the M^infinity tail
    // (0 for x = 1, whose expansion is M^infinity outright).
    size_t prefix_len = 0;
};
BaseM1Expansion finite_base_M1_expansion(const Rat& x, Alphabet a);

std::string to_string(Univoqueness u);

}  // namespace unibase
