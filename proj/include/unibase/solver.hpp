#pragma once

// Inverse problems: given a digit sequence s and a target value x, find the
// base q with ((s))_q = x by certified monotone bisection. Also the
// Komornik-Loreti constant and the endpoint bases of symbolic intervals.

#include "unibase/expansion.hpp"

namespace unibase {

// General certified bisection: sign_fn(q) must be the sign of a function
// that is strictly decreasing over [seed.lo, seed.hi], nonnegative at
// seed.lo and nonpositive at seed.hi. An exact zero collapses the result to
// a point. sign_fn must be pure (copies of the result re-invoke it).
CertifiedReal bisection_real(std::function<int(const Rat&)> sign_fn, RatInterval seed);

// Exact sign of ((s))_q - x at rational q > 1, via an integer formula
// (no rational normalization in the hot path).
int eval_sign(const PeriodicSeq& s, const Rat& q, const Rat& x);

// Default solve bracket: [q_G(M) or 1 + 2^-20, M+1].
RatInterval default_bracket(Alphabet a);

// The unique q in the bracket with ((s))_q = x. Requires the bracket to
// straddle: ((s))_{lo} >= x >= ((s))_{hi}. Result width <= tol, refinable.
CertifiedReal solve_base(const PeriodicSeq& s, const Rat& x, RatInterval bracket,
                         const Rat& tol);

// Smallest number of bits b with 2^-b <= tol.
int bits_for_tol(const Rat& tol);

inline const Rat kDefaultTol = Rat(1, ipow(2, 60));

// The base q whose quasi-greedy expansion of x is exactly s, solved over
// (1, M+1] and verified by the tail criterion: s must not end 0^inf and
// every tail following a digit below M must evaluate to at most 1 in the
// solved base. Throws std::runtime_error naming the offending prefix when s
// is not the quasi-greedy expansion of x in any base.
CertifiedReal phi_inverse(const PeriodicSeq& s, const Rat& x, const Rat& tol = kDefaultTol);

// The Komornik-Loreti constant: the base q solving ((t_i))_q = 1 with (t_i)
// the shifted Thue-Morse sequence, M = 1. Smallest base where 1 has a
// unique expansion.
CertifiedReal komornik_loreti(const Rat& tol = kDefaultTol);

// i-th digit (1-based) of the shifted Thue-Morse sequence: bit parity of i.
inline unsigned thue_morse_digit(unsigned long i) {
    return static_cast<unsigned>(__builtin_popcountll(i) & 1);
}

// A symbolic interval: its endpoint digit sequences and their solved bases.
struct SymbolicInterval {
    PeriodicSeq lo_seq, hi_seq;
    CertifiedReal lo, hi;
};

// Endpoints of the basic interval for the word omega = prefix + suffix,
// where prefix is the m quasi-greedy digits of x followed by M^{N_j}. The
// endpoint sequences follow the three-case rule on the suffix's trailing
// run (plain / trailing zeros / trailing Ms).
SymbolicInterval interval_endpoints(const Word& omega, const Rat& x, size_t N_j,
                                    const Rat& tol = kDefaultTol);

}  // namespace unibase
