#include "unibase/solver.hpp"

#include <sstream>

namespace unibase {

namespace {

// acc accumulating sum_i w[i] * a^(n-1-i) * b^i by Horner.
Int weighted_sum(const Digits& w, const Int& a, const Int& b) {
    Int acc = 0, bpow = 1;
    for (Digit d : w) {
        acc = acc * a + Int(d) * bpow;
        bpow *= b;
    }
    return acc;
}

int int_sign(const Int& v) {
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

}  // namespace

int eval_sign(const PeriodicSeq& s, const Rat& q, const Rat& x) {
    if (q <= 1) throw std::domain_error("eval_sign: q must exceed 1");
    // ((pre per^inf))_{a/b} - xn/xd has the sign of
    //   xd * (T1 (a^L - b^L) b + T2 b^(P+1)) - xn a^P (a^L - b^L)
    // with T1, T2 the a/b-weighted digit sums of pre and per.
    const Int& a = numerator(q);
    const Int& b = denominator(q);
    const Int& xn = numerator(x);
    const Int& xd = denominator(x);
    size_t P = s.preperiod().size(), L = s.period().size();
    Int aL = ipow(a, L), bL = ipow(b, L);
    Int diff = aL - bL;  // > 0 since q > 1
    Int t1 = weighted_sum(s.preperiod(), a, b);
    Int t2 = weighted_sum(s.period(), a, b);
    Int lhs = xd * (t1 * diff * b + t2 * ipow(b, P + 1));
    Int rhs = xn * ipow(a, P) * diff;
    return int_sign(lhs - rhs);
}

CertifiedReal bisection_real(std::function<int(const Rat&)> sign_fn, RatInterval seed) {
    auto step = [fn = std::move(sign_fn)](const RatInterval& cur, int bits) -> RatInterval {
        Rat target = pow2(-bits);
        RatInterval iv = cur;
        while (iv.width() > target) {
            Rat mid = iv.mid();
            int s = fn(mid);
            if (s == 0) return RatInterval::point(mid);
            if (s > 0) iv.lo = mid;  // decreasing: still above the root
            else iv.hi = mid;
        }
        return iv;
    };
    return {std::move(seed), std::move(step)};
}

int bits_for_tol(const Rat& tol) {
    if (tol <= 0) throw std::invalid_argument("bits_for_tol: tolerance must be positive");
    int b = 0;
    while (pow2(-b) > tol) ++b;
    return b;
}

RatInterval default_bracket(Alphabet a) {
    Rat lo = 1 + pow2(-20);
    CertifiedReal g = q_G(a);
    Rat g_lo = g.refined(24).lo();
    if (g_lo > lo) lo = g_lo;
    return {lo, Rat(a.max_digit + 1)};
}

CertifiedReal solve_base(const PeriodicSeq& s, const Rat& x, RatInterval bracket,
                         const Rat& tol) {
    if (s == PeriodicSeq::constant(s.alphabet(), 0))
        throw std::invalid_argument("solve_base: zero sequence has no base");
    if (bracket.lo <= 1) throw std::invalid_argument("solve_base: bracket must start above 1");
    int s_lo = eval_sign(s, bracket.lo, x);
    if (s_lo == 0) return CertifiedReal::exact(bracket.lo);
    int s_hi = eval_sign(s, bracket.hi, x);
    if (s_hi == 0) return CertifiedReal::exact(bracket.hi);
    if (s_lo < 0 || s_hi > 0)
        throw std::invalid_argument("solve_base: bracket does not straddle the target value");
    CertifiedReal q = bisection_real([s, x](const Rat& mid) { return eval_sign(s, mid, x); },
                                     bracket);
    q.refine(bits_for_tol(tol));
    return q;
}

CertifiedReal phi_inverse(const PeriodicSeq& s, const Rat& x, const Rat& tol) {
    unsigned M = s.alphabet().max_digit;
    if (s.eventually_zero())
        throw std::runtime_error(
            "phi_inverse: sequence ends with 0^inf and is never quasi-greedy");
    RatInterval bracket{1 + pow2(-20), Rat(M + 1)};
    CertifiedReal q = solve_base(s, x, bracket, tol);

    // Verify s is the quasi-greedy expansion of x in the solved base: a
    // sequence not ending 0^inf is quasi-greedy for its value iff every tail
    // following a digit below M evaluates to at most 1. Each check reduces
    // to exact signs at the interval endpoints (values decrease in q), so
    // exact ties (tail value equal to 1) are handled without digit-level
    // certification.
    size_t tails = s.preperiod().size() + s.period().size();
    for (size_t n = 1; n <= tails; ++n) {
        if (s.digit(n - 1) == M) continue;
        PeriodicSeq u = shift(s, n);
        if (u == s) {
            // tail value equals x itself
            if (x <= 1) continue;
        } else if (eval_sign(u, q.lo(), Rat(1)) <= 0) {
            continue;  // value(u, q*) <= value(u, q_lo) <= 1
        }
        // Either certified failure, or the endpoint signs straddle: refine
        // until the sign at the upper end decides.
        CertifiedReal qa = q;
        bool bad = false;
        for (int bits = 64;; bits *= 2) {
            if (eval_sign(u, qa.hi(), Rat(1)) > 0) { bad = true; break; }
            if (eval_sign(u, qa.lo(), Rat(1)) <= 0) break;
            if (bits > kDefaultMaxBits)
                throw precision_error("phi_inverse: tail comparison not certified");
            qa.refine(bits);
        }
        if (bad) {
            std::ostringstream msg;
            msg << "phi_inverse: not the quasi-greedy expansion of " << x
                << " in the solved base; the tail after prefix \""
                << to_string(s.prefix(n), M) << "\" exceeds the expansion of 1";
            throw std::runtime_error(msg.str());
        }
    }
    return q;
}

CertifiedReal komornik_loreti(const Rat& tol) {
    // sign of sum_i t_i q^-i - 1, certified by partial sums with geometric
    // tail bounds (digits are 0/1, so the unseen tail adds at most
    // q^-K / (q-1)).
    auto sign_fn = [](const Rat& q) -> int {
        Rat qinv = Rat(1) / q;
        Rat sum = 0, power = 1;
        for (unsigned long i = 1; i <= 1u << 16; ++i) {
            power *= qinv;
            if (thue_morse_digit(i)) sum += power;
            if ((i & (i - 1)) == 0 && i >= 8) {  // check at powers of two
                Rat tail = power / (q - 1);
                if (sum > 1) return 1;
                if (sum + tail < 1) return -1;
            }
        }
        throw precision_error("komornik_loreti: sign undecided after deep partial sums");
    };
    CertifiedReal q = bisection_real(sign_fn, RatInterval{Rat(3, 2), Rat(2)});
    q.refine(bits_for_tol(tol));
    return q;
}

SymbolicInterval interval_endpoints(const Word& omega, const Rat& x, size_t N_j,
                                    const Rat& tol) {
    Alphabet a = omega.alphabet;
    unsigned M = a.max_digit;
    if (N_j < 2) throw std::invalid_argument("interval_endpoints: N_j must be at least 2");

    BaseM1Expansion base = finite_base_M1_expansion(x, a);
    if (!base.finite)
        throw std::invalid_argument("interval_endpoints: x has no finite base-(M+1) expansion");
    size_t m = base.prefix_len;

    // The fixed prefix: quasi-greedy digits of x, then N_j copies of M.
    Digits expected = base.quasi_greedy.prefix(m);
    expected.resize(m + N_j, static_cast<Digit>(M));
    if (omega.digits.size() < expected.size() ||
        !std::equal(expected.begin(), expected.end(), omega.digits.begin()))
        throw std::invalid_argument("interval_endpoints: word does not extend the level-0 prefix");

    Digits suffix(omega.digits.begin() + static_cast<long>(expected.size()), omega.digits.end());
    if (max_run(suffix, 0) >= N_j || max_run(suffix, static_cast<Digit>(M)) >= N_j)
        throw std::invalid_argument("interval_endpoints: suffix violates the run constraints");

    // Trailing-run length of the suffix's last digit.
    size_t k = 0;
    if (!suffix.empty()) {
        Digit last = suffix.back();
        while (k < suffix.size() && suffix[suffix.size() - 1 - k] == last) ++k;
        if (last != 0 && last != M) k = 0;
    }

    auto with_tail = [&](Digits run_fill, Digits period) {
        Digits pre = omega.digits;
        pre.insert(pre.end(), run_fill.begin(), run_fill.end());
        return PeriodicSeq(a, std::move(pre), std::move(period));
    };
    // Case (i) shapes; (ii)/(iii) override one side using the trailing run.
    Digits zeros(N_j - 1, 0), ms(N_j - 1, static_cast<Digit>(M));
    Digits left_per = zeros;
    left_per.push_back(1);  // 0^(Nj-1) 1
    Digits right_per = ms;
    right_per.push_back(static_cast<Digit>(M - 1));  // M^(Nj-1) (M-1)

    PeriodicSeq lo_seq = with_tail({}, left_per);
    PeriodicSeq hi_seq = with_tail({}, right_per);
    if (!suffix.empty() && suffix.back() == 0) {
        // ends with 0^k: left becomes omega 0^(Nj-1-k) (1 0^(Nj-1))^inf
        Digits per{1};
        per.insert(per.end(), zeros.begin(), zeros.end());
        lo_seq = with_tail(Digits(N_j - 1 - k, 0), std::move(per));
    } else if (!suffix.empty() && suffix.back() == M) {
        // ends with M^k: right becomes omega M^(Nj-1-k) ((M-1) M^(Nj-1))^inf
        Digits per{static_cast<Digit>(M - 1)};
        per.insert(per.end(), ms.begin(), ms.end());
        hi_seq = with_tail(Digits(N_j - 1 - k, static_cast<Digit>(M)), std::move(per));
    }

    RatInterval bracket = default_bracket(a);
    if (eval_sign(lo_seq, bracket.lo, x) < 0) bracket.lo = 1 + pow2(-20);  // rare: re-widen
    SymbolicInterval out{lo_seq, hi_seq, solve_base(lo_seq, x, bracket, tol),
                         solve_base(hi_seq, x, bracket, tol)};
    return out;
}

}  // namespace unibase
