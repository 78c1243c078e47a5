#include "unibase/expansion.hpp"

#include <map>
#include <tuple>

namespace unibase {

namespace {

Surd spow(const Surd& base, unsigned long e) {
    Surd acc{Rat(1)};
    Surd b = base;
    while (e) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

// Horner: sum_i w[i] q^-(i+1).
Surd eval_word_exact(const Digits& w, const Surd& q) {
    Surd v{Rat(0)};
    for (size_t i = w.size(); i-- > 0;) v = (v + Surd(Rat(w[i]))) / q;
    return v;
}

RatInterval eval_word_iv(const Digits& w, const RatInterval& q) {
    RatInterval v = RatInterval::point(Rat(0));
    for (size_t i = w.size(); i-- > 0;)
        v = iv_div(iv_add(v, RatInterval::point(Rat(w[i]))), q);
    return v;
}

Surd eval_seq_exact(const PeriodicSeq& s, const Surd& q) {
    Surd vpre = eval_word_exact(s.preperiod(), q);
    Surd vper = eval_word_exact(s.period(), q);
    Surd qinv = q.inverse();
    Surd scale = spow(qinv, s.preperiod().size());
    Surd denom = Surd(Rat(1)) - spow(qinv, s.period().size());
    return vpre + scale * (vper / denom);
}

RatInterval eval_seq_iv(const PeriodicSeq& s, const RatInterval& q) {
    RatInterval vpre = eval_word_iv(s.preperiod(), q);
    RatInterval vper = eval_word_iv(s.period(), q);
    RatInterval qinv = iv_div(RatInterval::point(Rat(1)), q);
    RatInterval scale = iv_pow(qinv, s.preperiod().size());
    RatInterval denom = iv_sub(RatInterval::point(Rat(1)), iv_pow(qinv, s.period().size()));
    return iv_add(vpre, iv_mul(scale, iv_div(vper, denom)));
}

// ---- exact digit recursion -------------------------------------------------

using StateKey = std::tuple<Rat, Rat, Int>;

StateKey key_of(const Surd& s) { return {s.rational_part(), s.radical_part(), s.radicand()}; }

struct ExactRun {
    Digits digits;
    bool terminated = false;                        // remainder hit exactly 0
    std::optional<size_t> cycle_start, cycle_len;   // digit stream periodicity
};

// Greedy (quasi = false) or quasi-greedy (quasi = true) digits of x in base
// q, exact field arithmetic. The remainder state determines everything that
// follows, so a repeated remainder certifies eventual periodicity.
ExactRun run_exact(const Surd& x, const Surd& q, unsigned M, size_t n, bool quasi) {
    ExactRun out;
    Surd r = x;
    std::map<StateKey, size_t> seen;
    for (size_t k = 0; k < n; ++k) {
        auto [it, fresh] = seen.emplace(key_of(r), k);
        if (!fresh) {
            out.cycle_start = it->second;
            out.cycle_len = k - it->second;
            return out;
        }
        Surd t = q * r;
        Int d = t.floor_int();
        if (quasi && (t - Surd(Rat(d))).sign() == 0) --d;  // strict rule at exact hits
        if (d > Int(M)) d = M;
        if (d < 0) throw std::domain_error("expansion: x out of range (negative digit)");
        out.digits.push_back(static_cast<Digit>(static_cast<unsigned>(d)));
        r = t - Surd(Rat(d));
        int rs = r.sign();
        if (rs < 0) throw std::logic_error("expansion: remainder went negative");
        if (!quasi && rs == 0) {
            out.terminated = true;
            return out;
        }
    }
    return out;
}

// ---- interval digit recursion ----------------------------------------------

struct IntervalRun {
    Digits digits;
    bool terminated = false;
    bool ambiguous = false;  // some digit not certified at this precision
};

IntervalRun run_interval(const RatInterval& x, const RatInterval& q, unsigned M, size_t n,
                         bool quasi) {
    IntervalRun out;
    RatInterval r = x;
    for (size_t k = 0; k < n; ++k) {
        RatInterval t = iv_mul(q, r);
        Int fl_lo = rfloor(t.lo), fl_hi = rfloor(t.hi);
        Int d;
        if (!quasi) {
            if (fl_lo == fl_hi) d = fl_lo;
            else if (t.lo >= Rat(M)) d = M;  // floor is at least M either way
            else { out.ambiguous = true; return out; }
        } else {
            // Need to exclude an exact integer hit, or sit above M+1 where
            // the capped digit is M regardless.
            if (fl_lo == fl_hi && t.lo > Rat(fl_lo)) d = fl_lo;
            else if (t.lo >= Rat(M + 1)) d = M;
            else { out.ambiguous = true; return out; }
        }
        if (d > Int(M)) d = M;
        if (d < 0) throw std::domain_error("expansion: x out of range (negative digit)");
        out.digits.push_back(static_cast<Digit>(static_cast<unsigned>(d)));
        r = iv_sub(t, RatInterval::point(Rat(d)));
        if (r.lo < 0) r.lo = 0;  // the true remainder is nonnegative
        if (!quasi && r.hi == 0) {
            out.terminated = true;
            return out;
        }
    }
    return out;
}

// ---- drivers ----------------------------------------------------------------

enum class Mode { Greedy, Quasi, Lazy };

bool joinable(const Surd& a, const Surd& b) {
    return a.is_rational() || b.is_rational() || a.radicand() == b.radicand();
}

Rat certified_q_lo(const CertifiedReal& q) {
    CertifiedReal qc = q;
    for (int bits = 64; qc.lo() <= 1; bits *= 2) {
        if (bits > kDefaultMaxBits) throw precision_error("expansion: cannot certify q > 1");
        qc.refine(bits);
        if (qc.width() == 0 && qc.lo() <= 1) throw std::domain_error("expansion: q must exceed 1");
    }
    return qc.lo();
}

Rat tail_bound(unsigned M, const Rat& q_lo, size_t n) {
    return Rat(M) * rpow(q_lo, -static_cast<long>(n)) / (q_lo - 1);
}

// Extends `digits` to n entries using the discovered structure.
void pad_digits(Digits& digits, size_t n, const ExactRun& run, Digit fill) {
    if (run.terminated) {
        digits.resize(n, fill);
        return;
    }
    if (run.cycle_start) {
        size_t start = *run.cycle_start, len = *run.cycle_len;
        while (digits.size() < n)
            digits.push_back(digits[start + (digits.size() - start) % len]);
    }
}

ExpansionPrefix expand_exact(Mode mode, const Surd& x, const Surd& q, Alphabet a, size_t n,
                             const Rat& q_lo) {
    unsigned M = a.max_digit;
    if ((q - Surd(Rat(1))).sign() <= 0) throw std::domain_error("expansion: q must exceed 1");
    Surd ub = Surd(Rat(M)) / (q - Surd(Rat(1)));
    if (x.sign() < 0 || (ub - x).sign() < 0)
        throw std::domain_error("expansion: x outside [0, M/(q-1)]");

    bool quasi = mode == Mode::Quasi;
    if (quasi && x.sign() <= 0) throw std::domain_error("quasi_greedy_expand: x must be positive");

    Surd target = mode == Mode::Lazy ? ub - x : x;
    ExactRun run = run_exact(target, q, M, n, quasi);

    Digits digits = run.digits;
    pad_digits(digits, n, run, 0);
    std::optional<PeriodicSeq> full;
    if (run.terminated)
        full = PeriodicSeq::from_finite(a, run.digits);
    else if (run.cycle_start)
        full = PeriodicSeq(a,
                           Digits(run.digits.begin(), run.digits.begin() + static_cast<long>(*run.cycle_start)),
                           Digits(run.digits.begin() + static_cast<long>(*run.cycle_start), run.digits.end()));

    if (mode == Mode::Lazy) {
        digits = reflect(digits, M);
        if (full) full = reflect(*full);
    }

    ExpansionPrefix out{Word(a, std::move(digits)), Rat(0), Rat(0),
                        /*terminated=*/false, std::move(full)};
    // A terminated run means the tail is exactly zero for greedy/quasi; the
    // lazy dual continues with M^inf instead, which is not a "terminated"
    // prefix, so keep the generic bound there.
    if (run.terminated && mode != Mode::Lazy) {
        out.terminated = true;
        out.tail_hi = 0;
    } else {
        out.tail_hi = tail_bound(M, q_lo, n);
    }
    return out;
}

ExpansionPrefix expand_interval(Mode mode, const CertifiedReal& x0, const CertifiedReal& q0,
                                Alphabet a, size_t n, int max_bits) {
    unsigned M = a.max_digit;
    bool quasi = mode == Mode::Quasi;
    CertifiedReal xc = x0, qc = q0;
    for (int bits = 64;; bits *= 2) {
        bool stuck = false;
        try {
            xc.refine(bits);
            qc.refine(bits);
        } catch (const precision_error&) {
            stuck = true;
        }
        if (qc.lo() <= 1) {
            if (qc.width() == 0) throw std::domain_error("expansion: q must exceed 1");
            if (stuck || bits >= max_bits)
                throw precision_error("expansion: cannot certify q > 1");
            continue;
        }
        RatInterval qiv = qc.interval(), xiv = xc.interval();
        if (xiv.hi < 0) throw std::domain_error("expansion: x is negative");
        Rat ub_hi = Rat(M) / (qiv.lo - 1);
        if (xiv.lo > ub_hi) throw std::domain_error("expansion: x exceeds M/(q-1)");
        if (xiv.lo < 0) xiv.lo = 0;

        RatInterval target = xiv;
        if (mode == Mode::Lazy) {
            RatInterval ub{Rat(M) / (qiv.hi - 1), ub_hi};
            target = iv_sub(ub, xiv);
            if (target.lo < 0) target.lo = 0;
        }
        IntervalRun run = run_interval(target, qiv, M, n, quasi);
        if (!run.ambiguous) {
            Digits digits = run.digits;
            std::optional<PeriodicSeq> full;
            if (run.terminated) {  // remainder interval was exactly {0}
                full = PeriodicSeq::from_finite(a, digits);
                digits.resize(n, 0);
            }
            bool terminated = run.terminated;
            if (mode == Mode::Lazy) {
                digits = reflect(digits, M);
                if (full) full = reflect(*full);
                terminated = false;
            }
            ExpansionPrefix out{Word(a, std::move(digits)), Rat(0), Rat(0), terminated,
                                std::move(full)};
            out.tail_hi = (terminated && mode != Mode::Lazy) ? Rat(0) : tail_bound(M, qiv.lo, n);
            return out;
        }
        if (stuck || bits >= max_bits)
            throw precision_error("expansion: digit decision not certified within bit budget");
    }
}

ExpansionPrefix expand(Mode mode, const CertifiedReal& x, const CertifiedReal& q, Alphabet a,
                       size_t n, int max_bits) {
    if (n < 1) throw std::invalid_argument("expansion: depth must be at least 1");
    auto sx = x.exact_value();
    auto sq = q.exact_value();
    if (sx && sq && joinable(*sx, *sq))
        return expand_exact(mode, *sx, *sq, a, n, certified_q_lo(q));
    return expand_interval(mode, x, q, a, n, max_bits);
}

}  // namespace

Rat eval_word(const Digits& w, const Rat& q) {
    Rat v = 0;
    for (size_t i = w.size(); i-- > 0;) v = (v + Rat(w[i])) / q;
    return v;
}

CertifiedReal eval_seq(const PeriodicSeq& s, const CertifiedReal& q) {
    if (auto sq = q.exact_value()) {
        if ((*sq - Surd(Rat(1))).sign() <= 0)
            throw std::domain_error("eval_seq: q must exceed 1");
        Surd v = eval_seq_exact(s, *sq);
        return v.is_rational() ? CertifiedReal::exact(v.as_rational())
                               : CertifiedReal::algebraic(v);
    }
    CertifiedReal qc = q;
    for (int bits = 64; qc.lo() <= 1; bits *= 2) {
        if (bits > kDefaultMaxBits) throw precision_error("eval_seq: cannot certify q > 1");
        qc.refine(bits);
    }
    RatInterval first = eval_seq_iv(s, qc.interval());
    auto step = [qc, s, extra = 16](const RatInterval& cur, int bits) mutable -> RatInterval {
        RatInterval best = cur;
        while (true) {
            qc.refine(bits + extra);
            RatInterval v = eval_seq_iv(s, qc.interval());
            if (v.lo > best.lo) best.lo = v.lo;
            if (v.hi < best.hi) best.hi = v.hi;
            if (best.width() <= pow2(-bits)) return best;
            extra *= 2;
            if (extra > (1 << 22)) throw precision_error("eval_seq: refinement stalled");
        }
    };
    return {first, std::move(step)};
}

ExpansionPrefix greedy_expand(const CertifiedReal& x, const CertifiedReal& q, Alphabet a,
                              size_t n, int max_bits) {
    return expand(Mode::Greedy, x, q, a, n, max_bits);
}

ExpansionPrefix quasi_greedy_expand(const CertifiedReal& x, const CertifiedReal& q, Alphabet a,
                                    size_t n, int max_bits) {
    return expand(Mode::Quasi, x, q, a, n, max_bits);
}

ExpansionPrefix lazy_expand(const CertifiedReal& x, const CertifiedReal& q, Alphabet a,
                            size_t n, int max_bits) {
    return expand(Mode::Lazy, x, q, a, n, max_bits);
}

ExpansionPrefix alpha(const CertifiedReal& q, Alphabet a, size_t n, int max_bits) {
    return quasi_greedy_expand(CertifiedReal::exact(Rat(1)), q, a, n, max_bits);
}

bool is_valid_alpha(const PeriodicSeq& s) {
    PeriodicSeq zero = PeriodicSeq::constant(s.alphabet(), 0);
    size_t bound = s.preperiod().size() + s.period().size();
    for (size_t k = 0; k <= bound; ++k) {
        PeriodicSeq tail = shift(s, k);
        if (lex_compare(tail, zero) != Ordering::GT) return false;
        if (k >= 1 && lex_compare(tail, s) == Ordering::GT) return false;
    }
    return true;
}

Univoqueness is_univoque_point(const CertifiedReal& x, const CertifiedReal& q, Alphabet a,
                               size_t n, int max_bits) {
    unsigned M = a.max_digit;
    auto sx = x.exact_value();
    auto sq = q.exact_value();
    if (sx && sq && joinable(*sx, *sq)) {
        if ((*sq - Surd(Rat(1))).sign() <= 0)
            throw std::domain_error("is_univoque_point: q must exceed 1");
        if (sx->sign() == 0) return Univoqueness::UNIQUE_CERTIFIED;  // only 0^inf sums to 0
        Surd ub = Surd(Rat(M)) / (*sq - Surd(Rat(1)));
        Surd mirror = ub - *sx;
        if (sx->sign() < 0 || mirror.sign() < 0)
            throw std::domain_error("is_univoque_point: x outside [0, M/(q-1)]");

        ExactRun g = run_exact(*sx, *sq, M, n, false);
        // A terminating greedy expansion of x > 0 always has the companion
        // expansion (last digit decremented, quasi-greedy continuation).
        if (g.terminated) return Univoqueness::NOT_UNIQUE;
        if (mirror.sign() == 0) {
            // x = M/(q-1): greedy is M^inf and so is the lazy expansion.
            return Univoqueness::UNIQUE_CERTIFIED;
        }
        ExactRun l = run_exact(mirror, *sq, M, n, false);
        if (l.terminated) return Univoqueness::NOT_UNIQUE;  // mirror point not univoque

        size_t common = std::min(g.digits.size(), l.digits.size());
        for (size_t i = 0; i < common; ++i)
            if (g.digits[i] != static_cast<Digit>(M - l.digits[i]))
                return Univoqueness::NOT_UNIQUE;
        if (g.cycle_start && l.cycle_start) {
            auto cut = [&](const ExactRun& r) {
                return PeriodicSeq(
                    a, Digits(r.digits.begin(), r.digits.begin() + static_cast<long>(*r.cycle_start)),
                    Digits(r.digits.begin() + static_cast<long>(*r.cycle_start), r.digits.end()));
            };
            PeriodicSeq greedy_seq = cut(g);
            PeriodicSeq lazy_seq = reflect(cut(l));
            return greedy_seq == lazy_seq ? Univoqueness::UNIQUE_CERTIFIED
                                          : Univoqueness::NOT_UNIQUE;
        }
        return Univoqueness::UNDECIDED_AT_DEPTH;
    }

    // Interval inputs: digits individually certified, so a mismatch refutes
    // uniqueness; agreement to depth n proves nothing further.
    try {
        ExpansionPrefix g = greedy_expand(x, q, a, n, max_bits);
        ExpansionPrefix l = lazy_expand(x, q, a, n, max_bits);
        if (g.digits.digits != l.digits.digits) return Univoqueness::NOT_UNIQUE;
        if (g.terminated) return Univoqueness::NOT_UNIQUE;
        return Univoqueness::UNDECIDED_AT_DEPTH;
    } catch (const precision_error&) {
        return Univoqueness::UNDECIDED_AT_DEPTH;
    }
}

CertifiedReal q_G(Alphabet a) {
    unsigned M = a.max_digit;
    if (M % 2 == 0) return CertifiedReal::exact(Rat(M / 2 + 1));
    unsigned k = (M - 1) / 2;
    // Positive root of q^2 - (k+1) q - (k+1).
    Int d = Int(k + 1) * Int(k + 1) + 4 * Int(k + 1);
    return CertifiedReal::algebraic(Surd(Rat(k + 1, 2), Rat(1, 2), d));
}

BaseM1Expansion finite_base_M1_expansion(const Rat& x, Alphabet a) {
    if (x <= 0 || x > 1) throw std::domain_error("finite_base_M1_expansion: x must be in (0, 1]");
    unsigned M = a.max_digit;
    unsigned b = M + 1;
    if (x == 1)
        return {std::nullopt, PeriodicSeq::constant(a, static_cast<Digit>(M)), 0};

    // x has a finite expansion iff every prime factor of its denominator
    // divides M+1.
    Int den = denominator(x);
    while (true) {
        Int g = gcd(den, Int(b));
        if (g == 1) break;
        while (den % g == 0) den /= g;
    }
    bool finite_ok = den == 1;

    Digits digits;
    Rat r = x;
    std::map<Rat, size_t> seen;
    size_t cycle_start = 0;
    while (true) {
        if (r == 0) break;
        auto [it, fresh] = seen.emplace(r, digits.size());
        if (!fresh) {
            cycle_start = it->second;
            break;
        }
        Rat t = r * b;
        Int d = rfloor(t);
        digits.push_back(static_cast<Digit>(static_cast<unsigned>(d)));
        r = t - Rat(d);
    }

    if (finite_ok) {
        // digits is the exact finite word; quasi-greedy form decrements the
        // final digit and continues with M^inf.
        Digits pre = digits;
        --pre.back();
        size_t m = digits.size();
        return {digits, PeriodicSeq(a, std::move(pre), {static_cast<Digit>(M)}), m};
    }
    PeriodicSeq qg(a, Digits(digits.begin(), digits.begin() + static_cast<long>(cycle_start)),
                   Digits(digits.begin() + static_cast<long>(cycle_start), digits.end()));
    return {std::nullopt, std::move(qg), 0};
}

std::string to_string(Univoqueness u) {
    switch (u) {
        case Univoqueness::UNIQUE_CERTIFIED: return "UNIQUE_CERTIFIED";
        case Univoqueness::NOT_UNIQUE: return "NOT_UNIQUE";
        case Univoqueness::UNDECIDED_AT_DEPTH: return "UNDECIDED_AT_DEPTH";
    }
    return "?";
}

}  // namespace unibase
