#include "unibase/cantor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace unibase {

namespace {

std::atomic<unsigned> g_workers{1};

// Quasi-greedy digit data of an x admissible for the constructions here:
// a rational in (0,1) with a finite base-(M+1) expansion.
struct PrefixInfo {
    size_t m = 0;
    Digits eps;
};

PrefixInfo prefix_info(const Rat& x, Alphabet a) {
    if (x <= 0 || x >= 1) throw std::invalid_argument("x must lie strictly between 0 and 1");
    BaseM1Expansion e = finite_base_M1_expansion(x, a);
    if (!e.finite) throw std::invalid_argument("x has no finite base-(M+1) expansion");
    return {e.prefix_len, e.quasi_greedy.prefix(e.prefix_len)};
}

// The level-0 word: the m quasi-greedy digits of x, then block copies of M.
Digits level0_digits(const PrefixInfo& p, unsigned M, size_t block) {
    Digits d = p.eps;
    d.resize(p.m + block, static_cast<Digit>(M));
    return d;
}

// Extends every suffix by one admissible digit, preserving lex order. A
// digit is admissible unless it completes a run of 0 or M of length block
// inside the suffix.
std::vector<Digits> extend_suffixes(const std::vector<Digits>& cur, unsigned M, size_t block) {
    std::vector<Digits> next;
    next.reserve(cur.size() * (M + 1));
    for (const Digits& s : cur)
        for (unsigned d = 0; d <= M; ++d) {
            if (d == 0 || d == M) {
                size_t run = 0;
                while (run < s.size() && s[s.size() - 1 - run] == d) ++run;
                if (run + 1 >= block) continue;
            }
            next.push_back(s);
            next.back().push_back(static_cast<Digit>(d));
        }
    return next;
}

// Runs fn(0..count-1), spreading across worker_threads() when above 1. The
// first exception thrown by any worker is rethrown after the join.
template <typename F>
void run_indexed(size_t count, F&& fn) {
    size_t T = std::min<size_t>(worker_threads(), count);
    if (T <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errs(T);
    std::vector<std::thread> pool;
    pool.reserve(T);
    for (size_t t = 0; t < T; ++t)
        pool.emplace_back([&, t] {
            try {
                for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

std::vector<CoverInterval> solve_level(const Cover& c, const std::vector<Digits>& suffixes,
                                       const Rat& tol) {
    std::vector<std::optional<CoverInterval>> slots(suffixes.size());
    run_indexed(slots.size(), [&](size_t i) {
        Digits d = c.prefix.digits;
        d.insert(d.end(), suffixes[i].begin(), suffixes[i].end());
        Word word(c.alphabet, std::move(d));
        SymbolicInterval si = interval_endpoints(word, c.x, c.block, tol);
        slots[i] = CoverInterval{std::move(word), std::move(si.lo_seq), std::move(si.hi_seq),
                                 std::move(si.lo), std::move(si.hi)};
    });
    std::vector<CoverInterval> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// Gaps sit between adjacent intervals whose words agree except in the last
// digit; the admissible children of a parent form a contiguous digit range,
// so adjacent siblings always differ by exactly one there.
void attach_gaps(CoverLevel& level) {
    for (size_t i = 0; i + 1 < level.intervals.size(); ++i) {
        const Digits& a = level.intervals[i].word.digits;
        const Digits& b = level.intervals[i + 1].word.digits;
        if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) continue;
        if (b.back() != a.back() + 1)
            throw std::logic_error("build_cover: sibling digits not consecutive");
        level.gaps.push_back(CoverGap{i, level.intervals[i].hi, level.intervals[i + 1].lo});
    }
}

Rat rat_pow(const Rat& r, size_t e) {
    return Rat(ipow(numerator(r), e), ipow(denominator(r), e));
}

std::vector<RatInterval> outer_pieces(const Cover& c) {
    std::vector<RatInterval> out;
    out.reserve(c.intervals().size());
    for (const CoverInterval& iv : c.intervals()) out.emplace_back(iv.lo.lo(), iv.hi.hi());
    return out;
}

// Ordering and the three explicit hull bounds, checked in the conservative
// direction (certified left side against a certified right side).
void check_hull_laws(const HullSequence& hs) {
    unsigned M = hs.alphabet.max_digit;
    CertifiedReal g = q_G(hs.alphabet);
    g.refine(64);
    Int scale = ipow(Int(M) + 1, static_cast<unsigned long>(hs.m + 1));
    Rat mp1 = Rat(M) + 1;
    Rat c0_lo = 2 * mp1 * mp1 * mp1 / (g.hi() - 1);
    Rat c1_hi = (g.hi() - 1) * (g.hi() - 1) / scale;
    Rat c2_hi = Rat(M) * (g.hi() - 1) / scale;
    for (size_t i = 0; i < hs.entries.size(); ++i) {
        const HullEntry& e = hs.entries[i];
        if (!(e.alpha.hi() < e.beta.lo()))
            throw std::runtime_error("build_hulls: ordering alpha_j < beta_j not certified");
        if (i + 1 == hs.entries.size()) break;
        const HullEntry& f = hs.entries[i + 1];
        if (!(e.beta.hi() < f.alpha.lo()))
            throw std::runtime_error("build_hulls: ordering beta_j < alpha_j+1 not certified");
        size_t half = static_cast<size_t>(1) << e.j;
        if (!(f.alpha.hi() - e.beta.lo() <= c0_lo / rat_pow(f.alpha.hi(), 3 * half)))
            throw std::runtime_error("build_hulls: hull gap bound violated");
        if (!(e.beta.lo() - e.alpha.hi() >= c1_hi / rat_pow(f.alpha.lo(), half)))
            throw std::runtime_error("build_hulls: hull width bound violated");
        if (!(mp1 - f.alpha.hi() >= c2_hi / rat_pow(f.alpha.lo(), 2 * half)))
            throw std::runtime_error("build_hulls: hull top bound violated");
    }
}

}  // namespace

void set_worker_threads(unsigned n) { g_workers.store(n ? n : 1); }

unsigned worker_threads() { return g_workers.load(); }

Int count_omega(unsigned M, size_t block, size_t n) {
    if (M < 1) throw std::invalid_argument("count_omega: alphabet needs at least two digits");
    if (block < 2) throw std::invalid_argument("count_omega: block must be at least 2");
    // Transfer count by trailing-run state: runs of 0 and of M of length
    // 1..block-1, plus one state for words ending in a middle digit (the
    // empty word behaves the same way).
    std::vector<Int> zrun(block, 0), mrun(block, 0);
    Int mid = 1;
    for (size_t step = 0; step < n; ++step) {
        std::vector<Int> z2(block, 0), m2(block, 0);
        Int zsum = 0, msum = 0;
        for (size_t r = 1; r + 1 < block; ++r) {
            z2[r + 1] = zrun[r];
            m2[r + 1] = mrun[r];
        }
        for (size_t r = 1; r < block; ++r) {
            zsum += zrun[r];
            msum += mrun[r];
        }
        z2[1] = mid + msum;
        m2[1] = mid + zsum;
        mid = (mid + zsum + msum) * (M - 1);
        zrun = std::move(z2);
        mrun = std::move(m2);
    }
    Int total = mid;
    for (size_t r = 1; r < block; ++r) total += zrun[r] + mrun[r];
    return total;
}

std::vector<Word> enumerate_omega(const Rat& x, unsigned M, unsigned j, size_t n, size_t cap) {
    Alphabet a(M);
    if (j < 1) throw std::invalid_argument("enumerate_omega: j must be at least 1");
    PrefixInfo p = prefix_info(x, a);
    size_t block = p.m + j;
    Int total = count_omega(M, block, n);
    if (total > Int(cap)) {
        std::ostringstream msg;
        msg << "enumerate_omega: level holds " << total << " words, above the cap of " << cap;
        throw std::length_error(msg.str());
    }
    std::vector<Digits> suffixes{{}};
    for (size_t lvl = 0; lvl < n; ++lvl) suffixes = extend_suffixes(suffixes, M, block);
    Digits base = level0_digits(p, M, block);
    std::vector<Word> out;
    out.reserve(suffixes.size());
    for (const Digits& s : suffixes) {
        Digits d = base;
        d.insert(d.end(), s.begin(), s.end());
        out.push_back(Word(a, std::move(d)));
    }
    return out;
}

Word sample_omega(const Rat& x, unsigned M, unsigned j, size_t n, uint64_t seed) {
    Alphabet a(M);
    if (j < 1) throw std::invalid_argument("sample_omega: j must be at least 1");
    PrefixInfo p = prefix_info(x, a);
    size_t block = p.m + j;
    // Completion counts per state and remaining length make the draw exactly
    // uniform over admissible suffixes. State 0 holds middle-digit endings
    // (and the start); 1..block-1 a trailing 0-run, block..2block-2 an M-run.
    size_t states = 2 * block - 1;
    auto state_z = [&](size_t r) { return r; };
    auto state_m = [&](size_t r) { return block - 1 + r; };
    auto next_state = [&](size_t s, unsigned d) -> long {
        size_t run = 1;
        if (d == 0 && s >= 1 && s < block) run = s + 1;
        if (d == M && s >= block) run = s - (block - 1) + 1;
        if (run >= block) return -1;
        if (d == 0) return static_cast<long>(state_z(run));
        if (d == M) return static_cast<long>(state_m(run));
        return 0;
    };
    std::vector<std::vector<Int>> f(n + 1, std::vector<Int>(states, 0));
    f[0].assign(states, 1);
    for (size_t t = 1; t <= n; ++t)
        for (size_t s = 0; s < states; ++s)
            for (unsigned d = 0; d <= M; ++d) {
                long ns = next_state(s, d);
                if (ns >= 0) f[t][s] += f[t - 1][static_cast<size_t>(ns)];
            }
    std::mt19937_64 rng(seed);
    Digits d = level0_digits(p, M, block);
    size_t s = 0;
    for (size_t t = n; t > 0; --t) {
        Int r = rand_below(f[t][s], rng);
        for (unsigned dig = 0; dig <= M; ++dig) {
            long ns = next_state(s, dig);
            if (ns < 0) continue;
            const Int& w = f[t - 1][static_cast<size_t>(ns)];
            if (r < w) {
                d.push_back(static_cast<Digit>(dig));
                s = static_cast<size_t>(ns);
                break;
            }
            r -= w;
        }
    }
    return Word(a, std::move(d));
}

Cover build_cover(const Rat& x, unsigned M, unsigned j, size_t levels, const Rat& tol) {
    Alphabet a(M);
    if (j < 1) throw std::invalid_argument("build_cover: j must be at least 1");
    PrefixInfo p = prefix_info(x, a);
    size_t block = p.m + j;
    Digits pre = level0_digits(p, M, block);
    size_t ell = 1;
    while (pre[ell - 1] == 0) ++ell;
    Rat use_tol = tol > 0 ? tol : pow2(-static_cast<long>(pre.size() + levels + block + 40));

    Cover c{x, a, j, block, Word(a, std::move(pre)), ell, {}};
    std::vector<Digits> suffixes{{}};
    for (size_t lvl = 0;; ++lvl) {
        CoverLevel level;
        level.intervals = solve_level(c, suffixes, use_tol);
        if (lvl >= 1) attach_gaps(level);
        c.levels.push_back(std::move(level));
        if (lvl == levels) break;
        suffixes = extend_suffixes(suffixes, M, block);
        if (suffixes.size() > kEnumerationCap)
            throw std::length_error("build_cover: level beyond the enumeration cap");
    }
    return c;
}

Rat thickness_star(const Cover& c) {
    std::optional<Rat> best;
    for (const CoverLevel& level : c.levels)
        for (const CoverGap& g : level.gaps) {
            const CoverInterval& left = level.intervals[g.left];
            const CoverInterval& right = level.intervals[g.left + 1];
            Rat gap_in = g.hi.lo() - g.lo.hi();
            if (gap_in <= 0)
                throw precision_error("thickness_star: endpoint enclosures overlap a gap");
            Rat gap_out = g.hi.hi() - g.lo.lo();
            Rat len_l = left.hi.lo() - left.lo.hi();
            Rat len_r = right.hi.lo() - right.lo.hi();
            if (len_l <= 0 || len_r <= 0)
                throw precision_error("thickness_star: interval length not certified");
            Rat r = std::min(len_l, len_r) / gap_out;
            best = best ? std::min(*best, r) : r;
        }
    if (!best) throw std::invalid_argument("thickness_star: cover has no gaps");
    return *best;
}

Rat thickness_ordered(const std::vector<RatInterval>& intervals,
                      const std::vector<RatInterval>& gaps) {
    if (intervals.empty()) throw std::invalid_argument("thickness_ordered: no intervals");
    if (gaps.empty())
        throw std::invalid_argument("thickness_ordered: no gaps; thickness is unbounded");
    Rat lo = intervals[0].lo, hi = intervals[0].hi;
    for (const RatInterval& iv : intervals) {
        lo = std::min(lo, iv.lo);
        hi = std::max(hi, iv.hi);
    }
    for (const RatInterval& g : gaps) {
        if (g.width() <= 0) throw std::invalid_argument("thickness_ordered: gap with no width");
        if (g.lo < lo || g.hi > hi)
            throw std::invalid_argument("thickness_ordered: gap outside the hull");
        for (const RatInterval& iv : intervals)
            if (iv.lo < g.hi && iv.hi > g.lo)
                throw std::invalid_argument("thickness_ordered: gap overlaps an interval");
    }
    std::vector<size_t> order(gaps.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t i, size_t k) {
        Rat wi = gaps[i].width(), wk = gaps[k].width();
        if (wi != wk) return wi > wk;
        return gaps[i].lo < gaps[k].lo;
    });
    std::map<Rat, Rat> comps{{lo, hi}};
    std::optional<Rat> best;
    for (size_t gi : order) {
        const RatInterval& g = gaps[gi];
        auto it = comps.upper_bound(g.lo);
        if (it == comps.begin()) throw std::invalid_argument("thickness_ordered: gaps overlap");
        --it;
        if (g.hi > it->second) throw std::invalid_argument("thickness_ordered: gaps overlap");
        Rat cl = it->first, ch = it->second;
        comps.erase(it);
        comps.emplace(cl, g.lo);
        comps.emplace(g.hi, ch);
        Rat r = std::min(g.lo - cl, ch - g.hi) / g.width();
        best = best ? std::min(*best, r) : r;
    }
    return *best;
}

std::vector<RatInterval> cover_pieces(const Cover& c) {
    std::vector<RatInterval> out;
    out.reserve(c.intervals().size());
    for (const CoverInterval& iv : c.intervals()) {
        if (iv.lo.hi() > iv.hi.lo())
            throw precision_error("cover_pieces: piece not certified at this tolerance");
        out.emplace_back(iv.lo.hi(), iv.hi.lo());
    }
    return out;
}

std::vector<RatInterval> cover_gaps(const Cover& c) {
    const std::vector<CoverInterval>& ivs = c.intervals();
    std::vector<RatInterval> out;
    for (size_t i = 0; i + 1 < ivs.size(); ++i) {
        Rat lo = ivs[i].hi.lo(), hi = ivs[i + 1].lo.hi();
        if (lo > hi) throw precision_error("cover_gaps: endpoint enclosures overlap");
        if (lo < hi) out.emplace_back(lo, hi);
    }
    return out;
}

double newhouse_dim_bound(const Rat& tau) {
    if (tau <= 0) throw std::invalid_argument("newhouse_dim_bound: thickness must be positive");
    double t = tau.convert_to<double>();
    return std::log(2.0) / std::log(2.0 + 1.0 / t);
}

MoranEstimate moran_dim_estimate(const std::vector<Int>& counts,
                                 const std::vector<size_t>& lengths, unsigned base) {
    if (counts.empty() || counts.size() != lengths.size())
        throw std::invalid_argument("moran_dim_estimate: counts and lengths must match");
    if (base < 2) throw std::invalid_argument("moran_dim_estimate: base must be at least 2");
    MoranEstimate est;
    double num = 0, den = 0, logb = std::log(static_cast<double>(base));
    for (size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] < 1 || lengths[i] < 1)
            throw std::invalid_argument("moran_dim_estimate: counts and lengths must be positive");
        num += log_big(counts[i]);
        den += static_cast<double>(lengths[i]) * logb;
        est.partials.push_back(num / den);
    }
    est.value = est.partials.back();
    return est;
}

HullSequence build_hulls(const Rat& x, unsigned M, unsigned j_min, unsigned j_max,
                         const Rat& tol) {
    Alphabet a(M);
    if (j_min < 1 || j_min > j_max)
        throw std::invalid_argument("build_hulls: need 1 <= j_min <= j_max");
    if (j_max > 30) throw std::invalid_argument("build_hulls: block length 2^j is too large");
    PrefixInfo p = prefix_info(x, a);
    if ((static_cast<size_t>(1) << j_min) <= p.m)
        throw std::invalid_argument("build_hulls: need 2^j_min above the digit count of x");
    HullSequence hs{x, a, p.m, {}};
    for (unsigned jj = j_min; jj <= j_max; ++jj) {
        size_t half = static_cast<size_t>(1) << jj;
        Digits pre = p.eps;
        pre.resize(p.m + half, static_cast<Digit>(M));
        Digits per_a(half, 0);
        per_a.back() = 1;
        Digits per_b(half, static_cast<Digit>(M));
        per_b.back() = static_cast<Digit>(M - 1);
        Rat tj = tol > 0 ? tol : pow2(-static_cast<long>(p.m + 3 * half + 40));
        RatInterval bracket{1 + pow2(-20), Rat(M) + 1};
        CertifiedReal alpha = solve_base(PeriodicSeq(a, pre, std::move(per_a)), x, bracket, tj);
        CertifiedReal beta = solve_base(PeriodicSeq(a, std::move(pre), std::move(per_b)), x,
                                        bracket, tj);
        hs.entries.push_back(HullEntry{jj, std::move(alpha), std::move(beta)});
    }
    check_hull_laws(hs);
    return hs;
}

std::vector<RatInterval> intersect_intervals(const std::vector<RatInterval>& a,
                                             const std::vector<RatInterval>& b) {
    std::vector<RatInterval> out;
    size_t i = 0, k = 0;
    while (i < a.size() && k < b.size()) {
        Rat lo = std::max(a[i].lo, b[k].lo), hi = std::min(a[i].hi, b[k].hi);
        if (lo <= hi) out.emplace_back(lo, hi);
        if (a[i].hi < b[k].hi)
            ++i;
        else
            ++k;
    }
    return out;
}

std::vector<RatInterval> intersect_covers(const Cover& a, const Cover& b) {
    return intersect_intervals(outer_pieces(a), outer_pieces(b));
}

SumImageResult sum_image_check(const std::vector<RatInterval>& a,
                               const std::vector<RatInterval>& b, const Rat& lambda,
                               const Rat& resolution) {
    if (lambda == 0) throw std::invalid_argument("sum_image_check: lambda must be nonzero");
    if (resolution < 0) throw std::invalid_argument("sum_image_check: negative resolution");
    if (a.empty() || b.empty()) throw std::invalid_argument("sum_image_check: empty interval list");
    if (b.size() > kEnumerationCap / a.size())
        throw std::length_error("sum_image_check: too many interval pairs");
    std::vector<RatInterval> sums;
    sums.reserve(a.size() * b.size());
    for (const RatInterval& p : a)
        for (const RatInterval& q : b) {
            if (lambda > 0)
                sums.emplace_back(p.lo + lambda * q.lo, p.hi + lambda * q.hi);
            else
                sums.emplace_back(p.lo + lambda * q.hi, p.hi + lambda * q.lo);
        }
    std::sort(sums.begin(), sums.end(), [](const RatInterval& p, const RatInterval& q) {
        if (p.lo != q.lo) return p.lo < q.lo;
        return p.hi < q.hi;
    });
    SumImageResult res;
    std::vector<RatInterval> comps;
    Rat clo = sums[0].lo, chi = sums[0].hi;
    for (size_t i = 1; i < sums.size(); ++i) {
        if (sums[i].lo <= chi + resolution) {
            chi = std::max(chi, sums[i].hi);
            continue;
        }
        comps.emplace_back(clo, chi);
        res.holes.emplace_back(chi, sums[i].lo);
        clo = sums[i].lo;
        chi = sums[i].hi;
    }
    comps.emplace_back(clo, chi);
    res.largest = comps[0];
    for (const RatInterval& comp : comps)
        if (comp.width() > res.largest.width()) res.largest = comp;
    return res;
}

SumImageResult sum_image_check(const Cover& a, const Cover& b, const Rat& lambda,
                               const Rat& resolution) {
    return sum_image_check(outer_pieces(a), outer_pieces(b), lambda, resolution);
}

}  // namespace unibase
