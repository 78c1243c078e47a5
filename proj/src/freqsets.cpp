#include "unibase/freqsets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "unibase/expansion.hpp"

namespace unibase {

namespace {

// Quasi-greedy digits e_1..e_m of an x admissible for these constructions:
// a rational in (0,1) with a finite base-(M+1) expansion.
Digits expansion_prefix(const Rat& x, Alphabet a) {
    if (x <= 0 || x >= 1) throw std::invalid_argument("x must lie strictly between 0 and 1");
    BaseM1Expansion e = finite_base_M1_expansion(x, a);
    if (!e.finite) throw std::invalid_argument("x has no finite base-(M+1) expansion");
    return e.quasi_greedy.prefix(e.prefix_len);
}

// The word opening every construction here: e_1..e_m, then N copies of M.
Digits opening_digits(const Rat& x, Alphabet a, size_t N) {
    Digits d = expansion_prefix(x, a);
    d.resize(d.size() + N, static_cast<Digit>(a.max_digit));
    return d;
}

// Uniform draw from [0, n), stable across platforms.
unsigned draw_uniform(std::mt19937_64& rng, unsigned n) {
    if (n <= 1) return 0;
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        uint64_t r = rng();
        if (r < lim) return static_cast<unsigned>(r % n);
    }
}

std::vector<size_t> counts_of(const Digits& w, unsigned M) {
    std::vector<size_t> c(M + 1, 0);
    for (Digit d : w) ++c[d];
    return c;
}

// Membership in the stage vector family: every digit below M occurs
// m/(M+1) or m/(M+1)-1 times (the top digit is then forced).
bool stage_member(const std::vector<size_t>& c, unsigned M, size_t m) {
    size_t t = m / (M + 1);
    for (unsigned b = 0; b < M; ++b)
        if (c[b] != t && c[b] + 1 != t) return false;
    return true;
}

// Appends every word realizing the remaining counts, in lex order.
void emit_class(std::vector<size_t>& rem, size_t len, Digits& cur, std::vector<Digits>& out) {
    if (cur.size() == len) {
        out.push_back(cur);
        return;
    }
    for (unsigned d = 0; d < rem.size(); ++d)
        if (rem[d] > 0) {
            --rem[d];
            cur.push_back(static_cast<Digit>(d));
            emit_class(rem, len, cur, out);
            cur.pop_back();
            ++rem[d];
        }
}

Int min_class_size(const std::vector<FreqVector>& vectors) {
    Int m = count_words(vectors.front());
    for (size_t i = 1; i < vectors.size(); ++i) m = std::min(m, count_words(vectors[i]));
    return m;
}

// Exact-uniform draw from the stage-k block set. Stage 0 picks a count
// vector with probability proportional to its class size, then shuffles the
// digit multiset; stage k rejects pairs of stage-(k-1) draws whose combined
// counts leave the vector family.
Digits draw_stage(unsigned M, size_t N, unsigned k, std::mt19937_64& rng,
                  const std::vector<FreqVector>& base, const std::vector<Int>& weights,
                  const Int& weight_total) {
    if (k == 0) {
        Int r = rand_below(weight_total, rng);
        size_t pick = 0;
        while (r >= weights[pick]) {
            r -= weights[pick];
            ++pick;
        }
        Digits w;
        w.reserve(base[pick].total);
        for (unsigned b = 0; b <= M; ++b)
            w.insert(w.end(), base[pick].counts[b], static_cast<Digit>(b));
        for (size_t i = w.size(); i > 1; --i)
            std::swap(w[i - 1], w[draw_uniform(rng, static_cast<unsigned>(i))]);
        return w;
    }
    size_t mk = block_length(M, N, k);
    for (;;) {
        Digits u = draw_stage(M, N, k - 1, rng, base, weights, weight_total);
        Digits v = draw_stage(M, N, k - 1, rng, base, weights, weight_total);
        u.insert(u.end(), v.begin(), v.end());
        if (stage_member(counts_of(u, M), M, mk)) return u;
    }
}

// Completes a template's slots from the stream.
Digits fill_slots(const BlockTemplate& t, std::mt19937_64& rng) {
    unsigned M = t.alphabet.max_digit;
    Digits w;
    w.reserve(t.slots.size());
    for (int s : t.slots) {
        if (s == kFreeAny)
            w.push_back(static_cast<Digit>(draw_uniform(rng, M + 1)));
        else if (s == kFreeMiddle)
            w.push_back(static_cast<Digit>(1 + draw_uniform(rng, M - 1)));
        else
            w.push_back(static_cast<Digit>(s));
    }
    return w;
}

double certified_log_upper(const CertifiedReal& gamma) {
    if (gamma.hi() <= 1) throw std::invalid_argument("gamma must exceed 1");
    return std::log(gamma.hi().convert_to<double>());
}

}  // namespace

size_t block_length(unsigned M, size_t N, unsigned k) {
    Alphabet a(M);
    if (N <= 6 * static_cast<size_t>(M))
        throw std::invalid_argument("block_length: need N > 6M");
    if (k > 40) throw std::invalid_argument("block_length: stage too large");
    return (static_cast<size_t>(1) << k) * (M + 1) * (N / 3);
}

std::vector<FreqVector> freq_vectors(unsigned M, size_t m) {
    Alphabet a(M);
    if (m == 0 || m % (M + 1) != 0)
        throw std::invalid_argument("freq_vectors: length must be a positive multiple of M+1");
    size_t t = m / (M + 1);
    std::vector<FreqVector> out;
    out.reserve(static_cast<size_t>(1) << M);
    for (size_t mask = 0; mask < (static_cast<size_t>(1) << M); ++mask) {
        FreqVector v;
        v.total = m;
        v.counts.resize(M + 1);
        size_t used = 0;
        for (unsigned b = 0; b < M; ++b) {
            v.counts[b] = t - ((mask >> b) & 1);
            used += v.counts[b];
        }
        v.counts[M] = m - used;
        for (unsigned b = 0; b <= M; ++b) {
            // |counts[b]/m - 1/(M+1)| <= M/m, cleared of denominators
            long dev = static_cast<long>(v.counts[b] * (M + 1)) - static_cast<long>(m);
            if (dev > static_cast<long>(M * (M + 1)) || -dev > static_cast<long>(M * (M + 1)))
                throw std::logic_error("freq_vectors: deviation bound violated");
        }
        out.push_back(std::move(v));
    }
    return out;
}

Int count_words(const FreqVector& v) {
    if (v.counts.empty()) throw std::invalid_argument("count_words: empty vector");
    size_t sum = 0;
    for (size_t c : v.counts) sum += c;
    if (sum != v.total) throw std::invalid_argument("count_words: counts do not sum to the length");
    Int r = 1;
    size_t rem = v.total;
    for (size_t c : v.counts) {
        for (size_t i = 0; i < c; ++i) r = r * Int(rem - i) / Int(i + 1);
        rem -= c;
    }
    return r;
}

BlockSet simply_normal_blocks(unsigned M, size_t N, unsigned k, size_t cap) {
    size_t m0 = block_length(M, N, 0);
    std::vector<FreqVector> base = freq_vectors(M, m0);
    Int minc = min_class_size(base);

    BlockSet cur;
    cur.k = 0;
    cur.count = 0;
    for (const FreqVector& v : base) cur.count += count_words(v);
    cur.exact = true;
    if (cur.count <= Int(cap)) {
        Digits scratch;
        for (const FreqVector& v : base) {
            std::vector<size_t> rem = v.counts;
            emit_class(rem, v.total, scratch, cur.words);
        }
        std::sort(cur.words.begin(), cur.words.end());
    }

    for (unsigned s = 1; s <= k; ++s) {
        size_t ms = block_length(M, N, s);
        bool feasible = cur.exact && !cur.words.empty() &&
                        cur.words.size() <= cap / cur.words.size();
        if (!feasible) {
            BlockSet out;
            out.k = k;
            out.count = (Int(1) << M) * ipow(minc, 1ul << k);
            out.exact = false;
            return out;
        }
        std::vector<std::vector<size_t>> pc;
        pc.reserve(cur.words.size());
        for (const Digits& w : cur.words) pc.push_back(counts_of(w, M));
        BlockSet next;
        next.k = s;
        for (size_t i = 0; i < cur.words.size(); ++i)
            for (size_t j = 0; j < cur.words.size(); ++j) {
                std::vector<size_t> c = pc[i];
                for (unsigned b = 0; b <= M; ++b) c[b] += pc[j][b];
                if (!stage_member(c, M, ms)) continue;
                Digits w = cur.words[i];
                w.insert(w.end(), cur.words[j].begin(), cur.words[j].end());
                next.words.push_back(std::move(w));
            }
        next.count = next.words.size();
        next.exact = true;
        cur = std::move(next);
    }
    return cur;
}

Word sample_simply_normal(const Rat& x, unsigned M, size_t N, size_t depth, uint64_t seed) {
    Alphabet a(M);
    size_t m0 = block_length(M, N, 0);
    std::vector<FreqVector> base = freq_vectors(M, m0);
    std::vector<Int> weights;
    Int total = 0;
    for (const FreqVector& v : base) {
        weights.push_back(count_words(v));
        total += weights.back();
    }
    Digits w = opening_digits(x, a, N);
    std::mt19937_64 rng(seed);
    for (unsigned k = 0; w.size() < depth; ++k) {
        Digits blk = draw_stage(M, N, k, rng, base, weights, total);
        w.insert(w.end(), blk.begin(), blk.end());
    }
    return Word(a, std::move(w));
}

BlockTemplate irregular_template(unsigned M, size_t N, unsigned k) {
    Alphabet a(M);
    if (N < 2) throw std::invalid_argument("irregular_template: need N >= 2");
    if (k > 30) throw std::invalid_argument("irregular_template: stage too large");
    size_t reps = static_cast<size_t>(1) << k;
    BlockTemplate t{a, k, N, 0, {}, Int(0)};
    if (M >= 2) {
        t.c_length = reps * (M + 1) * N * N;
        t.slots.assign(t.c_length, kFreeAny);
        for (size_t i = N; i <= t.c_length; i += N) t.slots[i - 1] = kFreeMiddle;
        for (size_t r = 0; r < reps; ++r) {
            t.slots.insert(t.slots.end(), N - 1, 0);
            t.slots.push_back(1);
        }
        for (unsigned b = 1; b < M; ++b)
            for (size_t r = 0; r < reps; ++r) t.slots.insert(t.slots.end(), N, static_cast<int>(b));
        for (size_t r = 0; r < reps; ++r) {
            t.slots.insert(t.slots.end(), N - 1, static_cast<int>(M));
            t.slots.push_back(static_cast<int>(M) - 1);
        }
        size_t barred = t.c_length / N;
        t.count = ipow(Int(M + 1), static_cast<unsigned long>(t.c_length - barred)) *
                  ipow(Int(M - 1), static_cast<unsigned long>(barred));
    } else {
        t.c_length = 2 * reps * N * N;
        t.slots.assign(t.c_length, kFreeAny);
        for (size_t i = N; i <= t.c_length; i += N) {
            t.slots[i - 2] = 0;
            t.slots[i - 1] = 1;
        }
        for (size_t r = 0; r < reps; ++r) {
            t.slots.insert(t.slots.end(), N - 1, 0);
            t.slots.push_back(1);
        }
        for (size_t r = 0; r < reps; ++r) {
            t.slots.push_back(0);
            t.slots.insert(t.slots.end(), N - 1, 1);
        }
        t.slots.push_back(0);
        t.slots.push_back(1);
        t.count = ipow(Int(2), static_cast<unsigned long>(t.c_length - 2 * (t.c_length / N)));
    }
    return t;
}

Word fill_template(const BlockTemplate& t, uint64_t seed) {
    std::mt19937_64 rng(seed);
    return Word(t.alphabet, fill_slots(t, rng));
}

Word sample_irregular(const Rat& x, unsigned M, size_t N, unsigned k_max, uint64_t seed) {
    Alphabet a(M);
    if (N < 2) throw std::invalid_argument("sample_irregular: need N >= 2");
    Digits w = opening_digits(x, a, N);
    std::mt19937_64 rng(seed);
    for (unsigned k = 0; k <= k_max; ++k) {
        BlockTemplate t = irregular_template(M, N, k);
        Digits blk = fill_slots(t, rng);
        w.insert(w.end(), blk.begin(), blk.end());
    }
    return Word(a, std::move(w));
}

std::pair<size_t, size_t> checkpoint_lengths(unsigned M, size_t N, unsigned k, unsigned b) {
    if (M < 2) throw std::invalid_argument("checkpoint_lengths: need M >= 2");
    Alphabet a(M);
    if (b > M) throw std::invalid_argument("checkpoint_lengths: digit out of range");
    if (N < 2 || k > 30) throw std::invalid_argument("checkpoint_lengths: invalid parameters");
    size_t reps = static_cast<size_t>(1) << k;
    size_t base = 0;
    for (unsigned i = 0; i < k; ++i)
        base += (static_cast<size_t>(1) << i) * (M + 1) * N * (N + 1);
    size_t l = base + reps * (M + 1) * N * N + reps * N * b;
    return {l, l + reps * N};
}

Int theta_bound(unsigned M, size_t N, unsigned k, unsigned b) {
    if (M < 2) throw std::invalid_argument("theta_bound: need M >= 2");
    Alphabet a(M);
    if (b > M) throw std::invalid_argument("theta_bound: digit out of range");
    if (N < 2 || k > 30) throw std::invalid_argument("theta_bound: invalid parameters");
    Int f = Int(((static_cast<size_t>(1) << (k + 1)) - 1)) * (M + 1) * N;
    return (b == 0 || b == M) ? f * (N - 1) : f * N;
}

FreqProfile oscillation_evidence(const Word& w, unsigned digit,
                                 const std::vector<std::pair<size_t, size_t>>& checkpoints) {
    if (digit > w.alphabet.max_digit)
        throw std::invalid_argument("oscillation_evidence: digit out of range");
    if (checkpoints.empty()) throw std::invalid_argument("oscillation_evidence: no checkpoints");
    size_t maxpos = 0;
    for (const auto& [l, n] : checkpoints) {
        if (l == 0 || n < l) throw std::invalid_argument("oscillation_evidence: bad checkpoint");
        maxpos = std::max(maxpos, n);
    }
    if (maxpos > w.size())
        throw std::invalid_argument("oscillation_evidence: word shorter than its checkpoints");

    std::vector<size_t> cum(w.size() + 1, 0);
    for (size_t i = 0; i < w.size(); ++i)
        cum[i + 1] = cum[i] + (w.digits[i] == digit ? 1 : 0);

    FreqProfile p;
    p.digit = digit;
    for (const auto& [l, n] : checkpoints) {
        p.points.push_back({l, Rat(Int(cum[l]), Int(l))});
        p.points.push_back({n, Rat(Int(cum[n]), Int(n))});
    }
    size_t first = p.points.size() >= 4 ? p.points.size() - 4 : 0;
    p.lo = p.hi = p.points[first].ratio;
    for (size_t i = first; i < p.points.size(); ++i) {
        p.lo = std::min(p.lo, p.points[i].ratio);
        p.hi = std::max(p.hi, p.points[i].ratio);
    }
    p.spread = p.hi - p.lo;
    return p;
}

double dim_lower_simply_normal(unsigned M, size_t N, const CertifiedReal& gamma) {
    size_t m0 = block_length(M, N, 0);
    Int minc = min_class_size(freq_vectors(M, m0));
    return log_big(minc) / (static_cast<double>(m0) * certified_log_upper(gamma));
}

double dim_lower_irregular(unsigned M, size_t N, const CertifiedReal& gamma) {
    Alphabet a(M);
    if (N < 3) throw std::invalid_argument("dim_lower_irregular: need N >= 3");
    double lg = certified_log_upper(gamma);
    if (M == 1)
        return static_cast<double>(N - 2) * std::log(2.0) / (static_cast<double>(N + 1) * lg);
    return (static_cast<double>(N - 1) * std::log(static_cast<double>(M + 1)) +
            std::log(static_cast<double>(M - 1))) /
           (static_cast<double>(N + 1) * lg);
}

}  // namespace unibase
