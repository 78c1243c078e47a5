#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "unibase/freqsets.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "unibase/cantor.hpp"

using namespace unibase;

namespace {

double dbl(const Rat& r) { return r.convert_to<double>(); }

bool near(double a, double b, double tol) { return std::abs(a - b) < tol; }

std::vector<size_t> counts_of(const Digits& w, unsigned M) {
    std::vector<size_t> c(M + 1, 0);
    for (Digit d : w) ++c[d];
    return c;
}

// Counts of digits below M match the two-value stage family for length m.
bool near_uniform(const Digits& w, unsigned M, size_t m) {
    if (w.size() != m) return false;
    auto c = counts_of(w, M);
    size_t t = m / (M + 1);
    for (unsigned b = 0; b < M; ++b)
        if (c[b] != t && c[b] + 1 != t) return false;
    return true;
}

// Largest admissible base for run length N: the top endpoint of the root
// cover interval with block length N.
CertifiedReal gamma_for(const Rat& x, unsigned M, size_t N) {
    BaseM1Expansion e = finite_base_M1_expansion(x, Alphabet(M));
    Cover c = build_cover(x, M, static_cast<unsigned>(N - e.prefix_len), 0);
    return c.levels.front().intervals.front().hi;
}

}  // namespace

TEST_CASE("block lengths double per stage and demand long runs") {
    CHECK(block_length(1, 7, 0) == 4);
    CHECK(block_length(1, 7, 1) == 8);
    CHECK(block_length(1, 7, 2) == 16);
    CHECK(block_length(2, 13, 0) == 12);
    CHECK(block_length(2, 14, 2) == 48);
    for (unsigned k = 0; k < 6; ++k)
        CHECK(block_length(2, 13, k + 1) == 2 * block_length(2, 13, k));
    CHECK_THROWS_AS(block_length(1, 6, 0), std::invalid_argument);
    CHECK_THROWS_AS(block_length(2, 12, 0), std::invalid_argument);
}

TEST_CASE("freq_vectors lists the near-uniform count family") {
    auto v1 = freq_vectors(1, 4);
    REQUIRE(v1.size() == 2);
    CHECK(v1[0].counts == std::vector<size_t>{2, 2});
    CHECK(v1[1].counts == std::vector<size_t>{1, 3});
    CHECK(v1[0].total == 4);

    auto v2 = freq_vectors(2, 12);
    REQUIRE(v2.size() == 4);
    std::set<std::vector<size_t>> got;
    for (const auto& v : v2) {
        CHECK(v.total == 12);
        size_t sum = 0;
        for (size_t c : v.counts) sum += c;
        CHECK(sum == 12);
        for (unsigned b = 0; b <= 2; ++b) {
            // deviation bound |c/m - 1/(M+1)| <= M/m
            long dev = static_cast<long>(v.counts[b] * 3) - 12;
            CHECK(std::abs(dev) <= 6);
        }
        got.insert(v.counts);
    }
    CHECK(got.count({4, 4, 4}) == 1);
    CHECK(got.count({3, 4, 5}) == 1);
    CHECK(got.count({4, 3, 5}) == 1);
    CHECK(got.count({3, 3, 6}) == 1);

    CHECK_THROWS_AS(freq_vectors(1, 5), std::invalid_argument);
    CHECK_THROWS_AS(freq_vectors(2, 0), std::invalid_argument);
}

TEST_CASE("count_words is the exact multinomial") {
    CHECK(count_words({{2, 2}, 4}) == 6);
    CHECK(count_words({{1, 3}, 4}) == 4);
    CHECK(count_words({{4, 0}, 4}) == 1);
    CHECK(count_words({{4, 4, 4}, 12}) == 34650);
    CHECK(count_words({{3, 4, 5}, 12}) == 27720);
    CHECK(count_words({{3, 3, 6}, 12}) == 18480);
    CHECK_THROWS_AS(count_words({{2, 1}, 4}), std::invalid_argument);
    CHECK_THROWS_AS(count_words({{}, 0}), std::invalid_argument);
}

TEST_CASE("stage-0 block set enumerates both classes in lex order") {
    BlockSet b = simply_normal_blocks(1, 7, 0);
    CHECK(b.k == 0);
    CHECK(b.exact);
    CHECK(b.count == 10);
    REQUIRE(b.words.size() == 10);
    CHECK(std::is_sorted(b.words.begin(), b.words.end()));
    CHECK(b.words.front() == Digits{0, 0, 1, 1});
    CHECK(b.words.back() == Digits{1, 1, 1, 0});
    for (const Digits& w : b.words) CHECK(near_uniform(w, 1, 4));
}

TEST_CASE("higher stages filter pairs of the previous stage") {
    BlockSet b0 = simply_normal_blocks(1, 7, 0);
    std::set<Digits> level0(b0.words.begin(), b0.words.end());

    BlockSet b1 = simply_normal_blocks(1, 7, 1);
    CHECK(b1.exact);
    CHECK(b1.count == 84);
    REQUIRE(b1.words.size() == 84);
    CHECK(b1.words.front() == Digits{0, 0, 1, 1, 0, 0, 1, 1});
    CHECK(b1.words.back() == Digits{1, 1, 1, 0, 1, 1, 0, 0});
    for (const Digits& w : b1.words) {
        CHECK(near_uniform(w, 1, 8));
        CHECK(level0.count(Digits(w.begin(), w.begin() + 4)) == 1);
        CHECK(level0.count(Digits(w.begin() + 4, w.end())) == 1);
    }

    BlockSet b2 = simply_normal_blocks(1, 7, 2);
    CHECK(b2.exact);
    CHECK(b2.count == 4752);
    CHECK(b2.words.size() == 4752);

    // enumerated counts dominate the closed-form lower bound
    CHECK(b1.count >= Int(2) * ipow(Int(4), 2));
    CHECK(b2.count >= Int(2) * ipow(Int(4), 4));
}

TEST_CASE("beyond the filter budget only the lower bound survives") {
    BlockSet b3 = simply_normal_blocks(1, 7, 3);
    CHECK_FALSE(b3.exact);
    CHECK(b3.words.empty());
    CHECK(b3.count == Int(2) * ipow(Int(4), 8));

    // a tiny budget forces the fallback immediately
    BlockSet t1 = simply_normal_blocks(1, 7, 1, 10);
    CHECK_FALSE(t1.exact);
    CHECK(t1.count == Int(2) * ipow(Int(4), 2));

    // stage 0 keeps its exact count even when too large to enumerate
    BlockSet t0 = simply_normal_blocks(1, 7, 0, 5);
    CHECK(t0.exact);
    CHECK(t0.words.empty());
    CHECK(t0.count == 10);
}

TEST_CASE("three-letter stage-0 set matches the class sizes") {
    BlockSet b = simply_normal_blocks(2, 13, 0);
    CHECK(b.exact);
    CHECK(b.count == 108570);
    CHECK(b.words.size() == 108570);
    CHECK(std::is_sorted(b.words.begin(), b.words.end()));

    BlockSet b1 = simply_normal_blocks(2, 13, 1);
    CHECK_FALSE(b1.exact);
    CHECK(b1.count == Int(4) * ipow(Int(18480), 2));
}

TEST_CASE("simply-normal samples are admissible and stagewise balanced") {
    Word w = sample_simply_normal(Rat(1, 2), 1, 7, 60, 11);
    REQUIRE(w.size() == 68);
    CHECK(Digits(w.digits.begin(), w.digits.begin() + 8) == Digits{0, 1, 1, 1, 1, 1, 1, 1});

    Digits tail(w.digits.begin() + 8, w.digits.end());
    CHECK(max_run(tail, 0) < 7);
    CHECK(max_run(tail, 1) < 7);
    size_t off = 0;
    for (size_t mk : {4, 8, 16, 32}) {
        CHECK(near_uniform(Digits(tail.begin() + off, tail.begin() + off + mk), 1, mk));
        off += mk;
    }
    CHECK(off == tail.size());

    Word w2 = sample_simply_normal(Rat(1, 2), 1, 7, 60, 11);
    CHECK(w.digits == w2.digits);
    Word w3 = sample_simply_normal(Rat(1, 2), 1, 7, 60, 12);
    CHECK(w.digits != w3.digits);

    Word v = sample_simply_normal(Rat(1, 3), 2, 13, 100, 3);
    REQUIRE(v.size() == 194);
    CHECK(Digits(v.digits.begin(), v.digits.begin() + 14) ==
          Digits{0, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
    Digits vtail(v.digits.begin() + 14, v.digits.end());
    CHECK(max_run(vtail, 0) < 13);
    CHECK(max_run(vtail, 2) < 13);
    off = 0;
    for (size_t mk : {12, 24, 48, 96}) {
        CHECK(near_uniform(Digits(vtail.begin() + off, vtail.begin() + off + mk), 2, mk));
        off += mk;
    }

    CHECK_THROWS_AS(sample_simply_normal(Rat(1, 2), 1, 6, 40, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_simply_normal(Rat(2, 3), 1, 7, 40, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_simply_normal(Rat(1, 2), 2, 13, 40, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_simply_normal(Rat(3, 2), 1, 7, 40, 1), std::invalid_argument);
}

TEST_CASE("irregular template fixes runs and bars extremes periodically") {
    BlockTemplate t = irregular_template(2, 7, 0);
    CHECK(t.slots.size() == 168);
    CHECK(t.c_length == 147);
    CHECK(t.count == ipow(Int(3), 126));
    size_t any = 0, middle = 0, fixed = 0;
    for (int s : t.slots) {
        if (s == kFreeAny)
            ++any;
        else if (s == kFreeMiddle)
            ++middle;
        else
            ++fixed;
    }
    CHECK(any == 126);
    CHECK(middle == 21);
    CHECK(fixed == 21);
    for (size_t i = 7; i <= 147; i += 7) CHECK(t.slots[i - 1] == kFreeMiddle);
    CHECK(std::vector<int>(t.slots.begin() + 147, t.slots.begin() + 154) ==
          std::vector<int>{0, 0, 0, 0, 0, 0, 1});
    CHECK(std::vector<int>(t.slots.begin() + 154, t.slots.begin() + 161) ==
          std::vector<int>{1, 1, 1, 1, 1, 1, 1});
    CHECK(std::vector<int>(t.slots.begin() + 161, t.slots.end()) ==
          std::vector<int>{2, 2, 2, 2, 2, 2, 1});

    BlockTemplate t1 = irregular_template(2, 7, 1);
    CHECK(t1.slots.size() == 336);
    CHECK(t1.count == ipow(Int(3), 252));

    CHECK_THROWS_AS(irregular_template(2, 1, 0), std::invalid_argument);
}

TEST_CASE("two-letter irregular template forces 01 pairs and a seal") {
    BlockTemplate t = irregular_template(1, 7, 0);
    CHECK(t.slots.size() == 114);
    CHECK(t.c_length == 98);
    CHECK(t.count == ipow(Int(2), 70));
    for (size_t i = 7; i <= 98; i += 7) {
        CHECK(t.slots[i - 2] == 0);
        CHECK(t.slots[i - 1] == 1);
    }
    CHECK(std::vector<int>(t.slots.begin() + 98, t.slots.begin() + 105) ==
          std::vector<int>{0, 0, 0, 0, 0, 0, 1});
    CHECK(std::vector<int>(t.slots.begin() + 105, t.slots.begin() + 112) ==
          std::vector<int>{0, 1, 1, 1, 1, 1, 1});
    CHECK(std::vector<int>(t.slots.begin() + 112, t.slots.end()) == std::vector<int>{0, 1});
}

TEST_CASE("filled templates respect the run discipline") {
    BlockTemplate t = irregular_template(2, 7, 0);
    Word w = fill_template(t, 9);
    REQUIRE(w.size() == 168);
    for (size_t i = 7; i <= 147; i += 7) CHECK(w.digits[i - 1] == 1);
    CHECK(max_run(w, 0) < 7);
    CHECK(max_run(w, 2) < 7);
    CHECK(Digits(w.digits.begin() + 161, w.digits.end()) == Digits{2, 2, 2, 2, 2, 2, 1});
    CHECK(fill_template(t, 9).digits == w.digits);
    CHECK(fill_template(t, 10).digits != w.digits);

    BlockTemplate u = irregular_template(1, 9, 1);
    Word v = fill_template(u, 4);
    CHECK(v.size() == 2 * 2 * 9 * 10 + 2);
    CHECK(max_run(v, 0) < 9);
    CHECK(max_run(v, 1) < 9);
}

TEST_CASE("checkpoint lengths follow the block layout") {
    CHECK(checkpoint_lengths(2, 14, 2, 2) == std::pair<size_t, size_t>{4354, 4410});
    CHECK(checkpoint_lengths(2, 14, 3, 2) == std::pair<size_t, size_t>{9338, 9450});
    CHECK(checkpoint_lengths(2, 14, 0, 0) == std::pair<size_t, size_t>{588, 602});
    CHECK(checkpoint_lengths(2, 14, 1, 1) == std::pair<size_t, size_t>{1834, 1862});
    CHECK_THROWS_AS(checkpoint_lengths(1, 14, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(checkpoint_lengths(2, 14, 0, 3), std::invalid_argument);
}

TEST_CASE("theta bounds cap free-slot occurrences") {
    CHECK(theta_bound(2, 14, 3, 2) == 8190);
    CHECK(theta_bound(2, 14, 3, 0) == 8190);
    CHECK(theta_bound(2, 14, 3, 1) == 8820);
    CHECK(theta_bound(2, 14, 0, 0) == 546);
    CHECK_THROWS_AS(theta_bound(1, 14, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(theta_bound(2, 14, 0, 5), std::invalid_argument);
}

TEST_CASE("oscillation evidence reports exact running ratios") {
    Alphabet a(2);
    Word flat(a, Digits(20, 2));
    FreqProfile p = oscillation_evidence(flat, 2, {{4, 6}, {8, 10}});
    REQUIRE(p.points.size() == 4);
    for (const auto& pt : p.points) CHECK(pt.ratio == 1);
    CHECK(p.spread == 0);

    Digits half(20, 0);
    std::fill(half.begin() + 10, half.end(), 2);
    Word w(a, half);
    FreqProfile q = oscillation_evidence(w, 2, {{5, 10}, {10, 20}});
    CHECK(q.points[0].ratio == 0);
    CHECK(q.points[1].ratio == 0);
    CHECK(q.points[2].ratio == 0);
    CHECK(q.points[3].ratio == Rat(1, 2));
    CHECK(q.lo == 0);
    CHECK(q.hi == Rat(1, 2));
    CHECK(q.spread == Rat(1, 2));

    FreqProfile s = oscillation_evidence(w, 0, {{10, 20}});
    CHECK(s.points.size() == 2);
    CHECK(s.points[0].ratio == 1);
    CHECK(s.points[1].ratio == Rat(1, 2));
    CHECK(s.spread == Rat(1, 2));

    CHECK_THROWS_AS(oscillation_evidence(w, 2, {}), std::invalid_argument);
    CHECK_THROWS_AS(oscillation_evidence(w, 2, {{0, 5}}), std::invalid_argument);
    CHECK_THROWS_AS(oscillation_evidence(w, 2, {{6, 5}}), std::invalid_argument);
    CHECK_THROWS_AS(oscillation_evidence(w, 2, {{5, 21}}), std::invalid_argument);
    CHECK_THROWS_AS(oscillation_evidence(w, 3, {{5, 10}}), std::invalid_argument);
}

TEST_CASE("irregular samples oscillate between their checkpoints") {
    Word w = sample_irregular(Rat(1, 3), 2, 14, 3, 777);
    REQUIRE(w.size() == 9465);
    CHECK(Digits(w.digits.begin(), w.digits.begin() + 15) ==
          Digits{0, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
    Digits tail(w.digits.begin() + 15, w.digits.end());
    CHECK(tail.size() == 9450);
    CHECK(max_run(tail, 0) < 14);
    CHECK(max_run(tail, 2) < 14);

    // occurrences of the top digit inside the free regions stay under the cap
    size_t base = 0, c_occ = 0;
    for (unsigned k = 0; k <= 3; ++k) {
        size_t clen = (static_cast<size_t>(1) << k) * 3 * 14 * 14;
        for (size_t i = base; i < base + clen; ++i) c_occ += tail[i] == 2 ? 1 : 0;
        base += (static_cast<size_t>(1) << k) * 3 * 14 * 15;
    }
    CHECK(Int(c_occ) <= theta_bound(2, 14, 3, 2));

    Word wt(Alphabet(2), tail);
    FreqProfile p = oscillation_evidence(
        wt, 2, {checkpoint_lengths(2, 14, 2, 2), checkpoint_lengths(2, 14, 3, 2)});
    REQUIRE(p.points.size() == 4);
    CHECK(p.points[3].ratio > p.points[2].ratio);
    CHECK(p.spread > Rat(4, 1000));
    CHECK(p.spread < Rat(2, 100));

    Word w2 = sample_irregular(Rat(1, 3), 2, 14, 3, 777);
    CHECK(w.digits == w2.digits);

    Word u = sample_irregular(Rat(1, 2), 1, 7, 2, 5);
    REQUIRE(u.size() == 798);
    Digits ut(u.digits.begin() + 8, u.digits.end());
    CHECK(max_run(ut, 0) < 7);
    CHECK(max_run(ut, 1) < 7);
}

TEST_CASE("simply-normal dimension bound matches its closed form") {
    double trivial = dim_lower_simply_normal(1, 9, CertifiedReal::exact(Rat(2)));
    CHECK(near(trivial, std::log(15.0) / (6 * std::log(2.0)), 1e-12));

    CertifiedReal g9 = gamma_for(Rat(1, 2), 1, 9);
    double d9 = dim_lower_simply_normal(1, 9, g9);
    CHECK(near(d9, 0.651150, 1e-4));
    double d12 = dim_lower_simply_normal(1, 12, gamma_for(Rat(1, 2), 1, 12));
    CHECK(near(d12, 0.725919, 1e-4));
    double d15 = dim_lower_simply_normal(1, 15, gamma_for(Rat(1, 2), 1, 15));
    CHECK(near(d15, 0.771425, 1e-4));
    CHECK(d9 < d12);
    CHECK(d12 < d15);

    CHECK_THROWS_AS(dim_lower_simply_normal(1, 6, CertifiedReal::exact(Rat(2))),
                    std::invalid_argument);
    CHECK_THROWS_AS(dim_lower_simply_normal(1, 9, CertifiedReal::exact(Rat(1))),
                    std::invalid_argument);
}

TEST_CASE("irregular dimension bound matches its closed form") {
    CHECK(near(dim_lower_irregular(2, 7, CertifiedReal::exact(Rat(3))), 0.75, 1e-12));
    CHECK(near(dim_lower_irregular(1, 9, CertifiedReal::exact(Rat(2))), 0.7, 1e-12));

    double d13 = dim_lower_irregular(2, 13, gamma_for(Rat(1, 3), 2, 13));
    CHECK(near(d13, 0.857143, 1e-5));
    CHECK(d13 > 6.0 / 7.0);
    double d14 = dim_lower_irregular(2, 14, gamma_for(Rat(1, 3), 2, 14));
    CHECK(d13 < d14);

    CHECK_THROWS_AS(dim_lower_irregular(2, 2, CertifiedReal::exact(Rat(3))),
                    std::invalid_argument);
    CHECK_THROWS_AS(dim_lower_irregular(2, 7, CertifiedReal::exact(Rat(1))),
                    std::invalid_argument);
}

TEST_CASE("irregular counts agree with the Moran estimate") {
    std::vector<Int> counts;
    std::vector<size_t> lengths;
    for (unsigned k = 0; k <= 2; ++k) {
        BlockTemplate t = irregular_template(2, 7, k);
        counts.push_back(t.count);
        lengths.push_back(t.slots.size());
    }
    MoranEstimate est = moran_dim_estimate(counts, lengths, 3);
    for (double p : est.partials) CHECK(near(p, 0.75, 1e-9));
    CHECK(near(est.value, dim_lower_irregular(2, 7, CertifiedReal::exact(Rat(3))), 1e-9));
}
