#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "unibase/expansion.hpp"
#include "support/oracle.hpp"

#include <random>

using namespace unibase;

namespace {

const Alphabet kBinary{1};

CertifiedReal golden() { return q_G(kBinary); }  // (1+sqrt5)/2

Digits digits_of(const ExpansionPrefix& p) { return p.digits.digits; }

std::string digit_str(const ExpansionPrefix& p) {
    return to_string(p.digits.digits, p.digits.alphabet.max_digit);
}

Rat random_rat(std::mt19937& rng, long den_max) {
    std::uniform_int_distribution<long> den(2, den_max);
    long d = den(rng);
    std::uniform_int_distribution<long> num(1, d - 1);
    return {num(rng), d};
}

}  // namespace

TEST_CASE("eval_seq closed forms") {
    auto one = eval_seq(PeriodicSeq::constant(kBinary, 1), CertifiedReal::exact(Rat(2)));
    CHECK(one.is_exact_rational());
    CHECK(one.exact_rational() == 1);

    // ((10)^inf) at the golden ratio is exactly 1
    auto v = eval_seq(parse_seq("(10)", kBinary), golden());
    CHECK(v.is_exact());
    CHECK((*v.exact_value() - Surd(Rat(1))).sign() == 0);

    // partial sums approach the closed form
    auto s = parse_seq("01(101)", Alphabet(2));
    Rat q(7, 3);
    Rat closed = eval_seq(s, CertifiedReal::exact(q)).exact_rational();
    Rat partial = eval_word(s.prefix(200), q);
    Rat tail = Rat(2) * rpow(q, -200) / (q - 1);
    CHECK(partial <= closed);
    CHECK(closed - partial <= tail);
}

TEST_CASE("eval_seq with interval base refines") {
    // base given only as an interval around 3/2 with a trivial refiner
    auto target = Rat(3, 2);
    CertifiedReal q(RatInterval{Rat(14, 10), Rat(16, 10)},
                    [target](const RatInterval&, int bits) -> RatInterval {
                        Rat eps = pow2(-bits - 1);
                        return {target - eps, target + eps};
                    });
    auto v = eval_seq(parse_seq("(10)", kBinary), q);
    v.refine(100);
    CHECK(v.width() <= pow2(-100));
    // ((10)^inf)_{3/2} = (3/2)^-1 / (1 - (3/2)^-2) = 6/5
    CHECK(v.interval().contains(Rat(6, 5)));
}

TEST_CASE("greedy examples") {
    auto two = CertifiedReal::exact(Rat(2));
    CHECK(digit_str(greedy_expand(CertifiedReal::exact(Rat(1)), two, kBinary, 5)) == "11111");
    auto g = greedy_expand(CertifiedReal::exact(Rat(1)), golden(), kBinary, 5);
    CHECK(digit_str(g) == "11000");  // exact tie at the second digit's remainder
    CHECK(g.terminated);
    CHECK(g.tail_hi == 0);
    REQUIRE(g.full.has_value());
    CHECK(*g.full == parse_seq("11(0)", kBinary));
    auto h = greedy_expand(CertifiedReal::exact(Rat(1, 2)), two, kBinary, 5);
    CHECK(digit_str(h) == "10000");
    CHECK(h.terminated);
}

TEST_CASE("quasi-greedy examples") {
    auto two = CertifiedReal::exact(Rat(2));
    CHECK(digit_str(quasi_greedy_expand(CertifiedReal::exact(Rat(1)), two, kBinary, 6)) ==
          "111111");
    auto p = quasi_greedy_expand(CertifiedReal::exact(Rat(1, 2)), two, kBinary, 4);
    CHECK(digit_str(p) == "0111");
    REQUIRE(p.full.has_value());
    CHECK(*p.full == parse_seq("0(1)", kBinary));
    CHECK_THROWS_AS(quasi_greedy_expand(CertifiedReal::exact(Rat(0)), two, kBinary, 3),
                    std::domain_error);
}

TEST_CASE("alpha") {
    auto a2 = alpha(CertifiedReal::exact(Rat(2)), kBinary, 6);
    CHECK(digit_str(a2) == "111111");
    auto ag = alpha(golden(), kBinary, 6);
    CHECK(digit_str(ag) == "101010");
    REQUIRE(ag.full.has_value());
    CHECK(*ag.full == parse_seq("(10)", kBinary));
    // alpha(M+1) = M^inf
    auto a3 = alpha(CertifiedReal::exact(Rat(3)), Alphabet(2), 5);
    CHECK(digits_of(a3) == Digits{2, 2, 2, 2, 2});
}

TEST_CASE("lazy examples") {
    auto two = CertifiedReal::exact(Rat(2));
    CHECK(digit_str(lazy_expand(CertifiedReal::exact(Rat(1)), two, kBinary, 5)) == "11111");
    // smallest expansion of 1 in the golden base: 0 1^inf
    auto l = lazy_expand(CertifiedReal::exact(Rat(1)), golden(), kBinary, 6);
    CHECK(digit_str(l) == "011111");
    REQUIRE(l.full.has_value());
    CHECK(*l.full == parse_seq("0(1)", kBinary));
}

TEST_CASE("expansion order: greedy >= quasi >= lazy digitwise-lexicographic") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        unsigned M = 1 + trial % 3;
        Alphabet a(M);
        Rat q = Rat(1) + random_rat(rng, 50) * Rat(M);  // q in (1, M+1)
        if (q <= 1 || q > Rat(M + 1)) continue;
        Rat ub = Rat(M) / (q - 1);
        Rat x = random_rat(rng, 40) * ub;
        if (x <= 0 || x > ub) continue;
        auto xq = CertifiedReal::exact(x);
        auto qc = CertifiedReal::exact(q);
        auto g = digits_of(greedy_expand(xq, qc, a, 24));
        auto qg = digits_of(quasi_greedy_expand(xq, qc, a, 24));
        auto l = digits_of(lazy_expand(xq, qc, a, 24));
        CHECK(g >= qg);
        CHECK(qg >= l);
    }
}

TEST_CASE("quasi-greedy is monotone in q") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        Rat q1 = Rat(1) + random_rat(rng, 60);
        Rat q2 = Rat(1) + random_rat(rng, 60);
        if (q1 == q2) continue;
        if (q1 > q2) std::swap(q1, q2);
        Rat x(1, 2 + trial % 5);
        if (x > Rat(1) / (q2 - 1)) continue;  // keep x in range for both bases
        auto d1 = digits_of(quasi_greedy_expand(CertifiedReal::exact(x),
                                                CertifiedReal::exact(q1), kBinary, 30));
        auto d2 = digits_of(quasi_greedy_expand(CertifiedReal::exact(x),
                                                CertifiedReal::exact(q2), kBinary, 30));
        CHECK(d1 <= d2);
    }
}

TEST_CASE("tail bound soundness") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        unsigned M = 1 + trial % 2;
        Alphabet a(M);
        Rat q = Rat(1) + random_rat(rng, 30) * Rat(M);
        if (q <= 1) continue;
        Rat ub = Rat(M) / (q - 1);
        Rat x = random_rat(rng, 50) * ub;
        auto p = greedy_expand(CertifiedReal::exact(x), CertifiedReal::exact(q), a, 20);
        Rat approx = eval_word(p.digits.digits, q);
        CHECK(approx <= x);
        CHECK(x - approx <= Rat(M) * rpow(q, -20) / (q - 1));
        CHECK(x - approx <= p.tail_hi);
    }
}

TEST_CASE("greedy expansion round-trips through eval_seq") {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        Rat q = Rat(1) + random_rat(rng, 20);
        auto qc = CertifiedReal::exact(q);
        // build a value from a random expansion, then re-expand it
        Rat x = random_rat(rng, 64) / (q - 1);
        auto p = greedy_expand(CertifiedReal::exact(x), qc, kBinary, 40);
        if (!p.full) continue;
        Rat v = eval_seq(*p.full, qc).exact_rational();
        CHECK(v == x);
        auto p2 = greedy_expand(CertifiedReal::exact(v), qc, kBinary, 40);
        CHECK(digits_of(p2) == digits_of(p));
    }
}

TEST_CASE("is_valid_alpha") {
    CHECK(is_valid_alpha(parse_seq("(10)", kBinary)));
    CHECK_FALSE(is_valid_alpha(parse_seq("1(0)", kBinary)));
    CHECK(is_valid_alpha(PeriodicSeq::constant(Alphabet(3), 3)));  // M^inf
    CHECK_FALSE(is_valid_alpha(PeriodicSeq::constant(kBinary, 0)));
    CHECK_FALSE(is_valid_alpha(parse_seq("(011)", kBinary)));  // tail 11... exceeds s
    CHECK(is_valid_alpha(parse_seq("(110)", kBinary)));
    // every detected-periodic alpha(q) passes
    for (Rat q : {Rat(3, 2), Rat(7, 4), Rat(2), Rat(9, 5)}) {
        auto ap = alpha(CertifiedReal::exact(q), kBinary, 400);
        if (ap.full) CHECK(is_valid_alpha(*ap.full));
    }
}

TEST_CASE("univoqueness spec points") {
    auto two = CertifiedReal::exact(Rat(2));
    CHECK(is_univoque_point(CertifiedReal::exact(Rat(1)), two, kBinary, 16) ==
          Univoqueness::UNIQUE_CERTIFIED);
    CHECK(is_univoque_point(CertifiedReal::exact(Rat(1)), golden(), kBinary, 16) ==
          Univoqueness::NOT_UNIQUE);
    CHECK(is_univoque_point(CertifiedReal::exact(Rat(1, 2)), two, kBinary, 16) ==
          Univoqueness::NOT_UNIQUE);
    CHECK(is_univoque_point(CertifiedReal::exact(Rat(0)), two, kBinary, 16) ==
          Univoqueness::UNIQUE_CERTIFIED);
    // x = M/(q-1) has only the expansion M^inf
    CHECK(is_univoque_point(CertifiedReal::exact(Rat(2)), CertifiedReal::exact(Rat(3, 2)),
                            kBinary, 16) == Univoqueness::UNIQUE_CERTIFIED);
}

TEST_CASE("univoqueness agrees with the brute-force oracle") {
    std::mt19937 rng(4242);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        unsigned M = 1 + trial % 2;
        Alphabet a(M);
        Rat q = Rat(1) + random_rat(rng, 24) * Rat(M);
        if (q <= Rat(11, 10)) continue;  // keep oracle branching reasonable
        Rat ub = Rat(M) / (q - 1);
        Rat x = random_rat(rng, 30) * ub;
        size_t depth = 28;
        auto verdict = is_univoque_point(CertifiedReal::exact(x), CertifiedReal::exact(q), a,
                                         depth);
        size_t count = oracle::count_expansion_prefixes(x, q, M, depth);
        ++checked;
        if (verdict == Univoqueness::NOT_UNIQUE) {
            CHECK(count >= 2);
        } else {
            CHECK(count == 1);
        }
    }
    CHECK(checked > 60);
}

TEST_CASE("q_G") {
    auto g1 = q_G(kBinary);
    REQUIRE(g1.exact_value().has_value());
    Surd v = *g1.exact_value();
    CHECK((v * v - v - Surd(Rat(1))).sign() == 0);  // golden ratio equation
    auto g2 = q_G(Alphabet(2));
    CHECK(g2.is_exact_rational());
    CHECK(g2.exact_rational() == 2);
    for (unsigned M = 1; M <= 10; ++M) {
        auto g = q_G(Alphabet(M));
        CertifiedReal bound = CertifiedReal::exact(Rat(M, 2) + 1);
        auto cmp = certified_compare(g, bound, 256);
        REQUIRE(cmp.has_value());
        CHECK(*cmp >= 0);
    }
}

TEST_CASE("finite base-(M+1) expansions") {
    auto r = finite_base_M1_expansion(Rat(1, 2), kBinary);
    REQUIRE(r.finite.has_value());
    CHECK(*r.finite == Digits{1});
    CHECK(r.quasi_greedy == parse_seq("0(1)", kBinary));
    CHECK(r.prefix_len == 1);

    auto one = finite_base_M1_expansion(Rat(1), Alphabet(3));
    CHECK_FALSE(one.finite.has_value());
    CHECK(one.quasi_greedy == PeriodicSeq::constant(Alphabet(3), 3));
    CHECK(one.prefix_len == 0);

    auto third = finite_base_M1_expansion(Rat(1, 3), kBinary);
    CHECK_FALSE(third.finite.has_value());
    CHECK(third.quasi_greedy == parse_seq("(01)", kBinary));

    auto third3 = finite_base_M1_expansion(Rat(1, 3), Alphabet(2));
    REQUIRE(third3.finite.has_value());
    CHECK(*third3.finite == Digits{1});
    CHECK(third3.quasi_greedy == parse_seq("0(2)", Alphabet(2)));
    CHECK(third3.prefix_len == 1);

    auto f34 = finite_base_M1_expansion(Rat(3, 4), kBinary);
    REQUIRE(f34.finite.has_value());
    CHECK(*f34.finite == Digits{1, 1});
    CHECK(f34.quasi_greedy == parse_seq("10(1)", kBinary));
    CHECK(f34.prefix_len == 2);

    CHECK_THROWS_AS(finite_base_M1_expansion(Rat(0), kBinary), std::domain_error);
    CHECK_THROWS_AS(finite_base_M1_expansion(Rat(3, 2), kBinary), std::domain_error);
}

TEST_CASE("quasi-greedy expansion agrees with base-(M+1) helper") {
    for (Rat x : {Rat(1, 2), Rat(3, 4), Rat(1, 4), Rat(5, 8)}) {
        auto helper = finite_base_M1_expansion(x, kBinary);
        auto direct = quasi_greedy_expand(CertifiedReal::exact(x), CertifiedReal::exact(Rat(2)),
                                          kBinary, 40);
        REQUIRE(direct.full.has_value());
        CHECK(*direct.full == helper.quasi_greedy);
    }
}

TEST_CASE("expansion with interval inputs certifies digits") {
    // q known only as a shrinking interval around sqrt(2)+1/2 (irrational)
    CertifiedReal q(RatInterval{Rat(19, 10), Rat(2)},
                    [](const RatInterval& cur, int bits) -> RatInterval {
                        RatInterval root = sqrt_enclosure(Int(2), bits + 2);
                        Rat lo = root.lo + Rat(1, 2), hi = root.hi + Rat(1, 2);
                        if (lo < cur.lo) lo = cur.lo;
                        if (hi > cur.hi) hi = cur.hi;
                        return {lo, hi};
                    });
    auto p = greedy_expand(CertifiedReal::exact(Rat(1)), q, kBinary, 20);
    CHECK(p.digits.digits.size() == 20);
    CHECK_FALSE(p.full.has_value());
    // digits match the exact surd computation
    auto exact_q = CertifiedReal::algebraic(Surd(Rat(1, 2), Rat(1), 2));
    auto pe = greedy_expand(CertifiedReal::exact(Rat(1)), exact_q, kBinary, 20);
    CHECK(digits_of(p) == digits_of(pe));
}

TEST_CASE("range and argument errors") {
    auto two = CertifiedReal::exact(Rat(2));
    CHECK_THROWS_AS(greedy_expand(CertifiedReal::exact(Rat(-1)), two, kBinary, 4),
                    std::domain_error);
    CHECK_THROWS_AS(greedy_expand(CertifiedReal::exact(Rat(3)), two, kBinary, 4),
                    std::domain_error);
    CHECK_THROWS_AS(greedy_expand(CertifiedReal::exact(Rat(1)),
                                  CertifiedReal::exact(Rat(1)), kBinary, 4),
                    std::domain_error);
    CHECK_THROWS_AS(greedy_expand(CertifiedReal::exact(Rat(1)), two, kBinary, 0),
                    std::invalid_argument);
}
