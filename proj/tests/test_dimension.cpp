#include <gtest/gtest.h>

#include <random>

#include "bbcode/dimension.hpp"

using namespace bbcode;

namespace {

BBCode random_octet(std::mt19937_64& rng, long lo, long hi) {
    std::array<long, 8> o{};
    o[0] = lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    o[1] = lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    for (int k : {2, 6, 7}) o[k] = static_cast<long>(rng() % static_cast<std::uint64_t>(o[0]));
    for (int k : {3, 4, 5}) o[k] = static_cast<long>(rng() % static_cast<std::uint64_t>(o[1]));
    return BBCode::from_octet(o);
}

BBCode coprime_code(std::size_t ell, std::size_t m, const char* a, const char* b) {
    return BBCode::from_univariate(ell, m, parse_unipoly(a), parse_unipoly(b));
}

}  // namespace

TEST(ExtField, Arithmetic) {
    const UniPoly f{0, 1, 3};  // GF(8)
    for (std::uint64_t w = 1; w < 8; ++w) {
        ExtFieldElem e(f, UniPoly::from_words({w}));
        EXPECT_TRUE((e * e.inverse()).value().is_one());
    }
    EXPECT_THROW(ExtFieldElem(f, UniPoly{}).inverse(), std::domain_error);
}

TEST(ExtPoly, GcdIsMonicCommonDivisor) {
    const UniPoly f{0, 1, 2};  // GF(4) = {0, 1, w, w^2}
    // (v + w)(v + 1) and (v + w)(v + w^2)
    ExtPoly lin_w(f), lin_1(f), lin_w2(f);
    lin_w.add_term(1, UniPoly::one());
    lin_w.add_term(0, UniPoly{1});
    lin_1.add_term(1, UniPoly::one());
    lin_1.add_term(0, UniPoly::one());
    lin_w2.add_term(1, UniPoly::one());
    lin_w2.add_term(0, UniPoly{0, 1});
    auto g = gcd(lin_w * lin_1, lin_w * lin_w2);
    EXPECT_EQ(g, lin_w);
    EXPECT_TRUE((lin_w * lin_1 % g).is_zero());
    EXPECT_EQ(gcd(lin_1, lin_w2).degree(), 0);
}

TEST(Coprime, Coprime150) {
    auto r = k_coprime(coprime_code(3, 25, "1 + z + z^2", "1 + z^2 + z^16"));
    EXPECT_EQ(r.k, 4u);
    EXPECT_EQ(r.gcd_witness, (UniPoly{0, 1, 2}));
}

TEST(Coprime, MersenneFactor186) {
    auto r = k_coprime(coprime_code(3, 31, "1 + z^2 + z^5", "1 + z^2 + z^36"));
    EXPECT_EQ(r.k, 10u);
}

TEST(Coprime, TrivialGcd) {
    auto r = k_coprime(coprime_code(3, 5, "1 + z + z^3", "1 + z^2 + z^3"));
    EXPECT_EQ(r.k, 0u);
    EXPECT_TRUE(r.gcd_witness->is_one());
}

TEST(Coprime, RejectsNonCoprime) {
    EXPECT_THROW(k_coprime(BBCode::from_octet({6, 9, 3, 1, 2, 3, 1, 2})), std::domain_error);
}

TEST(Coprime, InvariantUnderEquivalence) {
    auto c = coprime_code(3, 25, "1 + z + z^2", "1 + z^2 + z^16");
    const std::size_t k = k_coprime(c).k;
    for (std::size_t u = 0; u < 3; ++u)
        for (std::size_t v = 0; v < 25; v += 4) EXPECT_EQ(k_coprime(BBCode(c.a.shifted(u, v), c.b)).k, k);
}

TEST(OneSided, WorkedExample) {
    auto r = k_one_sided(BBCode::from_octet({6, 9, 3, 1, 2, 3, 1, 2}));
    EXPECT_EQ(r.k, 8u);
    EXPECT_EQ(r.field_var, 'y');
    ASSERT_EQ(r.components.size(), 3u);
    std::size_t nontrivial = 0;
    for (const auto& c : r.components) {
        if (c.g.is_one()) continue;
        ++nontrivial;
        EXPECT_EQ(c.f, (UniPoly{0, 1, 2}));
        EXPECT_EQ(c.g.to_string('y', 'x'), "1 + x + x^2");
    }
    EXPECT_EQ(nontrivial, 1u);
}

TEST(OneSided, AgreesWithCoprime) {
    auto c = coprime_code(3, 25, "1 + z + z^2", "1 + z^2 + z^16");
    EXPECT_EQ(k_one_sided(c).k, 4u);
}

TEST(OneSided, RejectsBothEven) {
    EXPECT_THROW(k_one_sided(BBCode::from_octet({6, 6, 3, 1, 2, 3, 1, 2})), std::domain_error);
}

TEST(Groebner, SixBySixExample) {
    auto r = k_groebner(BBCode::from_octet({6, 6, 3, 1, 2, 3, 1, 2}));
    EXPECT_EQ(r.k, 12u);
    EXPECT_EQ(r.standard_monomials, (std::vector<Monomial>{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 0}, {1, 1}}));
    EXPECT_EQ(r.leading_monomials, (std::vector<Monomial>{{0, 4}, {1, 2}, {2, 0}}));
}

TEST(Groebner, WorkedExample) { EXPECT_EQ(k_groebner(BBCode::from_octet({6, 9, 3, 1, 2, 3, 1, 2})).k, 8u); }

TEST(Groebner, UnitIdealGivesZero) {
    auto r = k_groebner(coprime_code(3, 5, "1 + z + z^3", "1 + z^2 + z^3"));
    EXPECT_EQ(r.k, 0u);
    EXPECT_TRUE(r.standard_monomials.empty());
}

TEST(Rank, WorkedExample) {
    auto r = k_rank(BBCode::from_octet({6, 9, 3, 1, 2, 3, 1, 2}));
    EXPECT_EQ(r.k, 8u);
    EXPECT_EQ(r.rank_hx, 50u);
}

TEST(CrossCheck, KnownCodes) {
    auto r = k_cross_check(BBCode::from_octet({6, 9, 3, 1, 2, 3, 1, 2}));
    EXPECT_EQ(r.k, 8u);
    EXPECT_EQ(r.reports.size(), 3u);
    auto t = k_cross_check(coprime_code(3, 25, "1 + z + z^2", "1 + z^2 + z^16"));
    EXPECT_EQ(t.k, 4u);
    EXPECT_EQ(t.reports.size(), 4u);
}

TEST(CrossCheck, BothVanishOnComponent) {
    // l = 1: with x = 1 both a and b are 0 modulo 1 + y + y^4.
    auto r = k_cross_check(coprime_code(1, 15, "1 + z + z^4", "1 + z^2 + z^8"));
    EXPECT_EQ(r.k, 8u);
    EXPECT_EQ(r.reports.size(), 4u);
    EXPECT_EQ(k_one_sided(coprime_code(15, 1, "1 + z + z^4", "1 + z^2 + z^8")).k, 8u);
}

TEST(CrossCheck, RandomOctetsAgree) {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 200; ++t) {
        auto c = random_octet(rng, 1, 12);
        auto r = k_cross_check(c);
        EXPECT_EQ(r.k % 2, 0u) << c.to_string();
    }
}

TEST(CrossCheck, RandomUnivariateAgree) {
    std::mt19937_64 rng(99);
    const std::pair<std::size_t, std::size_t> shapes[] = {{3, 5}, {3, 7}, {5, 7}, {3, 11}, {7, 9}, {3, 25}};
    for (int t = 0; t < 60; ++t) {
        auto [ell, m] = shapes[rng() % std::size(shapes)];
        const std::size_t n = ell * m;
        auto a = UniPoly{0, 1 + rng() % (n - 1), 1 + rng() % (n - 1)};
        auto b = UniPoly{0, 1 + rng() % (n - 1), 1 + rng() % (n - 1)};
        EXPECT_NO_THROW(k_cross_check(BBCode::from_univariate(ell, m, a, b)));
    }
}

TEST(Triviality, FiveByFiveAllZero) {
    // All octets for l = m = 5; 2*5*5 has no Mersenne or outlier divisor.
    std::size_t count = 0;
    for (long a1 = 0; a1 < 5; ++a1)
        for (long a2 = 0; a2 < 5; ++a2)
            for (long a3 = a2 + 1; a3 < 5; ++a3)
                for (long b1 = 0; b1 < 5; ++b1)
                    for (long b2 = 0; b2 < 5; ++b2)
                        for (long b3 = b2 + 1; b3 < 5; ++b3) {
                            auto c = BBCode::from_octet({5, 5, a1, a2, a3, b1, b2, b3});
                            EXPECT_EQ(k_one_sided(c).k, 0u);
                            ++count;
                        }
    EXPECT_EQ(count, 2500u);
}
