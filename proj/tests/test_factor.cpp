#include <gtest/gtest.h>

#include <set>

#include "bbcode/factor.hpp"

using namespace bbcode;

namespace {

// Irreducible polynomials of degree d by trial division (small d only).
std::size_t count_irreducible_brute(long d) {
    std::size_t count = 0;
    for (std::uint64_t w = std::uint64_t{1} << d; w < (std::uint64_t{2} << d); ++w) {
        UniPoly f = UniPoly::from_words({w});
        bool irr = true;
        for (std::uint64_t v = 2; v < (std::uint64_t{1} << (d / 2 + 1)) && irr; ++v) {
            UniPoly g = UniPoly::from_words({v});
            if (g.degree() >= 1 && 2 * g.degree() <= d && divides(g, f)) irr = false;
        }
        count += irr;
    }
    return count;
}

}  // namespace

TEST(Cosets, PartitionAndCount) {
    for (std::size_t n = 1; n < 200; n += 2) {
        auto cs = cyclotomic_cosets(n);
        EXPECT_EQ(cs.size(), eta_count(n));
        std::set<std::size_t> all;
        for (const auto& c : cs) {
            EXPECT_EQ(c.members.front(), c.representative);
            for (auto v : c.members) {
                EXPECT_TRUE(all.insert(v).second);
                EXPECT_GE(v, c.representative);
            }
        }
        EXPECT_EQ(all.size(), n);
    }
    auto c15 = cyclotomic_cosets(15);
    ASSERT_EQ(c15.size(), 5u);
    EXPECT_EQ(c15[1].members, (std::vector<std::size_t>{1, 2, 4, 8}));
    EXPECT_EQ(c15[3].members, (std::vector<std::size_t>{5, 10}));
    EXPECT_THROW(cyclotomic_cosets(8), std::invalid_argument);
}

TEST(Irreducible, RabinMatchesTrialDivision) {
    for (long d = 1; d <= 10; ++d) {
        std::size_t count = 0;
        for (std::uint64_t w = std::uint64_t{1} << d; w < (std::uint64_t{2} << d); ++w) count += is_irreducible(UniPoly::from_words({w}));
        EXPECT_EQ(count, count_irreducible_brute(d)) << d;
    }
}

TEST(Factorization, ProductAndStructure) {
    for (std::size_t n = 1; n <= 300; ++n) {
        auto fz = factor_xn_minus_1(n);
        EXPECT_EQ(fz.product(), UniPoly::xn_minus_1(n)) << n;
        std::size_t odd = n;
        while (odd % 2 == 0) odd /= 2;
        EXPECT_EQ(fz.factors.size(), eta_count(odd)) << n;
        std::multiset<long> degrees;
        for (const auto& f : fz.factors) {
            EXPECT_TRUE(is_irreducible(f.poly));
            EXPECT_EQ(f.multiplicity, n / odd);
            degrees.insert(f.poly.degree());
        }
        // Factor degrees are the coset sizes.
        std::multiset<long> sizes;
        for (const auto& c : cyclotomic_cosets(odd)) sizes.insert(static_cast<long>(c.members.size()));
        EXPECT_EQ(degrees, sizes) << n;
        EXPECT_TRUE(std::is_sorted(fz.factors.begin(), fz.factors.end(),
                                   [](const auto& a, const auto& b) { return a.poly < b.poly; }));
    }
}

TEST(Factorization, SeedIndependent) {
    for (std::size_t n : {63u, 255u, 511u, 1023u}) {
        auto a = factor_xn_minus_1(n, 1), b = factor_xn_minus_1(n, 99);
        ASSERT_EQ(a.factors.size(), b.factors.size());
        for (std::size_t i = 0; i < a.factors.size(); ++i) EXPECT_EQ(a.factors[i].poly, b.factors[i].poly);
    }
}

TEST(Factorization, SevenAndFifteen) {
    auto f7 = factor_xn_minus_1(7);
    ASSERT_EQ(f7.factors.size(), 3u);
    EXPECT_EQ(f7.factors[0].poly, (UniPoly{0, 1}));
    EXPECT_EQ(f7.factors[1].poly, (UniPoly{0, 1, 3}));
    EXPECT_EQ(f7.factors[2].poly, (UniPoly{0, 2, 3}));
    auto f6 = factor_xn_minus_1(6);
    ASSERT_EQ(f6.factors.size(), 2u);
    EXPECT_EQ(f6.factors[1].poly, (UniPoly{0, 1, 2}));
    EXPECT_EQ(f6.factors[1].multiplicity, 2u);
}

TEST(Cyclotomic, PolynomialDegreeAndRoots) {
    for (std::size_t n = 1; n < 150; n += 2) {
        auto phi = cyclotomic_polynomial(n);
        EXPECT_EQ(static_cast<std::uint64_t>(phi.degree()), euler_phi(n));
        EXPECT_TRUE(divides(phi, UniPoly::xn_minus_1(n)));
        for (auto d : divisors(n)) {
            if (d < n) {
                EXPECT_TRUE(gcd(phi, UniPoly::xn_minus_1(d)).is_one()) << n << " " << d;
            }
        }
    }
    EXPECT_EQ(cyclotomic_polynomial(5), (UniPoly{0, 1, 2, 3, 4}));
}

TEST(Trinomial, ExhaustiveSearchAgrees) {
    // For small irreducibles, compare against scanning 1 + z^s + z^t directly.
    for (std::size_t n : {3u, 5u, 7u, 9u, 15u, 17u, 21u, 31u, 73u}) {
        for (const auto& f : factor_xn_minus_1(n).factors) {
            if (f.poly.degree() < 1 || f.poly == UniPoly{0, 1}) continue;
            auto e = order(f.poly);
            std::vector<std::pair<std::size_t, std::size_t>> brute;
            for (std::size_t s = 1; s < e; ++s)
                for (std::size_t t = s + 1; t < e; ++t)
                    if (divides(f.poly, UniPoly{0, s, t})) brute.emplace_back(s, t);
            auto td = trinomial_divisor(f.poly);
            EXPECT_EQ(td.order, e);
            EXPECT_EQ(td.found(), !brute.empty()) << f.poly.to_string();
            if (!brute.empty()) {
                EXPECT_EQ(td.s, brute[0].first);
                EXPECT_EQ(td.t, brute[0].second);
                EXPECT_TRUE(divides(f.poly, td.trinomial()));
            }
            EXPECT_EQ(trinomial_exponent_pairs(f.poly), brute);
        }
    }
}

TEST(Trinomial, CyclotomicFiveHasNone) {
    auto td = trinomial_divisor(UniPoly{0, 1, 2, 3, 4});
    EXPECT_EQ(td.status, TrinomialDivisor::Status::none);
    EXPECT_EQ(td.order, 5u);
}

TEST(Trinomial, RejectsBadInput) {
    EXPECT_THROW(trinomial_divisor(UniPoly{1, 2}), std::invalid_argument);
    EXPECT_THROW(trinomial_divisor(UniPoly{0, 2}), std::invalid_argument);
}

TEST(Primes, MersenneAndOutliers) {
    for (std::uint64_t p : {3u, 7u, 31u, 127u, 8191u, 131071u, 524287u}) EXPECT_TRUE(is_mersenne_prime(p));
    EXPECT_TRUE(is_mersenne_prime(2147483647ULL));
    for (std::uint64_t p : {2u, 5u, 15u, 63u, 255u, 2047u}) EXPECT_FALSE(is_mersenne_prime(p));
    for (std::uint64_t p : {73u, 121369u, 178481u, 262657u, 599479u}) EXPECT_TRUE(is_outlier(p));
    EXPECT_FALSE(is_outlier(71));
    EXPECT_THROW(is_outlier(3'000'017), std::out_of_range);
    EXPECT_EQ(outlier_status(3'000'017), OutlierStatus::beyond_verified_range);
}

TEST(Primes, GoodDivisor) {
    EXPECT_EQ(good_prime_divisor(75), 3u);
    EXPECT_EQ(good_prime_divisor(5 * 73), 73u);
    EXPECT_FALSE(good_prime_divisor(25).has_value());
    EXPECT_FALSE(has_good_prime_divisor(2 * 5 * 11 * 13));
    EXPECT_TRUE(has_good_prime_divisor(2 * 7 * 6));
}

TEST(Primes, TrinomialRootConnection) {
    // Primitive-root-of-unity factors of z^p - 1 divide a trinomial for
    // Mersenne and outlier primes in this range, and for no other prime.
    for (std::uint64_t p = 3; p < 130; ++p) {
        if (!is_prime(p)) continue;
        bool any = false;
        for (const auto& f : factor_xn_minus_1(p).factors)
            if (f.poly.degree() > 1 && trinomial_divisor(f.poly).found()) any = true;
        EXPECT_EQ(any, is_mersenne_prime(p) || is_outlier(p)) << p;
    }
}
