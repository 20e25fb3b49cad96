#include <gtest/gtest.h>

#include <cmath>

#include "bbcode/dimension.hpp"
#include "bbcode/distance.hpp"

using namespace bbcode;

namespace {

// Minimum weight of a nontrivial logical by enumerating all vectors of
// weight <= max_w. Returns 0 if none is found.
std::size_t brute_force_distance(const BBCode& code, std::size_t max_w) {
    const auto h = build_checks(code);
    const std::size_t n = code.n();
    const RowSpace rz(h.hz), rx(h.hx);
    std::vector<std::size_t> idx;
    for (std::size_t w = 1; w <= max_w; ++w) {
        idx.resize(w);
        for (std::size_t i = 0; i < w; ++i) idx[i] = i;
        for (;;) {
            BitVec v(n);
            for (auto i : idx) v.set(i);
            if ((h.hx * v).is_zero() && !rz.contains(v)) return w;
            if ((h.hz * v).is_zero() && !rx.contains(v)) return w;
            std::size_t p = w;
            while (p > 0 && idx[p - 1] == n - w + p - 1) --p;
            if (p == 0) break;
            ++idx[p - 1];
            for (std::size_t q = p; q < w; ++q) idx[q] = idx[q - 1] + 1;
        }
    }
    return 0;
}

BBCode uni(std::size_t ell, std::size_t m, const char* a, const char* b) {
    return BBCode::from_univariate(ell, m, parse_unipoly(a), parse_unipoly(b));
}

}  // namespace

TEST(SemiTrivial, EqualConstructors) {
    auto r = semi_trivial(uni(3, 5, "1 + z + z^2", "1 + z + z^2"));
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->d, 2u);
    EXPECT_EQ(r->status, DistanceStatus::semi_trivial_2);
}

TEST(SemiTrivial, SquaredConstructor) {
    auto r = semi_trivial(uni(3, 5, "1 + z + z^2", "1 + z^2 + z^4"));
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->d, 4u);
    EXPECT_EQ(r->status, DistanceStatus::semi_trivial_4);
    // Shifted versions are caught as well.
    auto c = uni(3, 5, "1 + z + z^2", "z^3 + z^5 + z^7");
    EXPECT_EQ(semi_trivial(c)->d, 4u);
}

TEST(SemiTrivial, Unrelated) { EXPECT_FALSE(semi_trivial(uni(3, 25, "1 + z + z^2", "1 + z^2 + z^16")).has_value()); }

TEST(SemiTrivial, AgreesWithExact) {
    for (auto c : {uni(3, 5, "1 + z + z^2", "1 + z + z^2"), uni(3, 5, "1 + z + z^2", "1 + z^2 + z^4"),
                   uni(3, 7, "1 + z + z^3", "1 + z + z^3"), uni(3, 7, "1 + z + z^3", "1 + z^2 + z^6"),
                   uni(5, 3, "1 + z + z^2", "1 + z^2 + z^4")}) {
        if (k_rank(c).k == 0) continue;
        auto s = semi_trivial(c);
        ASSERT_TRUE(s.has_value());
        auto e = d_exact(c);
        ASSERT_EQ(e.status, DistanceStatus::exact);
        EXPECT_EQ(s->d, e.d) << c.to_string();
    }
}

TEST(Exact, SmallKnownCodes) {
    auto r = d_exact(BBCode::from_octet({3, 3, 0, 1, 2, 1, 0, 1}));
    EXPECT_EQ(r.status, DistanceStatus::exact);
    EXPECT_EQ(r.d, 2u);
    EXPECT_EQ(d_exact(BBCode::from_octet({3, 3, 0, 1, 2, 0, 1, 2})).d, 2u);
    EXPECT_EQ(d_exact(BBCode::from_octet({3, 6, 0, 1, 2, 1, 0, 1})).d, 4u);
    // The same constructors with x of order 6 give a distance-2 code.
    EXPECT_EQ(d_exact(BBCode::from_octet({6, 3, 0, 1, 2, 1, 0, 1})).d, 2u);
}

TEST(Exact, WitnessIsLightestLogical) {
    for (auto o : std::vector<std::array<long, 8>>{{3, 3, 0, 1, 2, 1, 0, 1}, {3, 6, 0, 1, 2, 1, 0, 1}, {3, 3, 0, 1, 2, 0, 1, 2}}) {
        auto c = BBCode::from_octet(o);
        auto r = d_exact(c);
        ASSERT_TRUE(r.d.has_value());
        EXPECT_EQ(r.witness.weight(), *r.d);
        EXPECT_TRUE(is_logical(c, r.witness, r.witness_type));
        EXPECT_EQ(*r.d % 2, 0u);
        EXPECT_EQ(brute_force_distance(c, *r.d), *r.d);
    }
}

TEST(Exact, MatchesBruteForceOnRandomSmallCodes) {
    std::mt19937_64 rng(17);
    std::size_t checked = 0;
    for (int t = 0; t < 5000 && checked < 25; ++t) {
        const long ell = 2 + static_cast<long>(rng() % 3), m = 2 + static_cast<long>(rng() % 3);
        std::array<long, 8> o{ell, m};
        for (int k : {2, 6, 7}) o[k] = static_cast<long>(rng() % static_cast<std::uint64_t>(ell));
        for (int k : {3, 4, 5}) o[k] = static_cast<long>(rng() % static_cast<std::uint64_t>(m));
        auto c = BBCode::from_octet(o);
        if (k_rank(c).k == 0) continue;
        auto r = d_exact(c);
        ASSERT_TRUE(r.d.has_value());
        EXPECT_EQ(brute_force_distance(c, *r.d), *r.d) << c.to_string();
        ++checked;
    }
    EXPECT_GE(checked, 10u);
}

TEST(Exact, Errors) {
    EXPECT_THROW(d_exact(uni(3, 5, "1 + z + z^3", "1 + z^2 + z^3")), std::domain_error);
    auto r = d_exact(BBCode::from_octet({6, 9, 3, 1, 2, 3, 1, 2}));
    EXPECT_EQ(r.status, DistanceStatus::not_computed);
    EXPECT_FALSE(r.d.has_value());
    EXPECT_FALSE(r.note.empty());
}

TEST(Random, NeverBelowExact) {
    for (auto o : std::vector<std::array<long, 8>>{{3, 3, 0, 1, 2, 1, 0, 1}, {3, 3, 0, 1, 2, 0, 1, 2}, {3, 6, 0, 1, 2, 1, 0, 1}}) {
        auto c = BBCode::from_octet(o);
        auto e = d_exact(c);
        auto r = d_random(c, 500, 0);
        EXPECT_EQ(r.status, DistanceStatus::upper_bound);
        EXPECT_GE(*r.d, *e.d);
        EXPECT_EQ(*r.d, *e.d);
    }
}

TEST(Random, DeterministicAndWitnessed) {
    auto c = BBCode::from_octet({6, 9, 3, 1, 2, 3, 1, 2});
    auto a = d_random(c, 300, 7), b = d_random(c, 300, 7);
    EXPECT_EQ(a.d, b.d);
    EXPECT_EQ(a.witness, b.witness);
    EXPECT_EQ(a.witness.weight(), *a.d);
    EXPECT_TRUE(is_logical(c, a.witness, a.witness_type));
    RandomDistanceOptions opt;
    opt.trials = 300;
    opt.seed = 7;
    opt.threads = 3;
    auto p = d_random(c, opt);
    EXPECT_EQ(p.d, a.d);
    EXPECT_EQ(p.witness, a.witness);
}

TEST(Random, WorkedExampleDistance) { EXPECT_EQ(d_random(BBCode::from_octet({6, 9, 3, 1, 2, 3, 1, 2}), 2000, 0).d, 10u); }

TEST(Random, SevenBySeven98) {
    auto r = d_random(BBCode::from_octet({7, 7, 4, 1, 3, 4, 1, 3}), 10'000, 0);
    ASSERT_TRUE(r.d.has_value());
    EXPECT_LE(*r.d, 10u);
    EXPECT_GE(*r.d, 6u);
}

TEST(Random, Coprime150) {
    auto r = d_random(uni(3, 25, "1 + z + z^2", "1 + z^2 + z^16"), 2000, 0);
    ASSERT_TRUE(r.d.has_value());
    EXPECT_LE(*r.d, 12u);
    EXPECT_GE(*r.d, 8u);
}

TEST(Random, Errors) {
    EXPECT_THROW(d_random(uni(3, 5, "1 + z + z^3", "1 + z^2 + z^3"), 10, 0), std::domain_error);
    RandomDistanceOptions opt;
    opt.depth = 4;
    EXPECT_THROW(d_random(BBCode::from_octet({3, 3, 0, 1, 2, 1, 0, 1}), opt), std::invalid_argument);
}

TEST(BravyiTerhal, Examples) {
    auto small = bt_bound(108, 6);
    EXPECT_EQ(small.D, 4);
    EXPECT_FALSE(small.applicable);
    auto big = bt_bound(10'000, 6);
    EXPECT_TRUE(big.applicable);
    EXPECT_NEAR(big.bound, 2.0 * std::pow(2.0, 0.25) * 6.0 * 1000.0, 1e-6);
    EXPECT_NEAR(big.bound, 1.427e4, 0.01 * 1.427e4);
    // Threshold n^(1/4) >= 8 * 2^(1/4) sits between these.
    EXPECT_FALSE(bt_bound(8180, 6).applicable);
    EXPECT_TRUE(bt_bound(8193, 6).applicable);
    double prev = 0;
    for (std::size_t n = 10; n < 100'000; n *= 3) {
        EXPECT_GT(bt_bound(n).bound, prev);
        prev = bt_bound(n).bound;
    }
    EXPECT_THROW(bt_bound(100, 2), std::invalid_argument);
    EXPECT_THROW(bt_bound(100, 11), std::domain_error);
}

TEST(BravyiTerhal, HermiteConstants) {
    // gamma_D^D for the known lattice values.
    const double pow_d[] = {1, 4.0 / 3, 2, 4, 8, 64.0 / 3, 64, 256};
    for (int D = 1; D <= 8; ++D) EXPECT_NEAR(std::pow(hermite_constant(D), D), pow_d[D - 1], 1e-9) << D;
}

TEST(SurfaceCode, Comparison) {
    EXPECT_EQ(surface_code_equivalent(4, 16), 900u);
    EXPECT_EQ(surface_code_equivalent(16, 4), 144u);
    EXPECT_EQ(surface_code_equivalent(1, 3), 4u);
    EXPECT_THROW(surface_code_equivalent(4, 1), std::invalid_argument);
}
