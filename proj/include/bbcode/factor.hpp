#pragma once

// Factorization of z^n - 1 over GF(2), cyclotomic cosets and polynomials,
// and the trinomial-divisibility machinery (Mersenne / outlier primes).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "bbcode/poly.hpp"

namespace bbcode {

struct CyclotomicCoset {
    std::size_t representative = 0;
    std::vector<std::size_t> members;  // s, 2s, 4s, ... mod n in generation order
};

/// Partition of Z_n into orbits under doubling, smallest representative first.
inline std::vector<CyclotomicCoset> cyclotomic_cosets(std::size_t n) {
    if (n == 0 || n % 2 == 0) throw std::invalid_argument("cyclotomic_cosets requires an odd positive n");
    std::vector<bool> seen(n, false);
    std::vector<CyclotomicCoset> out;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        CyclotomicCoset c{s, {}};
        for (std::size_t v = s; !seen[v]; v = 2 * v % n) {
            seen[v] = true;
            c.members.push_back(v);
        }
        out.push_back(std::move(c));
    }
    return out;
}

struct IrreducibleFactor {
    UniPoly poly;
    std::size_t multiplicity = 1;
};

struct Factorization {
    std::size_t n = 0;
    std::vector<IrreducibleFactor> factors;  // sorted by (degree, value)

    UniPoly product() const {
        UniPoly p = UniPoly::one();
        for (const auto& f : factors)
            for (std::size_t i = 0; i < f.multiplicity; ++i) p *= f.poly;
        return p;
    }
};

inline constexpr std::uint64_t kDefaultSplitSeed = 0x5eed'b1c7'c1e5'0001ULL;

namespace detail {

/// Splits a squarefree product of irreducibles all of degree d (char 2
/// trace method). Results are appended to `out`.
inline void equal_degree_split(const UniPoly& f, long d, std::mt19937_64& rng, std::vector<UniPoly>& out) {
    const long n = f.degree();
    if (n == d) {
        out.push_back(f);
        return;
    }
    for (;;) {
        UniPoly r;
        for (long i = 0; i < n; ++i)
            if (rng() & 1U) r.flip(static_cast<std::size_t>(i));
        if (r.degree() < 1) continue;
        UniPoly trace = r, power = r;
        for (long i = 1; i < d; ++i) {
            power = mul_mod(power, power, f);
            trace += power;
        }
        if (trace.is_zero()) continue;
        UniPoly g = gcd(trace, f);
        if (g.degree() > 0 && g.degree() < n) {
            equal_degree_split(g, d, rng, out);
            equal_degree_split(f / g, d, rng, out);
            return;
        }
    }
}

}  // namespace detail

/// Irreducible factors of a squarefree polynomial with nonzero constant term,
/// via distinct-degree then equal-degree factorization.
inline std::vector<UniPoly> factor_squarefree(UniPoly f, std::uint64_t seed = kDefaultSplitSeed) {
    if (f.is_zero()) throw std::invalid_argument("factor_squarefree: zero polynomial");
    std::vector<UniPoly> out;
    std::mt19937_64 rng(seed);
    const UniPoly z = UniPoly::monomial(1);
    UniPoly h = z % f;  // z^(2^i) mod f
    for (long i = 1; 2 * i <= f.degree(); ++i) {
        h = mul_mod(h, h, f);
        UniPoly g = gcd(h + z, f);
        if (g.degree() > 0) {
            detail::equal_degree_split(g, i, rng, out);
            f = f / g;
            h = h % f;
        }
    }
    if (f.degree() > 0) out.push_back(f);
    std::sort(out.begin(), out.end());
    return out;
}

/// Complete factorization of z^n - 1. For n = 2^v * n_odd every factor of
/// z^n_odd - 1 appears with multiplicity 2^v.
inline Factorization factor_xn_minus_1(std::size_t n, std::uint64_t seed = kDefaultSplitSeed) {
    if (n == 0) throw std::invalid_argument("factor_xn_minus_1 requires n >= 1");
    std::size_t odd = n, mult = 1;
    while (odd % 2 == 0) {
        odd /= 2;
        mult *= 2;
    }
    Factorization out{n, {}};
    for (auto& f : factor_squarefree(UniPoly::xn_minus_1(odd), seed)) out.factors.push_back({std::move(f), mult});
    return out;
}

/// Phi_n over GF(2) for odd n, as z^n - 1 divided by Phi_d for all proper d | n.
inline UniPoly cyclotomic_polynomial(std::size_t n) {
    if (n == 0 || n % 2 == 0) throw std::invalid_argument("cyclotomic_polynomial requires an odd positive n");
    std::map<std::uint64_t, UniPoly> phi;
    for (auto d : divisors(n)) {
        UniPoly p = UniPoly::xn_minus_1(d);
        for (auto& [e, pe] : phi)
            if (d % e == 0) p = p / pe;
        phi.emplace(d, std::move(p));
    }
    return phi.at(n);
}

/// Rabin irreducibility test.
inline bool is_irreducible(const UniPoly& f) {
    const long n = f.degree();
    if (n < 1) return false;
    const UniPoly z = UniPoly::monomial(1);
    UniPoly h = z % f;
    for (long i = 1; 2 * i <= n; ++i) {
        h = mul_mod(h, h, f);
        if (!gcd(h + z, f).is_one()) return false;
    }
    return true;
}

struct TrinomialDivisor {
    enum class Status { found, none, not_computed };
    Status status = Status::none;
    std::size_t s = 0;
    std::size_t t = 0;
    std::uint64_t order = 0;  // order of f when computed

    bool found() const noexcept { return status == Status::found; }
    UniPoly trinomial() const { return UniPoly{0, s, t}; }
};

inline constexpr std::uint64_t kTrinomialOrderCap = std::uint64_t{1} << 20;

namespace detail {

struct WordsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& w) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (auto x : w) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

/// Finds the lexicographically first 0 < s < t < order(f) with
/// f | 1 + z^s + z^t, by tabulating powers of a root of f.
inline TrinomialDivisor trinomial_divisor(const UniPoly& f, std::uint64_t order_cap = kTrinomialOrderCap) {
    if (f.is_zero() || !f.coeff(0)) throw std::invalid_argument("trinomial_divisor requires a nonzero constant term");
    if (!is_irreducible(f)) throw std::invalid_argument("trinomial_divisor requires an irreducible polynomial");
    TrinomialDivisor out;
    std::unordered_map<std::vector<std::uint64_t>, std::uint64_t, detail::WordsHash> index;
    std::vector<UniPoly> powers;
    const UniPoly z = UniPoly::monomial(1);
    UniPoly v = UniPoly::one();
    for (std::uint64_t e = 0;; ++e) {
        if (e > order_cap) {
            out.status = TrinomialDivisor::Status::not_computed;
            return out;
        }
        if (e > 0 && v.is_one()) {
            out.order = e;
            break;
        }
        index.emplace(std::vector<std::uint64_t>(v.words().begin(), v.words().end()), e);
        powers.push_back(v);
        v = mul_mod(v, z, f);
    }
    for (std::size_t s = 1; s < powers.size(); ++s) {
        UniPoly target = powers[s] + UniPoly::one();
        if (target.is_zero()) continue;
        auto it = index.find(std::vector<std::uint64_t>(target.words().begin(), target.words().end()));
        if (it != index.end() && it->second > s) {
            out.status = TrinomialDivisor::Status::found;
            out.s = s;
            out.t = static_cast<std::size_t>(it->second);
            return out;
        }
    }
    out.status = TrinomialDivisor::Status::none;
    return out;
}

/// Every (s, t) with 0 < s < t < order(f) and f | 1 + z^s + z^t.
inline std::vector<std::pair<std::size_t, std::size_t>> trinomial_exponent_pairs(const UniPoly& f,
                                                                                   std::uint64_t order_cap = kTrinomialOrderCap) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    auto first = trinomial_divisor(f, order_cap);
    if (!first.found()) return out;
    const auto e = first.order;
    const UniPoly z = UniPoly::monomial(1);
    std::vector<UniPoly> powers;
    std::unordered_map<std::vector<std::uint64_t>, std::uint64_t, detail::WordsHash> index;
    UniPoly v = UniPoly::one();
    for (std::uint64_t k = 0; k < e; ++k) {
        index.emplace(std::vector<std::uint64_t>(v.words().begin(), v.words().end()), k);
        powers.push_back(v);
        v = mul_mod(v, z, f);
    }
    for (std::size_t s = 1; s < e; ++s) {
        UniPoly target = powers[s] + UniPoly::one();
        auto it = index.find(std::vector<std::uint64_t>(target.words().begin(), target.words().end()));
        if (it != index.end() && it->second > s) out.emplace_back(s, static_cast<std::size_t>(it->second));
    }
    return out;
}

inline bool is_mersenne_prime(std::uint64_t p) {
    return p >= 3 && is_prime(p) && std::has_single_bit(p + 1);
}

/// Upper end of the range in which the outlier list is known to be complete.
inline constexpr std::uint64_t kOutlierVerifiedLimit = 3'000'000;

enum class OutlierStatus { outlier, not_outlier, beyond_verified_range };

inline OutlierStatus outlier_status(std::uint64_t p) {
    for (std::uint64_t o : {73ULL, 121'369ULL, 178'481ULL, 262'657ULL, 599'479ULL})
        if (p == o) return OutlierStatus::outlier;
    return p >= kOutlierVerifiedLimit ? OutlierStatus::beyond_verified_range : OutlierStatus::not_outlier;
}

/// Membership in the known outlier list. Inputs at or above the verified
/// limit throw std::out_of_range instead of answering false.
inline bool is_outlier(std::uint64_t p) {
    auto st = outlier_status(p);
    if (st == OutlierStatus::beyond_verified_range) throw std::out_of_range("is_outlier: beyond verified range");
    return st == OutlierStatus::outlier;
}

/// The smallest prime divisor of n that is Mersenne or an outlier, if any.
inline std::optional<std::uint64_t> good_prime_divisor(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("good_prime_divisor requires n >= 1");
    for (auto p : prime_divisors(n)) {
        if (is_mersenne_prime(p) || is_outlier(p)) return p;
    }
    return std::nullopt;
}

inline bool has_good_prime_divisor(std::uint64_t n) { return good_prime_divisor(n).has_value(); }

}  // namespace bbcode
