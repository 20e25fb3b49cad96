#pragma once

// Univariate polynomials over GF(2) and the integer helpers used by the
// factorization code (totient, multiplicative order, primality).

#include <algorithm>
#include <bit>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bbcode {

/// Polynomial over GF(2), packed 64 coefficients per word. Bit i of the
/// packed sequence is the coefficient of z^i. The zero polynomial has no
/// words; otherwise the top word is nonzero.
class UniPoly {
   public:
    UniPoly() = default;

    /// Builds the polynomial whose support is the XOR of the given exponents,
    /// so repeated exponents cancel.
    UniPoly(std::initializer_list<std::size_t> exponents) {
        for (auto e : exponents) flip(e);
    }

    static UniPoly from_exponents(std::span<const std::size_t> exponents) {
        UniPoly p;
        for (auto e : exponents) p.flip(e);
        return p;
    }

    static UniPoly from_words(std::vector<std::uint64_t> words) {
        UniPoly p;
        p.words_ = std::move(words);
        p.trim();
        return p;
    }

    static UniPoly monomial(std::size_t e) {
        UniPoly p;
        p.flip(e);
        return p;
    }

    static UniPoly one() { return monomial(0); }

    /// z^n - 1 (equal to z^n + 1 over GF(2)).
    static UniPoly xn_minus_1(std::size_t n) { return UniPoly{0, n}; }

    bool is_zero() const noexcept { return words_.empty(); }
    bool is_one() const noexcept { return words_.size() == 1 && words_[0] == 1; }

    /// Degree, or -1 for the zero polynomial.
    long degree() const noexcept {
        if (words_.empty()) return -1;
        return static_cast<long>(64 * (words_.size() - 1) + 63 - std::countl_zero(words_.back()));
    }

    bool coeff(std::size_t i) const noexcept {
        auto w = i / 64;
        return w < words_.size() && ((words_[w] >> (i % 64)) & 1U);
    }

    void flip(std::size_t i) {
        auto w = i / 64;
        if (w >= words_.size()) words_.resize(w + 1, 0);
        words_[w] ^= std::uint64_t{1} << (i % 64);
        trim();
    }

    void set(std::size_t i, bool value) {
        if (coeff(i) != value) flip(i);
    }

    std::size_t weight() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// Exponents with coefficient 1, ascending.
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < words_.size(); ++k) {
            for (auto w = words_[k]; w != 0; w &= w - 1) out.push_back(64 * k + std::countr_zero(w));
        }
        return out;
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    /// this ^= q * z^shift
    void add_shifted(const UniPoly& q, std::size_t shift) {
        if (q.is_zero()) return;
        const std::size_t ws = shift / 64;
        const unsigned bs = shift % 64;
        const std::size_t need = q.words_.size() + ws + (bs ? 1 : 0);
        if (words_.size() < need) words_.resize(need, 0);
        for (std::size_t k = 0; k < q.words_.size(); ++k) {
            words_[k + ws] ^= q.words_[k] << bs;
            if (bs) words_[k + ws + 1] ^= q.words_[k] >> (64 - bs);
        }
        trim();
    }

    UniPoly shifted(std::size_t k) const {
        UniPoly r;
        r.add_shifted(*this, k);
        return r;
    }

    UniPoly& operator+=(const UniPoly& q) {
        if (words_.size() < q.words_.size()) words_.resize(q.words_.size(), 0);
        for (std::size_t k = 0; k < q.words_.size(); ++k) words_[k] ^= q.words_[k];
        trim();
        return *this;
    }

    friend UniPoly operator+(UniPoly p, const UniPoly& q) { return p += q; }

    friend UniPoly operator*(const UniPoly& p, const UniPoly& q) {
        if (p.is_zero() || q.is_zero()) return {};
        const UniPoly& sparse = p.weight() <= q.weight() ? p : q;
        const UniPoly& dense = &sparse == &p ? q : p;
        UniPoly r;
        r.words_.reserve(p.words_.size() + q.words_.size());
        for (auto e : sparse.support()) r.add_shifted(dense, e);
        return r;
    }

    UniPoly& operator*=(const UniPoly& q) { return *this = *this * q; }

    friend bool operator==(const UniPoly&, const UniPoly&) = default;

    /// Orders by degree, then as a binary number; a total order used for
    /// deterministic sorting of factors.
    friend std::strong_ordering operator<=>(const UniPoly& a, const UniPoly& b) {
        if (a.words_.size() != b.words_.size()) return a.words_.size() <=> b.words_.size();
        for (std::size_t k = a.words_.size(); k-- > 0;) {
            if (a.words_[k] != b.words_[k]) return a.words_[k] <=> b.words_[k];
        }
        return std::strong_ordering::equal;
    }

    /// Renders as "1 + z + z^3" (ascending exponents); zero renders as "0".
    std::string to_string(char var = 'z') const {
        if (is_zero()) return "0";
        std::string s;
        for (auto e : support()) {
            if (!s.empty()) s += " + ";
            if (e == 0) {
                s += '1';
            } else {
                s += var;
                if (e > 1) s += '^' + std::to_string(e);
            }
        }
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const UniPoly& p) { return os << p.to_string(); }

   private:
    void trim() noexcept {
        while (!words_.empty() && words_.back() == 0) words_.pop_back();
    }

    std::vector<std::uint64_t> words_;
};

struct DivRem {
    UniPoly quotient;
    UniPoly remainder;
};

inline DivRem divrem(const UniPoly& p, const UniPoly& q) {
    if (q.is_zero()) throw std::domain_error("polynomial division by zero");
    DivRem out{{}, p};
    const long dq = q.degree();
    for (long dr = out.remainder.degree(); dr >= dq; dr = out.remainder.degree()) {
        const auto s = static_cast<std::size_t>(dr - dq);
        out.quotient.flip(s);
        out.remainder.add_shifted(q, s);
    }
    return out;
}

inline UniPoly operator%(const UniPoly& p, const UniPoly& q) {
    if (q.is_zero()) throw std::domain_error("polynomial reduction by zero modulus");
    UniPoly r = p;
    const long dq = q.degree();
    for (long dr = r.degree(); dr >= dq; dr = r.degree()) r.add_shifted(q, static_cast<std::size_t>(dr - dq));
    return r;
}

inline UniPoly operator/(const UniPoly& p, const UniPoly& q) { return divrem(p, q).quotient; }

inline bool divides(const UniPoly& d, const UniPoly& p) { return (p % d).is_zero(); }

inline UniPoly mul_mod(const UniPoly& p, const UniPoly& q, const UniPoly& modulus) {
    if (modulus.is_zero()) throw std::domain_error("mul_mod: zero modulus");
    return ((p % modulus) * (q % modulus)) % modulus;
}

inline UniPoly pow_mod(UniPoly base, std::uint64_t exp, const UniPoly& modulus) {
    if (modulus.is_zero()) throw std::domain_error("pow_mod: zero modulus");
    UniPoly result = UniPoly::one() % modulus;
    base = base % modulus;
    for (; exp != 0; exp >>= 1) {
        if (exp & 1U) result = mul_mod(result, base, modulus);
        if (exp > 1) base = mul_mod(base, base, modulus);
    }
    return result;
}

/// Euclidean gcd. Over GF(2) every nonzero polynomial is already monic.
inline UniPoly gcd(UniPoly p, UniPoly q) {
    if (p.is_zero() && q.is_zero()) throw std::invalid_argument("gcd(0, 0) is undefined");
    while (!q.is_zero()) {
        UniPoly r = p % q;
        p = std::move(q);
        q = std::move(r);
    }
    return p;
}

inline UniPoly gcd(const UniPoly& p, const UniPoly& q, const UniPoly& r) { return gcd(gcd(p, q), r); }

struct ExtendedGcd {
    UniPoly g;
    UniPoly s;  // s*p + t*q = g
    UniPoly t;
};

inline ExtendedGcd extended_gcd(const UniPoly& p, const UniPoly& q) {
    if (p.is_zero() && q.is_zero()) throw std::invalid_argument("extended_gcd(0, 0) is undefined");
    UniPoly r0 = p, r1 = q;
    UniPoly s0 = UniPoly::one(), s1;
    UniPoly t0, t1 = UniPoly::one();
    while (!r1.is_zero()) {
        auto [quot, rem] = divrem(r0, r1);
        r0 = std::exchange(r1, std::move(rem));
        s0 = std::exchange(s1, s0 + quot * s1);
        t0 = std::exchange(t1, t0 + quot * t1);
    }
    return {r0, s0, t0};
}

/// Inverse of p in GF(2)[z]/(modulus); throws if p and modulus share a factor.
inline UniPoly inverse_mod(const UniPoly& p, const UniPoly& modulus) {
    const UniPoly reduced = p % modulus;
    if (reduced.is_zero()) throw std::domain_error("inverse_mod: element is zero");
    auto eg = extended_gcd(reduced, modulus);
    if (!eg.g.is_one()) throw std::domain_error("inverse_mod: element is not invertible");
    return eg.s % modulus;
}

/// p*(z) = z^deg(p) p(1/z).
inline UniPoly reciprocal(const UniPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("reciprocal of the zero polynomial");
    const auto d = static_cast<std::size_t>(p.degree());
    UniPoly r;
    for (auto e : p.support()) r.flip(d - e);
    return r;
}

inline bool is_self_reciprocal(const UniPoly& p) { return !p.is_zero() && reciprocal(p) == p; }

/// Formal derivative; over GF(2) only odd exponents survive.
inline UniPoly derivative(const UniPoly& p) {
    UniPoly d;
    for (auto e : p.support())
        if (e % 2 == 1) d.flip(e - 1);
    return d;
}

// ---------------------------------------------------------------------------
// Integer helpers

inline std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t r = 1;
    base %= m;
    for (; exp; exp >>= 1) {
        if (exp & 1U) r = mul_mod_u64(r, base, m);
        base = mul_mod_u64(base, base, m);
    }
    return r;
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Prime factorization by trial division, as (prime, exponent) ascending.
inline std::vector<std::pair<std::uint64_t, unsigned>> factor_integer(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("factor_integer(0)");
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (auto [p, e] : factor_integer(n)) out.push_back(p);
    return out;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out{1};
    for (auto [p, e] : factor_integer(n)) {
        const auto count = out.size();
        std::uint64_t pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < count; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("euler_phi(0)");
    std::uint64_t phi = n;
    for (auto [p, e] : factor_integer(n)) phi = phi / p * (p - 1);
    return phi;
}

/// Least e >= 1 with base^e = 1 (mod modulus).
inline std::uint64_t multiplicative_order(std::uint64_t base, std::uint64_t modulus) {
    if (modulus == 0) throw std::invalid_argument("multiplicative_order: modulus must be positive");
    if (modulus == 1) return 1;
    if (std::gcd(base, modulus) != 1) throw std::invalid_argument("multiplicative_order: base and modulus not coprime");
    std::uint64_t e = euler_phi(modulus);
    for (auto p : prime_divisors(e)) {
        while (e % p == 0 && pow_mod_u64(base, e / p, modulus) == 1) e /= p;
    }
    return e;
}

/// Number of irreducible factors of z^n - 1 over GF(2), n odd.
inline std::uint64_t eta_count(std::uint64_t n) {
    if (n == 0 || n % 2 == 0) throw std::invalid_argument("eta_count requires an odd positive n");
    std::uint64_t eta = 0;
    for (auto d : divisors(n)) eta += euler_phi(d) / multiplicative_order(2, d);
    return eta;
}

// ---------------------------------------------------------------------------
// Polynomial order

/// Hard cap on linear stepping in order().
inline constexpr std::uint64_t kOrderStepCap = std::uint64_t{1} << 32;

/// Least e >= 1 with p | z^e - 1, found by stepping z^e mod p. The cap is
/// min(2^deg(p) - 1, kOrderStepCap); exceeding it throws std::runtime_error.
inline std::uint64_t order(const UniPoly& p) {
    if (p.is_zero() || !p.coeff(0)) throw std::domain_error("order is undefined without a constant term");
    const long d = p.degree();
    if (d == 0) return 1;
    const std::uint64_t cap = d >= 63 ? kOrderStepCap : std::min(kOrderStepCap, (std::uint64_t{1} << d) - 1);
    if (d < 64) {
        // Word-sized fast path: multiply by z is a shift plus conditional XOR.
        const std::uint64_t low = p.words()[0] & ~(std::uint64_t{1} << d);  // p without its leading term
        const std::uint64_t top = std::uint64_t{1} << (d - 1);
        std::uint64_t v = 1;
        for (std::uint64_t e = 1; e <= cap; ++e) {
            const bool carry = (v & top) != 0;
            v = (v << 1) & ((top << 1) - 1);
            if (carry) v ^= low;
            if (v == 1) return e;
        }
    } else {
        const UniPoly z = UniPoly::monomial(1);
        UniPoly v = UniPoly::one();
        for (std::uint64_t e = 1; e <= cap; ++e) {
            v = mul_mod(v, z, p);
            if (v.is_one()) return e;
        }
    }
    throw std::runtime_error("order: iteration cap exceeded");
}

/// Order of p when p is known to divide z^multiple - 1: the least divisor e of
/// `multiple` with z^e = 1 mod p, found by repeated squaring.
inline std::uint64_t order_dividing(const UniPoly& p, std::uint64_t multiple) {
    if (p.is_zero() || !p.coeff(0)) throw std::domain_error("order is undefined without a constant term");
    if (multiple == 0) throw std::invalid_argument("order_dividing: multiple must be positive");
    const UniPoly z = UniPoly::monomial(1);
    if (!pow_mod(z, multiple, p).is_one() && p.degree() > 0)
        throw std::invalid_argument("order_dividing: p does not divide z^multiple - 1");
    std::uint64_t e = multiple;
    for (auto q : prime_divisors(multiple)) {
        while (e % q == 0 && (p.degree() == 0 || pow_mod(z, e / q, p).is_one())) e /= q;
    }
    return e;
}

// ---------------------------------------------------------------------------
// Text grammar: terms joined by '+', each `1`, `z` or `z^K`; whitespace is
// ignored and duplicate exponents cancel. "0" denotes the zero polynomial.

namespace detail {

inline std::string strip_spaces(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    return s;
}

inline std::vector<std::string> split_terms(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find('+', start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::size_t parse_exponent(const std::string& digits, std::string_view context) {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw std::invalid_argument("bad exponent in polynomial term '" + std::string(context) + "'");
    if (digits.size() > 9) throw std::invalid_argument("exponent too large in '" + std::string(context) + "'");
    return static_cast<std::size_t>(std::stoull(digits));
}

}  // namespace detail

inline UniPoly parse_unipoly(std::string_view text, char var = 'z') {
    const std::string s = detail::strip_spaces(text);
    if (s.empty()) throw std::invalid_argument("empty polynomial");
    if (s == "0") return {};
    UniPoly p;
    for (const auto& term : detail::split_terms(s)) {
        if (term == "1") {
            p.flip(0);
        } else if (term.size() == 1 && term[0] == var) {
            p.flip(1);
        } else if (term.size() > 2 && term[0] == var && term[1] == '^') {
            auto e = detail::parse_exponent(term.substr(2), term);
            if (e == 0) throw std::invalid_argument("exponent must be >= 1 in '" + term + "'");
            p.flip(e);
        } else {
            throw std::invalid_argument("bad polynomial term '" + term + "'");
        }
    }
    return p;
}

}  // namespace bbcode
