#pragma once

// The group algebra S = GF(2)[x,y]/(x^l - 1, y^m - 1), free bivariate
// polynomials under lex order (x > y), reduction and Buchberger's algorithm,
// and the coprime isomorphism S -> GF(2)[z]/(z^(lm) - 1).

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "bbcode/poly.hpp"

namespace bbcode {

/// x^i y^j. Ordering is lex with x > y: compare i first, then j.
struct Monomial {
    std::uint32_t i = 0;
    std::uint32_t j = 0;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

    bool divides(const Monomial& o) const noexcept { return i <= o.i && j <= o.j; }

    std::string to_string() const {
        if (i == 0 && j == 0) return "1";
        std::string s;
        if (i > 0) s += i == 1 ? std::string("x") : "x^" + std::to_string(i);
        if (j > 0) s += j == 1 ? std::string("y") : "y^" + std::to_string(j);
        return s;
    }
};

// ---------------------------------------------------------------------------
// BiPoly: element of S, stored as an l x m bit grid (row-major, index i*m+j).

class BiPoly {
   public:
    BiPoly() = default;
    BiPoly(std::size_t ell, std::size_t m) : ell_(ell), m_(m), bits_((ell * m + 63) / 64, 0) {
        if (ell == 0 || m == 0) throw std::invalid_argument("BiPoly: l and m must be positive");
    }

    static BiPoly monomial(std::size_t ell, std::size_t m, std::size_t i, std::size_t j) {
        BiPoly p(ell, m);
        p.flip(i, j);
        return p;
    }
    static BiPoly one(std::size_t ell, std::size_t m) { return monomial(ell, m, 0, 0); }

    /// Sum of x^i y^j over the given exponent pairs (reduced mod l, m; repeats cancel).
    static BiPoly from_terms(std::size_t ell, std::size_t m, std::initializer_list<std::pair<std::size_t, std::size_t>> terms) {
        BiPoly p(ell, m);
        for (auto [i, j] : terms) p.flip(i, j);
        return p;
    }

    std::size_t ell() const noexcept { return ell_; }
    std::size_t m() const noexcept { return m_; }
    std::size_t size() const noexcept { return ell_ * m_; }

    bool coeff(std::size_t i, std::size_t j) const noexcept { return bit(index(i, j)); }
    void flip(std::size_t i, std::size_t j) {
        auto k = index(i, j);
        bits_[k / 64] ^= std::uint64_t{1} << (k % 64);
    }
    bool bit(std::size_t k) const noexcept { return (bits_[k / 64] >> (k % 64)) & 1U; }

    bool is_zero() const noexcept {
        return std::all_of(bits_.begin(), bits_.end(), [](auto w) { return w == 0; });
    }

    std::size_t weight() const noexcept {
        std::size_t c = 0;
        for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// Row-major grid indices of the support, ascending.
    std::vector<std::size_t> support_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < bits_.size(); ++k)
            for (auto w = bits_[k]; w != 0; w &= w - 1) out.push_back(64 * k + std::countr_zero(w));
        return out;
    }

    std::vector<Monomial> support() const {
        std::vector<Monomial> out;
        for (auto k : support_indices())
            out.push_back({static_cast<std::uint32_t>(k / m_), static_cast<std::uint32_t>(k % m_)});
        return out;
    }

    /// x^u y^v * this
    BiPoly shifted(std::size_t u, std::size_t v) const {
        BiPoly r(ell_, m_);
        for (auto t : support()) r.flip(t.i + u, t.j + v);
        return r;
    }

    /// Shift so that the support element that is first in row-major order
    /// lands on the constant monomial.
    BiPoly normalized() const {
        if (is_zero()) return *this;
        auto first = support().front();
        return shifted(ell_ - first.i, m_ - first.j);
    }

    BiPoly& operator+=(const BiPoly& q) {
        check_same_ring(q);
        for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] ^= q.bits_[k];
        return *this;
    }
    friend BiPoly operator+(BiPoly p, const BiPoly& q) { return p += q; }

    /// Two-dimensional cyclic convolution.
    friend BiPoly operator*(const BiPoly& p, const BiPoly& q) {
        p.check_same_ring(q);
        BiPoly r(p.ell_, p.m_);
        const auto sq = q.support();
        for (auto s : p.support())
            for (auto t : sq) r.flip(s.i + t.i, s.j + t.j);
        return r;
    }

    friend bool operator==(const BiPoly&, const BiPoly&) = default;

    /// Terms in ascending lex order, e.g. "1 + y^3 + x + xy + xy^2".
    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (auto t : support()) {
            if (!s.empty()) s += " + ";
            s += t.to_string();
        }
        return s;
    }

    void check_same_ring(const BiPoly& q) const {
        if (ell_ != q.ell_ || m_ != q.m_) throw std::invalid_argument("BiPoly: mismatched ring dimensions");
    }

   private:
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return (i % ell_) * m_ + (j % m_); }

    std::size_t ell_ = 1;
    std::size_t m_ = 1;
    std::vector<std::uint64_t> bits_ = std::vector<std::uint64_t>(1, 0);
};

/// x^i -> x^(l-i), y^j -> y^(m-j).
inline BiPoly transpose(const BiPoly& p) {
    BiPoly r(p.ell(), p.m());
    for (auto t : p.support()) r.flip(p.ell() - t.i, p.m() - t.j);
    return r;
}

/// True iff q = x^u y^v p for some monomial; checks every shift.
inline bool equivalent(const BiPoly& p, const BiPoly& q) {
    p.check_same_ring(q);
    if (p.weight() != q.weight()) return false;
    for (std::size_t u = 0; u < p.ell(); ++u)
        for (std::size_t v = 0; v < p.m(); ++v)
            if (p.shifted(u, v) == q) return true;
    return false;
}

/// Representative of the shift class of p: the shift whose sorted row-major
/// support sequence is lexicographically smallest. It always contains 1.
inline BiPoly canonical_form(const BiPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("canonical_form of the zero polynomial");
    std::optional<BiPoly> best;
    std::vector<std::size_t> best_key;
    for (auto t : p.support()) {
        BiPoly cand = p.shifted(p.ell() - t.i, p.m() - t.j);
        auto key = cand.support_indices();
        if (!best || key < best_key) {
            best = std::move(cand);
            best_key = std::move(key);
        }
    }
    return *best;
}

/// Bivariate text grammar: terms joined by '+', each a product of `1`, `x`,
/// `x^K`, `y`, `y^K` (juxtaposed or joined by '*'). Exponents reduce mod l, m.
inline BiPoly parse_bipoly(std::string_view text, std::size_t ell, std::size_t m) {
    const std::string s = detail::strip_spaces(text);
    if (s.empty()) throw std::invalid_argument("empty polynomial");
    BiPoly p(ell, m);
    if (s == "0") return p;
    for (const auto& term : detail::split_terms(s)) {
        if (term.empty()) throw std::invalid_argument("empty term in '" + s + "'");
        std::size_t i = 0, j = 0, pos = 0;
        bool any = false;
        while (pos < term.size()) {
            char c = term[pos];
            if (c == '*') {
                ++pos;
                continue;
            }
            if (c == '1') {
                ++pos;
                any = true;
                continue;
            }
            if (c != 'x' && c != 'y') throw std::invalid_argument("bad polynomial term '" + term + "'");
            ++pos;
            std::size_t e = 1;
            if (pos < term.size() && term[pos] == '^') {
                auto end = pos + 1;
                while (end < term.size() && std::isdigit(static_cast<unsigned char>(term[end]))) ++end;
                e = detail::parse_exponent(term.substr(pos + 1, end - pos - 1), term);
                pos = end;
            }
            (c == 'x' ? i : j) += e;
            any = true;
        }
        if (!any) throw std::invalid_argument("bad polynomial term '" + term + "'");
        p.flip(i, j);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Coprime isomorphism psi: x -> z^(m * (m^-1 mod l)), y -> z^(l * (l^-1 mod m)).

namespace detail {

inline std::uint64_t inverse_mod_u64(std::uint64_t a, std::uint64_t mod) {
    if (mod == 1) return 0;
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(mod), new_r = static_cast<std::int64_t>(a % mod);
    while (new_r != 0) {
        auto q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1) throw std::invalid_argument("no modular inverse");
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(mod) : t);
}

}  // namespace detail

struct CoprimeMap {
    std::size_t ell = 1;
    std::size_t m = 1;
    std::size_t n = 1;  // l*m
    std::size_t ex = 0;  // psi(x) = z^ex
    std::size_t ey = 0;  // psi(y) = z^ey

    UniPoly apply(const BiPoly& p) const {
        if (p.ell() != ell || p.m() != m) throw std::invalid_argument("CoprimeMap: ring mismatch");
        UniPoly r;
        for (auto t : p.support()) r.flip((ex * t.i + ey * t.j) % n);
        return r;
    }

    /// psi^-1: z^e -> x^(e mod l) y^(e mod m). Exponents are reduced mod n.
    BiPoly inverse(const UniPoly& q) const {
        BiPoly r(ell, m);
        for (auto e : q.support()) r.flip(e % n % ell, e % n % m);
        return r;
    }
};

inline CoprimeMap coprime_psi(std::size_t ell, std::size_t m) {
    if (ell == 0 || m == 0 || ell % 2 == 0 || m % 2 == 0)
        throw std::invalid_argument("coprime_psi requires odd positive l and m");
    if (std::gcd(ell, m) != 1) throw std::invalid_argument("coprime_psi requires gcd(l, m) = 1");
    CoprimeMap f{ell, m, ell * m, 0, 0};
    f.ex = (detail::inverse_mod_u64(m, ell) * m) % f.n;
    f.ey = (detail::inverse_mod_u64(ell, m) * ell) % f.n;
    return f;
}

// ---------------------------------------------------------------------------
// Free bivariate polynomials (no quotient), for Groebner computations.

inline constexpr std::uint32_t kMaxFreeExponent = 1'000'000;

class FreeBiPoly {
   public:
    FreeBiPoly() = default;

    static FreeBiPoly from_monomials(std::vector<Monomial> terms) {
        FreeBiPoly p;
        std::vector<std::uint64_t> keys;
        keys.reserve(terms.size());
        for (auto t : terms) keys.push_back(key(t));
        std::sort(keys.begin(), keys.end());
        // Equal pairs cancel.
        for (std::size_t k = 0; k < keys.size();) {
            std::size_t r = k;
            while (r < keys.size() && keys[r] == keys[k]) ++r;
            if ((r - k) % 2 == 1) p.keys_.push_back(keys[k]);
            k = r;
        }
        return p;
    }

    static FreeBiPoly from_bipoly(const BiPoly& p) { return from_monomials(p.support()); }

    static FreeBiPoly monomial(Monomial t) { return from_monomials({t}); }

    /// x^l - 1
    static FreeBiPoly x_power_minus_1(std::uint32_t ell) { return from_monomials({{ell, 0}, {0, 0}}); }
    /// y^m - 1
    static FreeBiPoly y_power_minus_1(std::uint32_t m) { return from_monomials({{0, m}, {0, 0}}); }

    bool is_zero() const noexcept { return keys_.empty(); }
    bool is_one() const noexcept { return keys_.size() == 1 && keys_[0] == 0; }
    std::size_t size() const noexcept { return keys_.size(); }

    Monomial leading() const {
        if (keys_.empty()) throw std::logic_error("leading monomial of zero");
        return unkey(keys_.back());
    }

    /// Terms in descending lex order.
    std::vector<Monomial> terms() const {
        std::vector<Monomial> out;
        out.reserve(keys_.size());
        for (auto it = keys_.rbegin(); it != keys_.rend(); ++it) out.push_back(unkey(*it));
        return out;
    }

    FreeBiPoly times(Monomial t) const {
        if (t.i > kMaxFreeExponent || t.j > kMaxFreeExponent) throw std::overflow_error("FreeBiPoly exponent bound exceeded");
        FreeBiPoly r;
        r.keys_.reserve(keys_.size());
        const std::uint64_t add = key(t);
        for (auto k : keys_) {
            auto m = unkey(k);
            if (m.i + t.i > kMaxFreeExponent || m.j + t.j > kMaxFreeExponent)
                throw std::overflow_error("FreeBiPoly exponent bound exceeded");
            r.keys_.push_back(k + add);
        }
        return r;
    }

    FreeBiPoly& operator+=(const FreeBiPoly& q) {
        std::vector<std::uint64_t> out;
        out.reserve(keys_.size() + q.keys_.size());
        std::set_symmetric_difference(keys_.begin(), keys_.end(), q.keys_.begin(), q.keys_.end(), std::back_inserter(out));
        keys_ = std::move(out);
        return *this;
    }
    friend FreeBiPoly operator+(FreeBiPoly p, const FreeBiPoly& q) { return p += q; }

    friend bool operator==(const FreeBiPoly&, const FreeBiPoly&) = default;

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (auto k : keys_) {
            if (!s.empty()) s += " + ";
            s += unkey(k).to_string();
        }
        return s;
    }

   private:
    static std::uint64_t key(Monomial t) noexcept { return (std::uint64_t{t.i} << 32) | t.j; }
    static Monomial unkey(std::uint64_t k) noexcept {
        return {static_cast<std::uint32_t>(k >> 32), static_cast<std::uint32_t>(k & 0xffffffffU)};
    }

    friend FreeBiPoly reduce(FreeBiPoly f, const std::vector<FreeBiPoly>& basis);

    std::vector<std::uint64_t> keys_;  // ascending; leading monomial is last
};

inline Monomial lcm(Monomial a, Monomial b) { return {std::max(a.i, b.i), std::max(a.j, b.j)}; }
inline Monomial quotient(Monomial num, Monomial den) { return {num.i - den.i, num.j - den.j}; }

/// Full reduction: repeatedly cancels the largest term divisible by some
/// leading monomial of the basis; terms that are not divisible move to the
/// remainder. The result has no term divisible by any LM(g).
inline FreeBiPoly reduce(FreeBiPoly f, const std::vector<FreeBiPoly>& basis) {
    for (const auto& g : basis)
        if (g.is_zero()) throw std::invalid_argument("reduce: basis contains zero");
    std::vector<std::uint64_t> rem_desc;
    while (!f.keys_.empty()) {
        const Monomial t = FreeBiPoly::unkey(f.keys_.back());
        const FreeBiPoly* divisor = nullptr;
        for (const auto& g : basis) {
            if (g.leading().divides(t)) {
                divisor = &g;
                break;
            }
        }
        if (divisor) {
            f += divisor->times(quotient(t, divisor->leading()));
        } else {
            rem_desc.push_back(f.keys_.back());
            f.keys_.pop_back();
        }
    }
    FreeBiPoly r;
    r.keys_.assign(rem_desc.rbegin(), rem_desc.rend());
    return r;
}

struct GroebnerBasis {
    std::vector<FreeBiPoly> generators;  // reduced, sorted by leading monomial (descending)

    std::vector<Monomial> leading_monomials() const {
        std::vector<Monomial> out;
        for (const auto& g : generators) out.push_back(g.leading());
        return out;
    }

    bool is_unit_ideal() const { return generators.size() == 1 && generators[0].is_one(); }
};

inline FreeBiPoly s_polynomial(const FreeBiPoly& f, const FreeBiPoly& g) {
    const Monomial l = lcm(f.leading(), g.leading());
    return f.times(quotient(l, f.leading())) + g.times(quotient(l, g.leading()));
}

/// Buchberger's algorithm with the normal selection strategy (smallest lcm
/// first) and the product and chain criteria. Returns the reduced basis.
inline GroebnerBasis buchberger(const std::vector<FreeBiPoly>& gens) {
    std::vector<FreeBiPoly> G;
    for (const auto& g : gens)
        if (!g.is_zero()) G.push_back(g);
    if (G.empty()) throw std::invalid_argument("buchberger: no nonzero generators");

    struct Pair {
        Monomial lcm;
        std::size_t i, j;
        bool operator<(const Pair& o) const { return std::tie(lcm, i, j) < std::tie(o.lcm, o.i, o.j); }
    };
    std::set<Pair> queue;
    std::set<std::pair<std::size_t, std::size_t>> pending;  // (min, max) of queued pairs
    std::vector<bool> alive(G.size(), true);

    auto enqueue = [&](std::size_t i, std::size_t j) {
        queue.insert({lcm(G[i].leading(), G[j].leading()), i, j});
        pending.insert({std::min(i, j), std::max(i, j)});
    };
    for (std::size_t j = 1; j < G.size(); ++j)
        for (std::size_t i = 0; i < j; ++i) enqueue(i, j);

    auto is_pending = [&](std::size_t a, std::size_t b) { return pending.count({std::min(a, b), std::max(a, b)}) > 0; };

    while (!queue.empty()) {
        const Pair p = *queue.begin();
        queue.erase(queue.begin());
        pending.erase({std::min(p.i, p.j), std::max(p.i, p.j)});
        if (!alive[p.i] || !alive[p.j]) continue;

        const Monomial li = G[p.i].leading(), lj = G[p.j].leading();
        // Product criterion: coprime leading monomials.
        if (std::min(li.i, lj.i) == 0 && std::min(li.j, lj.j) == 0) continue;
        // Chain criterion.
        bool chain = false;
        for (std::size_t k = 0; k < G.size() && !chain; ++k) {
            if (k == p.i || k == p.j || !alive[k]) continue;
            if (G[k].leading().divides(p.lcm) && !is_pending(p.i, k) && !is_pending(p.j, k)) chain = true;
        }
        if (chain) continue;

        std::vector<FreeBiPoly> active;
        for (std::size_t k = 0; k < G.size(); ++k)
            if (alive[k]) active.push_back(G[k]);
        FreeBiPoly h = reduce(s_polynomial(G[p.i], G[p.j]), active);
        if (h.is_zero()) continue;
        if (h.is_one()) return GroebnerBasis{{h}};
        G.push_back(std::move(h));
        alive.push_back(true);
        const std::size_t nh = G.size() - 1;
        for (std::size_t k = 0; k < nh; ++k)
            if (alive[k]) enqueue(k, nh);
    }

    // Minimize: drop generators whose leading monomial is divisible by another's.
    std::vector<FreeBiPoly> minimal;
    for (std::size_t k = 0; k < G.size(); ++k) {
        if (!alive[k]) continue;
        bool redundant = false;
        for (std::size_t o = 0; o < G.size() && !redundant; ++o) {
            if (o == k || !alive[o]) continue;
            const auto lk = G[k].leading(), lo = G[o].leading();
            if (lo.divides(lk) && (lo != lk || o < k)) redundant = true;
        }
        if (!redundant) minimal.push_back(G[k]);
    }
    // Inter-reduce.
    std::vector<FreeBiPoly> reduced;
    for (std::size_t k = 0; k < minimal.size(); ++k) {
        std::vector<FreeBiPoly> others;
        for (std::size_t o = 0; o < minimal.size(); ++o)
            if (o != k) others.push_back(minimal[o]);
        reduced.push_back(reduce(minimal[k], others));
    }
    std::sort(reduced.begin(), reduced.end(),
              [](const FreeBiPoly& a, const FreeBiPoly& b) { return b.leading() < a.leading(); });
    return GroebnerBasis{std::move(reduced)};
}

/// Monomials x^i y^j (i < l, j < m) divisible by no leading monomial of G,
/// in ascending lex order. Requires a zero-dimensional ideal.
inline std::vector<Monomial> standard_monomials(const GroebnerBasis& G, std::size_t ell, std::size_t m) {
    const auto lms = G.leading_monomials();
    if (lms.empty()) throw std::invalid_argument("standard_monomials: empty basis");
    const bool has_x = std::any_of(lms.begin(), lms.end(), [](Monomial t) { return t.j == 0; });
    const bool has_y = std::any_of(lms.begin(), lms.end(), [](Monomial t) { return t.i == 0; });
    if (!has_x || !has_y) throw std::domain_error("standard_monomials: ideal is not zero-dimensional");
    std::vector<Monomial> out;
    for (std::uint32_t i = 0; i < ell; ++i)
        for (std::uint32_t j = 0; j < m; ++j) {
            Monomial t{i, j};
            if (std::none_of(lms.begin(), lms.end(), [&](Monomial g) { return g.divides(t); })) out.push_back(t);
        }
    return out;
}

}  // namespace bbcode
