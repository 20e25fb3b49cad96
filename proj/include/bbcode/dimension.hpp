#pragma once

// Code dimension k of a BB code by four independent routes: the coprime gcd
// formula, CRT over extension fields on one side, standard monomials of a
// Groebner basis, and the CSS rank formula.

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbcode/factor.hpp"
#include "bbcode/linalg.hpp"
#include "bbcode/ring.hpp"

namespace bbcode {

/// Raised when strategies that must agree do not.
class InconsistencyError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Element of GF(2)[u]/(f) for irreducible f.
class ExtFieldElem {
   public:
    ExtFieldElem(UniPoly modulus, const UniPoly& value) : modulus_(std::move(modulus)), value_(value % modulus_) {}

    const UniPoly& modulus() const noexcept { return modulus_; }
    const UniPoly& value() const noexcept { return value_; }
    bool is_zero() const noexcept { return value_.is_zero(); }

    friend ExtFieldElem operator+(const ExtFieldElem& a, const ExtFieldElem& b) { return {a.modulus_, a.value_ + b.value_}; }
    friend ExtFieldElem operator*(const ExtFieldElem& a, const ExtFieldElem& b) {
        return {a.modulus_, mul_mod(a.value_, b.value_, a.modulus_)};
    }
    ExtFieldElem inverse() const {
        if (is_zero()) throw std::domain_error("ExtFieldElem: zero has no inverse");
        return {modulus_, inverse_mod(value_, modulus_)};
    }
    friend bool operator==(const ExtFieldElem&, const ExtFieldElem&) = default;

   private:
    UniPoly modulus_;
    UniPoly value_;
};

/// Polynomial in one variable with coefficients in GF(2)[u]/(f). Coefficients
/// are stored as reduced UniPoly residues, lowest power first.
class ExtPoly {
   public:
    explicit ExtPoly(UniPoly modulus) : modulus_(std::move(modulus)) {
        if (modulus_.degree() < 1) throw std::invalid_argument("ExtPoly: modulus must have positive degree");
    }

    /// v^n - 1
    static ExtPoly xn_minus_1(const UniPoly& modulus, std::size_t n) {
        ExtPoly p(modulus);
        p.add_term(0, UniPoly::one());
        p.add_term(n, UniPoly::one());
        return p;
    }

    const UniPoly& modulus() const noexcept { return modulus_; }
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0].is_one(); }
    const std::vector<UniPoly>& coeffs() const noexcept { return c_; }

    void add_term(std::size_t power, const UniPoly& coeff) {
        if (c_.size() <= power) c_.resize(power + 1);
        c_[power] += coeff % modulus_;
        trim();
    }

    friend ExtPoly operator+(ExtPoly a, const ExtPoly& b) {
        for (std::size_t i = 0; i < b.c_.size(); ++i) {
            if (a.c_.size() <= i) a.c_.resize(i + 1);
            a.c_[i] += b.c_[i];
        }
        a.trim();
        return a;
    }

    friend ExtPoly operator*(const ExtPoly& a, const ExtPoly& b) {
        ExtPoly r(a.modulus_);
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, UniPoly{});
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                if (!b.c_[j].is_zero()) r.c_[i + j] += mul_mod(a.c_[i], b.c_[j], a.modulus_);
        }
        r.trim();
        return r;
    }

    /// Scaled so the leading coefficient is 1.
    ExtPoly monic() const {
        if (is_zero()) return *this;
        const UniPoly inv = inverse_mod(c_.back(), modulus_);
        ExtPoly r(modulus_);
        for (const auto& c : c_) r.c_.push_back(mul_mod(c, inv, modulus_));
        return r;
    }

    /// Remainder of division by a nonzero divisor.
    friend ExtPoly operator%(ExtPoly a, const ExtPoly& d) {
        if (d.is_zero()) throw std::domain_error("ExtPoly: division by zero");
        const UniPoly lead_inv = inverse_mod(d.c_.back(), d.modulus_);
        while (a.degree() >= d.degree()) {
            const std::size_t shift = static_cast<std::size_t>(a.degree() - d.degree());
            const UniPoly factor = mul_mod(a.c_.back(), lead_inv, a.modulus_);
            for (std::size_t i = 0; i < d.c_.size(); ++i) a.c_[i + shift] += mul_mod(factor, d.c_[i], a.modulus_);
            a.trim();
        }
        return a;
    }

    friend bool operator==(const ExtPoly&, const ExtPoly&) = default;

    /// Coefficients 1 print bare; others in parentheses, e.g. "1 + (u)v + v^2".
    std::string to_string(char field_var = 'x', char poly_var = 'y') const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            std::string mono = i == 0 ? "" : i == 1 ? std::string(1, poly_var) : std::string(1, poly_var) + "^" + std::to_string(i);
            if (c_[i].is_one())
                s += mono.empty() ? "1" : mono;
            else
                s += "(" + c_[i].to_string(field_var) + ")" + mono;
        }
        return s;
    }

   private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    UniPoly modulus_;
    std::vector<UniPoly> c_;
};

/// Monic gcd over the extension field; remainders are normalized at every step.
inline ExtPoly gcd(ExtPoly p, ExtPoly q) {
    if (p.is_zero() && q.is_zero()) throw std::invalid_argument("gcd(0, 0) is undefined");
    p = p.monic();
    q = q.monic();
    while (!q.is_zero()) {
        ExtPoly r = (p % q).monic();
        p = std::move(q);
        q = std::move(r);
    }
    return p;
}

// ---------------------------------------------------------------------------

enum class DimensionMethod { coprime_gcd, one_sided_crt, groebner, matrix_rank };

inline std::string to_string(DimensionMethod m) {
    switch (m) {
        case DimensionMethod::coprime_gcd:
            return "coprime-gcd";
        case DimensionMethod::one_sided_crt:
            return "one-sided-crt";
        case DimensionMethod::groebner:
            return "groebner";
        case DimensionMethod::matrix_rank:
            return "matrix-rank";
    }
    return "unknown";
}

/// One CRT constituent: irreducible factor f of the factored side and the
/// generator g in GF(2)[u]/(f)[v].
struct CrtComponent {
    UniPoly f;
    ExtPoly g;
};

struct DimensionReport {
    std::size_t k = 0;
    DimensionMethod method = DimensionMethod::matrix_rank;

    std::optional<UniPoly> gcd_witness;  // coprime-gcd

    char field_var = 'x';  // one-sided-crt: the factored variable
    char poly_var = 'y';
    std::vector<CrtComponent> components;

    std::vector<Monomial> standard_monomials;  // groebner
    std::vector<Monomial> leading_monomials;

    std::size_t rank_hx = 0;  // matrix-rank
    std::size_t rank_hz = 0;

    std::vector<std::string> witness_strings() const {
        std::vector<std::string> out;
        switch (method) {
            case DimensionMethod::coprime_gcd:
                out.push_back("g(z) = " + gcd_witness->to_string('z'));
                break;
            case DimensionMethod::one_sided_crt:
                for (const auto& c : components)
                    out.push_back("g = " + c.g.to_string(field_var, poly_var) + " over GF(2)[" + field_var + "]/(" +
                                  c.f.to_string(field_var) + ")");
                break;
            case DimensionMethod::groebner: {
                std::string s, l;
                for (auto t : standard_monomials) s += (s.empty() ? "" : ", ") + t.to_string();
                for (auto t : leading_monomials) l += (l.empty() ? "" : ", ") + t.to_string();
                out.push_back("standard monomials {" + s + "}");
                out.push_back("leading monomials {" + l + "}");
                break;
            }
            case DimensionMethod::matrix_rank:
                out.push_back("rank H_X = " + std::to_string(rank_hx) + ", rank H_Z = " + std::to_string(rank_hz));
                break;
        }
        return out;
    }
};

inline bool coprime_applicable(const BBCode& c) { return c.ell % 2 == 1 && c.m % 2 == 1 && std::gcd(c.ell, c.m) == 1; }
inline bool one_sided_applicable(const BBCode& c) { return c.ell % 2 == 1 || c.m % 2 == 1; }

inline DimensionReport k_coprime(const BBCode& code) {
    if (!coprime_applicable(code))
        throw std::domain_error("k_coprime requires odd coprime l and m; use the one-sided or groebner strategy");
    const auto psi = coprime_psi(code.ell, code.m);
    const UniPoly g = gcd(UniPoly::xn_minus_1(code.ell * code.m), psi.apply(code.a), psi.apply(code.b));
    DimensionReport r;
    r.method = DimensionMethod::coprime_gcd;
    r.k = 2 * static_cast<std::size_t>(g.degree());
    r.gcd_witness = g;
    return r;
}

/// CRT over the irreducible factors of the odd side. If both sides are odd
/// the larger one is factored (x on a tie).
inline DimensionReport k_one_sided(const BBCode& code) {
    if (!one_sided_applicable(code))
        throw std::domain_error("k_one_sided requires an odd l or m; use the groebner strategy");
    bool factor_x;
    if (code.ell % 2 == 1 && code.m % 2 == 1)
        factor_x = code.ell >= code.m;
    else
        factor_x = code.ell % 2 == 1;
    const std::size_t nu = factor_x ? code.ell : code.m;
    const std::size_t nv = factor_x ? code.m : code.ell;

    DimensionReport r;
    r.method = DimensionMethod::one_sided_crt;
    r.field_var = factor_x ? 'x' : 'y';
    r.poly_var = factor_x ? 'y' : 'x';
    for (const auto& fac : factor_xn_minus_1(nu).factors) {
        auto project = [&](const BiPoly& p) {
            ExtPoly e(fac.poly);
            for (auto t : p.support()) {
                const std::size_t eu = factor_x ? t.i : t.j;
                const std::size_t ev = factor_x ? t.j : t.i;
                e.add_term(ev, UniPoly::monomial(eu));
            }
            return e;
        };
        // Fold from the modulus: a and b may both vanish on this component.
        ExtPoly g = gcd(gcd(ExtPoly::xn_minus_1(fac.poly, nv), project(code.a)), project(code.b));
        r.k += 2 * static_cast<std::size_t>(g.degree()) * static_cast<std::size_t>(fac.poly.degree());
        r.components.push_back({fac.poly, std::move(g)});
    }
    return r;
}

inline GroebnerBasis code_ideal_basis(const BBCode& code) {
    return buchberger({FreeBiPoly::x_power_minus_1(static_cast<std::uint32_t>(code.ell)),
                       FreeBiPoly::y_power_minus_1(static_cast<std::uint32_t>(code.m)), FreeBiPoly::from_bipoly(code.a),
                       FreeBiPoly::from_bipoly(code.b)});
}

inline DimensionReport k_groebner(const BBCode& code) {
    const GroebnerBasis G = code_ideal_basis(code);
    DimensionReport r;
    r.method = DimensionMethod::groebner;
    r.leading_monomials = G.leading_monomials();
    if (!G.is_unit_ideal()) r.standard_monomials = standard_monomials(G, code.ell, code.m);
    std::sort(r.leading_monomials.begin(), r.leading_monomials.end());
    r.k = 2 * r.standard_monomials.size();
    return r;
}

inline DimensionReport k_rank(const BBCode& code) {
    const auto h = build_checks(code);
    DimensionReport r;
    r.method = DimensionMethod::matrix_rank;
    r.rank_hx = rank(h.hx);
    r.rank_hz = rank(h.hz);
    r.k = code.n() - r.rank_hx - r.rank_hz;
    return r;
}

struct CrossCheckReport {
    std::size_t k = 0;
    std::vector<DimensionReport> reports;
};

struct CrossCheckOptions {
    bool groebner = true;
    bool rank = true;
};

/// Runs every applicable strategy and throws InconsistencyError on any
/// disagreement.
inline CrossCheckReport k_cross_check(const BBCode& code, CrossCheckOptions opts = {}) {
    CrossCheckReport out;
    if (coprime_applicable(code)) out.reports.push_back(k_coprime(code));
    if (one_sided_applicable(code)) out.reports.push_back(k_one_sided(code));
    if (opts.groebner) out.reports.push_back(k_groebner(code));
    if (opts.rank) out.reports.push_back(k_rank(code));
    if (out.reports.empty()) throw std::invalid_argument("k_cross_check: no strategy selected");
    out.k = out.reports.front().k;
    for (const auto& r : out.reports) {
        if (r.k != out.k) {
            std::string msg = "dimension strategies disagree for " + code.to_string() + ":";
            for (const auto& q : out.reports) msg += " " + to_string(q.method) + "=" + std::to_string(q.k);
            throw InconsistencyError(msg);
        }
    }
    return out;
}

}  // namespace bbcode
