#pragma once

// Existence and connectivity predicates, candidate enumeration with
// equivalence deduplication, and known-code manifest verification.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bbcode/dimension.hpp"
#include "bbcode/distance.hpp"
#include "bbcode/factor.hpp"
#include "bbcode/linalg.hpp"

namespace bbcode {

/// Raised when a computed result contradicts a proven statement.
class TheoremViolation : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

enum class SearchBranch { coprime, quasi_cyclic };

inline std::string to_string(SearchBranch b) { return b == SearchBranch::coprime ? "coprime" : "quasi-cyclic"; }

inline SearchBranch branch_of(std::size_t ell, std::size_t m) {
    return ell % 2 == 1 && m % 2 == 1 && std::gcd(ell, m) == 1 ? SearchBranch::coprime : SearchBranch::quasi_cyclic;
}

// ---------------------------------------------------------------------------
// Existence

struct ExistenceReport {
    bool exists = false;
    SearchBranch branch = SearchBranch::coprime;
    std::uint64_t modulus = 0;                // 2lm
    std::vector<std::uint64_t> good_primes;   // Mersenne or outlier prime divisors
    std::vector<std::uint64_t> unverified;    // prime divisors beyond the outlier table

    std::string reason() const {
        std::string s;
        if (!good_primes.empty()) {
            for (auto p : good_primes) {
                if (!s.empty()) s += ", ";
                s += (is_mersenne_prime(p) ? "Mersenne prime " : "outlier prime ") + std::to_string(p);
            }
            s += " divides 2lm = " + std::to_string(modulus);
        } else if (!unverified.empty()) {
            s = "prime " + std::to_string(unverified.front()) + " is beyond the verified outlier range";
        } else {
            s = "no Mersenne or outlier prime divides 2lm = " + std::to_string(modulus);
        }
        return s + " (" + to_string(branch) + " branch)";
    }
};

/// Necessary condition for some trinomial pair over (l, m) to have k > 0.
/// Primes above the verified outlier range cannot be ruled out and count as
/// possible.
inline ExistenceReport exists_nontrivial(std::size_t ell, std::size_t m) {
    if (ell == 0 || m == 0) throw std::invalid_argument("exists_nontrivial requires l, m >= 1");
    ExistenceReport r;
    r.branch = branch_of(ell, m);
    r.modulus = 2 * static_cast<std::uint64_t>(ell) * m;
    for (auto p : prime_divisors(r.modulus)) {
        if (is_mersenne_prime(p)) {
            r.good_primes.push_back(p);
            continue;
        }
        switch (outlier_status(p)) {
            case OutlierStatus::outlier:
                r.good_primes.push_back(p);
                break;
            case OutlierStatus::beyond_verified_range:
                r.unverified.push_back(p);
                break;
            case OutlierStatus::not_outlier:
                break;
        }
    }
    r.exists = !r.good_primes.empty() || !r.unverified.empty();
    return r;
}

// ---------------------------------------------------------------------------
// Connectivity

/// gcd(alpha, beta, gamma, delta, n) = 1 for a = 1 + z^alpha + z^beta,
/// b = 1 + z^gamma + z^delta.
inline bool connected_coprime(const UniPoly& a, const UniPoly& b, std::size_t n) {
    std::size_t g = n;
    for (const UniPoly* p : {&a, &b}) {
        const auto s = p->support();
        if (s.size() != 3 || s[0] != 0) throw std::invalid_argument("connected_coprime expects trinomials 1 + z^s + z^t");
        for (auto e : s) g = std::gcd(g, static_cast<std::size_t>(e));
    }
    return g == 1;
}

/// The Tanner graph is connected iff the exponent differences within a and
/// within b generate all of Z_l x Z_m.
inline bool connected_monomial(const BBCode& code) {
    const std::size_t ell = code.ell, m = code.m;
    std::vector<std::pair<std::size_t, std::size_t>> gens;
    for (const BiPoly* p : {&code.a, &code.b}) {
        const auto s = p->support();
        for (std::size_t k = 1; k < s.size(); ++k)
            gens.emplace_back((s[k].i + ell - s[0].i) % ell, (s[k].j + m - s[0].j) % m);
    }
    std::vector<char> seen(ell * m, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        const std::size_t i = v / m, j = v % m;
        for (auto [di, dj] : gens) {
            const std::size_t w = ((i + di) % ell) * m + (j + dj) % m;
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == ell * m;
}

/// Recovers {l, m, alpha, beta, gamma, delta, epsilon, zeta} with
/// a = x^alpha + y^beta + y^gamma, b = y^delta + x^epsilon + x^zeta.
inline std::optional<std::array<long, 8>> structured_octet(const BBCode& code) {
    // One pure power of `lone` plus two distinct pure powers of the other
    // variable; the constant may play either role.
    auto split = [](const BiPoly& p, bool lone_is_x) -> std::optional<std::array<long, 3>> {
        if (p.weight() != 3) return std::nullopt;
        std::vector<long> lone, pair;
        bool constant = false;
        for (auto t : p.support()) {
            const std::size_t lone_exp = lone_is_x ? t.i : t.j, pair_exp = lone_is_x ? t.j : t.i;
            if (lone_exp == 0 && pair_exp == 0)
                constant = true;
            else if (pair_exp == 0)
                lone.push_back(static_cast<long>(lone_exp));
            else if (lone_exp == 0)
                pair.push_back(static_cast<long>(pair_exp));
            else
                return std::nullopt;
        }
        if (constant) (lone.empty() ? lone : pair).push_back(0);
        if (lone.size() != 1 || pair.size() != 2) return std::nullopt;
        std::sort(pair.begin(), pair.end());
        return std::array<long, 3>{lone[0], pair[0], pair[1]};
    };
    auto a = split(code.a, true), b = split(code.b, false);
    if (!a || !b) return std::nullopt;
    return std::array<long, 8>{static_cast<long>(code.ell), static_cast<long>(code.m), (*a)[0], (*a)[1], (*a)[2],
                               (*b)[0], (*b)[1], (*b)[2]};
}

/// gcd(alpha, epsilon, zeta, l) = 1 and gcd(beta, gamma, delta, m) = 1 for a
/// structured octet. This is necessary for connectivity but not sufficient
/// (e.g. {4,4,1,1,3,1,1,3} is disconnected); connected_monomial is
/// authoritative. Unstructured input falls back to connected_monomial.
inline bool connected_quasicyclic(const BBCode& code) {
    const auto o = structured_octet(code);
    if (!o) return connected_monomial(code);
    const auto& v = *o;
    const long gx = std::gcd(std::gcd(std::gcd(v[2], v[6]), v[7]), v[0]);
    const long gy = std::gcd(std::gcd(std::gcd(v[3], v[4]), v[5]), v[1]);
    return gx == 1 && gy == 1;
}

// ---------------------------------------------------------------------------
// Records

struct CodeParams {
    std::size_t n = 0;
    std::size_t k = 0;
    DimensionMethod k_method = DimensionMethod::matrix_rank;
    DistanceResult distance;
};

/// Sorted pair of canonical supports; equal keys mean equivalent codes.
using CanonicalKey = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;

inline CanonicalKey canonical_key(const BBCode& code) {
    auto ka = canonical_form(code.a).support_indices();
    auto kb = canonical_form(code.b).support_indices();
    if (kb < ka) std::swap(ka, kb);
    return {std::move(ka), std::move(kb)};
}

inline std::uint64_t key_hash(const CanonicalKey& key) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto* part : {&key.first, &key.second}) {
        for (auto v : *part) h = (h ^ v) * 0x100000001b3ULL;
        h = (h ^ 0xff) * 0x100000001b3ULL;
    }
    return h;
}

struct CandidateRecord {
    BBCode code;
    CodeParams params;
    bool connected = false;
    CanonicalKey key;
    std::optional<UniPoly> ua, ub;         // univariate form (coprime candidates)
    std::optional<UniPoly> gcd_witness;    // g(z) (coprime candidates)

    std::string a_text() const { return ua ? ua->to_string('z') : code.a.to_string(); }
    std::string b_text() const { return ub ? ub->to_string('z') : code.b.to_string(); }
};

/// Builds a code from the text grammar; polynomials in z are embedded by
/// z -> xy (requires gcd(l, m) = 1).
inline BBCode parse_code(std::size_t ell, std::size_t m, const std::string& a, const std::string& b) {
    const bool za = a.find('z') != std::string::npos, zb = b.find('z') != std::string::npos;
    if (za != zb) throw std::invalid_argument("a and b must both be univariate (z) or both bivariate (x, y)");
    if (za) return BBCode::from_univariate(ell, m, parse_unipoly(a), parse_unipoly(b));
    return BBCode(parse_bipoly(a, ell, m), parse_bipoly(b, ell, m));
}

inline nlohmann::json to_json(const CandidateRecord& r) {
    nlohmann::json j;
    j["ell"] = r.code.ell;
    j["m"] = r.code.m;
    j["a"] = r.a_text();
    j["b"] = r.b_text();
    j["n"] = r.params.n;
    j["k"] = r.params.k;
    j["d"] = r.params.distance.d ? nlohmann::json(*r.params.distance.d) : nlohmann::json(nullptr);
    j["d_status"] = to_string(r.params.distance.status);
    j["trials"] = r.params.distance.trials;
    j["connected"] = r.connected;
    return j;
}

/// Reads a record back from its JSON-lines form (recomputes the canonical key).
inline CandidateRecord record_from_json(const nlohmann::json& j) {
    CandidateRecord r;
    const std::string a = j.at("a").get<std::string>(), b = j.at("b").get<std::string>();
    r.code = parse_code(j.at("ell").get<std::size_t>(), j.at("m").get<std::size_t>(), a, b);
    if (a.find('z') != std::string::npos) {
        r.ua = parse_unipoly(a);
        r.ub = parse_unipoly(b);
    }
    r.params.n = j.at("n").get<std::size_t>();
    r.params.k = j.at("k").get<std::size_t>();
    if (!j.at("d").is_null()) r.params.distance.d = j.at("d").get<std::size_t>();
    const std::string st = j.at("d_status").get<std::string>();
    for (auto s : {DistanceStatus::exact, DistanceStatus::upper_bound, DistanceStatus::semi_trivial_2,
                   DistanceStatus::semi_trivial_4, DistanceStatus::not_computed})
        if (to_string(s) == st) r.params.distance.status = s;
    r.params.distance.trials = j.at("trials").get<std::uint64_t>();
    r.connected = j.at("connected").get<bool>();
    r.key = canonical_key(r.code);
    return r;
}

// ---------------------------------------------------------------------------
// Self-reciprocal generators

struct SelfReciprocalReport {
    std::size_t records = 0;                     // codes with k > 0 inspected
    std::size_t self_reciprocal = 0;             // ... whose witness is self-reciprocal
    std::size_t connected_self_reciprocal = 0;   // ... and that are connected
    std::vector<std::string> violations;
};

/// Every connected coprime record with k > 0 and a self-reciprocal witness
/// must have g(z) = 1 + z + z^2. Throws TheoremViolation otherwise.
inline SelfReciprocalReport self_reciprocal_generator_scan(const std::vector<CandidateRecord>& records) {
    const UniPoly phi3{0, 1, 2};
    SelfReciprocalReport rep;
    for (const auto& r : records) {
        if (!r.gcd_witness) throw std::invalid_argument("self_reciprocal_generator_scan needs coprime records with witnesses");
        const UniPoly& g = *r.gcd_witness;
        if (g.is_one()) continue;
        ++rep.records;
        if (!is_self_reciprocal(g)) continue;
        ++rep.self_reciprocal;
        if (!r.connected) continue;
        ++rep.connected_self_reciprocal;
        if (g != phi3) rep.violations.push_back(r.a_text() + " / " + r.b_text() + ": g = " + g.to_string('z'));
    }
    if (!rep.violations.empty())
        throw TheoremViolation("connected code with self-reciprocal generator other than 1 + z + z^2: " + rep.violations.front());
    return rep;
}

/// All coprime trinomial codes with 3 <= l < m, lm <= max_lm. Codes depend
/// only on n = lm, and up to a shift a = 1 + z^s + z^t, b = 1 + z^u + z^v.
/// Since z^n - 1 is squarefree for odd n, g is the product of the
/// irreducible factors dividing both; trinomials are grouped by that factor
/// set and by gcd(s, t, n), which decides connectivity.
inline SelfReciprocalReport exhaustive_self_reciprocal_scan(std::size_t max_lm = 105) {
    std::set<std::size_t> lengths;
    for (std::size_t ell = 3; ell * (ell + 2) <= max_lm; ell += 2)
        for (std::size_t m = ell + 2; ell * m <= max_lm; m += 2)
            if (std::gcd(ell, m) == 1) lengths.insert(ell * m);

    const UniPoly phi3{0, 1, 2};
    SelfReciprocalReport rep;
    for (std::size_t n : lengths) {
        const auto fac = factor_xn_minus_1(n);
        if (fac.factors.size() > 64) throw std::length_error("too many factors for a 64-bit mask");
        std::map<std::pair<std::uint64_t, std::size_t>, std::size_t> groups;
        for (std::size_t s = 1; s < n; ++s)
            for (std::size_t t = s + 1; t < n; ++t) {
                const UniPoly p{0, s, t};
                std::uint64_t mask = 0;
                for (std::size_t f = 0; f < fac.factors.size(); ++f)
                    if (divides(fac.factors[f].poly, p)) mask |= std::uint64_t{1} << f;
                ++groups[{mask, std::gcd(std::gcd(s, t), n)}];
            }
        std::map<std::uint64_t, UniPoly> product;
        for (const auto& [ga, ca] : groups)
            for (const auto& [gb, cb] : groups) {
                const std::uint64_t common = ga.first & gb.first;
                if (common == 0) continue;
                auto it = product.find(common);
                if (it == product.end()) {
                    UniPoly g = UniPoly::one();
                    for (std::size_t f = 0; f < fac.factors.size(); ++f)
                        if (common >> f & 1) g *= fac.factors[f].poly;
                    it = product.emplace(common, std::move(g)).first;
                }
                const UniPoly& g = it->second;
                const std::size_t count = ca * cb;
                rep.records += count;
                if (!is_self_reciprocal(g)) continue;
                rep.self_reciprocal += count;
                if (std::gcd(ga.second, gb.second) != 1) continue;
                rep.connected_self_reciprocal += count;
                if (g != phi3) rep.violations.push_back("n = " + std::to_string(n) + ": g = " + g.to_string('z'));
            }
    }
    if (!rep.violations.empty())
        throw TheoremViolation("connected coprime code with self-reciprocal generator other than 1 + z + z^2 at " +
                               rep.violations.front());
    return rep;
}

// ---------------------------------------------------------------------------
// Search

enum class SearchMode { coprime, quasi_cyclic, auto_select };

inline std::string to_string(SearchMode m) {
    switch (m) {
        case SearchMode::coprime:
            return "coprime";
        case SearchMode::quasi_cyclic:
            return "quasi-cyclic";
        case SearchMode::auto_select:
            return "auto";
    }
    return "unknown";
}

struct SearchConfig {
    std::size_t ell_min = 1, ell_max = 1;
    std::size_t m_min = 1, m_max = 1;
    SearchMode mode = SearchMode::auto_select;
    std::size_t max_candidates = 32;   // per (l, m), passed on to distance evaluation; 0: no limit
    std::size_t max_examined = 0;      // per (l, m), raw candidates generated; 0: no limit
    bool compute_distance = true;
    std::uint64_t distance_trials = 1000;
    std::uint64_t screen_trials = 100;
    std::size_t min_distance = 0;      // reject candidates with a logical lighter than this
    std::size_t exact_cap = kDefaultExactCap;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    bool reject_semi_trivial = true;
    bool require_connected = true;
    bool require_k4 = true;

    void validate() const {
        if (ell_min < 1 || m_min < 1) throw std::invalid_argument("search: l and m must be at least 1");
        if (ell_min > ell_max || m_min > m_max) throw std::invalid_argument("search: empty l or m range");
        if (threads < 1) throw std::invalid_argument("search: threads must be at least 1");
        if (exact_cap > 40) throw std::invalid_argument("search: exact cap above 40 is not supported");
    }
};

struct SearchStats {
    std::size_t pairs = 0;
    std::size_t pairs_without_good_prime = 0;
    std::size_t pairs_outside_mode = 0;
    std::size_t examined = 0;
    std::size_t duplicates = 0;
    std::size_t k_zero = 0;
    std::size_t rejected_k_small = 0;
    std::size_t rejected_disconnected = 0;
    std::size_t rejected_semi_trivial = 0;
    std::size_t rejected_distance = 0;
    std::size_t emitted = 0;
    std::map<std::size_t, std::size_t> k_histogram;   // distinct classes with k > 0
};

namespace detail {

struct Pending {
    BBCode code;
    CanonicalKey key;
    std::size_t k = 0;
    bool connected = false;
    std::optional<UniPoly> ua, ub, g;
};

/// k of the code with exponents reduced to the odd parts of l and m. It is
/// zero iff the full code has k = 0, since x^l - 1 and x^(odd part of l) - 1
/// have the same roots.
inline std::size_t odd_part_k(const BBCode& code) {
    std::size_t lo = code.ell, mo = code.m;
    while (lo % 2 == 0) lo /= 2;
    while (mo % 2 == 0) mo /= 2;
    BiPoly a(lo, mo), b(lo, mo);
    for (auto t : code.a.support()) a.flip(t.i % lo, t.j % mo);
    for (auto t : code.b.support()) b.flip(t.i % lo, t.j % mo);
    return k_one_sided(BBCode(std::move(a), std::move(b))).k;
}

inline std::size_t quick_k(const BBCode& code) {
    if (one_sided_applicable(code)) return k_one_sided(code).k;
    if (odd_part_k(code) == 0) return 0;
    return k_groebner(code).k;
}

/// Term-wise z^(e t) shifts of every trinomial multiple 1 + z^s + z^t of an
/// irreducible factor f of z^n - 1 with s < t < e = order(f).
inline void coprime_candidates(std::size_t n, const std::function<bool(const UniPoly&, const UniPoly&)>& visit) {
    for (const auto& fac : factor_xn_minus_1(n).factors) {
        if (fac.poly.degree() < 2) continue;
        const std::size_t e = static_cast<std::size_t>(order_dividing(fac.poly, n));
        const auto family = trinomial_exponent_pairs(fac.poly, e);
        const std::size_t reps = n / e;
        for (auto [s, t] : family) {
            const UniPoly a{0, s, t};
            for (auto [u, v] : family)
                for (std::size_t i = 0; i < reps; ++i)
                    for (std::size_t j = 0; j < reps; ++j)
                        if (!visit(a, UniPoly{0, u + e * i, v + e * j})) return;
        }
    }
}

inline void structured_candidates(std::size_t ell, std::size_t m, const std::function<bool(const BBCode&)>& visit) {
    const long L = static_cast<long>(ell), M = static_cast<long>(m);
    for (long al = 0; al < L; ++al)
        for (long be = 0; be < M; ++be)
            for (long ga = be + 1; ga < M; ++ga) {
                if (al == 0 && be == 0) continue;
                for (long de = 0; de < M; ++de)
                    for (long ep = 0; ep < L; ++ep)
                        for (long ze = ep + 1; ze < L; ++ze) {
                            if (de == 0 && ep == 0) continue;
                            if (!visit(BBCode::from_octet({L, M, al, be, ga, de, ep, ze}))) return;
                        }
            }
}

}  // namespace detail

/// Enumerates, filters and evaluates candidates for every (l, m) in range,
/// calling `emit` in (l, m, canonical key) order.
inline SearchStats search(const SearchConfig& cfg, const std::function<void(const CandidateRecord&)>& emit) {
    cfg.validate();
    SearchStats st;
    for (std::size_t ell = cfg.ell_min; ell <= cfg.ell_max; ++ell)
        for (std::size_t m = cfg.m_min; m <= cfg.m_max; ++m) {
            ++st.pairs;
            if (!exists_nontrivial(ell, m).exists) {
                ++st.pairs_without_good_prime;
                continue;
            }
            const SearchBranch natural = branch_of(ell, m);
            bool use_coprime;
            if (cfg.mode == SearchMode::auto_select)
                use_coprime = natural == SearchBranch::coprime;
            else
                use_coprime = cfg.mode == SearchMode::coprime;
            if (use_coprime && natural != SearchBranch::coprime) {
                ++st.pairs_outside_mode;
                continue;
            }

            std::set<CanonicalKey> seen;
            std::vector<detail::Pending> pending;
            std::size_t examined = 0;
            auto consider = [&](detail::Pending p) {
                if (cfg.max_examined && examined >= cfg.max_examined) return false;
                ++examined;
                ++st.examined;
                p.key = canonical_key(p.code);
                if (!seen.insert(p.key).second) {
                    ++st.duplicates;
                    return true;
                }
                if (p.ua) {
                    p.g = gcd(*p.ua, *p.ub, UniPoly::xn_minus_1(ell * m));
                    p.k = 2 * static_cast<std::size_t>(p.g->degree());
                } else {
                    p.k = detail::quick_k(p.code);
                }
                if (p.k == 0) {
                    ++st.k_zero;
                    return true;
                }
                ++st.k_histogram[p.k];
                if (cfg.require_k4 && p.k < 4) {
                    ++st.rejected_k_small;
                    return true;
                }
                p.connected = connected_monomial(p.code);
                if (cfg.require_connected && !p.connected) {
                    ++st.rejected_disconnected;
                    return true;
                }
                if (cfg.reject_semi_trivial && semi_trivial(p.code)) {
                    ++st.rejected_semi_trivial;
                    return true;
                }
                pending.push_back(std::move(p));
                return true;
            };
            if (use_coprime) {
                detail::coprime_candidates(ell * m, [&](const UniPoly& a, const UniPoly& b) {
                    detail::Pending p;
                    p.code = BBCode::from_univariate(ell, m, a, b);
                    p.ua = a;
                    p.ub = b;
                    return consider(std::move(p));
                });
            } else {
                detail::structured_candidates(ell, m, [&](const BBCode& c) {
                    detail::Pending p;
                    p.code = c;
                    return consider(std::move(p));
                });
            }

            // Truncate in generation order (coprime: factor by factor), emit in key order.
            if (cfg.max_candidates && pending.size() > cfg.max_candidates) pending.resize(cfg.max_candidates);
            std::sort(pending.begin(), pending.end(), [](const auto& x, const auto& y) { return x.key < y.key; });

            std::vector<std::optional<CandidateRecord>> done(pending.size());
            auto evaluate = [&](std::size_t idx) {
                const auto& p = pending[idx];
                CandidateRecord r;
                r.code = p.code;
                r.key = p.key;
                r.connected = p.connected;
                r.ua = p.ua;
                r.ub = p.ub;
                r.gcd_witness = p.g;
                CrossCheckOptions opts;
                opts.groebner = !one_sided_applicable(p.code);
                const auto cc = k_cross_check(p.code, opts);
                if (cc.k != p.k) throw InconsistencyError("search: screening k differs from cross-checked k for " + p.code.to_string());
                r.params.n = p.code.n();
                r.params.k = cc.k;
                r.params.k_method = cc.reports.front().method;
                if (!cfg.compute_distance) {
                    r.params.distance.status = DistanceStatus::not_computed;
                } else if (auto semi = semi_trivial(p.code)) {
                    r.params.distance = *semi;
                } else {
                    auto d = d_exact(p.code, cfg.exact_cap);
                    if (d.status == DistanceStatus::not_computed) {
                        RandomDistanceOptions o;
                        o.seed = detail::splitmix64(cfg.seed ^ key_hash(p.key));
                        if (cfg.min_distance > 0) {
                            o.trials = cfg.screen_trials;
                            o.stop_at = cfg.min_distance - 1;
                            if (*d_random(p.code, o).d < cfg.min_distance) return;
                            o.stop_at = 0;
                        }
                        o.trials = cfg.distance_trials;
                        d = d_random(p.code, o);
                    }
                    if (*d.d < cfg.min_distance) return;
                    r.params.distance = std::move(d);
                }
                done[idx] = std::move(r);
            };
            if (cfg.threads <= 1 || pending.size() < 2) {
                for (std::size_t i = 0; i < pending.size(); ++i) evaluate(i);
            } else {
                std::atomic<std::size_t> next{0};
                std::vector<std::thread> pool;
                std::exception_ptr failure;
                std::mutex failure_mutex;
                for (std::size_t t = 0; t < std::min(cfg.threads, pending.size()); ++t)
                    pool.emplace_back([&] {
                        for (std::size_t i; (i = next++) < pending.size();) {
                            try {
                                evaluate(i);
                            } catch (...) {
                                std::lock_guard<std::mutex> lock(failure_mutex);
                                if (!failure) failure = std::current_exception();
                            }
                        }
                    });
                for (auto& th : pool) th.join();
                if (failure) std::rethrow_exception(failure);
            }
            for (auto& r : done) {
                if (!r) {
                    ++st.rejected_distance;
                    continue;
                }
                ++st.emitted;
                emit(*r);
            }
        }
    return st;
}

inline std::vector<CandidateRecord> search(const SearchConfig& cfg, SearchStats* stats = nullptr) {
    std::vector<CandidateRecord> out;
    auto st = search(cfg, [&](const CandidateRecord& r) { out.push_back(r); });
    if (stats) *stats = std::move(st);
    return out;
}

// ---------------------------------------------------------------------------
// Known-code manifest

enum class DistancePolicy { exact, random, auto_select, skip };

inline std::string to_string(DistancePolicy p) {
    switch (p) {
        case DistancePolicy::exact:
            return "exact";
        case DistancePolicy::random:
            return "random";
        case DistancePolicy::auto_select:
            return "auto";
        case DistancePolicy::skip:
            return "skip";
    }
    return "unknown";
}

struct ManifestEntry {
    std::string name;
    std::size_t ell = 1, m = 1;
    std::string a, b;
    std::size_t expect_k = 0;
    std::optional<std::size_t> expect_d;
    DistancePolicy d_policy = DistancePolicy::auto_select;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    std::optional<std::size_t> d_tolerance;   // default: 0 for exact results, 2 for random
    std::string note;

    BBCode code() const { return parse_code(ell, m, a, b); }
};

inline std::vector<ManifestEntry> parse_manifest_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw std::invalid_argument("manifest: top level must be a JSON array");
    std::vector<ManifestEntry> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& j = doc[i];
        const std::string where = "manifest entry " + std::to_string(i);
        try {
            if (!j.is_object()) throw std::invalid_argument("not an object");
            ManifestEntry e;
            e.ell = j.at("ell").get<std::size_t>();
            e.m = j.at("m").get<std::size_t>();
            e.a = j.at("a").get<std::string>();
            e.b = j.at("b").get<std::string>();
            e.expect_k = j.at("expect_k").get<std::size_t>();
            if (j.contains("expect_d") && !j["expect_d"].is_null()) e.expect_d = j["expect_d"].get<std::size_t>();
            const std::string policy = j.value("d_policy", std::string("auto"));
            if (policy == "exact")
                e.d_policy = DistancePolicy::exact;
            else if (policy == "random")
                e.d_policy = DistancePolicy::random;
            else if (policy == "auto")
                e.d_policy = DistancePolicy::auto_select;
            else if (policy == "skip")
                e.d_policy = DistancePolicy::skip;
            else
                throw std::invalid_argument("unknown d_policy '" + policy + "'");
            e.trials = j.value("trials", e.trials);
            e.seed = j.value("seed", e.seed);
            if (j.contains("d_tolerance")) e.d_tolerance = j["d_tolerance"].get<std::size_t>();
            e.note = j.value("note", std::string());
            e.name = j.value("name", std::string());
            const BBCode c = e.code();
            if (e.name.empty()) e.name = "l=" + std::to_string(e.ell) + " m=" + std::to_string(e.m) + " n=" + std::to_string(c.n());
            out.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw std::invalid_argument(where + ": " + ex.what());
        } catch (const std::invalid_argument& ex) {
            throw std::invalid_argument(where + ": " + ex.what());
        }
    }
    return out;
}

inline std::vector<ManifestEntry> parse_manifest(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw std::invalid_argument(std::string("manifest: ") + ex.what());
    }
    return parse_manifest_json(doc);
}

inline std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str());
}

struct VerifyOptions {
    std::size_t exact_cap = kDefaultExactCap;
    std::size_t threads = 1;                     // threads inside d_random
    std::optional<std::uint64_t> trials;         // overrides every entry's budget
};

struct EntryVerdict {
    ManifestEntry entry;
    std::size_t n = 0;
    std::size_t k = 0;
    bool k_ok = false;
    DistanceResult distance;
    std::size_t tolerance = 0;
    bool d_ok = false;
    std::string message;

    bool pass() const { return k_ok && d_ok; }
};

struct VerifyReport {
    std::vector<EntryVerdict> entries;
    std::vector<std::string> warnings;

    bool all_pass() const {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass(); });
    }
};

inline EntryVerdict verify_entry(const ManifestEntry& e, const VerifyOptions& opt = {}) {
    EntryVerdict v;
    v.entry = e;
    const BBCode code = e.code();
    v.n = code.n();
    v.k = k_cross_check(code).k;
    v.k_ok = v.k == e.expect_k;
    if (!v.k_ok) v.message = "k = " + std::to_string(v.k) + ", expected " + std::to_string(e.expect_k);

    auto random = [&] {
        RandomDistanceOptions o;
        o.trials = opt.trials.value_or(e.trials);
        o.seed = e.seed;
        o.threads = opt.threads;
        return d_random(code, o);
    };
    if (e.d_policy == DistancePolicy::skip || v.k == 0) {
        v.d_ok = true;
    } else {
        if (e.d_policy == DistancePolicy::random) {
            v.distance = random();
        } else {
            v.distance = d_exact(code, opt.exact_cap);
            if (v.distance.status == DistanceStatus::not_computed && e.d_policy == DistancePolicy::auto_select)
                v.distance = random();
        }
        v.tolerance = e.d_tolerance.value_or(v.distance.status == DistanceStatus::exact ? 0 : 2);
        if (!v.distance.d) {
            v.d_ok = false;
            v.message += (v.message.empty() ? "" : "; ") + v.distance.note;
        } else if (!e.expect_d) {
            v.d_ok = true;
        } else {
            const std::size_t d = *v.distance.d, want = *e.expect_d;
            v.d_ok = (d > want ? d - want : want - d) <= v.tolerance;
            if (!v.d_ok)
                v.message += (v.message.empty() ? "" : "; ") + std::string("d = ") + std::to_string(d) + ", expected " +
                             std::to_string(want) + " +- " + std::to_string(v.tolerance);
        }
    }
    return v;
}

inline VerifyReport verify_manifest(const std::vector<ManifestEntry>& entries, const VerifyOptions& opt = {},
                                    const std::function<void(const EntryVerdict&)>& progress = {}) {
    VerifyReport rep;
    if (entries.empty()) rep.warnings.push_back("manifest has no entries");
    for (const auto& e : entries) {
        rep.entries.push_back(verify_entry(e, opt));
        if (progress) progress(rep.entries.back());
    }
    return rep;
}

inline nlohmann::json to_json(const EntryVerdict& v) {
    nlohmann::json j;
    j["name"] = v.entry.name;
    j["ell"] = v.entry.ell;
    j["m"] = v.entry.m;
    j["a"] = v.entry.a;
    j["b"] = v.entry.b;
    j["n"] = v.n;
    j["k"] = v.k;
    j["expect_k"] = v.entry.expect_k;
    j["d"] = v.distance.d ? nlohmann::json(*v.distance.d) : nlohmann::json(nullptr);
    j["expect_d"] = v.entry.expect_d ? nlohmann::json(*v.entry.expect_d) : nlohmann::json(nullptr);
    j["d_status"] = to_string(v.distance.status);
    j["d_policy"] = to_string(v.entry.d_policy);
    j["tolerance"] = v.tolerance;
    j["pass"] = v.pass();
    if (!v.message.empty()) j["message"] = v.message;
    return j;
}

}  // namespace bbcode
