#pragma once

// Minimum distance of BB codes: semi-trivial shortcuts, exhaustive Gray-code
// enumeration, randomized information-set search, the generalized
// Bravyi-Terhal bound, and the surface-code qubit comparison.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bbcode/linalg.hpp"

namespace bbcode {

enum class DistanceStatus { exact, upper_bound, semi_trivial_2, semi_trivial_4, not_computed };

inline std::string to_string(DistanceStatus s) {
    switch (s) {
        case DistanceStatus::exact:
            return "exact";
        case DistanceStatus::upper_bound:
            return "upper_bound";
        case DistanceStatus::semi_trivial_2:
            return "semi_trivial_2";
        case DistanceStatus::semi_trivial_4:
            return "semi_trivial_4";
        case DistanceStatus::not_computed:
            return "not_computed";
    }
    return "unknown";
}

struct DistanceResult {
    std::optional<std::size_t> d;
    DistanceStatus status = DistanceStatus::not_computed;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    BitVec witness;         // a logical operator of weight d, when d is present
    char witness_type = 0;  // 'X' or 'Z'
    std::string note;
};

/// Equal constructors give d = 2, a squared constructor gives d = 4. Only
/// meaningful for codes with k > 0.
inline std::optional<DistanceResult> semi_trivial(const BBCode& code) {
    DistanceResult r;
    if (equivalent(code.a, code.b)) {
        r.d = 2;
        r.status = DistanceStatus::semi_trivial_2;
        return r;
    }
    if (equivalent(code.a * code.a, code.b) || equivalent(code.b * code.b, code.a)) {
        r.d = 4;
        r.status = DistanceStatus::semi_trivial_4;
        return r;
    }
    return std::nullopt;
}

namespace detail {

/// Kernel basis of one check matrix, each row augmented with its inner
/// products against the opposite logical representatives. A combination is
/// a nontrivial logical iff its augmented tail is nonzero.
struct DistanceSide {
    char type = 'Z';
    std::size_t n = 0;       // code length
    std::size_t k = 0;       // number of logical bits in the tail
    std::size_t stride = 0;  // words per augmented row
    std::vector<std::uint64_t> rows;
    std::size_t count = 0;  // kernel dimension

    const std::uint64_t* row(std::size_t r) const noexcept { return rows.data() + r * stride; }

    std::size_t weight(const std::uint64_t* v) const noexcept {
        std::size_t w = 0;
        const std::size_t full = n / 64;
        for (std::size_t q = 0; q < full; ++q) w += static_cast<std::size_t>(std::popcount(v[q]));
        if (n % 64) w += static_cast<std::size_t>(std::popcount(v[full] & ((std::uint64_t{1} << (n % 64)) - 1)));
        return w;
    }

    bool nontrivial(const std::uint64_t* v) const noexcept {
        for (std::size_t b = n; b < n + k;) {
            const std::size_t q = b / 64, off = b % 64;
            const std::size_t take = std::min<std::size_t>(64 - off, n + k - b);
            const std::uint64_t mask = take == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << take) - 1) << off;
            if (v[q] & mask) return true;
            b += take;
        }
        return false;
    }

    BitVec code_part(const std::uint64_t* v) const {
        BitVec out(n);
        for (std::size_t i = 0; i < n; ++i)
            if ((v[i / 64] >> (i % 64)) & 1U) out.set(i);
        return out;
    }
};

inline DistanceSide make_side(char type, const F2Matrix& h_kernel, const std::vector<BitVec>& opposite_logicals) {
    DistanceSide s;
    s.type = type;
    s.n = h_kernel.cols();
    s.k = opposite_logicals.size();
    s.stride = words_for(s.n + s.k);
    const auto basis = kernel_basis(h_kernel);
    s.count = basis.size();
    s.rows.assign(s.count * s.stride, 0);
    for (std::size_t r = 0; r < s.count; ++r) {
        auto* dst = s.rows.data() + r * s.stride;
        std::copy(basis[r].words().begin(), basis[r].words().end(), dst);
        for (std::size_t t = 0; t < s.k; ++t)
            if (basis[r].dot(opposite_logicals[t])) dst[(s.n + t) / 64] |= std::uint64_t{1} << ((s.n + t) % 64);
    }
    return s;
}

struct DistanceProblem {
    std::size_t k = 0;
    DistanceSide z_side;  // ker H_X, tested against X logicals
    DistanceSide x_side;  // ker H_Z, tested against Z logicals
};

inline DistanceProblem prepare(const BBCode& code) {
    const auto h = build_checks(code);
    const auto L = logical_basis(h);
    DistanceProblem p;
    p.k = L.x_logicals.size();
    p.z_side = make_side('Z', h.hx, L.x_logicals);
    p.x_side = make_side('X', h.hz, L.z_logicals);
    return p;
}

struct Best {
    std::size_t weight = std::numeric_limits<std::size_t>::max();
    BitVec witness;
    char type = 0;

    void offer(const DistanceSide& s, const std::uint64_t* v, std::size_t w) {
        if (w < weight) {
            weight = w;
            witness = s.code_part(v);
            type = s.type;
        }
    }
    void merge(const Best& o) {
        if (o.weight < weight) *this = o;
    }
};

/// Minimum weight over all nontrivial combinations, in Gray-code order.
inline Best exhaust_side(const DistanceSide& s) {
    Best best;
    std::vector<std::uint64_t> cur(s.stride, 0);
    const std::uint64_t total = std::uint64_t{1} << s.count;
    for (std::uint64_t step = 1; step < total; ++step) {
        const auto* r = s.row(static_cast<std::size_t>(std::countr_zero(step)));
        for (std::size_t q = 0; q < s.stride; ++q) cur[q] ^= r[q];
        if (!s.nontrivial(cur.data())) continue;
        const std::size_t w = s.weight(cur.data());
        if (w < best.weight) best.offer(s, cur.data(), w);
    }
    return best;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Small self-contained generator so that results do not depend on the
/// standard library's distribution implementations.
class TrialRng {
   public:
    explicit TrialRng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() { return state_ = splitmix64(state_); }
    /// Uniform in [0, bound) by multiply-shift.
    std::size_t below(std::size_t bound) {
        return static_cast<std::size_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

   private:
    std::uint64_t state_;
};

inline std::uint64_t trial_seed(std::uint64_t seed, char side, std::uint64_t trial) {
    return splitmix64(splitmix64(seed ^ (side == 'X' ? 0x58ULL << 56 : 0x5aULL << 56)) ^ trial);
}

struct RandomParams {
    std::size_t depth = 3;
    std::size_t window = 40;
    std::size_t stop_at = 0;
};

/// One information-set trial: eliminate on a random column order, then scan
/// single rows and small combinations of the first `window` rows.
inline void random_trial(const DistanceSide& s, TrialRng& rng, const RandomParams& p, std::vector<std::uint64_t>& work,
                         std::vector<std::size_t>& perm, Best& best) {
    const std::size_t K = s.count, W = s.stride;
    work.assign(s.rows.begin(), s.rows.end());
    perm.resize(s.n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = s.n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);

    std::size_t r = 0;
    for (std::size_t ci = 0; ci < s.n && r < K; ++ci) {
        const std::size_t c = perm[ci], q = c / 64;
        const std::uint64_t bit = std::uint64_t{1} << (c % 64);
        std::size_t piv = r;
        while (piv < K && !(work[piv * W + q] & bit)) ++piv;
        if (piv == K) continue;
        if (piv != r) std::swap_ranges(work.begin() + static_cast<long>(piv * W), work.begin() + static_cast<long>((piv + 1) * W),
                                       work.begin() + static_cast<long>(r * W));
        const std::uint64_t* pr = work.data() + r * W;
        for (std::size_t o = 0; o < K; ++o) {
            if (o == r) continue;
            std::uint64_t* orow = work.data() + o * W;
            if (!(orow[q] & bit)) continue;
            for (std::size_t w = 0; w < W; ++w) orow[w] ^= pr[w];
        }
        ++r;
    }

    for (std::size_t i = 0; i < K; ++i) {
        const std::uint64_t* v = work.data() + i * W;
        if (!s.nontrivial(v)) continue;
        const std::size_t w = s.weight(v);
        if (w < best.weight) best.offer(s, v, w);
    }
    const std::size_t win = std::min(p.window, K);
    if (p.depth < 2 || win < 2) return;
    std::vector<std::uint64_t> pair(W), triple(W);
    for (std::size_t i = 0; i < win; ++i) {
        const std::uint64_t* vi = work.data() + i * W;
        for (std::size_t j = i + 1; j < win; ++j) {
            const std::uint64_t* vj = work.data() + j * W;
            for (std::size_t w = 0; w < W; ++w) pair[w] = vi[w] ^ vj[w];
            if (s.nontrivial(pair.data())) {
                const std::size_t w = s.weight(pair.data());
                if (w < best.weight) best.offer(s, pair.data(), w);
            }
            if (p.depth < 3) continue;
            for (std::size_t l = j + 1; l < win; ++l) {
                const std::uint64_t* vl = work.data() + l * W;
                for (std::size_t w = 0; w < W; ++w) triple[w] = pair[w] ^ vl[w];
                if (!s.nontrivial(triple.data())) continue;
                const std::size_t w = s.weight(triple.data());
                if (w < best.weight) best.offer(s, triple.data(), w);
            }
        }
    }
}

inline Best random_side(const DistanceSide& s, std::uint64_t trials, std::uint64_t seed, const RandomParams& p,
                        std::size_t threads) {
    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        Best best;
        std::vector<std::uint64_t> work;
        std::vector<std::size_t> perm;
        for (std::uint64_t t = begin; t < end; ++t) {
            TrialRng rng(trial_seed(seed, s.type, t));
            random_trial(s, rng, p, work, perm, best);
            if (p.stop_at && best.weight <= p.stop_at) break;
        }
        return best;
    };
    if (threads <= 1 || trials < 2 * threads) return run_range(0, trials);
    // Contiguous chunks merged in order reproduce the sequential result.
    std::vector<Best> partial(threads);
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) {
        const std::uint64_t b = trials * i / threads, e = trials * (i + 1) / threads;
        pool.emplace_back([&, i, b, e] { partial[i] = run_range(b, e); });
    }
    for (auto& th : pool) th.join();
    Best best;
    for (const auto& b : partial) best.merge(b);
    return best;
}

inline DistanceResult to_result(const Best& best, DistanceStatus status) {
    DistanceResult r;
    r.status = status;
    if (best.weight != std::numeric_limits<std::size_t>::max()) {
        r.d = best.weight;
        r.witness = best.witness;
        r.witness_type = best.type;
    }
    return r;
}

}  // namespace detail

inline constexpr std::size_t kDefaultExactCap = 26;

/// Exhaustive minimum distance. Returns status not_computed when either
/// kernel is larger than the cap.
inline DistanceResult d_exact(const BBCode& code, std::size_t kernel_dim_cap = kDefaultExactCap) {
    if (kernel_dim_cap > 40) throw std::invalid_argument("d_exact: cap above 40 is not supported");
    const auto prob = detail::prepare(code);
    if (prob.k == 0) throw std::domain_error("d_exact: code has k = 0, no logical operators exist");
    if (prob.z_side.count > kernel_dim_cap || prob.x_side.count > kernel_dim_cap) {
        DistanceResult r;
        r.status = DistanceStatus::not_computed;
        r.note = "kernel dimension " + std::to_string(std::max(prob.z_side.count, prob.x_side.count)) + " exceeds cap " +
                 std::to_string(kernel_dim_cap) + "; use d_random";
        return r;
    }
    auto best = detail::exhaust_side(prob.z_side);
    best.merge(detail::exhaust_side(prob.x_side));
    return detail::to_result(best, DistanceStatus::exact);
}

struct RandomDistanceOptions {
    std::uint64_t trials = 10'000;
    std::uint64_t seed = 0;
    std::size_t depth = 3;        // largest row combination scanned
    std::size_t window = 40;      // combinations use only the first `window` echelon rows
    std::size_t threads = 1;
    std::size_t stop_at = 0;      // stop a side early once d <= stop_at (0: never)
};

/// Randomized upper bound on d; deterministic for a given seed and option set
/// (including thread count when stop_at is 0).
inline DistanceResult d_random(const BBCode& code, const RandomDistanceOptions& opt = {}) {
    if (opt.depth < 1 || opt.depth > 3) throw std::invalid_argument("d_random: depth must be 1, 2 or 3");
    const auto prob = detail::prepare(code);
    if (prob.k == 0) throw std::domain_error("d_random: code has k = 0, no logical operators exist");
    const detail::RandomParams p{opt.depth, opt.window, opt.stop_at};
    auto best = detail::random_side(prob.z_side, opt.trials, opt.seed, p, opt.threads);
    if (!(opt.stop_at && best.weight <= opt.stop_at))
        best.merge(detail::random_side(prob.x_side, opt.trials, opt.seed, p, opt.threads));
    auto r = detail::to_result(best, DistanceStatus::upper_bound);
    r.trials = opt.trials;
    r.seed = opt.seed;
    return r;
}

inline DistanceResult d_random(const BBCode& code, std::uint64_t trials, std::uint64_t seed) {
    RandomDistanceOptions opt;
    opt.trials = trials;
    opt.seed = seed;
    return d_random(code, opt);
}

/// True iff v is a nontrivial logical operator of the given type.
inline bool is_logical(const BBCode& code, const BitVec& v, char type) {
    const auto h = build_checks(code);
    const F2Matrix& same = type == 'Z' ? h.hx : h.hz;
    const F2Matrix& other = type == 'Z' ? h.hz : h.hx;
    return (same * v).is_zero() && !RowSpace(other).contains(v);
}

// ---------------------------------------------------------------------------

struct BoundReport {
    int D = 0;
    double bound = 0;
    bool applicable = false;
};

/// Hermite constant gamma_D for D = 1..8.
inline double hermite_constant(int D) {
    switch (D) {
        case 1:
            return 1.0;
        case 2:
            return 2.0 / std::sqrt(3.0);
        case 3:
            return std::cbrt(2.0);
        case 4:
            return std::sqrt(2.0);
        case 5:
            return std::pow(8.0, 1.0 / 5.0);
        case 6:
            return std::pow(64.0 / 3.0, 1.0 / 6.0);
        case 7:
            return std::pow(64.0, 1.0 / 7.0);
        case 8:
            return 2.0;
    }
    throw std::domain_error("hermite_constant: only known for D = 1..8");
}

/// d <= 2 sqrt(gamma_D) (sqrt(D) + 4) n^(1 - 1/D), valid when n^(1/D) >= 8 sqrt(gamma_D).
inline BoundReport bt_bound(std::size_t n, int delta = 6) {
    if (delta < 3) throw std::invalid_argument("bt_bound: stabiliser weight must be at least 3");
    BoundReport r;
    r.D = delta - 2;
    const double g = hermite_constant(r.D), D = r.D, nn = static_cast<double>(n);
    r.bound = 2.0 * std::sqrt(g) * (std::sqrt(D) + 4.0) * std::pow(nn, 1.0 - 1.0 / D);
    r.applicable = std::pow(nn, 1.0 / D) >= 8.0 * std::sqrt(g);
    return r;
}

/// Qubits used by k rotated surface-code patches of distance d: k (d - 1)^2.
inline std::size_t surface_code_equivalent(std::size_t k_bb, std::size_t d_bb) {
    if (d_bb < 2) throw std::invalid_argument("surface_code_equivalent: d must be at least 2");
    return k_bb * (d_bb - 1) * (d_bb - 1);
}

}  // namespace bbcode
