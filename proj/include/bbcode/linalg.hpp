#pragma once

// Dense bit-packed GF(2) linear algebra and the BB code check matrices
// H_X = [A | B], H_Z = [B^T | A^T].

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbcode/ring.hpp"

namespace bbcode {

inline constexpr std::size_t words_for(std::size_t bits) noexcept { return (bits + 63) / 64; }

/// Fixed-length GF(2) vector.
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_(words_for(n), 0) {}

    std::size_t size() const noexcept { return n_; }
    bool get(std::size_t i) const noexcept { return (w_[i / 64] >> (i % 64)) & 1U; }
    void set(std::size_t i, bool v = true) noexcept {
        const auto mask = std::uint64_t{1} << (i % 64);
        if (v)
            w_[i / 64] |= mask;
        else
            w_[i / 64] &= ~mask;
    }
    void flip(std::size_t i) noexcept { w_[i / 64] ^= std::uint64_t{1} << (i % 64); }

    std::size_t weight() const noexcept {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool is_zero() const noexcept {
        return std::all_of(w_.begin(), w_.end(), [](auto w) { return w == 0; });
    }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < w_.size(); ++k)
            for (auto w = w_[k]; w != 0; w &= w - 1) out.push_back(64 * k + std::countr_zero(w));
        return out;
    }

    BitVec& operator^=(const BitVec& o) {
        if (o.n_ != n_) throw std::invalid_argument("BitVec: length mismatch");
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    /// Inner product over GF(2).
    bool dot(const BitVec& o) const {
        if (o.n_ != n_) throw std::invalid_argument("BitVec: length mismatch");
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
        return std::popcount(acc) & 1;
    }

    const std::vector<std::uint64_t>& words() const noexcept { return w_; }
    std::vector<std::uint64_t>& words() noexcept { return w_; }

    friend bool operator==(const BitVec&, const BitVec&) = default;

    std::string to_string() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

   private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

/// Dense row-major GF(2) matrix with 64-bit word rows.
class F2Matrix {
   public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

    static F2Matrix identity(std::size_t n) {
        F2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i);
        return m;
    }

    static F2Matrix from_rows(const std::vector<BitVec>& rows, std::size_t cols) {
        F2Matrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t stride() const noexcept { return stride_; }

    bool get(std::size_t r, std::size_t c) const noexcept { return (data_[r * stride_ + c / 64] >> (c % 64)) & 1U; }
    void set(std::size_t r, std::size_t c, bool v = true) noexcept {
        auto& w = data_[r * stride_ + c / 64];
        const auto mask = std::uint64_t{1} << (c % 64);
        w = v ? (w | mask) : (w & ~mask);
    }
    void flip(std::size_t r, std::size_t c) noexcept { data_[r * stride_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

    std::uint64_t* row_words(std::size_t r) noexcept { return data_.data() + r * stride_; }
    const std::uint64_t* row_words(std::size_t r) const noexcept { return data_.data() + r * stride_; }

    BitVec row(std::size_t r) const {
        BitVec v(cols_);
        std::copy_n(row_words(r), stride_, v.words().begin());
        return v;
    }
    void set_row(std::size_t r, const BitVec& v) {
        if (v.size() != cols_) throw std::invalid_argument("F2Matrix::set_row: length mismatch");
        std::copy_n(v.words().begin(), stride_, row_words(r));
    }

    std::size_t row_weight(std::size_t r) const noexcept {
        std::size_t c = 0;
        for (std::size_t k = 0; k < stride_; ++k) c += static_cast<std::size_t>(std::popcount(row_words(r)[k]));
        return c;
    }
    std::size_t col_weight(std::size_t c) const noexcept {
        std::size_t w = 0;
        for (std::size_t r = 0; r < rows_; ++r) w += get(r, c);
        return w;
    }

    bool is_zero() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](auto w) { return w == 0; });
    }

    F2Matrix transposed() const {
        F2Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < stride_; ++k)
                for (auto w = row_words(r)[k]; w != 0; w &= w - 1) t.set(64 * k + std::countr_zero(w), r);
        return t;
    }

    friend F2Matrix operator*(const F2Matrix& a, const F2Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("F2Matrix: dimension mismatch in product");
        F2Matrix c(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            auto* out = c.row_words(r);
            for (std::size_t k = 0; k < a.stride_; ++k)
                for (auto w = a.row_words(r)[k]; w != 0; w &= w - 1) {
                    const auto* src = b.row_words(64 * k + std::countr_zero(w));
                    for (std::size_t q = 0; q < c.stride_; ++q) out[q] ^= src[q];
                }
        }
        return c;
    }

    BitVec operator*(const BitVec& v) const {
        if (v.size() != cols_) throw std::invalid_argument("F2Matrix: dimension mismatch in product");
        BitVec out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < stride_; ++k) acc ^= row_words(r)[k] & v.words()[k];
            if (std::popcount(acc) & 1) out.set(r);
        }
        return out;
    }

    friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> data_;
};

/// [A | B]
inline F2Matrix hstack(const F2Matrix& a, const F2Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row count mismatch");
    F2Matrix m(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (a.get(r, c)) m.set(r, c);
        for (std::size_t c = 0; c < b.cols(); ++c)
            if (b.get(r, c)) m.set(r, a.cols() + c);
    }
    return m;
}

struct Echelon {
    F2Matrix reduced;                 // reduced row echelon form; first `pivots.size()` rows nonzero
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form by Gauss-Jordan elimination.
inline Echelon rref(F2Matrix m) {
    std::vector<std::size_t> pivots;
    const std::size_t stride = m.stride();
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        if (p != r) std::swap_ranges(m.row_words(p), m.row_words(p) + stride, m.row_words(r));
        const auto* pr = m.row_words(r);
        for (std::size_t o = 0; o < m.rows(); ++o) {
            if (o == r || !m.get(o, c)) continue;
            auto* orow = m.row_words(o);
            for (std::size_t k = c / 64; k < stride; ++k) orow[k] ^= pr[k];
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const F2Matrix& m) { return rref(m).pivots.size(); }

/// Basis of {v : M v = 0}, one vector per free column.
inline std::vector<BitVec> kernel_basis(const F2Matrix& m) {
    const auto e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<BitVec> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        BitVec v(m.cols());
        v.set(f);
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            if (e.reduced.get(r, f)) v.set(e.pivots[r]);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Echelon form of a row space, for repeated membership tests. Immutable
/// after construction, so concurrent queries are safe.
class RowSpace {
   public:
    explicit RowSpace(const F2Matrix& m) : cols_(m.cols()), ech_(rref(m)) {}

    std::size_t cols() const noexcept { return cols_; }
    std::size_t rank() const noexcept { return ech_.pivots.size(); }

    /// v minus its projection onto the row space along pivot columns.
    BitVec reduce(BitVec v) const {
        if (v.size() != cols_) throw std::invalid_argument("RowSpace: length mismatch");
        for (std::size_t r = 0; r < ech_.pivots.size(); ++r) {
            if (!v.get(ech_.pivots[r])) continue;
            const auto* src = ech_.reduced.row_words(r);
            for (std::size_t k = 0; k < v.words().size(); ++k) v.words()[k] ^= src[k];
        }
        return v;
    }

    bool contains(const BitVec& v) const { return reduce(v).is_zero(); }

   private:
    std::size_t cols_;
    Echelon ech_;
};

/// Membership of v in the row space of M. The echelon form of the most
/// recently queried matrix is cached and reused while M compares equal.
inline bool in_row_space(const F2Matrix& m, const BitVec& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("in_row_space: length mismatch");
    static std::mutex mu;
    static std::shared_ptr<const std::pair<F2Matrix, RowSpace>> cache;
    std::shared_ptr<const std::pair<F2Matrix, RowSpace>> entry;
    {
        std::lock_guard lock(mu);
        if (!cache || !(cache->first == m)) cache = std::make_shared<const std::pair<F2Matrix, RowSpace>>(m, RowSpace(m));
        entry = cache;
    }
    return entry->second.contains(v);
}

// ---------------------------------------------------------------------------
// BB codes.

/// The lm x lm matrix of multiplication by p: entry (r, c) is the coefficient
/// of p at the group element c - r, with r, c indexed as i*m + j.
inline F2Matrix matrix_of(const BiPoly& p) {
    const std::size_t ell = p.ell(), m = p.m(), n = ell * m;
    F2Matrix out(n, n);
    const auto terms = p.support();
    for (std::size_t i = 0; i < ell; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (auto t : terms) out.flip(i * m + j, ((i + t.i) % ell) * m + (j + t.j) % m);
    return out;
}

struct BBCode {
    std::size_t ell = 1;
    std::size_t m = 1;
    BiPoly a{1, 1};
    BiPoly b{1, 1};

    BBCode() = default;
    BBCode(BiPoly a_, BiPoly b_) : ell(a_.ell()), m(a_.m()), a(std::move(a_)), b(std::move(b_)) { a.check_same_ring(b); }

    /// {l, m, a1, a2, a3, b1, b2, b3}: a = x^a1 + y^a2 + y^a3, b = y^b1 + x^b2 + x^b3.
    static BBCode from_octet(const std::array<long, 8>& o) {
        if (o[0] < 1 || o[1] < 1) throw std::invalid_argument("octet: l and m must be positive");
        for (std::size_t k = 2; k < 8; ++k)
            if (o[k] < 0) throw std::invalid_argument("octet: exponents must be nonnegative");
        const auto ell = static_cast<std::size_t>(o[0]), m = static_cast<std::size_t>(o[1]);
        auto u = [](long v) { return static_cast<std::size_t>(v); };
        BiPoly a = BiPoly::from_terms(ell, m, {{u(o[2]), 0}, {0, u(o[3])}, {0, u(o[4])}});
        BiPoly b = BiPoly::from_terms(ell, m, {{0, u(o[5])}, {u(o[6]), 0}, {u(o[7]), 0}});
        return BBCode(std::move(a), std::move(b));
    }

    /// Univariate constructors embedded by z -> xy (requires gcd(l, m) = 1).
    static BBCode from_univariate(std::size_t ell, std::size_t m, const UniPoly& ua, const UniPoly& ub) {
        if (ell == 0 || m == 0) throw std::invalid_argument("from_univariate: l and m must be positive");
        if (std::gcd(ell, m) != 1) throw std::invalid_argument("from_univariate requires gcd(l, m) = 1");
        auto embed = [&](const UniPoly& p) {
            BiPoly r(ell, m);
            for (auto e : p.support()) r.flip(e % ell, e % m);
            return r;
        };
        return BBCode(embed(ua), embed(ub));
    }

    std::size_t n() const noexcept { return 2 * ell * m; }

    /// Each polynomial shifted so its first support term is 1.
    BBCode normalized() const { return BBCode(a.normalized(), b.normalized()); }

    bool is_trinomial_pair() const { return a.weight() == 3 && b.weight() == 3; }

    std::string to_string() const {
        return "l=" + std::to_string(ell) + " m=" + std::to_string(m) + " a=" + a.to_string() + " b=" + b.to_string();
    }

    friend bool operator==(const BBCode& p, const BBCode& q) { return p.a == q.a && p.b == q.b; }
};

struct CheckMatrices {
    F2Matrix hx;
    F2Matrix hz;
};

inline CheckMatrices build_checks(const BBCode& code) {
    const F2Matrix A = matrix_of(code.a), B = matrix_of(code.b);
    const F2Matrix At = matrix_of(transpose(code.a)), Bt = matrix_of(transpose(code.b));
    return {hstack(A, B), hstack(Bt, At)};
}

/// Incrementally grown echelon basis: each stored vector has a pivot bit
/// that is clear in every vector stored after it.
class IncrementalBasis {
   public:
    explicit IncrementalBasis(std::size_t cols) : cols_(cols) {}

    BitVec reduce(BitVec v) const {
        for (const auto& [p, b] : basis_)
            if (v.get(p)) v ^= b;
        return v;
    }

    /// Adds v if independent; returns whether it was added.
    bool insert(const BitVec& v) {
        BitVec r = reduce(v);
        if (r.is_zero()) return false;
        const auto sup = r.support();
        basis_.emplace_back(sup.front(), std::move(r));
        return true;
    }

    std::size_t rank() const noexcept { return basis_.size(); }
    std::size_t cols() const noexcept { return cols_; }

   private:
    std::size_t cols_;
    std::vector<std::pair<std::size_t, BitVec>> basis_;
};

/// Representatives of ker(h_kernel) modulo rowspace(h_image), chosen from
/// the kernel basis greedily.
inline std::vector<BitVec> quotient_representatives(const F2Matrix& h_kernel, const F2Matrix& h_image) {
    IncrementalBasis span(h_image.cols());
    for (std::size_t r = 0; r < h_image.rows(); ++r) span.insert(h_image.row(r));
    std::vector<BitVec> reps;
    for (auto& v : kernel_basis(h_kernel))
        if (span.insert(v)) reps.push_back(std::move(v));
    return reps;
}

struct LogicalBasis {
    std::vector<BitVec> x_logicals;  // ker H_Z modulo im H_X^T
    std::vector<BitVec> z_logicals;  // ker H_X modulo im H_Z^T
};

inline LogicalBasis logical_basis(const CheckMatrices& h) {
    return {quotient_representatives(h.hz, h.hx), quotient_representatives(h.hx, h.hz)};
}
inline LogicalBasis logical_basis(const BBCode& code) { return logical_basis(build_checks(code)); }

// ---------------------------------------------------------------------------
// alist

inline std::string export_alist(const F2Matrix& m) {
    std::vector<std::vector<std::size_t>> col_lists(m.cols()), row_lists(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c)) {
                col_lists[c].push_back(r + 1);
                row_lists[r].push_back(c + 1);
            }
    auto max_size = [](const auto& lists) {
        std::size_t w = 0;
        for (const auto& l : lists) w = std::max(w, l.size());
        return w;
    };
    auto join = [](const std::vector<std::size_t>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
        return s + "\n";
    };
    std::vector<std::size_t> col_w, row_w;
    for (const auto& l : col_lists) col_w.push_back(l.size());
    for (const auto& l : row_lists) row_w.push_back(l.size());

    std::string out = std::to_string(m.cols()) + " " + std::to_string(m.rows()) + "\n";
    out += std::to_string(max_size(col_lists)) + " " + std::to_string(max_size(row_lists)) + "\n";
    out += join(col_w);
    out += join(row_w);
    for (const auto& l : col_lists) out += join(l);
    for (const auto& l : row_lists) out += join(l);
    return out;
}

/// Parses the format written by export_alist. Zero entries used as padding
/// by some tools are ignored.
inline F2Matrix parse_alist(const std::string& text) {
    std::istringstream in(text);
    std::size_t cols = 0, rows = 0, max_c = 0, max_r = 0;
    if (!(in >> cols >> rows >> max_c >> max_r)) throw std::invalid_argument("alist: bad header");
    std::vector<std::size_t> col_w(cols), row_w(rows);
    for (auto& w : col_w)
        if (!(in >> w)) throw std::invalid_argument("alist: bad column weights");
    for (auto& w : row_w)
        if (!(in >> w)) throw std::invalid_argument("alist: bad row weights");
    F2Matrix m(rows, cols);
    std::string line;
    std::getline(in, line);
    for (std::size_t c = 0; c < cols; ++c) {
        if (!std::getline(in, line)) throw std::invalid_argument("alist: missing column list");
        std::istringstream ls(line);
        std::size_t r = 0, count = 0;
        while (ls >> r) {
            if (r == 0) continue;
            if (r > rows || m.get(r - 1, c)) throw std::invalid_argument("alist: bad row index in column list");
            m.set(r - 1, c);
            ++count;
        }
        if (count != col_w[c]) throw std::invalid_argument("alist: column weight mismatch");
    }
    for (std::size_t r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) throw std::invalid_argument("alist: missing row list");
        std::istringstream ls(line);
        std::size_t c = 0, count = 0;
        std::vector<bool> seen(cols, false);
        while (ls >> c) {
            if (c == 0) continue;
            if (c > cols || !m.get(r, c - 1) || seen[c - 1])
                throw std::invalid_argument("alist: row list disagrees with column lists");
            seen[c - 1] = true;
            ++count;
        }
        if (count != row_w[r]) throw std::invalid_argument("alist: row weight mismatch");
    }
    return m;
}

}  // namespace bbcode
