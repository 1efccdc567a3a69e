#pragma once

// Dense linear algebra over F2 with bit-packed rows.
// Rank, kernel bases and solving are recomputed on demand; nothing is cached.

#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace kur {

// A vector over F2, packed 64 entries per word.
class F2Vec {
public:
    F2Vec() = default;
    explicit F2Vec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }

    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v)
    {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v)
            w_[i >> 6] |= m;
        else
            w_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    void operator^=(const F2Vec& o)
    {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i)
            w_[i] ^= o.w_[i];
    }

    bool is_zero() const
    {
        for (uint64_t x : w_)
            if (x)
                return false;
        return true;
    }

    // Index of the lowest set bit, or size() when zero.
    std::size_t lowest() const
    {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i])
                return (i << 6) + std::size_t(__builtin_ctzll(w_[i]));
        return n_;
    }

    bool operator==(const F2Vec& o) const { return n_ == o.n_ && w_ == o.w_; }

private:
    std::size_t n_ = 0;
    std::vector<uint64_t> w_;
};

// Rectangular matrix over F2, stored by rows.
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), r_(rows, F2Vec(cols)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return r_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v) { r_[r].set(c, v); }
    void flip(std::size_t r, std::size_t c) { r_[r].flip(c); }

    const F2Vec& row(std::size_t r) const { return r_[r]; }
    F2Vec& row(std::size_t r) { return r_[r]; }

    // y = m * x  (x indexed by columns, y by rows)
    F2Vec apply(const F2Vec& x) const
    {
        assert(x.size() == cols_);
        F2Vec y(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            bool s = false;
            for (std::size_t c = 0; c < cols_; ++c)
                if (r_[r].get(c) && x.get(c))
                    s = !s;
            y.set(r, s);
        }
        return y;
    }

    F2Matrix times(const F2Matrix& o) const
    {
        assert(cols_ == o.rows_);
        F2Matrix out(rows_, o.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k)
                if (r_[r].get(k))
                    out.r_[r] ^= o.r_[k];
        return out;
    }

    F2Matrix transposed() const
    {
        F2Matrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (r_[r].get(c))
                    out.set(c, r, true);
        return out;
    }

    bool is_zero() const
    {
        for (const auto& r : r_)
            if (!r.is_zero())
                return false;
        return true;
    }

    bool operator==(const F2Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && r_ == o.r_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<F2Vec> r_;
};

// Row echelon form with deterministic lowest-index pivots.
// Returns pivot column of each nonzero row, in increasing order.
inline std::vector<std::size_t> row_reduce(F2Matrix& m)
{
    std::vector<std::size_t> pivots;
    std::size_t next_row = 0;
    for (std::size_t c = 0; c < m.cols() && next_row < m.rows(); ++c) {
        std::size_t p = next_row;
        while (p < m.rows() && !m.get(p, c))
            ++p;
        if (p == m.rows())
            continue;
        std::swap(m.row(p), m.row(next_row));
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != next_row && m.get(r, c))
                m.row(r) ^= m.row(next_row);
        pivots.push_back(c);
        ++next_row;
    }
    return pivots;
}

inline std::size_t rank(const F2Matrix& m)
{
    F2Matrix w = m;
    return row_reduce(w).size();
}

// Basis of { x : m x = 0 }, one vector per free column, deterministic.
inline std::vector<F2Vec> kernel_basis(const F2Matrix& m)
{
    F2Matrix w = m;
    std::vector<std::size_t> piv = row_reduce(w);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : piv)
        is_pivot[c] = true;

    std::vector<F2Vec> basis;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c])
            continue;
        F2Vec v(m.cols());
        v.set(c, true);
        for (std::size_t r = 0; r < piv.size(); ++r)
            if (w.get(r, c))
                v.set(piv[r], true);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Some x with m x = b, if any.
inline std::optional<F2Vec> solve(const F2Matrix& m, const F2Vec& b)
{
    if (b.size() != m.rows())
        throw std::invalid_argument("solve: right-hand side length mismatch");
    // Augment and reduce.
    F2Matrix w(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        w.row(r) = F2Vec(m.cols() + 1);
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c))
                w.set(r, c, true);
        if (b.get(r))
            w.set(r, m.cols(), true);
    }
    std::vector<std::size_t> piv;
    std::size_t next_row = 0;
    for (std::size_t c = 0; c < m.cols() && next_row < m.rows(); ++c) {
        std::size_t p = next_row;
        while (p < m.rows() && !w.get(p, c))
            ++p;
        if (p == m.rows())
            continue;
        std::swap(w.row(p), w.row(next_row));
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != next_row && w.get(r, c))
                w.row(r) ^= w.row(next_row);
        piv.push_back(c);
        ++next_row;
    }
    for (std::size_t r = next_row; r < m.rows(); ++r)
        if (w.get(r, m.cols()))
            return std::nullopt;
    for (std::size_t r = 0; r < next_row; ++r) {
        // A row whose pivot landed in the augmented column is inconsistent.
        bool only_b = w.get(r, m.cols());
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (w.get(r, c))
                only_b = false;
        if (only_b)
            return std::nullopt;
    }
    F2Vec x(m.cols());
    for (std::size_t r = 0; r < piv.size(); ++r)
        if (w.get(r, m.cols()))
            x.set(piv[r], true);
    return x;
}

// Inverse of a square invertible matrix; nullopt when singular.
inline std::optional<F2Matrix> inverse(const F2Matrix& m)
{
    assert(m.rows() == m.cols());
    std::size_t n = m.rows();
    F2Matrix w(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            if (m.get(r, c))
                w.set(r, c, true);
        w.set(r, n + r, true);
    }
    auto piv = row_reduce(w);
    if (piv.size() != n || piv.back() != n - 1)
        return std::nullopt;
    F2Matrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (w.get(r, n + c))
                inv.set(r, c, true);
    return inv;
}

// Incremental span with reduction, for residue/quotient computations.
class F2Span {
public:
    explicit F2Span(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return rows_.size(); }

    // Reduce v against the span; returns the residue.
    F2Vec residue(F2Vec v) const
    {
        for (const auto& r : rows_) {
            std::size_t p = r.lowest();
            if (p < dim_ && v.get(p))
                v ^= r;
        }
        return v;
    }

    // Add v to the span; returns true if it enlarged the span.
    bool add(F2Vec v)
    {
        v = residue(std::move(v));
        if (v.is_zero())
            return false;
        rows_.push_back(std::move(v));
        // Keep rows sorted by pivot so residue() is a clean sweep.
        for (std::size_t i = rows_.size(); i > 1 && rows_[i - 1].lowest() < rows_[i - 2].lowest(); --i)
            std::swap(rows_[i - 1], rows_[i - 2]);
        return true;
    }

    bool contains(const F2Vec& v) const { return residue(v).is_zero(); }

private:
    std::size_t dim_;
    std::vector<F2Vec> rows_;
};

}  // namespace kur
