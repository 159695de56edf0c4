// Dense row-major matrices of field-element indices and the elimination
// routines everything else leans on.  Hot paths reuse caller-owned buffers;
// nothing here allocates unless a matrix actually grows.
#pragma once

#include "fields.hpp"

#include <vector>

namespace hpforge {

struct Mat {
    int rows = 0, cols = 0;
    std::vector<felem> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

    felem& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    felem at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
    const felem* row(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }
    felem* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }

    void resize(int r, int c) {
        rows = r;
        cols = c;
        a.assign(static_cast<std::size_t>(r) * c, 0);
    }

    friend bool operator==(const Mat& x, const Mat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

// Row-major lexicographic compare; matrices must have equal shape.
inline int mat_lex_compare(const Mat& x, const Mat& y) {
    for (std::size_t i = 0; i < x.a.size(); ++i)
        if (x.a[i] != y.a[i]) return x.a[i] < y.a[i] ? -1 : 1;
    return 0;
}

inline bool mat_lex_less(const Mat& x, const Mat& y) { return mat_lex_compare(x, y) < 0; }

// In-place reduced row echelon form.  Pivot entries become 1 with zeros
// above and below; zero rows are dropped.  Returns the rank.
inline int rref(Mat& m, const Field& F) {
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        const felem s = F.inv(m.at(r, c));
        if (s != 1)
            for (int j = c; j < m.cols; ++j) m.at(r, j) = F.mul(s, m.at(r, j));
        for (int i = 0; i < m.rows; ++i) {
            if (i == r) continue;
            const felem f = m.at(i, c);
            if (f == 0) continue;
            m.at(i, c) = 0;
            for (int j = c + 1; j < m.cols; ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
        }
        ++r;
    }
    m.rows = r;
    m.a.resize(static_cast<std::size_t>(r) * m.cols);
    return r;
}

// Rank by forward elimination, destroying m.  Stops early once `cap` is
// reached (pass cap = min(rows, cols) for the plain rank).
inline int rank_destructive(Mat& m, const Field& F, int cap) {
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows && r < cap; ++c) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = c; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        const felem inv = F.inv(m.at(r, c));
        for (int i = r + 1; i < m.rows; ++i) {
            const felem f = m.at(i, c);
            if (f == 0) continue;
            const felem s = F.mul(f, inv);
            m.at(i, c) = 0;
            for (int j = c + 1; j < m.cols; ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(s, m.at(r, j)));
        }
        ++r;
    }
    return r;
}

inline int rank_of(const Mat& m, const Field& F) {
    Mat t = m;
    return rank_destructive(t, F, std::min(m.rows, m.cols));
}

// dst = rows of x stacked over rows of y (equal column counts).
inline void stack_into(Mat& dst, const Mat& x, const Mat& y) {
    dst.rows = x.rows + y.rows;
    dst.cols = x.cols;
    dst.a.resize(static_cast<std::size_t>(dst.rows) * dst.cols);
    std::copy(x.a.begin(), x.a.end(), dst.a.begin());
    std::copy(y.a.begin(), y.a.end(), dst.a.begin() + x.a.size());
}

// Canonical basis of {v : m v^T = 0} for m already in RREF.
inline void nullspace_into(Mat& dst, const Mat& m, const Field& F) {
    const int n = m.cols;
    std::vector<int> pivot_of(n, -1);
    {
        int c = 0;
        for (int i = 0; i < m.rows; ++i) {
            while (c < n && m.at(i, c) == 0) ++c;
            if (c == n) break;  // only possible if m was not a clean RREF
            pivot_of[c] = i;
            ++c;
        }
    }
    dst.resize(n - m.rows, n);
    int k = 0;
    for (int f = 0; f < n; ++f) {
        if (pivot_of[f] >= 0) continue;
        felem* v = dst.row(k++);
        v[f] = 1;
        for (int c = 0; c < f; ++c)
            if (pivot_of[c] >= 0) v[c] = F.neg(m.at(pivot_of[c], f));
    }
    rref(dst, F);
}

// Echelon accumulator for rank-building one row at a time.  Rows are kept
// pivot-normalized with distinct pivot columns; no back-elimination, since
// only the rank is needed.
struct EchelonAcc {
    Mat rows;                 // up to cols rows
    std::vector<int> pivots;  // pivot column per stored row

    void reset(int cols) {
        rows.resize(0, cols);
        pivots.clear();
    }

    int rank() const { return rows.rows; }

    // Returns true if the row increased the rank.
    bool insert(const felem* src, const Field& F) {
        scratch_.assign(src, src + rows.cols);
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            const felem f = scratch_[pivots[i]];
            if (f == 0) continue;
            const felem* base = rows.row(static_cast<int>(i));
            for (int j = pivots[i]; j < rows.cols; ++j)
                scratch_[j] = F.sub(scratch_[j], F.mul(f, base[j]));
        }
        int p = -1;
        for (int j = 0; j < rows.cols; ++j)
            if (scratch_[j] != 0) { p = j; break; }
        if (p < 0) return false;
        const felem s = F.inv(scratch_[p]);
        if (s != 1)
            for (int j = p; j < rows.cols; ++j) scratch_[j] = F.mul(s, scratch_[j]);
        rows.a.insert(rows.a.end(), scratch_.begin(), scratch_.end());
        ++rows.rows;
        pivots.push_back(p);
        return true;
    }

  private:
    std::vector<felem> scratch_;
};

}  // namespace hpforge
