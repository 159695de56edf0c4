// Projective geometry PG(N, q): canonical subspaces, span/meet/duality,
// counting, and deterministic enumeration with parallel scan support.
//
// A d-dimensional subspace is represented by the unique reduced row echelon
// basis of its underlying rank-(d+1) row space; equality is bytewise.  The
// serial enumeration order of all d-subspaces is row-major lexicographic on
// that canonical matrix, which makes "first witness" statements exact and
// reproducible; parallel scans return the same witness for any worker count.
#pragma once

#include "linalg.hpp"

#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

namespace hpforge {

// --- counting ---------------------------------------------------------------

// Gaussian binomial [n k]_q via the q-Pascal recurrence (exact integers).
// Throws if the value does not fit in 64 bits.
inline std::uint64_t gaussian_binomial(int n, int k, std::uint64_t q) {
    if (n < 0 || k < 0 || k > n) throw ArgumentOutOfRange("gaussian_binomial: need 0 <= k <= n");
    using u128 = unsigned __int128;
    const u128 lim = ~u128{0} >> 64;  // 2^64 - 1
    std::vector<u128> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i) {
        u128 qp = 1;  // q^j
        std::vector<u128> next(row.size(), 0);
        next[0] = 1;
        for (int j = 1; j <= i; ++j) {
            qp *= q;
            const u128 v = row[j - 1] + (j <= i - 1 ? qp * row[j] : 0);
            if (v > lim || (j <= i - 1 && row[j] != 0 && qp * row[j] / qp != row[j]))
                throw ArgumentOutOfRange("gaussian_binomial overflows 64 bits");
            next[j] = v;
        }
        row = std::move(next);
    }
    return static_cast<std::uint64_t>(row[k]);
}

// --- spaces and subspaces ---------------------------------------------------

struct ProjSpace {
    int n = 0;       // projective dimension N
    FieldPtr field;  // GF(q)

    ProjSpace() = default;
    ProjSpace(int N, FieldPtr f) : n(N), field(std::move(f)) {
        if (n < 0) throw DimensionOutOfRange("projective dimension must be >= 0");
    }

    int vdim() const { return n + 1; }
    std::uint64_t q() const { return field->order(); }
    std::uint64_t point_count() const { return gaussian_binomial(vdim(), 1, q()); }
    std::uint64_t subspace_count(int d) const { return gaussian_binomial(vdim(), d + 1, q()); }

    friend bool operator==(const ProjSpace& a, const ProjSpace& b) {
        return a.n == b.n && (a.field.get() == b.field.get() || a.field->same_structure(*b.field));
    }
    friend bool operator!=(const ProjSpace& a, const ProjSpace& b) { return !(a == b); }
};

inline void require_same_space(const ProjSpace& a, const ProjSpace& b) {
    if (a != b) throw SpaceMismatch("operands live in different projective spaces");
}

class Subspace {
  public:
    Subspace() = default;

    // Canonicalizes arbitrary spanning rows (they need not be independent).
    static Subspace from_rows(const ProjSpace& sp, Mat rows) {
        if (rows.rows > 0 && rows.cols != sp.vdim())
            throw DimensionOutOfRange("row length does not match the space");
        rows.cols = sp.vdim();
        rref(rows, *sp.field);
        return Subspace(sp, std::move(rows));
    }

    // Trusts that `rows` is already a clean RREF (internal fast path).
    static Subspace from_canonical(const ProjSpace& sp, Mat rows) {
        return Subspace(sp, std::move(rows));
    }

    static Subspace empty(const ProjSpace& sp) { return Subspace(sp, Mat(0, sp.vdim())); }

    static Subspace whole(const ProjSpace& sp) {
        Mat m(sp.vdim(), sp.vdim());
        for (int i = 0; i < sp.vdim(); ++i) m.at(i, i) = 1;
        return Subspace(sp, std::move(m));
    }

    static Subspace point(const ProjSpace& sp, const std::vector<felem>& coords) {
        Mat m(1, sp.vdim());
        if (static_cast<int>(coords.size()) != sp.vdim())
            throw DimensionOutOfRange("point coordinate length mismatch");
        bool zero = true;
        for (int j = 0; j < sp.vdim(); ++j) {
            m.at(0, j) = coords[j];
            zero = zero && coords[j] == 0;
        }
        if (zero) throw ArgumentOutOfRange("the zero vector names no projective point");
        return from_rows(sp, std::move(m));
    }

    const ProjSpace& space() const { return sp_; }
    const Mat& basis() const { return b_; }
    int rank() const { return b_.rows; }       // vector-space dimension
    int dim() const { return b_.rows - 1; }    // projective dimension; -1 = empty
    bool is_empty() const { return b_.rows == 0; }

    std::uint64_t point_count() const {
        return rank() == 0 ? 0 : gaussian_binomial(rank(), 1, sp_.q());
    }

    bool contains_row(const felem* v) const {
        const Field& F = *sp_.field;
        std::vector<felem> t(v, v + b_.cols);
        int c = 0;
        for (int i = 0; i < b_.rows; ++i) {
            while (b_.at(i, c) == 0) ++c;  // pivot column of row i
            const felem f = t[c];
            if (f != 0)
                for (int j = c; j < b_.cols; ++j) t[j] = F.sub(t[j], F.mul(f, b_.at(i, j)));
            ++c;
        }
        for (felem x : t)
            if (x != 0) return false;
        return true;
    }

    bool contains(const Subspace& s) const {
        require_same_space(sp_, s.sp_);
        for (int i = 0; i < s.b_.rows; ++i)
            if (!contains_row(s.b_.row(i))) return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.sp_ == b.sp_ && a.b_ == b.b_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

    // Deterministic ordering: by rank, then row-major lex on the basis.
    friend bool operator<(const Subspace& a, const Subspace& b) {
        if (a.b_.rows != b.b_.rows) return a.b_.rows < b.b_.rows;
        return mat_lex_less(a.b_, b.b_);
    }

  private:
    Subspace(const ProjSpace& sp, Mat b) : sp_(sp), b_(std::move(b)) {}

    ProjSpace sp_;
    Mat b_;
};

// --- span / dual / meet -----------------------------------------------------

inline Subspace span(const ProjSpace& sp, const std::vector<const Subspace*>& parts) {
    Mat m(0, sp.vdim());
    for (const Subspace* p : parts) {
        require_same_space(sp, p->space());
        m.a.insert(m.a.end(), p->basis().a.begin(), p->basis().a.end());
        m.rows += p->basis().rows;
    }
    rref(m, *sp.field);
    return Subspace::from_canonical(sp, std::move(m));
}

inline Subspace span(const Subspace& a, const Subspace& b) {
    return span(a.space(), {&a, &b});
}

// Orthogonal complement under the standard bilinear form sum x_i y_i.
inline Subspace dual(const Subspace& s) {
    Mat d;
    nullspace_into(d, s.basis(), *s.space().field);
    return Subspace::from_canonical(s.space(), std::move(d));
}

// Intersection via the annihilator: meet(a,b) = dual(span(dual a, dual b)).
inline Subspace meet(const Subspace& a, const Subspace& b) {
    require_same_space(a.space(), b.space());
    const Field& F = *a.space().field;
    Mat da, db, s, m;
    nullspace_into(da, a.basis(), F);
    nullspace_into(db, b.basis(), F);
    stack_into(s, da, db);
    rref(s, F);
    nullspace_into(m, s, F);
    return Subspace::from_canonical(a.space(), std::move(m));
}

// Projective dimension of the intersection without forming it:
// dim(a meet b) = rank a + rank b - rank[a;b] - 1.
inline int meet_dim(const Subspace& a, const Subspace& b) {
    require_same_space(a.space(), b.space());
    Mat s;
    stack_into(s, a.basis(), b.basis());
    const int r = rank_destructive(s, *a.space().field, std::min(s.rows, s.cols));
    return a.rank() + b.rank() - r - 1;
}

inline bool meets(const Subspace& a, const Subspace& b) { return meet_dim(a, b) >= 0; }

// --- enumeration ------------------------------------------------------------

// All d-subspaces, grouped by pivot-column pattern.  Within one pattern the
// free entries form an odometer whose ascending counter order coincides with
// row-major lex order of the matrices; the global lex order is the merge of
// the per-pattern streams.
struct PivotPattern {
    std::vector<int> cols;                      // pivot columns, ascending
    std::vector<std::pair<int, int>> free_pos;  // free cells in row-major order
    std::uint64_t count = 1;                    // q^(#free)
};

inline std::vector<PivotPattern> pivot_patterns(int vdim, int r, std::uint64_t q) {
    std::vector<PivotPattern> out;
    std::vector<int> c(r);
    for (int i = 0; i < r; ++i) c[i] = i;
    for (;;) {
        PivotPattern p;
        p.cols = c;
        std::vector<bool> is_piv(vdim, false);
        for (int x : c) is_piv[x] = true;
        for (int i = 0; i < r; ++i)
            for (int j = c[i] + 1; j < vdim; ++j)
                if (!is_piv[j]) p.free_pos.emplace_back(i, j);
        for (std::size_t i = 0; i < p.free_pos.size(); ++i) p.count *= q;
        out.push_back(std::move(p));
        // next r-combination of [0, vdim) in lex order
        int i = r - 1;
        while (i >= 0 && c[i] == vdim - r + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

// Cursor over one pattern's matrices in ascending (= lex) counter order.
class PatternCursor {
  public:
    PatternCursor(const PivotPattern& p, int vdim, std::uint64_t q) : p_(&p), q_(q) {
        m_.resize(static_cast<int>(p.cols.size()), vdim);
        for (std::size_t i = 0; i < p.cols.size(); ++i) m_.at(static_cast<int>(i), p.cols[i]) = 1;
        digits_.assign(p.free_pos.size(), 0);
    }

    // Position the cursor at `counter` (0-based within the pattern).
    void seek(std::uint64_t counter) {
        pos_ = counter;
        std::uint64_t v = counter;
        for (std::size_t i = digits_.size(); i-- > 0;) {
            const felem d = static_cast<felem>(v % q_);
            v /= q_;
            digits_[i] = d;
            m_.at(p_->free_pos[i].first, p_->free_pos[i].second) = d;
        }
    }

    // Advance to the next matrix; returns false past the end.
    bool advance() {
        ++pos_;
        if (pos_ >= p_->count) return false;
        for (std::size_t i = digits_.size(); i-- > 0;) {
            if (++digits_[i] < q_) {
                m_.at(p_->free_pos[i].first, p_->free_pos[i].second) = digits_[i];
                return true;
            }
            digits_[i] = 0;
            m_.at(p_->free_pos[i].first, p_->free_pos[i].second) = 0;
        }
        return false;  // unreachable while pos_ < count
    }

    const Mat& current() const { return m_; }
    std::uint64_t position() const { return pos_; }

  private:
    const PivotPattern* p_;
    std::uint64_t q_;
    Mat m_;
    std::vector<felem> digits_;
    std::uint64_t pos_ = 0;
};

// Serial stream of all d-subspaces in global row-major-lex order (k-way
// merge of the per-pattern cursors).
class SubspaceStream {
  public:
    SubspaceStream(const ProjSpace& sp, int d) : sp_(sp) {
        if (d < -1 || d > sp.n) throw DimensionOutOfRange("subspace dimension out of range");
        if (d == -1) { empty_pending_ = true; return; }
        patterns_ = pivot_patterns(sp.vdim(), d + 1, sp.q());
        for (const PivotPattern& p : patterns_) {
            cursors_.emplace_back(p, sp.vdim(), sp.q());
            cursors_.back().seek(0);
            alive_.push_back(true);
        }
    }

    std::uint64_t total() const {
        if (empty_pending_) return 1;
        std::uint64_t t = 0;
        for (const PivotPattern& p : patterns_) t += p.count;
        return t;
    }

    // Copies the next matrix into `out`; returns false at the end.
    bool next(Mat& out) {
        if (empty_pending_) {
            empty_pending_ = false;
            out.resize(0, sp_.vdim());
            return true;
        }
        int best = -1;
        for (std::size_t i = 0; i < cursors_.size(); ++i) {
            if (!alive_[i]) continue;
            if (best < 0 || mat_lex_less(cursors_[i].current(), cursors_[best].current()))
                best = static_cast<int>(i);
        }
        if (best < 0) return false;
        out = cursors_[best].current();
        if (!cursors_[best].advance()) alive_[best] = false;
        return true;
    }

  private:
    ProjSpace sp_;
    std::vector<PivotPattern> patterns_;
    std::vector<PatternCursor> cursors_;
    std::vector<bool> alive_;
    bool empty_pending_ = false;
};

// Number of d-subspace matrices that precede `m` in global lex order.
// This is what a serial scan would have examined before reaching m.
inline std::uint64_t lex_rank(const ProjSpace& sp, const std::vector<PivotPattern>& pats,
                              const Mat& m) {
    const std::uint64_t q = sp.q();
    std::uint64_t rank = 0;
    for (const PivotPattern& p : pats) {
        // Count pattern-p matrices lex-smaller than m by walking cells
        // row-major; fixed cells either decide or tie, free cells branch.
        std::uint64_t below = 0;
        bool tied = true;
        std::size_t fi = 0;
        Mat probe(static_cast<int>(p.cols.size()), sp.vdim());
        for (std::size_t i = 0; i < p.cols.size(); ++i) probe.at(static_cast<int>(i), p.cols[i]) = 1;
        std::vector<std::uint64_t> suffix(p.free_pos.size() + 1, 1);
        for (std::size_t i = p.free_pos.size(); i-- > 0;) suffix[i] = suffix[i + 1] * q;
        for (int r = 0; r < probe.rows && tied; ++r) {
            for (int c = 0; c < probe.cols && tied; ++c) {
                const bool is_free =
                    fi < p.free_pos.size() && p.free_pos[fi] == std::make_pair(r, c);
                const felem mv = m.at(r, c);
                if (is_free) {
                    below += std::uint64_t(mv) * suffix[fi + 1];
                    ++fi;
                } else {
                    const felem fv = probe.at(r, c);
                    if (fv != mv) {
                        if (fv < mv) below += suffix[fi];  // all completions smaller
                        tied = false;
                    }
                }
            }
        }
        rank += below;
    }
    return rank;
}

// --- parallel scan ----------------------------------------------------------

// Finds the lex-first d-subspace for which `hit` returns true, or reports
// none.  `hit` is called with the canonical matrix (valid only during the
// call) and a worker index for thread-local scratch.  The result (witness
// and serial-equivalent scan count) is identical for every worker count.
struct ScanOutcome {
    std::optional<Mat> witness;
    std::uint64_t scanned = 0;  // matrices a serial early-exit scan examines
    std::uint64_t total = 0;
};

inline ScanOutcome scan_subspaces(const ProjSpace& sp, int d, int workers,
                                  const std::function<bool(const Mat&, int)>& hit) {
    if (d < 0 || d > sp.n) throw DimensionOutOfRange("subspace dimension out of range");
    const std::uint64_t q = sp.q();
    std::vector<PivotPattern> pats = pivot_patterns(sp.vdim(), d + 1, q);

    ScanOutcome out;
    for (const PivotPattern& p : pats) out.total += p.count;

    struct Chunk {
        int pattern;
        std::uint64_t begin, end;
    };
    std::vector<Chunk> chunks;
    {
        const int w = std::max(1, workers);
        const std::uint64_t target = std::max<std::uint64_t>(1024, out.total / (8 * w) + 1);
        for (std::size_t pi = 0; pi < pats.size(); ++pi)
            for (std::uint64_t b = 0; b < pats[pi].count; b += target)
                chunks.push_back({static_cast<int>(pi), b, std::min(b + target, pats[pi].count)});
    }

    std::mutex best_mu;
    std::optional<Mat> best;
    std::atomic<std::size_t> next_chunk{0};

    auto worker_fn = [&](int wid) {
        Mat local_best;
        for (;;) {
            const std::size_t ci = next_chunk.fetch_add(1);
            if (ci >= chunks.size()) break;
            const Chunk& ch = chunks[ci];
            PatternCursor cur(pats[ch.pattern], sp.vdim(), q);
            cur.seek(ch.begin);
            {
                std::lock_guard<std::mutex> lock(best_mu);
                if (best && !mat_lex_less(cur.current(), *best)) continue;
            }
            for (std::uint64_t i = ch.begin; i < ch.end; ++i, cur.advance()) {
                if (hit(cur.current(), wid)) {
                    // First hit in a chunk is the chunk's lex-min hit.
                    std::lock_guard<std::mutex> lock(best_mu);
                    if (!best || mat_lex_less(cur.current(), *best)) best = cur.current();
                    break;
                }
            }
        }
    };

    const int w = std::max(1, workers);
    if (w == 1) {
        worker_fn(0);
    } else {
        std::vector<std::thread> ts;
        for (int i = 0; i < w; ++i) ts.emplace_back(worker_fn, i);
        for (std::thread& t : ts) t.join();
    }

    if (best) {
        out.witness = std::move(*best);
        out.scanned = lex_rank(sp, pats, *out.witness) + 1;
    } else {
        out.scanned = out.total;
    }
    return out;
}

// --- streams relative to a fixed subspace -----------------------------------

// Visits the points of `s` in ascending global lex order.  fn receives the
// canonical 1x(N+1) coordinate row; returning false stops the walk.
inline void for_each_point_of(const Subspace& s, const std::function<bool(const felem*)>& fn) {
    const Field& F = *s.space().field;
    const std::uint64_t q = s.space().q();
    const Mat& B = s.basis();
    const int r = B.rows, n = B.cols;
    std::vector<felem> v(n);
    std::vector<felem> digits;
    for (int lead = r - 1; lead >= 0; --lead) {
        // combos with first nonzero coefficient 1 at `lead`; the resulting
        // rows are canonical and ascend in lex order as the digit odometer
        // (over rows lead+1..r-1) counts up.
        digits.assign(static_cast<std::size_t>(r - 1 - lead), 0);
        for (;;) {
            std::copy(B.row(lead), B.row(lead) + n, v.begin());
            for (std::size_t t = 0; t < digits.size(); ++t) {
                const felem d = digits[t];
                if (d == 0) continue;
                const felem* src = B.row(lead + 1 + static_cast<int>(t));
                for (int j = 0; j < n; ++j) v[j] = F.add(v[j], F.mul(d, src[j]));
            }
            if (!fn(v.data())) return;
            std::size_t i = digits.size();
            while (i > 0 && ++digits[i - 1] == q) digits[--i] = 0;
            if (i == 0) break;
        }
    }
}

inline std::vector<Subspace> points_of(const Subspace& s) {
    std::vector<Subspace> out;
    out.reserve(s.point_count());
    for_each_point_of(s, [&](const felem* v) {
        Mat m(1, s.basis().cols);
        std::copy(v, v + s.basis().cols, m.a.begin());
        out.push_back(Subspace::from_canonical(s.space(), std::move(m)));
        return true;
    });
    return out;
}

inline std::vector<Subspace> all_points(const ProjSpace& sp) {
    return points_of(Subspace::whole(sp));
}

// d-subspaces contained in `ambient`, in ambient-coordinate lex order
// (which maps to big-space lex order restricted to the ambient).
inline void for_each_within(const Subspace& ambient, int d,
                            const std::function<bool(const Subspace&)>& fn) {
    const ProjSpace& sp = ambient.space();
    const Field& F = *sp.field;
    const int rA = ambient.rank();
    if (d + 1 > rA) return;
    if (d == -1) { fn(Subspace::empty(sp)); return; }
    ProjSpace small(rA - 1, sp.field);
    SubspaceStream st(small, d);
    Mat w, big;
    while (st.next(w)) {
        big.resize(w.rows, sp.vdim());
        for (int i = 0; i < w.rows; ++i)
            for (int t = 0; t < rA; ++t) {
                const felem c = w.at(i, t);
                if (c == 0) continue;
                const felem* src = ambient.basis().row(t);
                for (int j = 0; j < sp.vdim(); ++j)
                    big.at(i, j) = F.add(big.at(i, j), F.mul(c, src[j]));
            }
        // The image of a canonical small matrix is canonical.
        if (!fn(Subspace::from_canonical(sp, big))) return;
    }
}

inline std::vector<Subspace> subspaces_within(const Subspace& ambient, int d) {
    std::vector<Subspace> out;
    for_each_within(ambient, d, [&](const Subspace& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

// d-subspaces containing `base`, via the complement spanned by the unit
// vectors at base's non-pivot columns (a deterministic transversal of the
// quotient).  Order is the small-space lex order of the complement parts.
inline void for_each_through(const Subspace& base, int d,
                             const std::function<bool(const Subspace&)>& fn) {
    const ProjSpace& sp = base.space();
    const Field& F = *sp.field;
    const int r0 = base.rank(), n = sp.vdim();
    if (d + 1 < r0 || d > sp.n) return;
    if (d + 1 == r0) { fn(base); return; }
    std::vector<int> comp;  // non-pivot columns
    {
        std::vector<bool> is_piv(n, false);
        int c = 0;
        for (int i = 0; i < r0; ++i) {
            while (base.basis().at(i, c) == 0) ++c;
            is_piv[c++] = true;
        }
        for (int j = 0; j < n; ++j)
            if (!is_piv[j]) comp.push_back(j);
    }
    ProjSpace small(static_cast<int>(comp.size()) - 1, sp.field);
    SubspaceStream st(small, d - r0);  // (d - r0)-spaces of the quotient
    Mat w, big;
    while (st.next(w)) {
        big.resize(w.rows + r0, n);
        std::copy(base.basis().a.begin(), base.basis().a.end(), big.a.begin());
        for (int i = 0; i < w.rows; ++i)
            for (std::size_t t = 0; t < comp.size(); ++t)
                big.at(r0 + i, comp[t]) = w.at(i, static_cast<int>(t));
        rref(big, F);
        if (!fn(Subspace::from_canonical(sp, std::move(big)))) return;
        big = Mat();
    }
}

inline std::vector<Subspace> subspaces_through(const Subspace& base, int d) {
    std::vector<Subspace> out;
    for_each_through(base, d, [&](const Subspace& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

// All d-subspaces of the space, materialized in lex order.
inline std::vector<Subspace> all_subspaces(const ProjSpace& sp, int d) {
    std::vector<Subspace> out;
    SubspaceStream st(sp, d);
    out.reserve(st.total());
    Mat m;
    while (st.next(m)) out.push_back(Subspace::from_canonical(sp, m));
    return out;
}

// --- random subspaces -------------------------------------------------------

// Uniform d-subspace: draw uniform (d+1)x(N+1) matrices until full rank,
// then canonicalize.  Every subspace has the same number |GL(d+1,q)| of
// full-rank preimages, so the result is exactly uniform.
inline Subspace random_subspace(const ProjSpace& sp, int d, Rng& rng) {
    if (d < 0 || d > sp.n) throw DimensionOutOfRange("subspace dimension out of range");
    const int r = d + 1, n = sp.vdim();
    Mat m(r, n);
    for (;;) {
        for (felem& x : m.a) x = static_cast<felem>(rng.below(sp.q()));
        Mat t = m;
        if (rank_destructive(t, *sp.field, r) == r) break;
    }
    rref(m, *sp.field);
    return Subspace::from_canonical(sp, std::move(m));
}

}  // namespace hpforge
