#pragma once

// Linear codes attached to point sets of PG(N,q): minimality testing via
// codeword supports, exact covering radii via syndrome BFS, saturating-set
// checks, the subfield-embedding dictionary between strong blocking sets and
// saturating sets, and a closed-form bounds table.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hpforge/construct.hpp"

namespace hpforge {

// --- linear codes ------------------------------------------------------------

struct LinearCode {
    FieldPtr field;
    Mat gen;     // k x n, full row rank (k may be 0)
    Mat parity;  // r x n, full row rank (r may be 0)

    int length() const { return gen.cols > 0 ? gen.cols : parity.cols; }
    int dim() const { return gen.rows; }
    int redundancy() const { return parity.rows; }
};

namespace detail {

inline Mat rref_copy(const Mat& m, const Field& F) {
    Mat t = m;
    rref(t, F);
    return t;
}

inline void require_entries(const Mat& m, const Field& F, const char* what) {
    for (felem x : m.a)
        if (static_cast<std::uint64_t>(x) >= F.order())
            throw ArgumentOutOfRange(std::string(what) + ": entry is not a field element index");
}

inline std::uint64_t checked_pow(std::uint64_t base, int e, std::uint64_t cap,
                                 const char* what) {
    std::uint64_t t = 1;
    for (int i = 0; i < e; ++i) {
        t *= base;
        if (t > cap) throw BudgetExceeded(std::string(what) + ": budget exceeded");
    }
    return t;
}

}  // namespace detail

// Builds the code generated by the rows of gen; the parity-check matrix is the
// canonical basis of the dual code, so gen * parity^T = 0 by construction.
inline LinearCode code_from_generator(const FieldPtr& field, Mat gen) {
    if (gen.rows == 0 || gen.cols == 0)
        throw ArgumentOutOfRange("code_from_generator: generator must be nonempty");
    detail::require_entries(gen, *field, "code_from_generator");
    Mat r = detail::rref_copy(gen, *field);
    if (r.rows != gen.rows)
        throw ArgumentOutOfRange("code_from_generator: generator rows are linearly dependent");
    LinearCode c;
    c.field = field;
    c.gen = std::move(gen);
    nullspace_into(c.parity, r, *field);
    return c;
}

// Builds the code whose parity-check matrix is parity; the generator is the
// canonical basis of the right kernel (k = 0 is allowed).
inline LinearCode code_from_parity(const FieldPtr& field, Mat parity) {
    if (parity.rows == 0 || parity.cols == 0)
        throw ArgumentOutOfRange("code_from_parity: parity matrix must be nonempty");
    detail::require_entries(parity, *field, "code_from_parity");
    Mat r = detail::rref_copy(parity, *field);
    if (r.rows != parity.rows)
        throw ArgumentOutOfRange("code_from_parity: parity rows are linearly dependent");
    LinearCode c;
    c.field = field;
    c.parity = std::move(parity);
    nullspace_into(c.gen, r, *field);
    if (c.gen.rows == 0) c.gen = Mat(0, c.parity.cols);
    return c;
}

namespace detail {

inline Mat points_as_columns(const ProjSpace& sp, const std::vector<Subspace>& points) {
    Mat g(sp.vdim(), static_cast<int>(points.size()));
    for (std::size_t j = 0; j < points.size(); ++j) {
        require_same_space(sp, points[j].space());
        if (points[j].dim() != 0)
            throw DimensionOutOfRange("expected a list of points");
        for (int i = 0; i < sp.vdim(); ++i)
            g.at(i, static_cast<int>(j)) = points[j].basis().at(0, i);
    }
    return g;
}

}  // namespace detail

// Columns are the canonical normalized coordinates of the points, in input
// order; the points must span the whole space, so k = N+1.
inline LinearCode code_from_points(const ProjSpace& sp, const std::vector<Subspace>& points) {
    if (points.empty()) throw NotSpanning("code_from_points: empty point set");
    Mat g = detail::points_as_columns(sp, points);
    if (rank_of(g, *sp.field) != sp.vdim())
        throw NotSpanning("code_from_points: points do not span the space");
    return code_from_generator(sp.field, std::move(g));
}

inline LinearCode code_from_points(const ProjSpace& sp,
                                   const std::vector<std::vector<felem>>& rows) {
    std::vector<Subspace> pts;
    pts.reserve(rows.size());
    for (const std::vector<felem>& r : rows) pts.push_back(Subspace::point(sp, r));
    return code_from_points(sp, pts);
}

// Same column layout, but the points define the parity-check side: the code
// whose syndromes live on the given point set (covering-code view).
inline LinearCode covering_code_from_points(const ProjSpace& sp,
                                            const std::vector<Subspace>& points) {
    if (points.empty()) throw NotSpanning("covering_code_from_points: empty point set");
    Mat h = detail::points_as_columns(sp, points);
    if (rank_of(h, *sp.field) != sp.vdim())
        throw NotSpanning("covering_code_from_points: points do not span the space");
    return code_from_parity(sp.field, std::move(h));
}

inline bool is_nondegenerate(const LinearCode& c) {
    for (int j = 0; j < c.gen.cols; ++j) {
        bool zero = true;
        for (int i = 0; i < c.gen.rows && zero; ++i) zero = c.gen.at(i, j) == 0;
        if (zero) return false;
    }
    return c.gen.rows > 0;
}

// --- minimality --------------------------------------------------------------

struct MinimalityReport {
    bool minimal = true;
    // Dominating pair: support(first) is contained in support(second), and the
    // two codewords are not proportional.
    std::optional<std::pair<std::vector<felem>, std::vector<felem>>> witness;
    std::uint64_t classes = 0;       // projective codeword classes enumerated
    std::uint64_t pairs_tested = 0;  // unordered class pairs compared
};

// Brute-force minimality: one representative per projective codeword class,
// supports as 64-bit masks, pairwise containment scan.
inline MinimalityReport is_minimal_code(const LinearCode& code) {
    const Field& F = *code.field;
    const int k = code.gen.rows, n = code.gen.cols;
    if (k == 0) throw ArgumentOutOfRange("is_minimal_code: zero-dimensional code");
    if (n > 64) throw BudgetExceeded("is_minimal_code: length above 64 is unsupported");
    detail::checked_pow(F.order(), k, std::uint64_t{1} << 24, "is_minimal_code");

    ProjSpace msp(k - 1, code.field);
    std::vector<std::uint64_t> masks;
    std::vector<std::vector<felem>> words;
    for_each_point_of(Subspace::whole(msp), [&](const felem* u) {
        std::vector<felem> w(static_cast<std::size_t>(n), 0);
        std::uint64_t mask = 0;
        for (int j = 0; j < n; ++j) {
            felem s = 0;
            for (int i = 0; i < k; ++i) s = F.add(s, F.mul(u[i], code.gen.at(i, j)));
            w[static_cast<std::size_t>(j)] = s;
            if (s != 0) mask |= std::uint64_t{1} << j;
        }
        masks.push_back(mask);
        words.push_back(std::move(w));
        return true;
    });

    MinimalityReport rep;
    rep.classes = masks.size();
    for (std::size_t i = 0; i < masks.size() && rep.minimal; ++i)
        for (std::size_t j = i + 1; j < masks.size(); ++j) {
            ++rep.pairs_tested;
            if ((masks[i] & ~masks[j]) == 0) {
                rep.minimal = false;
                rep.witness = {words[i], words[j]};
                break;
            }
            if ((masks[j] & ~masks[i]) == 0) {
                rep.minimal = false;
                rep.witness = {words[j], words[i]};
                break;
            }
        }
    return rep;
}

// --- covering radius ---------------------------------------------------------

struct CoveringRadiusReport {
    int radius = 0;
    std::uint64_t syndromes = 0;             // states visited; always q^r
    std::vector<std::uint64_t> layer_sizes;  // syndromes first reached per weight
};

// Exact covering radius by breadth-first search over the syndrome space:
// start from the zero syndrome and expand by adding nonzero scalar multiples
// of parity-check columns; the radius is the largest coset-leader weight.
inline CoveringRadiusReport covering_radius_detail(const LinearCode& code) {
    const Field& F = *code.field;
    const std::uint64_t q = F.order();
    CoveringRadiusReport rep;
    if (code.parity.rows == 0) {
        rep.syndromes = 1;
        rep.layer_sizes = {1};
        return rep;
    }
    Mat h = detail::rref_copy(code.parity, F);
    const int r = h.rows, n = h.cols;
    const std::uint64_t total =
        detail::checked_pow(q, r, std::uint64_t{1} << 24, "covering_radius");

    std::vector<std::uint64_t> pw(static_cast<std::size_t>(r));
    pw[0] = 1;
    for (int i = 1; i < r; ++i) pw[static_cast<std::size_t>(i)] = pw[i - 1] * q;

    // Per (column, nonzero scalar): the packed syndrome of scalar*column and
    // its digit vector.  In characteristic 2 the canonical element indices add
    // by XOR, so packed syndromes add by XOR as well.
    const bool xor_add = F.characteristic() == 2;
    const int edges = n * static_cast<int>(q - 1);
    std::vector<std::uint32_t> delta(static_cast<std::size_t>(edges));
    std::vector<felem> digits(static_cast<std::size_t>(edges) * r);
    {
        int e = 0;
        for (int j = 0; j < n; ++j)
            for (std::uint64_t a = 1; a < q; ++a, ++e) {
                std::uint64_t packed = 0;
                for (int i = 0; i < r; ++i) {
                    const felem d = F.mul(static_cast<felem>(a), h.at(i, j));
                    digits[static_cast<std::size_t>(e) * r + i] = d;
                    packed += d * pw[static_cast<std::size_t>(i)];
                }
                delta[static_cast<std::size_t>(e)] = static_cast<std::uint32_t>(packed);
            }
    }

    std::vector<std::int8_t> dist(total, -1);
    std::vector<std::uint32_t> frontier{0}, next;
    dist[0] = 0;
    rep.layer_sizes.push_back(1);
    std::uint64_t seen = 1;
    std::int8_t depth = 0;
    std::vector<felem> sd(static_cast<std::size_t>(r));
    while (!frontier.empty() && seen < total) {
        next.clear();
        ++depth;
        for (std::uint32_t s : frontier) {
            if (xor_add) {
                for (int e = 0; e < edges; ++e) {
                    const std::uint32_t t = s ^ delta[static_cast<std::size_t>(e)];
                    if (dist[t] < 0) {
                        dist[t] = depth;
                        next.push_back(t);
                    }
                }
            } else {
                std::uint64_t rest = s;
                for (int i = 0; i < r; ++i) {
                    sd[static_cast<std::size_t>(i)] = static_cast<felem>(rest % q);
                    rest /= q;
                }
                for (int e = 0; e < edges; ++e) {
                    std::uint64_t t = 0;
                    const felem* dg = &digits[static_cast<std::size_t>(e) * r];
                    for (int i = 0; i < r; ++i)
                        t += F.add(sd[static_cast<std::size_t>(i)], dg[i]) *
                             pw[static_cast<std::size_t>(i)];
                    const std::uint32_t ti = static_cast<std::uint32_t>(t);
                    if (dist[ti] < 0) {
                        dist[ti] = depth;
                        next.push_back(ti);
                    }
                }
            }
        }
        if (!next.empty()) {
            rep.layer_sizes.push_back(next.size());
            seen += next.size();
        }
        frontier.swap(next);
    }
    if (seen != total)
        throw Error("covering_radius: syndrome space not exhausted despite full-rank parity");
    rep.syndromes = seen;
    rep.radius = static_cast<int>(rep.layer_sizes.size()) - 1;
    return rep;
}

inline int covering_radius(const LinearCode& code) {
    return covering_radius_detail(code).radius;
}

// --- saturating sets ---------------------------------------------------------

struct SaturationReport {
    bool saturated = false;
    int rho = -1;  // the value tested (or, from least_saturating_rho, attained)
    std::optional<Subspace> unsaturated;  // witness point when not saturated
    std::uint64_t subsets_examined = 0;
    std::uint64_t points_total = 0;
};

// A point is rho-saturated when some subspace through it of dimension at most
// rho is spanned by points of S.  Marks the spans of all independent subsets
// of S of size at most rho+1; dependent subsets span the same subspaces as
// their independent subsets and are skipped.
inline SaturationReport is_saturating(const ProjSpace& sp, const std::vector<Subspace>& pts,
                                      int rho) {
    if (rho < 0 || rho > sp.n) throw ArgumentOutOfRange("is_saturating: rho out of range");
    for (const Subspace& p : pts) {
        require_same_space(sp, p.space());
        if (p.dim() != 0) throw DimensionOutOfRange("is_saturating: expected points");
    }
    const std::uint64_t total = sp.point_count();
    if (total > (std::uint64_t{1} << 24))
        throw BudgetExceeded("is_saturating: ambient point count above 2^24");
    const int m = static_cast<int>(pts.size());
    {
        std::uint64_t subsets = 0, c = 1;
        for (int t = 1; t <= rho + 1 && t <= m; ++t) {
            c = c * static_cast<std::uint64_t>(m - t + 1) / static_cast<std::uint64_t>(t);
            subsets += c;
            if (subsets > (std::uint64_t{1} << 24))
                throw BudgetExceeded("is_saturating: subset count above 2^24");
        }
    }

    std::vector<std::vector<felem>> all;
    all.reserve(total);
    for_each_point_of(Subspace::whole(sp), [&](const felem* v) {
        all.emplace_back(v, v + sp.vdim());
        return true;
    });

    SaturationReport rep;
    rep.rho = rho;
    rep.points_total = total;
    std::vector<char> mark(total, 0);
    std::uint64_t marked = 0;
    std::vector<felem> probe(static_cast<std::size_t>(sp.vdim()));
    const auto mark_span = [&](const Subspace& span) {
        for_each_point_of(span, [&](const felem* v) {
            std::copy(v, v + sp.vdim(), probe.begin());
            const auto it = std::lower_bound(all.begin(), all.end(), probe);
            const std::size_t idx = static_cast<std::size_t>(it - all.begin());
            if (!mark[idx]) {
                mark[idx] = 1;
                ++marked;
            }
            return true;
        });
    };

    Mat stacked;
    for (int t = 1; t <= rho + 1 && t <= m && marked < total; ++t) {
        std::vector<int> idx(static_cast<std::size_t>(t));
        for (int i = 0; i < t; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
            stacked.resize(t, sp.vdim());
            for (int i = 0; i < t; ++i)
                std::copy(pts[static_cast<std::size_t>(idx[i])].basis().row(0),
                          pts[static_cast<std::size_t>(idx[i])].basis().row(0) + sp.vdim(),
                          stacked.row(i));
            ++rep.subsets_examined;
            if (rank_of(stacked, *sp.field) == t)
                mark_span(Subspace::from_rows(sp, stacked));
            if (marked == total) break;
            int i = t - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - t + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < t; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }

    rep.saturated = marked == total;
    if (!rep.saturated) {
        for (std::uint64_t i = 0; i < total; ++i)
            if (!mark[i]) {
                rep.unsaturated = Subspace::point(sp, all[i]);
                break;
            }
    }
    return rep;
}

// The least rho for which the set saturates (the defining "least integer"
// clause); returns the failing report at the cap when none works.
inline SaturationReport least_saturating_rho(const ProjSpace& sp,
                                             const std::vector<Subspace>& pts,
                                             int rho_cap = -1) {
    const int cap = rho_cap < 0 ? sp.n : rho_cap;
    SaturationReport last;
    for (int rho = 0; rho <= cap; ++rho) {
        last = is_saturating(sp, pts, rho);
        if (last.saturated) return last;
    }
    return last;
}

// --- blocking -> saturating dictionary ---------------------------------------

struct EmbedCheck {
    ProjSpace ambient;              // PG(N, q^{N-k+1})
    std::vector<Subspace> points;   // the set, coordinates reinterpreted verbatim
    SaturationReport report;        // saturation at rho = N-k
};

// The union of a certified family of k-subspaces of PG(N,q), viewed verbatim
// in PG(N, q^{N-k+1}) through the index-preserving subfield embedding, is an
// (N-k)-saturating set of the ambient space.
inline EmbedCheck embed_and_check(const ProjSpace& sp, const std::vector<Subspace>& pts,
                                  int k) {
    if (k < 0 || k > sp.n - 1)
        throw ArgumentOutOfRange("embed_and_check: need 0 <= k <= N-1");
    const int s = sp.n - k + 1;
    std::uint64_t order = 1;
    for (int i = 0; i < s; ++i) {
        order *= sp.q();
        if (order > (std::uint64_t{1} << 16))
            throw BudgetExceeded("embed_and_check: ambient field above 2^16");
    }
    std::vector<unsigned> tower = sp.field->tower_degrees();
    tower.push_back(static_cast<unsigned>(s));
    FieldPtr big = cached_field(sp.field->characteristic(), tower);

    EmbedCheck out;
    out.ambient = ProjSpace(sp.n, big);
    out.points.reserve(pts.size());
    for (const Subspace& p : pts) {
        require_same_space(sp, p.space());
        if (p.dim() != 0) throw DimensionOutOfRange("embed_and_check: expected points");
        Mat row(1, sp.vdim());
        std::copy(p.basis().row(0), p.basis().row(0) + sp.vdim(), row.row(0));
        out.points.push_back(Subspace::from_rows(out.ambient, std::move(row)));
    }
    out.report = is_saturating(out.ambient, out.points, sp.n - k);
    return out;
}

inline EmbedCheck embed_and_check(const Arrangement& arr) {
    std::vector<Subspace> pts;
    for (const std::vector<felem>& row : coverage(arr).points)
        pts.push_back(Subspace::point(arr.space, row));
    return embed_and_check(arr.space, pts, arr.k);
}

// --- bounds table ------------------------------------------------------------

struct BoundRow {
    std::string quantity;    // e.g. "m(5,q)"
    std::string relation;    // "<=", ">=", "="
    std::int64_t value = 0;
    std::string source;
    std::string attachment;  // verified artifact summary, when requested
};

struct BoundsTable {
    std::uint64_t q = 0;
    std::vector<BoundRow> rows;
};

// Closed-form size bounds at a given q: minimal-code lengths m(5,q), the
// saturating-set numbers s_{q^s}(N,rho), the covering-code length function,
// and resolving-set sizes for point-hyperplane incidence graphs.  With
// attach=true the desk-scale artifacts are rebuilt and their verified data
// recorded next to the corresponding rows.
inline BoundsTable bounds_report(std::uint64_t q, bool attach = false, int workers = 0) {
    if (q < 2) throw ArgumentOutOfRange("bounds_report: q must be at least 2");
    const std::int64_t Q = static_cast<std::int64_t>(q);
    BoundsTable t;
    t.q = q;

    t.rows.push_back({"m(5,q)", "<=", 6 * Q + 5, "six lines of PG(4,q)", ""});
    {
        std::int64_t prior = 8 * Q - 3;
        if (q >= 7) prior = std::min(prior, 7 * Q + 7);
        if (q > 36086 && q % 2 != 0 && q % 3 != 0) prior = std::min(prior, 6 * Q + 6);
        t.rows.push_back({"m(5,q)", "<=", prior, "previous records", ""});
    }
    t.rows.push_back(
        {"m(5,q)", ">=", 4 * Q + 4 + (q >= 9 ? 1 : 0), "counting lower bound", ""});
    if (q == 2) t.rows.push_back({"m(5,2)", "=", 13, "known exact value", ""});
    if (q == 3) t.rows.push_back({"m(5,3)", "<=", 20, "known record", ""});

    t.rows.push_back({"s_{q^4}(4,3)", "<=", 6 * Q + 5, "six lines, embedded", ""});
    t.rows.push_back({"s_{q^3}(4,2)", "<=",
                      q <= 5 ? 6 * Q * Q + 5 * Q + 1 : 6 * Q * Q + 5 * Q - 9,
                      "six planes of PG(4,q), embedded", ""});
    t.rows.push_back({"s_{q^4}(5,3)", "<=", 8 * Q * Q + 8 * Q + 8,
                      "eight planes of PG(5,q), embedded", ""});
    if (q >= 7)
        t.rows.push_back({"s_{q^3}(5,2)", "<=", 7 * Q * Q * Q + 7 * Q * Q - 14 * Q - 14,
                          "seven solids of PG(5,q), embedded", ""});
    t.rows.push_back({"l_{q^4}(5,4)", "<=", 6 * Q + 5, "covering code from six lines", ""});

    t.rows.push_back({"resolving(3,q)", "<=", 8 * Q, "four punctured lines, doubled", ""});
    t.rows.push_back({"resolving(4,q)", "<=", 12 * Q - 2, "six punctured lines, doubled", ""});
    t.rows.push_back({"resolving(5,q)", "<=", 14 * Q, "seven punctured lines, doubled", ""});
    t.rows.push_back({"resolving(3,q)", ">=", 6 * Q - 9, "cited bound, reported only", ""});
    t.rows.push_back({"resolving(4,q)", ">=", 8 * Q - 21, "cited bound, reported only", ""});
    t.rows.push_back({"resolving(5,q)", ">=", 10 * Q - 52, "cited bound, reported only", ""});

    if (attach && q <= 5) {
        Constructed six = construct_pg4_six_lines(q, workers);
        const Coverage cov = coverage(six.arrangement);
        LinearCode code = code_from_points(six.arrangement.space, cov.points);
        MinimalityReport min = is_minimal_code(code);
        std::string note = "[" + std::to_string(code.length()) + "," +
                           std::to_string(code.dim()) + "] code from six-line coverage; " +
                           (min.minimal ? "minimal" : "NOT minimal") + " (" +
                           std::to_string(min.classes) + " classes, " +
                           std::to_string(min.pairs_tested) + " pairs)";
        t.rows[0].attachment = note;
        if (q == 2)
            for (BoundRow& r : t.rows)
                if (r.quantity == "m(5,2)")
                    r.attachment = "shortest verified instance here has length " +
                                   std::to_string(code.length());
    }
    return t;
}

}  // namespace hpforge
