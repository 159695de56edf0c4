// Constructions of higgledy-piggledy arrangements: field reduction through
// Desarguesian spreads, sublines of PG(1,q^m), linear-set avoidance, the
// staged six-line configuration in PG(4,q), dualization and projection, and
// seeded randomized searches for the small-q cases.  Every construction
// certifies its output with the verifier before returning.
#pragma once

#include "verify.hpp"

#include <array>
#include <atomic>
#include <limits>
#include <map>
#include <thread>

namespace hpforge {

struct Constructed {
    Arrangement arrangement;
    Certificate certificate;
};

// --- field reduction / Desarguesian spreads ---------------------------------

// Maps points of PG(n', q^{k+1}) to k-subspaces of PG((n'+1)(k+1)-1, q) by
// expanding each big-field coordinate into base-field coefficient vectors.
// The images of all points form a Desarguesian k-spread: pairwise disjoint
// and covering every point of the big space.
class SpreadMap {
  public:
    SpreadMap(int np, int k, FieldPtr base) : np_(np), k_(k), base_(std::move(base)) {
        if (np_ < 1 || k_ < 1) throw ArgumentOutOfRange("spread parameters must be positive");
        std::vector<unsigned> tower = base_->tower_degrees();
        tower.push_back(static_cast<unsigned>(k_) + 1);
        big_ = cached_field(base_->characteristic(), tower);
        small_ = ProjSpace(np_, big_);
        large_ = ProjSpace((np_ + 1) * (k_ + 1) - 1, base_);
    }

    const ProjSpace& domain() const { return small_; }
    const ProjSpace& codomain() const { return large_; }
    const FieldPtr& base_field() const { return base_; }
    const FieldPtr& big_field() const { return big_; }
    int element_dim() const { return k_; }

    Subspace image(const Subspace& pt) const {
        require_same_space(small_, pt.space());
        if (pt.dim() != 0) throw DimensionOutOfRange("spread map expects a point");
        const int e = k_ + 1;
        const std::uint64_t qb = base_->order();
        Mat rows(e, large_.vdim());
        std::uint64_t lam = 1;  // index of the power-basis element lambda^j
        for (int j = 0; j < e; ++j) {
            for (int i = 0; i <= np_; ++i) {
                const felem prod = big_->mul(static_cast<felem>(lam), pt.basis().at(0, i));
                const std::vector<felem> c = big_->coeffs(prod);
                for (int t = 0; t < e; ++t) rows.at(j, i * e + t) = c[t];
            }
            lam *= qb;
        }
        return Subspace::from_rows(large_, rows);
    }

    std::vector<Subspace> images(const std::vector<Subspace>& pts) const {
        std::vector<Subspace> out;
        out.reserve(pts.size());
        for (const Subspace& p : pts) out.push_back(image(p));
        return out;
    }

  private:
    int np_, k_;
    FieldPtr base_, big_;
    ProjSpace small_, large_;
};

inline SpreadMap field_reduction(int np, int k, const FieldPtr& base) {
    return SpreadMap(np, k, base);
}

// --- sublines of PG(1,q^m) --------------------------------------------------

struct Subline {
    ProjSpace line;                  // PG(1, q^m)
    FieldPtr subfield;               // GF(q)
    std::vector<Subspace> points;    // sorted; size q+1
    std::array<Subspace, 3> triple;  // the defining ordered triple

    bool contains(const Subspace& p) const {
        return std::binary_search(points.begin(), points.end(), p);
    }
    friend bool operator==(const Subline& a, const Subline& b) { return a.points == b.points; }
};

// The unique F_q-subline through three distinct points: image of the
// standard subline {(0,1)} u {(1,a) : a in F_q} under the fractional-linear
// map sending the frame (0,1),(1,0),(1,1) to P1,P2,P3.
inline Subline subline_through(const FieldPtr& subfield, const Subspace& P1, const Subspace& P2,
                               const Subspace& P3) {
    const ProjSpace& sp = P1.space();
    require_same_space(sp, P2.space());
    require_same_space(sp, P3.space());
    if (sp.n != 1) throw SpaceMismatch("sublines live on a projective line");
    if (P1.dim() != 0 || P2.dim() != 0 || P3.dim() != 0)
        throw DimensionOutOfRange("subline_through expects points");
    if (P1 == P2 || P1 == P3 || P2 == P3) throw DegenerateTriple("subline points must be distinct");
    const Field& B = *sp.field;
    if (!B.has_tower_prefix(*subfield))
        throw NotAnExtensionOverRequestedBase("ambient field does not extend the subline field");

    // Columns of the map: c1 = alpha*P2, c2 = beta*P1 with alpha*P2 + beta*P1 = P3.
    const felem u0 = P2.basis().at(0, 0), u1 = P2.basis().at(0, 1);
    const felem v0 = P1.basis().at(0, 0), v1 = P1.basis().at(0, 1);
    const felem w0 = P3.basis().at(0, 0), w1 = P3.basis().at(0, 1);
    const felem det = B.sub(B.mul(u0, v1), B.mul(u1, v0));
    const felem alpha = B.div(B.sub(B.mul(w0, v1), B.mul(w1, v0)), det);
    const felem beta = B.div(B.sub(B.mul(u0, w1), B.mul(u1, w0)), det);
    const felem c10 = B.mul(alpha, u0), c11 = B.mul(alpha, u1);
    const felem c20 = B.mul(beta, v0), c21 = B.mul(beta, v1);

    Subline out;
    out.line = sp;
    out.subfield = subfield;
    out.triple = {P1, P2, P3};
    out.points.push_back(P1);  // image of (0,1)
    for (std::uint64_t a = 0; a < subfield->order(); ++a) {
        const felem fa = static_cast<felem>(a);  // subfield indices embed verbatim
        out.points.push_back(Subspace::point(
            sp, {B.add(c10, B.mul(fa, c20)), B.add(c11, B.mul(fa, c21))}));
    }
    std::sort(out.points.begin(), out.points.end());
    if (std::adjacent_find(out.points.begin(), out.points.end()) != out.points.end())
        throw Error("subline points are not distinct");
    return out;
}

// --- linear-set membership via the transversal reformulation ----------------

// Is the given point set of PG(1,q^m) contained in an F_q-linear set of
// rank at most r?  Equivalent to the existence of an (r-1)-subspace of
// PG(2m-1,q) meeting the spread image of every point.
inline std::optional<Subspace> in_linear_set_of_rank_at_most(
    const std::vector<Subspace>& pts, int r, const FieldPtr& subfield, int workers = 0,
    TransversalStrategy strategy = TransversalStrategy::Auto) {
    if (pts.empty()) throw ArgumentOutOfRange("need at least one point");
    const ProjSpace& sp = pts[0].space();
    if (sp.n != 1) throw SpaceMismatch("linear sets live on a projective line");
    const Field& B = *sp.field;
    if (!B.has_tower_prefix(*subfield))
        throw NotAnExtensionOverRequestedBase("ambient field does not extend the requested base");
    int m = 0;
    for (std::uint64_t v = subfield->order(); v <= B.order(); v *= subfield->order()) ++m;
    if (r < 1 || r > 2 * m - 1) throw ArgumentOutOfRange("rank out of range");
    SpreadMap sm(1, m - 1, subfield);
    TransversalSearch ts = find_transversal(sm.codomain(), sm.images(pts), r - 1, workers, strategy);
    return ts.found;
}

// --- generic helpers --------------------------------------------------------

namespace detail {

inline Subspace coord_subspace(const ProjSpace& sp, const std::vector<int>& axes) {
    Mat m(static_cast<int>(axes.size()), sp.vdim());
    for (std::size_t i = 0; i < axes.size(); ++i) m.at(static_cast<int>(i), axes[i]) = 1;
    return Subspace::from_rows(sp, std::move(m));
}

inline Subspace unit_point(const ProjSpace& sp, int axis) {
    std::vector<felem> v(static_cast<std::size_t>(sp.vdim()), 0);
    v[static_cast<std::size_t>(axis)] = 1;
    return Subspace::point(sp, v);
}

// First point of `within` (lex order) accepted by `ok`; index in `pick`.
inline std::optional<Subspace> first_point_such_that(
    const Subspace& within, const std::function<bool(const Subspace&)>& ok, std::uint64_t& pick) {
    std::optional<Subspace> res;
    std::uint64_t idx = 0;
    for_each_point_of(within, [&](const felem* v) {
        Mat m(1, within.basis().cols);
        std::copy(v, v + m.cols, m.a.begin());
        Subspace p = Subspace::from_canonical(within.space(), std::move(m));
        if (ok(p)) {
            pick = idx;
            res = std::move(p);
            return false;
        }
        ++idx;
        return true;
    });
    return res;
}

// Independent seeded trials, lowest successful index wins (so the outcome
// is the same for any worker count).  fn must be a pure function of t.
inline std::optional<std::uint64_t> lowest_success(std::uint64_t budget, int workers,
                                                   const std::function<bool(std::uint64_t)>& fn) {
    const int w = std::max(1, resolve_workers(workers));
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
    auto run = [&] {
        for (;;) {
            const std::uint64_t t = next.fetch_add(1);
            if (t >= budget || t >= best.load()) return;
            if (fn(t)) {
                std::uint64_t cur = best.load();
                while (t < cur && !best.compare_exchange_weak(cur, t)) {}
            }
        }
    };
    if (w == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < w; ++i) pool.emplace_back(run);
        for (std::thread& th : pool) th.join();
    }
    if (best.load() == std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return best.load();
}

inline std::vector<Subspace> distinct_random_points(const std::vector<Subspace>& pool,
                                                    std::size_t count, Rng& rng) {
    std::vector<std::size_t> picked;
    while (picked.size() < count) {
        const std::size_t i = static_cast<std::size_t>(rng.below(pool.size()));
        if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
    }
    std::vector<Subspace> out;
    out.reserve(count);
    for (std::size_t i : picked) out.push_back(pool[i]);
    return out;
}

inline Certificate certify_or_throw(const Arrangement& arr, int workers) {
    Certificate cert = is_higgledy_piggledy(arr, VerifyMethod::Auto, workers);
    if (cert.verdict != Verdict::HigPig)
        throw Error("construction produced an arrangement that failed verification");
    return cert;
}

}  // namespace detail

// --- tetrahedron ------------------------------------------------------------

// The N(N+1)/2 lines connecting the N+1 standard frame points pairwise.
inline Constructed tetrahedron(const ProjSpace& sp, int workers = 0) {
    if (sp.n < 2) throw DimensionOutOfRange("need N >= 2");
    std::vector<Subspace> lines;
    for (int i = 0; i <= sp.n; ++i)
        for (int j = i + 1; j <= sp.n; ++j)
            lines.push_back(detail::coord_subspace(sp, {i, j}));
    Provenance prov{"tetrahedron", sp.q(), 0, {}};
    Arrangement arr(sp, 1, std::move(lines), std::move(prov));
    Certificate cert = detail::certify_or_throw(arr, workers);
    return {std::move(arr), std::move(cert)};
}

// --- projection -------------------------------------------------------------

// Projects an arrangement from a point P onto a hyperplane Sigma:
// kappa -> <P,kappa> meet Sigma, set-deduplicated, re-read in the chart of
// Sigma's canonical basis (coordinates = entries at Sigma's pivot columns)
// and certified there.
inline Constructed project(const Arrangement& arr, const Subspace& sigma, const Subspace& P,
                           int workers = 0, bool trusted = false) {
    const ProjSpace& sp = arr.space;
    require_same_space(sp, sigma.space());
    require_same_space(sp, P.space());
    if (sigma.dim() != sp.n - 1) throw DimensionOutOfRange("projection target must be a hyperplane");
    if (P.dim() != 0) throw DimensionOutOfRange("projection centre must be a point");
    if (sigma.contains(P)) throw PointInHyperplane("projection centre lies in the hyperplane");
    for (const Subspace& e : arr.elements)
        if (e.contains(P)) throw PointOnElement("projection centre lies on an element");
    if (!trusted && is_higgledy_piggledy(arr, VerifyMethod::Auto, workers).verdict != Verdict::HigPig)
        throw Error("input arrangement is not higgledy-piggledy");

    std::set<Subspace> shadows;
    for (const Subspace& e : arr.elements) shadows.insert(meet(span(P, e), sigma));

    // Chart: sigma's basis is canonical RREF, so a contained row's basis
    // coefficients are its entries at the pivot columns.
    std::vector<int> piv;
    {
        int c = 0;
        for (int i = 0; i < sigma.rank(); ++i) {
            while (sigma.basis().at(i, c) == 0) ++c;
            piv.push_back(c++);
        }
    }
    ProjSpace small(sp.n - 1, sp.field);
    std::vector<Subspace> elems;
    for (const Subspace& sh : shadows) {
        Mat rows(sh.rank(), small.vdim());
        for (int i = 0; i < sh.rank(); ++i)
            for (std::size_t t = 0; t < piv.size(); ++t)
                rows.at(i, static_cast<int>(t)) = sh.basis().at(i, piv[t]);
        elems.push_back(Subspace::from_rows(small, std::move(rows)));
    }
    Provenance prov{"project", sp.q(), 0, {}};
    Arrangement out(small, arr.k, std::move(elems), std::move(prov));
    Certificate cert = detail::certify_or_throw(out, workers);
    return {std::move(out), std::move(cert)};
}

// --- dualization ------------------------------------------------------------

// Element-wise dual: k-subspaces become (N-k-1)-subspaces.  The output is
// always re-verified from scratch; when |arr| <= q the verification rides
// the transversal characterization, above that the strong scan decides.
inline Constructed dualize(const Arrangement& arr, int workers = 0) {
    std::vector<Subspace> duals;
    duals.reserve(arr.elements.size());
    for (const Subspace& e : arr.elements) duals.push_back(dual(e));
    Provenance prov{"dualize(" + arr.provenance.construction + ")", arr.space.q(),
                    arr.provenance.seed, arr.provenance.choices};
    Arrangement out(arr.space, arr.space.n - arr.k - 1, std::move(duals), std::move(prov));
    Certificate cert = detail::certify_or_throw(out, workers);
    return {std::move(out), std::move(cert)};
}

// --- four lines in PG(3,q) --------------------------------------------------

// Spread images of the standard frame triple of PG(1,q^2) plus the first
// point outside their common Baer subline.
inline Constructed construct_pg3_four_lines(std::uint64_t q, int workers = 0) {
    FieldPtr base = gf(q);
    SpreadMap sm(1, 1, base);
    const ProjSpace& line = sm.domain();
    const Subspace p01 = Subspace::point(line, {0, 1});
    const Subspace p10 = Subspace::point(line, {1, 0});
    const Subspace p11 = Subspace::point(line, {1, 1});
    Subline b = subline_through(base, p01, p10, p11);
    std::uint64_t pick = 0;
    std::optional<Subspace> fourth = detail::first_point_such_that(
        Subspace::whole(line), [&](const Subspace& p) { return !b.contains(p); }, pick);
    if (!fourth) throw Error("no point off the subline");  // impossible for m >= 2
    Provenance prov{"pg3_four_lines", q, 0, {pick}};
    Arrangement arr(sm.codomain(), 1, sm.images({p01, p10, p11, *fourth}), std::move(prov));
    Certificate cert = detail::certify_or_throw(arr, workers);
    return {std::move(arr), std::move(cert)};
}

// --- six lines in PG(4,q) ---------------------------------------------------

namespace detail {

struct SixLineFrame {
    ProjSpace sp;
    Subspace m, sigma1, sigma2, sigma3, pi12, pi13, pi23;
    Subspace M1, M2, P12, P13, P23, l12, l22;

    explicit SixLineFrame(const ProjSpace& space) : sp(space) {
        m = coord_subspace(sp, {0, 1});
        sigma1 = coord_subspace(sp, {0, 1, 2, 3});
        sigma2 = coord_subspace(sp, {0, 1, 2, 4});
        sigma3 = coord_subspace(sp, {0, 1, 3, 4});
        pi12 = coord_subspace(sp, {0, 1, 2});
        pi13 = coord_subspace(sp, {0, 1, 3});
        pi23 = coord_subspace(sp, {0, 1, 4});
        M1 = unit_point(sp, 0);
        M2 = unit_point(sp, 1);
        P12 = unit_point(sp, 2);
        P13 = unit_point(sp, 3);
        P23 = unit_point(sp, 4);
        l12 = span(P12, P13);
        l22 = span(P12, P23);
    }

    // Lines of `solid` through M, skew to lout, in neither of the two planes.
    std::vector<Subspace> axis_candidates(const Subspace& solid, const Subspace& M,
                                          const Subspace& lout, const Subspace& plane_a,
                                          const Subspace& plane_b) const {
        std::vector<Subspace> out;
        for_each_within(solid, 1, [&](const Subspace& L) {
            if (L.contains(M) && meet_dim(L, lout) == -1 && !plane_a.contains(L) &&
                !plane_b.contains(L))
                out.push_back(L);
            return true;
        });
        return out;
    }

    // The unique line through A meeting both skew lines u and v inside a
    // common solid (intersection of the two planes <A,u> and <A,v>).
    std::optional<Subspace> transversal_at(const Subspace& A, const Subspace& u,
                                           const Subspace& v) const {
        Subspace t = meet(span(A, u), span(A, v));
        if (t.dim() != 1) return std::nullopt;
        return t;
    }
};

// One full attempt of the staged configuration for a fixed axis pair.
// Returns the six lines, or nothing if a genericity assert fails.
inline std::optional<std::vector<Subspace>> six_lines_attempt(
    const SixLineFrame& f, const Subspace& l11, const Subspace& l21,
    std::vector<std::uint64_t>& choices, int workers) {
    const Subspace s = span(f.P13, f.P23);
    const Subspace beta = meet(span(l11, l21), f.sigma3);
    if (beta.dim() != 2) return std::nullopt;
    const Subspace S = meet(s, beta);
    if (S.dim() != 0) return std::nullopt;

    // Bundle line in Sigma3 for a point A of pi12 off the two special lines.
    auto a3_of = [&](const Subspace& A) -> std::optional<Subspace> {
        std::optional<Subspace> a1 = f.transversal_at(A, l11, f.l12);
        std::optional<Subspace> a2 = f.transversal_at(A, l21, f.l22);
        if (!a1 || !a2) return std::nullopt;
        Subspace alpha = span(*a1, *a2);
        if (alpha.dim() != 2) return std::nullopt;
        Subspace a3 = meet(alpha, f.sigma3);
        if (a3.dim() != 1) return std::nullopt;
        return a3;
    };

    // For a pencil line through P12 (named by its foot X on m), the common
    // plane and concurrence point of its bundle.
    auto bundle_of = [&](const Subspace& X)
        -> std::optional<std::pair<Subspace, Subspace>> {  // (plane, point)
        const Subspace fa = span(X, f.P12);
        std::vector<Subspace> pts;
        for (const Subspace& A : points_of(fa))
            if (!(A == f.P12)) {
                pts.push_back(A);
                if (pts.size() == 2) break;
            }
        std::optional<Subspace> c1 = a3_of(pts[0]), c2 = a3_of(pts[1]);
        if (!c1 || !c2) return std::nullopt;
        Subspace pt = meet(*c1, *c2);
        Subspace pl = span(*c1, *c2);
        if (pt.dim() != 0 || pl.dim() != 2 || !pl.contains(s)) return std::nullopt;
        return std::make_pair(pl, pt);
    };

    // Gather the conic: concurrence points over all admissible pencil
    // lines, plus M1 and M2.
    std::vector<Subspace> conic{f.M1, f.M2};
    for (const Subspace& X : points_of(f.m)) {
        if (X == f.M1 || X == f.M2) continue;
        std::optional<std::pair<Subspace, Subspace>> b = bundle_of(X);
        if (!b) return std::nullopt;
        conic.push_back(b->second);
    }
    std::sort(conic.begin(), conic.end());
    if (std::adjacent_find(conic.begin(), conic.end()) != conic.end()) return std::nullopt;
    if (conic.size() != f.sp.q() + 1) return std::nullopt;
    if (!std::binary_search(conic.begin(), conic.end(), S)) return std::nullopt;
    for (std::size_t i = 0; i < conic.size(); ++i)  // no 3 collinear
        for (std::size_t j = i + 1; j < conic.size(); ++j)
            for (std::size_t k = j + 1; k < conic.size(); ++k)
                if (span(span(conic[i], conic[j]), conic[k]).dim() < 2) return std::nullopt;

    // Tangent at S: the unique line of beta meeting the conic only in S.
    std::vector<Subspace> tangents;
    for_each_within(beta, 1, [&](const Subspace& L) {
        if (L.contains(S)) {
            int hits = 0;
            for (const Subspace& c : conic)
                if (L.contains(c)) ++hits;
            if (hits == 1) tangents.push_back(L);
        }
        return true;
    });
    if (tangents.size() != 1) return std::nullopt;
    const Subspace& t = tangents[0];

    const Subspace M0 = meet(t, f.m);
    if (M0.dim() != 0 || M0 == f.M1 || M0 == f.M2) return std::nullopt;

    // Full bundle over the pencil line through M0.
    const Subspace fa0 = span(M0, f.P12);
    std::vector<Subspace> bundle0;
    for (const Subspace& A : points_of(fa0)) {
        if (A == f.P12) continue;
        std::optional<Subspace> a3 = a3_of(A);
        if (!a3 || !a3->contains(S)) return std::nullopt;
        bundle0.push_back(*a3);
    }
    std::sort(bundle0.begin(), bundle0.end());
    bundle0.erase(std::unique(bundle0.begin(), bundle0.end()), bundle0.end());
    if (bundle0.size() != f.sp.q()) return std::nullopt;
    const Subspace gamma0 = span(bundle0[0], bundle0[1]);
    if (gamma0.dim() != 2) return std::nullopt;

    // The residual line of the pencil of gamma0 at S.
    std::vector<Subspace> residual;
    for_each_within(gamma0, 1, [&](const Subspace& L) {
        if (L.contains(S) && !std::binary_search(bundle0.begin(), bundle0.end(), L))
            residual.push_back(L);
        return true;
    });
    if (residual.size() != 1) return std::nullopt;
    const Subspace& r0 = residual[0];
    if (meet_dim(r0, f.m) != -1 || r0 == s) return std::nullopt;

    std::uint64_t pick_m3 = 0, pick_r = 0;
    std::optional<Subspace> M3 = first_point_such_that(
        f.m, [&](const Subspace& p) { return !(p == M0 || p == f.M1 || p == f.M2); }, pick_m3);
    if (!M3) return std::nullopt;
    std::optional<Subspace> R = first_point_such_that(
        r0,
        [&](const Subspace& p) {
            return !f.pi13.contains(p) && !f.pi23.contains(p) && !beta.contains(p);
        },
        pick_r);
    if (!R) return std::nullopt;
    const Subspace l31 = span(*M3, *R);
    for (const Subspace& bl : bundle0)
        if (meet_dim(l31, bl) != -1) return std::nullopt;
    if (meet_dim(l31, s) != -1) return std::nullopt;
    const Subspace Q = meet(span(f.m, l31), s);
    if (Q.dim() != 0) return std::nullopt;

    // Final line: first line of Sigma3 skew to m and to the other five
    // whose six-line set admits no transversal plane.
    std::vector<Subspace> five{l11, f.l12, l21, f.l22, l31};
    std::optional<std::vector<Subspace>> result;
    std::uint64_t idx = 0;
    for_each_within(f.sigma3, 1, [&](const Subspace& L) {
        const std::uint64_t here = idx++;
        if (meet_dim(L, f.m) != -1) return true;
        for (const Subspace& e : five)
            if (meet_dim(L, e) != -1) return true;
        std::vector<Subspace> six = five;
        six.push_back(L);
        TransversalSearch ts =
            find_transversal(f.sp, six, 2, workers, TransversalStrategy::FullScan);
        if (!ts.found) {
            choices.push_back(pick_m3);
            choices.push_back(pick_r);
            choices.push_back(here);
            result = std::move(six);
            return false;
        }
        return true;
    });
    return result;
}

}  // namespace detail

// Staged explicit configuration for q >= 3; seeded randomized search for
// q = 2.  Output order: l11, l12, l21, l22, l31, l32 (l12 and l22 are the
// one intersecting pair, sharing the frame point on both).
inline Constructed construct_pg4_six_lines(std::uint64_t q, int workers = 0,
                                           std::uint64_t budget = 1000000,
                                           std::uint64_t master_seed = 1) {
    FieldPtr F = gf(q);
    ProjSpace sp(4, F);

    if (q == 2) {
        // Two lines through a common point plus four random lines.
        std::vector<Subspace> all_pts = all_points(sp);
        std::vector<Subspace> all_lines = all_subspaces(sp, 1);
        std::optional<std::vector<Subspace>> found;
        auto trial = [&](std::uint64_t t) -> std::optional<std::vector<Subspace>> {
            Rng rng(mix_seed(master_seed, t));
            const Subspace& lA = all_lines[static_cast<std::size_t>(rng.below(all_lines.size()))];
            std::vector<Subspace> lA_pts = points_of(lA);
            const Subspace& P = lA_pts[static_cast<std::size_t>(rng.below(lA_pts.size()))];
            std::vector<Subspace> through = subspaces_through(P, 1);
            Subspace lB = through[static_cast<std::size_t>(rng.below(through.size()))];
            if (lB == lA) return std::nullopt;
            std::vector<Subspace> six{lA, lB};
            while (six.size() < 6) {
                const Subspace& c = all_lines[static_cast<std::size_t>(rng.below(all_lines.size()))];
                if (std::find(six.begin(), six.end(), c) == six.end()) six.push_back(c);
            }
            int meeting_pairs = 0;
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = i + 1; j < 6; ++j)
                    if (meet_dim(six[i], six[j]) >= 0) ++meeting_pairs;
            if (meeting_pairs != 1) return std::nullopt;
            Arrangement arr(sp, 1, six);
            if (verify_strong_blocking(arr, 1).verdict != Verdict::HigPig) return std::nullopt;
            return six;
        };
        std::optional<std::uint64_t> win = detail::lowest_success(
            budget, workers, [&](std::uint64_t t) { return trial(t).has_value(); });
        if (!win) throw SearchBudgetExhausted("six-line search exhausted its budget");
        found = trial(*win);
        Provenance prov{"pg4_six_lines", q, master_seed, {*win}};
        Arrangement arr(sp, 1, std::move(*found), std::move(prov));
        Certificate cert = detail::certify_or_throw(arr, workers);
        return {std::move(arr), std::move(cert)};
    }

    detail::SixLineFrame frame(sp);
    std::vector<Subspace> c11 =
        frame.axis_candidates(frame.sigma1, frame.M1, frame.l12, frame.pi12, frame.pi13);
    std::vector<Subspace> c21 =
        frame.axis_candidates(frame.sigma2, frame.M2, frame.l22, frame.pi12, frame.pi23);
    for (std::size_t i = 0; i < c11.size(); ++i)
        for (std::size_t j = 0; j < c21.size(); ++j) {
            std::vector<std::uint64_t> choices{i, j};
            std::optional<std::vector<Subspace>> six =
                detail::six_lines_attempt(frame, c11[i], c21[j], choices, workers);
            if (!six) continue;
            Provenance prov{"pg4_six_lines", q, 0, std::move(choices)};
            Arrangement arr(sp, 1, std::move(*six), std::move(prov));
            Certificate cert = detail::certify_or_throw(arr, workers);
            return {std::move(arr), std::move(cert)};
        }
    throw Error("six-line staging failed for every axis choice");
}

// --- six planes in PG(4,q) --------------------------------------------------

// q >= 7: dual of the six-line set.  Small q: seeded search seeded with two
// planes through a common line plus four random planes.
inline Constructed construct_pg4_six_planes(std::uint64_t q, int workers = 0,
                                            std::uint64_t budget = 1000000,
                                            std::uint64_t master_seed = 1) {
    if (q >= 7) {
        Constructed lines = construct_pg4_six_lines(q, workers);
        Constructed out = dualize(lines.arrangement, workers);
        out.arrangement.provenance.construction = "pg4_six_planes";
        return out;
    }
    FieldPtr F = gf(q);
    ProjSpace sp(4, F);
    std::vector<Subspace> all_lines = all_subspaces(sp, 1);
    auto trial = [&](std::uint64_t t) -> std::optional<std::vector<Subspace>> {
        Rng rng(mix_seed(master_seed, t));
        const Subspace& l = all_lines[static_cast<std::size_t>(rng.below(all_lines.size()))];
        std::vector<Subspace> through = subspaces_through(l, 2);
        std::vector<Subspace> six;
        six.push_back(through[static_cast<std::size_t>(rng.below(through.size()))]);
        for (;;) {
            const Subspace& c = through[static_cast<std::size_t>(rng.below(through.size()))];
            if (!(c == six[0])) {
                six.push_back(c);
                break;
            }
        }
        while (six.size() < 6) {
            Subspace c = random_subspace(sp, 2, rng);
            if (std::find(six.begin(), six.end(), c) == six.end()) six.push_back(c);
        }
        // Optimal shape: exactly one pair shares a line, the rest meet in
        // points (two planes of PG(4,q) always meet).
        int line_pairs = 0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = i + 1; j < 6; ++j) {
                const int d = meet_dim(six[i], six[j]);
                if (d >= 2) return std::nullopt;
                if (d == 1) ++line_pairs;
            }
        if (line_pairs != 1) return std::nullopt;
        Arrangement arr(sp, 2, six);
        if (verify_strong_blocking(arr, 1).verdict != Verdict::HigPig) return std::nullopt;
        return six;
    };
    std::optional<std::uint64_t> win = detail::lowest_success(
        budget, workers, [&](std::uint64_t t) { return trial(t).has_value(); });
    if (!win) throw SearchBudgetExhausted("six-plane search exhausted its budget");
    std::optional<std::vector<Subspace>> six = trial(*win);
    Provenance prov{"pg4_six_planes", q, master_seed, {*win}};
    Arrangement arr(sp, 2, std::move(*six), std::move(prov));
    Certificate cert = detail::certify_or_throw(arr, workers);
    return {std::move(arr), std::move(cert)};
}

// --- seven lines / seven solids in PG(5,q) ----------------------------------

// Seeded search over line-spread elements: images of random point sets of
// PG(2,q^2) under field reduction.
inline Constructed construct_pg5_seven_lines(std::uint64_t q, int workers = 0,
                                             std::uint64_t budget = 1000000,
                                             std::uint64_t master_seed = 1) {
    FieldPtr base = gf(q);
    SpreadMap sm(2, 1, base);
    std::vector<Subspace> pool = all_points(sm.domain());
    auto trial = [&](std::uint64_t t) -> std::optional<std::vector<Subspace>> {
        Rng rng(mix_seed(master_seed, t));
        std::vector<Subspace> pts = detail::distinct_random_points(pool, 7, rng);
        std::vector<Subspace> lines = sm.images(pts);
        Arrangement arr(sm.codomain(), 1, lines);
        if (is_higgledy_piggledy(arr, VerifyMethod::Auto, 1).verdict != Verdict::HigPig)
            return std::nullopt;
        return lines;
    };
    std::optional<std::uint64_t> win = detail::lowest_success(
        budget, workers, [&](std::uint64_t t) { return trial(t).has_value(); });
    if (!win) throw SearchBudgetExhausted("seven-line search exhausted its budget");
    std::optional<std::vector<Subspace>> lines = trial(*win);
    Provenance prov{"pg5_seven_lines", q, master_seed, {*win}};
    Arrangement arr(sm.codomain(), 1, std::move(*lines), std::move(prov));
    Certificate cert = detail::certify_or_throw(arr, workers);
    return {std::move(arr), std::move(cert)};
}

inline Constructed construct_pg5_seven_solids(std::uint64_t q, int workers = 0,
                                              std::uint64_t budget = 1000000,
                                              std::uint64_t master_seed = 1) {
    if (q < 7) throw ArgumentOutOfRange("seven solids need q >= 7");
    Constructed lines = construct_pg5_seven_lines(q, workers, budget, master_seed);
    Constructed out = dualize(lines.arrangement, workers);
    out.arrangement.provenance.construction = "pg5_seven_solids";
    return out;
}

// --- eight planes in PG(5,q) ------------------------------------------------

// Staged for q >= 7: three sublines of PG(1,q^3) pairwise sharing two
// points with common point C give seven points lying in at most one linear
// set of rank <= 3; an eighth point off that set breaks every such set.
// Small q falls back to seeded search over spread elements.
inline Constructed construct_pg5_eight_planes(std::uint64_t q, int workers = 0,
                                              std::uint64_t budget = 1000000,
                                              std::uint64_t master_seed = 1) {
    FieldPtr base = gf(q);
    SpreadMap sm(1, 2, base);
    const ProjSpace& line = sm.domain();

    if (q >= 7) {
        const Subspace C = Subspace::point(line, {0, 1});
        const Subspace B12 = Subspace::point(line, {1, 0});
        const Subspace B13 = Subspace::point(line, {1, 1});
        Subline b1 = subline_through(base, C, B12, B13);
        std::vector<std::uint64_t> choices;

        auto first_member_not_in = [&](const Subline& b,
                                       const std::vector<Subspace>& excl) -> Subspace {
            for (std::size_t i = 0; i < b.points.size(); ++i)
                if (std::find(excl.begin(), excl.end(), b.points[i]) == excl.end()) {
                    choices.push_back(i);
                    return b.points[i];
                }
            throw Error("subline exhausted");
        };
        const Subspace D1 = first_member_not_in(b1, {C, B12, B13});
        std::uint64_t pick_b23 = 0;
        std::optional<Subspace> B23 = detail::first_point_such_that(
            Subspace::whole(line), [&](const Subspace& p) { return !b1.contains(p); }, pick_b23);
        if (!B23) throw Error("no point off the base subline");
        choices.push_back(pick_b23);
        Subline b2 = subline_through(base, C, B12, *B23);
        Subline b3 = subline_through(base, C, B13, *B23);
        const Subspace D2 = first_member_not_in(b2, {C, B12, *B23});
        const Subspace D3 = first_member_not_in(b3, {C, B13, *B23});

        // Pairwise overlap sanity: exactly the intended two points each.
        auto overlap = [](const Subline& x, const Subline& y) {
            std::vector<Subspace> common;
            std::set_intersection(x.points.begin(), x.points.end(), y.points.begin(),
                                  y.points.end(), std::back_inserter(common));
            return common;
        };
        if (overlap(b1, b2).size() != 2 || overlap(b1, b3).size() != 2 ||
            overlap(b2, b3).size() != 2)
            throw Error("subline overlaps are not two points each");

        std::vector<Subspace> P{C, B12, B13, *B23, D1, D2, D3};
        // The (at most one) rank-3 linear set through P, as a transversal
        // witness; any spread element missing it marks a usable Q.
        TransversalSearch kp = find_transversal(sm.codomain(), sm.images(P), 2, workers);
        std::uint64_t idx = 0;
        std::optional<Subspace> Q;
        for (const Subspace& cand : all_points(line)) {
            const std::uint64_t here = idx++;
            if (std::find(P.begin(), P.end(), cand) != P.end()) continue;
            if (kp.found && meets(sm.image(cand), *kp.found)) continue;
            std::vector<Subspace> eight = P;
            eight.push_back(cand);
            if (in_linear_set_of_rank_at_most(eight, 3, base, workers)) continue;
            choices.push_back(here);
            Q = cand;
            break;
        }
        if (!Q) throw Error("no avoiding eighth point found");
        std::vector<Subspace> pts = P;
        pts.push_back(*Q);
        Provenance prov{"pg5_eight_planes", q, 0, std::move(choices)};
        Arrangement arr(sm.codomain(), 2, sm.images(pts), std::move(prov));
        Certificate cert = detail::certify_or_throw(arr, workers);
        return {std::move(arr), std::move(cert)};
    }

    std::vector<Subspace> pool = all_points(line);
    auto trial = [&](std::uint64_t t) -> std::optional<std::vector<Subspace>> {
        Rng rng(mix_seed(master_seed, t));
        std::vector<Subspace> pts = detail::distinct_random_points(pool, 8, rng);
        std::vector<Subspace> planes = sm.images(pts);
        Arrangement arr(sm.codomain(), 2, planes);
        if (verify_strong_blocking(arr, 1).verdict != Verdict::HigPig) return std::nullopt;
        return planes;
    };
    std::optional<std::uint64_t> win = detail::lowest_success(
        budget, workers, [&](std::uint64_t t) { return trial(t).has_value(); });
    if (!win) throw SearchBudgetExhausted("eight-plane search exhausted its budget");
    std::optional<std::vector<Subspace>> planes = trial(*win);
    Provenance prov{"pg5_eight_planes", q, master_seed, {*win}};
    Arrangement arr(sm.codomain(), 2, std::move(*planes), std::move(prov));
    Certificate cert = detail::certify_or_throw(arr, workers);
    return {std::move(arr), std::move(cert)};
}

// --- seven spread planes (open-problem support) ------------------------------

// Random 7-point subsets of PG(1,q^3) mapped through the plane spread.
// Absence within the budget is a valid report, not an error.
inline std::optional<Constructed> seven_planes_spread_search(std::uint64_t q, int workers = 0,
                                                             std::uint64_t budget = 1000000,
                                                             std::uint64_t master_seed = 1) {
    FieldPtr base = gf(q);
    SpreadMap sm(1, 2, base);
    std::vector<Subspace> pool = all_points(sm.domain());
    auto trial = [&](std::uint64_t t) -> std::optional<std::vector<Subspace>> {
        Rng rng(mix_seed(master_seed, t));
        std::vector<Subspace> pts = detail::distinct_random_points(pool, 7, rng);
        std::vector<Subspace> planes = sm.images(pts);
        Arrangement arr(sm.codomain(), 2, planes);
        if (is_higgledy_piggledy(arr, VerifyMethod::Auto, 1).verdict != Verdict::HigPig)
            return std::nullopt;
        return planes;
    };
    std::optional<std::uint64_t> win = detail::lowest_success(
        budget, workers, [&](std::uint64_t t) { return trial(t).has_value(); });
    if (!win) return std::nullopt;
    std::optional<std::vector<Subspace>> planes = trial(*win);
    Provenance prov{"seven_planes_spread", q, master_seed, {*win}};
    Arrangement arr(sm.codomain(), 2, std::move(*planes), std::move(prov));
    Certificate cert = detail::certify_or_throw(arr, workers);
    return Constructed{std::move(arr), std::move(cert)};
}

// --- subline triples --------------------------------------------------------

// Exhaustive search for three distinct sublines of PG(1,q^m) pairwise
// sharing exactly two points with empty common intersection.  Existence is
// a parity phenomenon: solutions exist iff m is even.
inline std::optional<std::array<Subline, 3>> subline_triples_search(std::uint64_t q, unsigned m) {
    if (q < 3) throw ArgumentOutOfRange("need q >= 3");
    std::uint64_t qm = 1;
    for (unsigned i = 0; i < m; ++i) {
        qm *= q;
        if (qm > (1ULL << 14)) throw FieldTooLarge("q^m exceeds 2^14");
    }
    FieldPtr base = gf(q);
    FieldPtr big = gf_tower(q, m);
    ProjSpace sp(1, big);
    std::vector<Subspace> pts = all_points(sp);
    const std::size_t n = pts.size();

    // Enumerate each subline once: for every point pair, walk the not-yet-
    // covered third points.
    std::vector<Subline> sublines;
    std::map<std::vector<Subspace>, std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::set<Subspace> covered;
            for (std::size_t k = j + 1; k < n; ++k) {
                if (covered.count(pts[k])) continue;
                Subline b = subline_through(base, pts[i], pts[j], pts[k]);
                for (const Subspace& p : b.points) covered.insert(p);
                if (seen.emplace(b.points, sublines.size()).second) sublines.push_back(std::move(b));
            }
        }

    // Adjacency on |intersection| == 2, then scan joint neighbourhoods.
    const std::size_t ns = sublines.size();
    auto overlap = [&](std::size_t a, std::size_t b) {
        std::vector<Subspace> common;
        std::set_intersection(sublines[a].points.begin(), sublines[a].points.end(),
                              sublines[b].points.begin(), sublines[b].points.end(),
                              std::back_inserter(common));
        return common;
    };
    std::vector<std::vector<std::size_t>> two_partners(ns);
    for (std::size_t a = 0; a < ns; ++a)
        for (std::size_t b = a + 1; b < ns; ++b)
            if (overlap(a, b).size() == 2) two_partners[a].push_back(b);
    for (std::size_t a = 0; a < ns; ++a)
        for (std::size_t bi = 0; bi < two_partners[a].size(); ++bi)
            for (std::size_t ci = bi + 1; ci < two_partners[a].size(); ++ci) {
                const std::size_t b = two_partners[a][bi], c = two_partners[a][ci];
                if (overlap(b, c).size() != 2) continue;
                // Triple meet = (a meet b) meet (a meet c); must be empty.
                std::vector<Subspace> ab = overlap(a, b), acs = overlap(a, c), common;
                std::set_intersection(ab.begin(), ab.end(), acs.begin(), acs.end(),
                                      std::back_inserter(common));
                if (!common.empty()) continue;
                return std::array<Subline, 3>{sublines[a], sublines[b], sublines[c]};
            }
    return std::nullopt;
}

}  // namespace hpforge
