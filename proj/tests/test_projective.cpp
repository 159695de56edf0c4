// Projective-space plumbing: counts against the q-Pascal recursion, the
// enumerator against a brute-force point-span oracle, lex order, duality
// algebra, worker-invariant scans, and uniform sampling.
#include <catch2/catch_amalgamated.hpp>

#include "hpforge/projective.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

using namespace hpforge;

namespace {

// q-Pascal recursion, independent of the product formula under test.
std::uint64_t gauss_oracle(int n, int k, std::uint64_t q) {
    if (k < 0 || k > n) return 0;
    std::vector<std::vector<std::uint64_t>> g(n + 1, std::vector<std::uint64_t>(n + 1, 0));
    for (int i = 0; i <= n; ++i) {
        g[i][0] = 1;
        for (int j = 1; j <= i; ++j) {
            std::uint64_t pw = 1;
            for (int t = 0; t < j; ++t) pw *= q;
            g[i][j] = (i == j) ? 1 : pw * g[i - 1][j] + g[i - 1][j - 1];
        }
    }
    return g[n][k];
}

struct MatLess {
    bool operator()(const Mat& x, const Mat& y) const { return mat_lex_compare(x, y) < 0; }
};

// Brute-force d-subspace enumeration: canonical bases of all spans of
// (d+1)-subsets of points, deduplicated.
std::set<Mat, MatLess> brute_subspaces(const ProjSpace& sp, int d) {
    std::set<Mat, MatLess> out;
    const std::vector<Subspace> pts = all_points(sp);
    const int m = static_cast<int>(pts.size());
    std::vector<int> idx(d + 1);
    for (int i = 0; i <= d; ++i) idx[i] = i;
    for (;;) {
        std::vector<const Subspace*> parts;
        for (int i : idx) parts.push_back(&pts[i]);
        const Subspace s = span(sp, parts);
        if (s.dim() == d) out.insert(s.basis());
        int pos = d;
        while (pos >= 0 && idx[pos] == m - (d + 1 - pos)) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i <= d; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

}  // namespace

TEST_CASE("gaussian binomials match the q-Pascal recursion") {
    for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull})
        for (int n = 0; n <= 8; ++n)
            for (int k = 0; k <= n; ++k)
                CHECK(gaussian_binomial(n, k, q) == gauss_oracle(n, k, q));

    CHECK(gaussian_binomial(4, 2, 2) == 35);
    CHECK(gaussian_binomial(5, 2, 2) == 155);
    CHECK(gaussian_binomial(5, 2, 3) == 1210);
    CHECK(gaussian_binomial(5, 2, 4) == 5797);
    CHECK(gaussian_binomial(5, 2, 5) == 20306);
    CHECK(gaussian_binomial(6, 2, 2) == 651);
    CHECK(gaussian_binomial(6, 3, 2) == 1395);
    CHECK(gaussian_binomial(6, 2, 3) == 11011);
    CHECK(gaussian_binomial(4, 2, 9) == 7462);
    CHECK(gaussian_binomial(6, 2, 7) == 6865251);
}

TEST_CASE("point and subspace counts") {
    ProjSpace pg32(3, gf(2));
    CHECK(pg32.point_count() == 15);
    CHECK(pg32.subspace_count(1) == 35);
    CHECK(pg32.subspace_count(2) == 15);
    CHECK(pg32.subspace_count(3) == 1);

    ProjSpace pg42(4, gf(2));
    CHECK(pg42.point_count() == 31);
    CHECK(pg42.subspace_count(1) == 155);
    CHECK(pg42.subspace_count(2) == 155);
    CHECK(pg42.subspace_count(3) == 31);

    ProjSpace pg33(3, gf(3));
    CHECK(pg33.point_count() == 40);
    CHECK(pg33.subspace_count(1) == 130);
    CHECK(pg33.subspace_count(2) == 40);

    ProjSpace pg43(4, gf(3));
    CHECK(pg43.point_count() == 121);
    CHECK(pg43.subspace_count(1) == 1210);
    CHECK(pg43.subspace_count(3) == 121);

    ProjSpace pg52(5, gf(2));
    CHECK(pg52.point_count() == 63);
    CHECK(pg52.subspace_count(1) == 651);
    CHECK(pg52.subspace_count(2) == 1395);
    CHECK(pg52.subspace_count(3) == 651);
    CHECK(pg52.subspace_count(4) == 63);

    CHECK(ProjSpace(4, gf(4)).point_count() == 341);
    CHECK(ProjSpace(4, gf(5)).point_count() == 781);
    CHECK(ProjSpace(4, gf(7)).point_count() == 2801);
    CHECK(ProjSpace(3, gf(5)).subspace_count(1) == 806);
}

TEST_CASE("all_subspaces agrees with the brute-force span oracle") {
    const std::vector<std::pair<ProjSpace, int>> cases = {
        {ProjSpace(2, gf(2)), 1}, {ProjSpace(3, gf(2)), 1}, {ProjSpace(3, gf(2)), 2},
        {ProjSpace(2, gf(3)), 1}, {ProjSpace(3, gf(3)), 1}, {ProjSpace(2, gf(4)), 1},
    };
    for (const auto& [sp, d] : cases) {
        const auto oracle = brute_subspaces(sp, d);
        const std::vector<Subspace> got = all_subspaces(sp, d);
        REQUIRE(got.size() == sp.subspace_count(d));
        REQUIRE(got.size() == oracle.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(oracle.count(got[i].basis()) == 1);
            if (i) CHECK(got[i - 1] < got[i]);  // strict global lex order
        }
    }
}

TEST_CASE("lex_rank inverts enumeration order") {
    const std::vector<std::pair<ProjSpace, int>> cases = {
        {ProjSpace(3, gf(2)), 1}, {ProjSpace(2, gf(3)), 1}, {ProjSpace(3, gf(3)), 2}};
    for (const auto& [sp, d] : cases) {
        const std::vector<PivotPattern> pats = pivot_patterns(sp.vdim(), d + 1, sp.q());
        const std::vector<Subspace> all = all_subspaces(sp, d);
        for (std::size_t i = 0; i < all.size(); ++i)
            CHECK(lex_rank(sp, pats, all[i].basis()) == i);
    }
}

TEST_CASE("point streams are canonical, sorted, and complete") {
    ProjSpace sp(3, gf(3));
    const std::vector<Subspace> pts = all_points(sp);
    REQUIRE(pts.size() == 40);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        REQUIRE(pts[i].dim() == 0);
        // Canonical representative: leading coordinate is one.
        const Mat& b = pts[i].basis();
        int lead = 0;
        while (b.at(0, lead) == 0) ++lead;
        CHECK(b.at(0, lead) == 1);
        if (i) CHECK(pts[i - 1] < pts[i]);
    }
    // Scaling collapses to one representative.
    CHECK(Subspace::point(sp, {0, 2, 1, 0}) == Subspace::point(sp, {0, 1, 2, 0}));

    // Streaming over a line yields its q+1 points in order.
    const Subspace line = span(Subspace::point(sp, {1, 0, 0, 0}), Subspace::point(sp, {0, 1, 0, 0}));
    const std::vector<Subspace> on = points_of(line);
    REQUIRE(on.size() == 4);
    for (const Subspace& p : on) CHECK(line.contains(p));
    CHECK(std::is_sorted(on.begin(), on.end()));

    // Early exit stops the walk.
    int seen = 0;
    for_each_point_of(Subspace::whole(sp), [&](const felem*) { return ++seen < 7; });
    CHECK(seen == 7);
}

TEST_CASE("within and through streams match filtered enumeration") {
    ProjSpace sp(3, gf(2));
    const Subspace plane = dual(Subspace::point(sp, {1, 0, 0, 0}));
    REQUIRE(plane.dim() == 2);

    const std::vector<Subspace> inside = subspaces_within(plane, 1);
    CHECK(inside.size() == gaussian_binomial(3, 2, 2));  // 7 lines of a Fano plane
    std::vector<Subspace> expect;
    for (const Subspace& l : all_subspaces(sp, 1))
        if (plane.contains(l)) expect.push_back(l);
    CHECK(inside == expect);

    const Subspace pt = Subspace::point(sp, {1, 1, 0, 0});
    std::vector<Subspace> through = subspaces_through(pt, 1);
    CHECK(through.size() == 7);
    expect.clear();
    for (const Subspace& l : all_subspaces(sp, 1))
        if (l.contains(pt)) expect.push_back(l);
    std::sort(through.begin(), through.end());  // through-streams carry no order contract
    CHECK(through == expect);

    ProjSpace pg43(4, gf(3));
    const Subspace l0 = span(Subspace::point(pg43, {1, 0, 0, 0, 0}),
                             Subspace::point(pg43, {0, 1, 0, 0, 0}));
    CHECK(subspaces_through(l0, 2).size() == gaussian_binomial(3, 1, 3));  // 13 planes
}

TEST_CASE("span, meet, and dual satisfy the subspace-lattice identities") {
    ProjSpace sp(4, gf(3));
    Rng rng(20240817);
    for (int it = 0; it < 200; ++it) {
        const Subspace a = random_subspace(sp, static_cast<int>(rng.below(4)), rng);
        const Subspace b = random_subspace(sp, static_cast<int>(rng.below(4)), rng);
        const Subspace s = span(a, b);
        const Subspace m = meet(a, b);
        // Modular rank identity.
        CHECK(s.rank() + m.rank() == a.rank() + b.rank());
        CHECK(meet_dim(a, b) == m.dim());
        CHECK(meets(a, b) == (m.rank() > 0));
        CHECK(s.contains(a));
        CHECK(s.contains(b));
        CHECK(a.contains(m));
        CHECK(b.contains(m));
        // Duality: involution, order reversal, De Morgan.
        CHECK(dual(dual(a)) == a);
        CHECK(dual(a).rank() + a.rank() == sp.vdim());
        CHECK(a.contains(m) == dual(m).contains(dual(a)));
        CHECK(meet(dual(a), dual(b)) == dual(s));
        CHECK(span(dual(a), dual(b)) == dual(m));
    }
}

TEST_CASE("scan_subspaces returns the lex-least witness for any worker count") {
    ProjSpace sp(3, gf(3));
    const Subspace l0 = span(Subspace::point(sp, {1, 0, 0, 0}),
                             Subspace::point(sp, {0, 1, 1, 0}));
    // Find the first line disjoint from l0.
    const auto pred = [&](const Mat& m, int) {
        return meet_dim(Subspace::from_canonical(sp, m), l0) < 0;
    };
    Subspace expect;
    for (const Subspace& l : all_subspaces(sp, 1))
        if (meet_dim(l, l0) < 0) {
            expect = l;
            break;
        }
    for (int workers : {1, 2, 5}) {
        const ScanOutcome out = scan_subspaces(sp, 1, workers, pred);
        REQUIRE(out.witness.has_value());
        CHECK(Subspace::from_canonical(sp, *out.witness) == expect);
        CHECK(out.total == 130);
    }
    // An unsatisfiable predicate scans everything and reports no witness.
    const ScanOutcome none = scan_subspaces(sp, 1, 2, [](const Mat&, int) { return false; });
    CHECK_FALSE(none.witness.has_value());
    CHECK(none.scanned == 130);
}

TEST_CASE("random_subspace samples canonical subspaces roughly uniformly") {
    ProjSpace sp(3, gf(2));
    Rng rng(99);
    std::map<Mat, int, MatLess> freq;
    const int draws = 7000;
    for (int i = 0; i < draws; ++i) {
        const Subspace l = random_subspace(sp, 1, rng);
        REQUIRE(l.dim() == 1);
        // Canonical: regenerating from the basis is a no-op.
        CHECK(Subspace::from_rows(sp, l.basis()) == l);
        ++freq[l.basis()];
    }
    REQUIRE(freq.size() == 35);  // every line appears
    for (const auto& [mat, n] : freq) {
        CHECK(n > 120);  // expected 200 per line
        CHECK(n < 300);
    }
}

TEST_CASE("constructors validate their input") {
    ProjSpace sp(3, gf(2));
    CHECK_THROWS_AS(Subspace::point(sp, {0, 0, 0, 0}), Error);
    CHECK_THROWS_AS(Subspace::point(sp, {1, 0, 0}), Error);
    CHECK_THROWS_AS(ProjSpace(-1, gf(2)), Error);
    CHECK_THROWS_AS(all_subspaces(sp, 4), Error);

    ProjSpace other(3, gf(3));
    CHECK_THROWS_AS(meet(Subspace::point(sp, {1, 0, 0, 0}), Subspace::point(other, {1, 0, 0, 0})),
                    Error);

    // Dependent generating rows reduce to the true rank.
    Mat rows(3, 4);
    rows.at(0, 0) = 1;
    rows.at(1, 1) = 1;
    rows.at(2, 0) = 1;
    rows.at(2, 1) = 1;
    CHECK(Subspace::from_rows(sp, rows).dim() == 1);
}
