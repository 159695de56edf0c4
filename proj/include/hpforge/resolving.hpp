#pragma once

// Resolving sets of the point-hyperplane incidence graph of PG(N,q).  The
// graph is bipartite: one vertex per point, one per hyperplane, edges exactly
// at incident pairs.  Distances have a closed form, so the graph is never
// materialized.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "hpforge/verify.hpp"

namespace hpforge {

// --- vertices ----------------------------------------------------------------

enum class VertexKind { Point, Hyperplane };

struct IncidenceVertex {
    VertexKind kind = VertexKind::Point;
    Subspace sub;

    friend bool operator==(const IncidenceVertex& a, const IncidenceVertex& b) {
        return a.kind == b.kind && a.sub == b.sub;
    }
    friend bool operator<(const IncidenceVertex& a, const IncidenceVertex& b) {
        if (a.kind != b.kind) return a.kind < b.kind;  // points before hyperplanes
        return a.sub < b.sub;
    }
};

inline IncidenceVertex point_vertex(Subspace p) {
    if (p.dim() != 0) throw DimensionOutOfRange("point_vertex: expected a point");
    return {VertexKind::Point, std::move(p)};
}

inline IncidenceVertex hyperplane_vertex(Subspace h) {
    if (h.dim() != h.space().n - 1)
        throw DimensionOutOfRange("hyperplane_vertex: expected a hyperplane");
    return {VertexKind::Hyperplane, std::move(h)};
}

// Closed-form graph metric: 0 for equal vertices, 1 for incident pairs, 2 for
// distinct vertices of the same kind (two points always share a hyperplane,
// two hyperplanes always share a point when N >= 2), 3 for non-incident pairs.
inline int graph_distance(const IncidenceVertex& u, const IncidenceVertex& v) {
    require_same_space(u.sub.space(), v.sub.space());
    if (u.sub.space().n < 2)
        throw ArgumentOutOfRange("graph_distance: incidence graph needs N >= 2");
    if (u.kind == v.kind) return u.sub == v.sub ? 0 : 2;
    const Subspace& point = u.kind == VertexKind::Point ? u.sub : v.sub;
    const Subspace& hyp = u.kind == VertexKind::Point ? v.sub : u.sub;
    return hyp.contains_row(point.basis().row(0)) ? 1 : 3;
}

// --- resolving checks --------------------------------------------------------

struct ResolvingReport {
    bool resolving = false;
    std::optional<std::pair<IncidenceVertex, IncidenceVertex>> collision;
    std::uint64_t vertex_count = 0;
};

namespace detail {

inline std::vector<IncidenceVertex> all_incidence_vertices(const ProjSpace& sp) {
    std::vector<IncidenceVertex> out;
    out.reserve(2 * sp.point_count());
    for (Subspace& p : all_points(sp)) out.push_back({VertexKind::Point, std::move(p)});
    for (Subspace& h : all_subspaces(sp, sp.n - 1))
        out.push_back({VertexKind::Hyperplane, std::move(h)});
    return out;
}

// Distance vector to S, packed two bits per entry.
inline std::vector<std::uint64_t> distance_key(const IncidenceVertex& v,
                                               const std::vector<IncidenceVertex>& s) {
    std::vector<std::uint64_t> key((s.size() + 31) / 32, 0);
    for (std::size_t i = 0; i < s.size(); ++i)
        key[i / 32] |= static_cast<std::uint64_t>(graph_distance(v, s[i])) << (2 * (i % 32));
    return key;
}

}  // namespace detail

// Checks whether S resolves the incidence graph: every vertex must have a
// distinct vector of distances to the members of S.  Returns the first
// colliding pair (in point-then-hyperplane lexicographic vertex order)
// otherwise.
inline ResolvingReport is_resolving(const ProjSpace& sp,
                                    const std::vector<IncidenceVertex>& s) {
    if (sp.n < 2) throw ArgumentOutOfRange("is_resolving: incidence graph needs N >= 2");
    if (sp.point_count() > (std::uint64_t{1} << 20))
        throw BudgetExceeded("is_resolving: graph above 2^21 vertices");
    for (const IncidenceVertex& v : s) require_same_space(sp, v.sub.space());

    const std::vector<IncidenceVertex> verts = detail::all_incidence_vertices(sp);
    ResolvingReport rep;
    rep.vertex_count = verts.size();
    std::map<std::vector<std::uint64_t>, std::size_t> seen;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        auto [it, inserted] = seen.emplace(detail::distance_key(verts[i], s), i);
        if (!inserted) {
            rep.collision = {verts[it->second], verts[i]};
            return rep;
        }
    }
    rep.resolving = true;
    return rep;
}

// --- resolving sets from higgledy-piggledy line arrangements ------------------

struct LineResolvingSet {
    std::vector<IncidenceVertex> vertices;  // point half then hyperplane half
    std::vector<Subspace> picks;            // the removed point of each line
    std::uint64_t m = 0;                    // punctured points (half the size)
    int augmentations = 0;                  // greedy additions needed (0 expected)
    ResolvingReport report;
};

// Candidate resolving set of size 2m from a line arrangement whose union
// blocks every hyperplane in a spanning set: remove one pick per line, keep
// the m remaining covered points as point-vertices, and add the m hyperplanes
// whose normal vectors are those same points.  The hyperplane half is the
// same punctured construction applied to the coordinate-identical line family
// of the dual space, where each such point names a hyperplane.  The candidate
// is then checked; if it fails to resolve, vertices that best split the
// largest collision class are added greedily and counted.
inline LineResolvingSet resolving_from_lines(const Arrangement& arr,
                                             std::vector<Subspace> picks = {}) {
    const ProjSpace& sp = arr.space;
    if (arr.k != 1) throw ArgumentOutOfRange("resolving_from_lines: expected lines");
    if (sp.n < 2) throw ArgumentOutOfRange("resolving_from_lines: needs N >= 2");
    const std::size_t lines = arr.elements.size();
    if (lines == 0) throw ArgumentOutOfRange("resolving_from_lines: empty arrangement");

    const auto on_other_line = [&](const felem* v, std::size_t i) {
        for (std::size_t j = 0; j < lines; ++j)
            if (j != i && arr.elements[j].contains_row(v)) return true;
        return false;
    };

    if (picks.empty()) {
        for (std::size_t i = 0; i < lines; ++i) {
            std::optional<Subspace> pick;
            for_each_point_of(arr.elements[i], [&](const felem* v) {
                if (on_other_line(v, i)) return true;
                pick = Subspace::point(sp, std::vector<felem>(v, v + sp.vdim()));
                return false;
            });
            if (!pick)
                throw InvalidPicks("resolving_from_lines: a line has no private point");
            picks.push_back(std::move(*pick));
        }
    } else {
        if (picks.size() != lines)
            throw InvalidPicks("resolving_from_lines: need one pick per line");
        for (std::size_t i = 0; i < lines; ++i) {
            require_same_space(sp, picks[i].space());
            if (picks[i].dim() != 0) throw InvalidPicks("resolving_from_lines: picks must be points");
            if (!arr.elements[i].contains(picks[i]))
                throw InvalidPicks("resolving_from_lines: pick not on its line");
            if (on_other_line(picks[i].basis().row(0), i))
                throw InvalidPicks("resolving_from_lines: pick lies on another line");
        }
    }

    LineResolvingSet out;
    out.picks = picks;
    std::set<Subspace> punctured;
    for (std::size_t i = 0; i < lines; ++i)
        for_each_point_of(arr.elements[i], [&](const felem* v) {
            Subspace p = Subspace::point(sp, std::vector<felem>(v, v + sp.vdim()));
            if (!(p == picks[i])) punctured.insert(std::move(p));
            return true;
        });
    out.m = punctured.size();
    if (out.m != coverage(arr).points.size() - lines)
        throw Error("resolving_from_lines: puncture count disagrees with coverage");

    for (const Subspace& p : punctured) out.vertices.push_back({VertexKind::Point, p});
    std::set<Subspace> normals;
    for (const Subspace& p : punctured) normals.insert(dual(p));
    for (const Subspace& h : normals) out.vertices.push_back({VertexKind::Hyperplane, h});

    out.report = is_resolving(sp, out.vertices);
    while (!out.report.resolving) {
        // group all vertices by their distance vectors and split the largest class
        const std::vector<IncidenceVertex> verts = detail::all_incidence_vertices(sp);
        std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> classes;
        for (std::size_t i = 0; i < verts.size(); ++i)
            classes[detail::distance_key(verts[i], out.vertices)].push_back(i);
        const std::vector<std::size_t>* largest = nullptr;
        for (const auto& [key, members] : classes)
            if (!largest || members.size() > largest->size()) largest = &members;

        std::set<IncidenceVertex> in_set(out.vertices.begin(), out.vertices.end());
        std::size_t best = verts.size();
        std::size_t best_split = 1;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            if (in_set.count(verts[i])) continue;
            std::set<int> values;
            for (std::size_t u : *largest) values.insert(graph_distance(verts[u], verts[i]));
            if (values.size() > best_split) {
                best_split = values.size();
                best = i;
            }
        }
        if (best == verts.size())
            throw Error("resolving_from_lines: no vertex splits the largest class");
        out.vertices.push_back(verts[best]);
        ++out.augmentations;
        out.report = is_resolving(sp, out.vertices);
    }
    return out;
}

}  // namespace hpforge
