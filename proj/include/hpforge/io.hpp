#pragma once

// JSON serialization for every artifact kind (schema "hpforge/1"): fields in
// tower form, arrangements with provenance and optional certificate, codes,
// resolving sets, search templates, and the analysis reports.  Field elements
// are always canonical integer indices; matrices are row-major row lists.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hpforge/codes.hpp"
#include "hpforge/resolving.hpp"
#include "hpforge/search.hpp"

namespace hpforge {

using njson = nlohmann::ordered_json;

struct ParseError : Error {
    using Error::Error;
};

inline constexpr const char* kSchema = "hpforge/1";

// --- helpers -----------------------------------------------------------------

namespace detail {

inline const njson& need(const njson& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing key: ") + key);
    return *it;
}

inline void check_schema(const njson& j, const char* type) {
    if (j.value("schema", "") != kSchema)
        throw ParseError("unsupported schema (want hpforge/1)");
    if (j.value("type", "") != type)
        throw ParseError(std::string("wrong artifact type (want ") + type + ")");
}

}  // namespace detail

inline njson mat_to_json(const Mat& m) {
    njson rows = njson::array();
    for (int i = 0; i < m.rows; ++i) {
        njson row = njson::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Mat mat_from_json(const njson& j, int cols) {
    if (!j.is_array()) throw ParseError("matrix: expected an array of rows");
    Mat m(static_cast<int>(j.size()), cols);
    for (int i = 0; i < m.rows; ++i) {
        const njson& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ParseError("matrix: ragged or wrongly sized row");
        for (int c = 0; c < cols; ++c)
            m.at(i, c) = row[static_cast<std::size_t>(c)].get<felem>();
    }
    return m;
}

// --- fields ------------------------------------------------------------------

inline njson field_to_json(const Field& f) {
    njson j;
    j["characteristic"] = f.characteristic();
    j["tower"] = f.tower_degrees();
    j["order"] = f.order();
    njson moduli = njson::array();
    for (const std::vector<felem>& m : f.tower_moduli()) moduli.push_back(m);
    j["moduli"] = std::move(moduli);
    return j;
}

inline FieldPtr field_from_json(const njson& j) {
    const std::uint64_t p = detail::need(j, "characteristic").get<std::uint64_t>();
    const std::vector<unsigned> tower =
        detail::need(j, "tower").get<std::vector<unsigned>>();
    FieldPtr f;
    try {
        f = cached_field(p, tower);
    } catch (const Error& e) {
        throw ParseError(std::string("bad field block: ") + e.what());
    }
    if (j.contains("order") && j["order"].get<std::uint64_t>() != f->order())
        throw ParseError("field block: order disagrees with characteristic and tower");
    if (j.contains("moduli")) {
        std::vector<std::vector<felem>> m = j["moduli"].get<std::vector<std::vector<felem>>>();
        if (m != f->tower_moduli())
            throw ParseError("field block: moduli disagree with the canonical tower");
    }
    return f;
}

// --- certificates ------------------------------------------------------------

// elapsed_ms is deliberately not serialized: identical invocations must
// produce bit-identical artifact files.
inline njson certificate_to_json(const Certificate& c) {
    njson j;
    j["verdict"] = c.verdict == Verdict::HigPig ? "higgledy-piggledy" : "not-higgledy-piggledy";
    j["method"] = c.method == ScanMethod::StrongBlockingScan ? "strong-blocking-scan"
                                                             : "transversal-scan";
    j["witness"] = c.witness ? mat_to_json(c.witness->basis()) : njson();
    j["covered_points"] = c.covered_points;
    j["intersection_dims"] = c.intersection_dims;
    j["scanned"] = c.scanned;
    j["notes"] = c.notes;
    return j;
}

inline Certificate certificate_from_json(const njson& j, const ProjSpace& sp) {
    Certificate c;
    const std::string verdict = detail::need(j, "verdict").get<std::string>();
    if (verdict == "higgledy-piggledy")
        c.verdict = Verdict::HigPig;
    else if (verdict == "not-higgledy-piggledy")
        c.verdict = Verdict::NotHigPig;
    else
        throw ParseError("certificate: unknown verdict");
    const std::string method = detail::need(j, "method").get<std::string>();
    if (method == "strong-blocking-scan")
        c.method = ScanMethod::StrongBlockingScan;
    else if (method == "transversal-scan")
        c.method = ScanMethod::TransversalScan;
    else
        throw ParseError("certificate: unknown method");
    if (j.contains("witness") && !j["witness"].is_null())
        c.witness = Subspace::from_rows(sp, mat_from_json(j["witness"], sp.vdim()));
    c.covered_points = j.value("covered_points", std::uint64_t{0});
    if (j.contains("intersection_dims"))
        c.intersection_dims = j["intersection_dims"].get<std::vector<std::vector<int>>>();
    c.scanned = j.value("scanned", std::uint64_t{0});
    c.notes = j.value("notes", std::string{});
    return c;
}

// --- arrangements ------------------------------------------------------------

inline njson arrangement_to_json(const Arrangement& arr,
                                 const Certificate* cert = nullptr) {
    njson j;
    j["schema"] = kSchema;
    j["type"] = "arrangement";
    j["field"] = field_to_json(*arr.space.field);
    j["N"] = arr.space.n;
    j["k"] = arr.k;
    njson elems = njson::array();
    for (const Subspace& e : arr.elements) elems.push_back(mat_to_json(e.basis()));
    j["elements"] = std::move(elems);
    j["provenance"] = {{"construction", arr.provenance.construction},
                       {"q", arr.provenance.q},
                       {"seed", arr.provenance.seed},
                       {"choices", arr.provenance.choices}};
    if (cert) j["certificate"] = certificate_to_json(*cert);
    return j;
}

struct LoadedArrangement {
    Arrangement arrangement;
    std::optional<Certificate> certificate;
};

inline LoadedArrangement arrangement_from_json(const njson& j) {
    detail::check_schema(j, "arrangement");
    FieldPtr f = field_from_json(detail::need(j, "field"));
    ProjSpace sp(detail::need(j, "N").get<int>(), f);
    const int k = detail::need(j, "k").get<int>();
    std::vector<Subspace> elems;
    for (const njson& e : detail::need(j, "elements"))
        elems.push_back(Subspace::from_rows(sp, mat_from_json(e, sp.vdim())));
    Provenance prov;
    if (j.contains("provenance")) {
        const njson& p = j["provenance"];
        prov.construction = p.value("construction", std::string{});
        prov.q = p.value("q", std::uint64_t{0});
        prov.seed = p.value("seed", std::uint64_t{0});
        if (p.contains("choices")) prov.choices = p["choices"].get<std::vector<std::uint64_t>>();
    }
    LoadedArrangement out{Arrangement(sp, k, std::move(elems), std::move(prov)), std::nullopt};
    if (j.contains("certificate") && !j["certificate"].is_null())
        out.certificate = certificate_from_json(j["certificate"], sp);
    return out;
}

// --- codes -------------------------------------------------------------------

inline njson code_to_json(const LinearCode& c) {
    njson j;
    j["schema"] = kSchema;
    j["type"] = "code";
    j["q"] = c.field->order();
    j["field"] = field_to_json(*c.field);
    j["generator"] = mat_to_json(c.gen);
    j["parity"] = mat_to_json(c.parity);
    return j;
}

inline LinearCode code_from_json(const njson& j) {
    detail::check_schema(j, "code");
    FieldPtr f = j.contains("field") ? field_from_json(j["field"])
                                     : gf(detail::need(j, "q").get<std::uint64_t>());
    const njson& gen = detail::need(j, "generator");
    const njson& par = detail::need(j, "parity");
    int n = -1;
    if (gen.is_array() && !gen.empty()) n = static_cast<int>(gen[0].size());
    if (n < 0 && par.is_array() && !par.empty()) n = static_cast<int>(par[0].size());
    if (n < 0) throw ParseError("code: neither generator nor parity rows present");
    if (!gen.empty()) return code_from_generator(f, mat_from_json(gen, n));
    return code_from_parity(f, mat_from_json(par, n));
}

// --- resolving sets ----------------------------------------------------------

// A hyperplane vertex is stored by its normal vector (the coordinates of its
// dual point), keeping both kinds on the same {"kind","coords"} shape.
inline njson resolving_set_to_json(const ProjSpace& sp,
                                   const std::vector<IncidenceVertex>& verts) {
    njson j;
    j["schema"] = kSchema;
    j["type"] = "resolving-set";
    j["field"] = field_to_json(*sp.field);
    j["N"] = sp.n;
    njson list = njson::array();
    for (const IncidenceVertex& v : verts) {
        const Subspace pt = v.kind == VertexKind::Point ? v.sub : dual(v.sub);
        njson e;
        e["kind"] = v.kind == VertexKind::Point ? "point" : "hyperplane";
        njson coords = njson::array();
        for (int c = 0; c < sp.vdim(); ++c) coords.push_back(pt.basis().at(0, c));
        e["coords"] = std::move(coords);
        list.push_back(std::move(e));
    }
    j["vertices"] = std::move(list);
    return j;
}

struct LoadedResolvingSet {
    ProjSpace space;
    std::vector<IncidenceVertex> vertices;
};

inline LoadedResolvingSet resolving_set_from_json(const njson& j) {
    detail::check_schema(j, "resolving-set");
    FieldPtr f = field_from_json(detail::need(j, "field"));
    ProjSpace sp(detail::need(j, "N").get<int>(), f);
    LoadedResolvingSet out{sp, {}};
    for (const njson& e : detail::need(j, "vertices")) {
        const std::string kind = detail::need(e, "kind").get<std::string>();
        Subspace pt = Subspace::point(sp, detail::need(e, "coords").get<std::vector<felem>>());
        if (kind == "point")
            out.vertices.push_back(point_vertex(std::move(pt)));
        else if (kind == "hyperplane")
            out.vertices.push_back(hyperplane_vertex(dual(pt)));
        else
            throw ParseError("resolving-set: unknown vertex kind");
    }
    return out;
}

// --- search templates --------------------------------------------------------

inline njson template_to_json(const SearchTemplate& t) {
    njson j;
    j["schema"] = kSchema;
    j["type"] = "search-template";
    j["q"] = t.q;
    j["N"] = t.N;
    j["k"] = t.k;
    j["cardinality"] = t.cardinality;
    njson cons = njson::array();
    for (const Constraint& c : t.constraints) {
        njson e;
        switch (c.kind) {
            case ConstraintKind::PairShares:
                e["type"] = "pair_shares";
                e["dim"] = c.share_dim;
                break;
            case ConstraintKind::AllFromSpread:
                e["type"] = "all_from_spread";
                e["small_n"] = c.spread_small_n;
                break;
            case ConstraintKind::PairwiseDisjoint:
                e["type"] = "pairwise_disjoint";
                break;
            case ConstraintKind::FixedElements: {
                e["type"] = "fixed_elements";
                njson elems = njson::array();
                for (const Subspace& s : c.fixed) elems.push_back(mat_to_json(s.basis()));
                e["elements"] = std::move(elems);
                break;
            }
        }
        cons.push_back(std::move(e));
    }
    j["constraints"] = std::move(cons);
    j["method"] = t.method == VerifyMethod::Auto
                      ? "auto"
                      : (t.method == VerifyMethod::Strong ? "strong" : "transversal");
    j["budget"] = t.budget;
    j["seed"] = t.master_seed;
    return j;
}

inline SearchTemplate template_from_json(const njson& j) {
    detail::check_schema(j, "search-template");
    SearchTemplate t;
    t.q = detail::need(j, "q").get<std::uint64_t>();
    t.N = detail::need(j, "N").get<int>();
    t.k = detail::need(j, "k").get<int>();
    t.cardinality = detail::need(j, "cardinality").get<int>();
    ProjSpace sp(t.N, gf(t.q));
    for (const njson& e : detail::need(j, "constraints")) {
        const std::string type = detail::need(e, "type").get<std::string>();
        if (type == "pair_shares")
            t.constraints.push_back(Constraint::pair_shares(detail::need(e, "dim").get<int>()));
        else if (type == "all_from_spread")
            t.constraints.push_back(
                Constraint::all_from_spread(detail::need(e, "small_n").get<int>()));
        else if (type == "pairwise_disjoint")
            t.constraints.push_back(Constraint::pairwise_disjoint());
        else if (type == "fixed_elements") {
            std::vector<Subspace> elems;
            for (const njson& s : detail::need(e, "elements"))
                elems.push_back(Subspace::from_rows(sp, mat_from_json(s, sp.vdim())));
            t.constraints.push_back(Constraint::fixed_elements(std::move(elems)));
        } else {
            throw ParseError("search-template: unknown constraint type");
        }
    }
    const std::string method = j.value("method", "auto");
    if (method == "auto")
        t.method = VerifyMethod::Auto;
    else if (method == "strong")
        t.method = VerifyMethod::Strong;
    else if (method == "transversal")
        t.method = VerifyMethod::Transversal;
    else
        throw ParseError("search-template: unknown method");
    t.budget = j.value("budget", std::uint64_t{1'000'000});
    t.master_seed = j.value("seed", std::uint64_t{1});
    return t;
}

// --- reports -----------------------------------------------------------------

inline njson minimality_to_json(const MinimalityReport& r) {
    njson j;
    j["minimal"] = r.minimal;
    j["classes"] = r.classes;
    j["pairs_tested"] = r.pairs_tested;
    if (r.witness) {
        j["witness"] = {{"dominated", r.witness->first}, {"dominating", r.witness->second}};
    } else {
        j["witness"] = njson();
    }
    return j;
}

inline njson covering_radius_to_json(const CoveringRadiusReport& r) {
    njson j;
    j["radius"] = r.radius;
    j["syndromes"] = r.syndromes;
    j["layer_sizes"] = r.layer_sizes;
    return j;
}

inline njson saturation_to_json(const SaturationReport& r) {
    njson j;
    j["saturated"] = r.saturated;
    j["rho"] = r.rho;
    j["points_total"] = r.points_total;
    j["subsets_examined"] = r.subsets_examined;
    j["unsaturated_witness"] = r.unsaturated ? mat_to_json(r.unsaturated->basis()) : njson();
    return j;
}

inline njson bounds_to_json(const BoundsTable& t) {
    njson j;
    j["schema"] = kSchema;
    j["type"] = "bounds-table";
    j["q"] = t.q;
    njson rows = njson::array();
    for (const BoundRow& r : t.rows) {
        njson e;
        e["quantity"] = r.quantity;
        e["relation"] = r.relation;
        e["value"] = r.value;
        e["source"] = r.source;
        if (!r.attachment.empty()) e["attachment"] = r.attachment;
        rows.push_back(std::move(e));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline std::string bounds_to_text(const BoundsTable& t) {
    std::string out = "bounds at q = " + std::to_string(t.q) + "\n";
    std::size_t wq = 0, wv = 0;
    for (const BoundRow& r : t.rows) {
        wq = std::max(wq, r.quantity.size());
        wv = std::max(wv, std::to_string(r.value).size());
    }
    for (const BoundRow& r : t.rows) {
        std::string line = "  " + r.quantity + std::string(wq - r.quantity.size(), ' ') + " " +
                           r.relation + (r.relation.size() < 2 ? " " : "") + " ";
        const std::string v = std::to_string(r.value);
        line += std::string(wv - v.size(), ' ') + v + "   " + r.source;
        if (!r.attachment.empty()) line += "  [" + r.attachment + "]";
        out += line + "\n";
    }
    return out;
}

inline njson resolving_report_to_json(const ResolvingReport& r, const ProjSpace& sp) {
    njson j;
    j["resolving"] = r.resolving;
    j["vertex_count"] = r.vertex_count;
    if (r.collision) {
        const auto vertex_json = [&](const IncidenceVertex& v) {
            const Subspace pt = v.kind == VertexKind::Point ? v.sub : dual(v.sub);
            njson e;
            e["kind"] = v.kind == VertexKind::Point ? "point" : "hyperplane";
            njson coords = njson::array();
            for (int c = 0; c < sp.vdim(); ++c) coords.push_back(pt.basis().at(0, c));
            e["coords"] = std::move(coords);
            return e;
        };
        j["collision"] = {vertex_json(r.collision->first), vertex_json(r.collision->second)};
    } else {
        j["collision"] = njson();
    }
    return j;
}

}  // namespace hpforge
