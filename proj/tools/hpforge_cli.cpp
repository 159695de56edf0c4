// Command-line surface: verify arrangements, run constructions and searches,
// analyze codes, build resolving sets, and regenerate the desk-scale claims.
// Exit codes: 0 success (property holds), 1 property failure or exhausted
// search budget, 2 input error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <hpforge/hpforge.hpp>

namespace {

using namespace hpforge;

njson read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return njson::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad JSON in " + path + ": " + e.what());
    }
}

void emit(const njson& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ParseError("cannot write " + out_path);
    out << j.dump(2) << "\n";
}

VerifyMethod parse_method(const std::string& m) {
    if (m == "auto") return VerifyMethod::Auto;
    if (m == "strong") return VerifyMethod::Strong;
    if (m == "transversal") return VerifyMethod::Transversal;
    throw ParseError("unknown method: " + m);
}

// --- verify ------------------------------------------------------------------

int cmd_verify(const std::string& path, const std::string& method, int workers) {
    LoadedArrangement la = arrangement_from_json(read_json_file(path));
    Certificate cert = is_higgledy_piggledy(la.arrangement, parse_method(method), workers);
    std::cout << certificate_to_json(cert).dump(2) << "\n";
    std::cerr << "elapsed: " << cert.elapsed_ms << " ms, scanned " << cert.scanned << "\n";
    return cert.verdict == Verdict::HigPig ? 0 : 1;
}

// --- construct ---------------------------------------------------------------

int cmd_construct(const std::string& name, std::uint64_t q, std::uint64_t seed,
                  std::uint64_t budget, unsigned m, int workers, const std::string& out) {
    if (name == "subline_triples") {
        auto triple = subline_triples_search(q, m);
        njson j;
        j["schema"] = kSchema;
        j["type"] = "subline-triples";
        j["q"] = q;
        j["m"] = m;
        j["exists"] = triple.has_value();
        if (triple) {
            njson list = njson::array();
            for (const Subline& s : *triple) {
                njson pts = njson::array();
                for (const Subspace& p : s.points) pts.push_back(mat_to_json(p.basis()));
                list.push_back(std::move(pts));
            }
            j["triple"] = std::move(list);
        }
        emit(j, out);
        return 0;  // exhaustive either way: existence and nonexistence are both answers
    }
    if (name == "seven_planes_spread") {
        auto found = seven_planes_spread_search(q, workers, budget, seed);
        if (!found) {
            njson j{{"schema", kSchema}, {"type", "search-exhaustion"}, {"trials", budget}};
            emit(j, out);
            return 1;
        }
        emit(arrangement_to_json(found->arrangement, &found->certificate), out);
        return 0;
    }

    Constructed c;
    if (name == "pg3_four_lines") {
        c = construct_pg3_four_lines(q, workers);
    } else if (name == "pg4_six_lines") {
        c = construct_pg4_six_lines(q, workers, budget, seed);
    } else if (name == "pg4_six_planes") {
        c = construct_pg4_six_planes(q, workers, budget, seed);
    } else if (name == "pg5_seven_lines") {
        c = construct_pg5_seven_lines(q, workers, budget, seed);
    } else if (name == "pg5_seven_solids") {
        c = construct_pg5_seven_solids(q, workers, budget, seed);
    } else if (name == "pg5_eight_planes") {
        c = construct_pg5_eight_planes(q, workers, budget, seed);
    } else if (name == "tetrahedron") {
        c = tetrahedron(ProjSpace(3, gf(q)), workers);
    } else {
        throw ParseError("unknown construction name: " + name);
    }
    emit(arrangement_to_json(c.arrangement, &c.certificate), out);
    return 0;
}

// --- search ------------------------------------------------------------------

int cmd_search(const std::string& path, bool seed_set, std::uint64_t seed, int workers,
               const std::string& out) {
    SearchTemplate t = template_from_json(read_json_file(path));
    if (seed_set) t.master_seed = seed;
    SearchOutcome o = run_search(t, workers);
    if (!o.found) {
        njson j{{"schema", kSchema}, {"type", "search-exhaustion"}, {"trials", o.trials}};
        emit(j, out);
        return 1;
    }
    njson j = arrangement_to_json(o.found->arrangement, &o.found->certificate);
    j["search"] = {{"winning_trial", o.winning_trial},
                   {"winning_seed", o.winning_seed},
                   {"trials", o.trials}};
    emit(j, out);
    return 0;
}

// --- codes -------------------------------------------------------------------

LinearCode load_code_or_coverage(const njson& j) {
    const std::string type = j.value("type", "");
    if (type == "code") return code_from_json(j);
    if (type == "arrangement") {
        LoadedArrangement la = arrangement_from_json(j);
        return code_from_points(la.arrangement.space, coverage(la.arrangement).points);
    }
    if (type == "saturation-report" && j.contains("code") && !j["code"].is_null())
        return code_from_json(j["code"]);
    throw ParseError("expected a code or arrangement artifact");
}

int cmd_codes_minimality(const std::string& path, const std::string& out) {
    LinearCode code = load_code_or_coverage(read_json_file(path));
    MinimalityReport rep = is_minimal_code(code);
    njson j = minimality_to_json(rep);
    j["length"] = code.length();
    j["dim"] = code.dim();
    emit(j, out);
    return rep.minimal ? 0 : 1;
}

int cmd_codes_covering_radius(const std::string& path, const std::string& out) {
    LinearCode code = load_code_or_coverage(read_json_file(path));
    CoveringRadiusReport rep = covering_radius_detail(code);
    njson j = covering_radius_to_json(rep);
    j["length"] = code.length();
    j["redundancy"] = code.redundancy();
    emit(j, out);
    return 0;
}

int cmd_codes_saturating(const std::string& path, int rho, bool embed,
                         const std::string& out) {
    LoadedArrangement la = arrangement_from_json(read_json_file(path));
    if (embed) {
        EmbedCheck ec = embed_and_check(la.arrangement);
        njson j;
        j["schema"] = kSchema;
        j["type"] = "saturation-report";
        j.update(saturation_to_json(ec.report));
        j["ambient_q"] = ec.ambient.q();
        // Attach the code whose parity columns are the embedded points, so the
        // output can be fed straight into `codes covering-radius`.
        j["code"] = code_to_json(covering_code_from_points(ec.ambient, ec.points));
        emit(j, out);
        return ec.report.saturated ? 0 : 1;
    }
    if (rho < 0) throw ParseError("saturating: need --rho (or --embed)");
    std::vector<Subspace> pts;
    for (const std::vector<felem>& row : coverage(la.arrangement).points)
        pts.push_back(Subspace::point(la.arrangement.space, row));
    SaturationReport rep = is_saturating(la.arrangement.space, pts, rho);
    njson j;
    j["schema"] = kSchema;
    j["type"] = "saturation-report";
    j.update(saturation_to_json(rep));
    emit(j, out);
    return rep.saturated ? 0 : 1;
}

int cmd_codes_bounds(std::uint64_t q, bool attach, bool text, int workers,
                     const std::string& out) {
    BoundsTable t = bounds_report(q, attach, workers);
    if (text) {
        if (out.empty()) {
            std::cout << bounds_to_text(t);
        } else {
            std::ofstream f(out);
            if (!f) throw ParseError("cannot write " + out);
            f << bounds_to_text(t);
        }
        return 0;
    }
    emit(bounds_to_json(t), out);
    return 0;
}

// --- resolve -----------------------------------------------------------------

int cmd_resolve(const std::string& path, bool check_only, const std::string& out) {
    njson j = read_json_file(path);
    if (check_only || j.value("type", "") == "resolving-set") {
        LoadedResolvingSet s = resolving_set_from_json(j);
        ResolvingReport rep = is_resolving(s.space, s.vertices);
        emit(resolving_report_to_json(rep, s.space), out);
        return rep.resolving ? 0 : 1;
    }
    LoadedArrangement la = arrangement_from_json(j);
    LineResolvingSet rs = resolving_from_lines(la.arrangement);
    njson o = resolving_set_to_json(la.arrangement.space, rs.vertices);
    o["m"] = rs.m;
    o["augmentations"] = rs.augmentations;
    o["report"] = resolving_report_to_json(rs.report, la.arrangement.space);
    emit(o, out);
    return rs.report.resolving && rs.augmentations == 0 ? 0 : 1;
}

// --- report ------------------------------------------------------------------

struct Row {
    std::string name;
    bool pass = false;
    std::string detail;
    double ms = 0;
};

template <class F>
Row run_row(const std::string& name, F&& body) {
    Row r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        std::pair<bool, std::string> res = body();
        r.pass = res.first;
        r.detail = std::move(res.second);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = e.what();
    }
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
               .count();
    std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.ms << " ms) "
              << r.detail << "\n";
    return r;
}

bool pairwise_disjoint(const Coverage& cov) {
    for (std::size_t i = 0; i < cov.pair_dims.size(); ++i)
        for (std::size_t j = i + 1; j < cov.pair_dims.size(); ++j)
            if (cov.pair_dims[i][j] >= 0) return false;
    return true;
}

int meeting_pairs(const Coverage& cov) {
    int n = 0;
    for (std::size_t i = 0; i < cov.pair_dims.size(); ++i)
        for (std::size_t j = i + 1; j < cov.pair_dims.size(); ++j)
            if (cov.pair_dims[i][j] >= 0) ++n;
    return n;
}

std::vector<Row> report_rows(std::uint64_t q, int workers, const std::string& dir) {
    std::vector<Row> rows;
    const std::string qs = std::to_string(q);
    std::map<std::string, Constructed> memo;
    const auto get = [&](const std::string& key,
                         const std::function<Constructed()>& build) -> const Constructed& {
        auto it = memo.find(key);
        if (it == memo.end()) {
            it = memo.emplace(key, build()).first;
            if (!dir.empty())
                emit(arrangement_to_json(it->second.arrangement, &it->second.certificate),
                     dir + "/" + key + "_q" + qs + ".json");
        }
        return it->second;
    };

    rows.push_back(run_row("pg3_four_lines q=" + qs, [&] {
        const Constructed& c =
            get("pg3_four_lines", [&] { return construct_pg3_four_lines(q, workers); });
        const Coverage cov = coverage(c.arrangement);
        const bool ok = c.certificate.verdict == Verdict::HigPig && pairwise_disjoint(cov) &&
                        cov.points.size() == 4 * (q + 1);
        return std::pair{ok, "coverage " + std::to_string(cov.points.size())};
    }));

    rows.push_back(run_row("pg4_six_lines q=" + qs, [&] {
        const Constructed& c =
            get("pg4_six_lines", [&] { return construct_pg4_six_lines(q, workers); });
        const Coverage cov = coverage(c.arrangement);
        const bool ok = c.certificate.verdict == Verdict::HigPig &&
                        meeting_pairs(cov) == 1 && cov.points.size() == 6 * q + 5;
        return std::pair{ok, "coverage " + std::to_string(cov.points.size()) + ", " +
                                 std::to_string(meeting_pairs(cov)) + " meeting pair"};
    }));

    if (q <= 5 || q >= 7)
        rows.push_back(run_row("pg4_six_planes q=" + qs, [&] {
            const Constructed& c =
                get("pg4_six_planes", [&] { return construct_pg4_six_planes(q, workers); });
            const Coverage cov = coverage(c.arrangement);
            bool shares_line = false;
            for (std::size_t i = 0; i < cov.pair_dims.size(); ++i)
                for (std::size_t j = i + 1; j < cov.pair_dims.size(); ++j)
                    if (cov.pair_dims[i][j] == 1) shares_line = true;
            const bool ok = c.certificate.verdict == Verdict::HigPig && shares_line;
            return std::pair{ok, "two planes share a line"};
        }));

    if (q <= 3 || q >= 7)
        rows.push_back(run_row("pg5_eight_planes q=" + qs, [&] {
            const Constructed& c =
                get("pg5_eight_planes", [&] { return construct_pg5_eight_planes(q, workers); });
            const Coverage cov = coverage(c.arrangement);
            const bool ok = c.certificate.verdict == Verdict::HigPig &&
                            pairwise_disjoint(cov) &&
                            cov.points.size() == 8 * (q * q + q + 1);
            return std::pair{ok, "coverage " + std::to_string(cov.points.size())};
        }));

    if (q == 2)
        rows.push_back(run_row("pg5_seven_lines q=2", [&] {
            const Constructed& c =
                get("pg5_seven_lines", [&] { return construct_pg5_seven_lines(q, workers); });
            const Coverage cov = coverage(c.arrangement);
            const bool ok = c.certificate.verdict == Verdict::HigPig &&
                            pairwise_disjoint(cov) && cov.points.size() == 7 * (q + 1);
            return std::pair{ok, "seven disjoint lines"};
        }));

    if (q >= 7)
        rows.push_back(run_row("pg5_seven_solids q=" + qs, [&] {
            const Constructed& c =
                get("pg5_seven_solids", [&] { return construct_pg5_seven_solids(q, workers); });
            std::vector<Subspace> cut;
            bool dims_ok = true;
            const std::vector<Subspace>& e = c.arrangement.elements;
            for (std::size_t i = 0; i < e.size(); ++i)
                for (std::size_t j = i + 1; j < e.size(); ++j) {
                    Subspace m = meet(e[i], e[j]);
                    dims_ok = dims_ok && m.dim() == 1;
                    cut.push_back(std::move(m));
                }
            bool lines_disjoint = true;
            for (std::size_t i = 0; i < cut.size(); ++i)
                for (std::size_t j = i + 1; j < cut.size(); ++j)
                    lines_disjoint = lines_disjoint && !meets(cut[i], cut[j]);
            const bool ok =
                c.certificate.verdict == Verdict::HigPig && dims_ok && lines_disjoint;
            return std::pair{ok, "pairwise meets are pairwise disjoint lines"};
        }));

    if (q <= 5)
        rows.push_back(run_row("seven_planes_spread q=" + qs, [&] {
            auto found = seven_planes_spread_search(q, workers);
            if (!found) return std::pair{false, std::string("budget exhausted")};
            const Coverage cov = coverage(found->arrangement);
            if (!dir.empty())
                emit(arrangement_to_json(found->arrangement, &found->certificate),
                     dir + "/seven_planes_spread_q" + qs + ".json");
            const bool ok =
                found->certificate.verdict == Verdict::HigPig && pairwise_disjoint(cov);
            return std::pair{ok, std::string("seven disjoint spread planes")};
        }));

    if (q == 3 || q == 4) {
        rows.push_back(run_row("subline_triples (q=" + qs + ", m=2)", [&] {
            auto t = subline_triples_search(q, 2);
            return std::pair{t.has_value(), std::string(t ? "triple found" : "none found")};
        }));
        if (q == 3)
            rows.push_back(run_row("subline_triples (q=3, m=3) nonexistence", [&] {
                auto t = subline_triples_search(q, 3);
                return std::pair{!t.has_value(),
                                 std::string(t ? "unexpected triple" : "none, by exhaustion")};
            }));
    }

    if (q <= 5) {
        rows.push_back(run_row("minimal codes q=" + qs, [&] {
            const Constructed& four =
                get("pg3_four_lines", [&] { return construct_pg3_four_lines(q, workers); });
            const Constructed& six =
                get("pg4_six_lines", [&] { return construct_pg4_six_lines(q, workers); });
            LinearCode c4 =
                code_from_points(four.arrangement.space, coverage(four.arrangement).points);
            LinearCode c6 =
                code_from_points(six.arrangement.space, coverage(six.arrangement).points);
            const MinimalityReport r4 = is_minimal_code(c4);
            const MinimalityReport r6 = is_minimal_code(c6);
            return std::pair{r4.minimal && r6.minimal,
                             "[" + std::to_string(c4.length()) + ",4] and [" +
                                 std::to_string(c6.length()) + ",5] codes minimal"};
        }));
    }

    if (q == 2)
        rows.push_back(run_row("saturating/covering dictionary q=2", [&] {
            const Constructed& six =
                get("pg4_six_lines", [&] { return construct_pg4_six_lines(q, workers); });
            EmbedCheck ec = embed_and_check(six.arrangement);
            LinearCode cov_code = covering_code_from_points(ec.ambient, ec.points);
            CoveringRadiusReport cr = covering_radius_detail(cov_code);
            const bool ok = ec.report.saturated && cr.radius == 4;
            return std::pair{ok, "3-saturating in PG(4,16); covering radius " +
                                     std::to_string(cr.radius)};
        }));

    if (q <= 5)
        rows.push_back(run_row("resolving sets q=" + qs, [&] {
            const Constructed& four =
                get("pg3_four_lines", [&] { return construct_pg3_four_lines(q, workers); });
            LineResolvingSet r3 = resolving_from_lines(four.arrangement);
            bool ok = r3.report.resolving && r3.augmentations == 0 &&
                      r3.vertices.size() == 8 * q;
            std::string detail = "sizes " + std::to_string(r3.vertices.size());
            if (q == 2) {
                const Constructed& six =
                    get("pg4_six_lines", [&] { return construct_pg4_six_lines(q, workers); });
                const Constructed& seven =
                    get("pg5_seven_lines", [&] { return construct_pg5_seven_lines(q, workers); });
                LineResolvingSet r4 = resolving_from_lines(six.arrangement);
                LineResolvingSet r5 = resolving_from_lines(seven.arrangement);
                ok = ok && r4.report.resolving && r4.augmentations == 0 &&
                     r4.vertices.size() == 22 && r5.report.resolving &&
                     r5.augmentations == 0 && r5.vertices.size() == 28;
                detail += ", " + std::to_string(r4.vertices.size()) + ", " +
                          std::to_string(r5.vertices.size());
            }
            return std::pair{ok, detail + "; 0 augmentations"};
        }));

    rows.push_back(run_row("bounds table q=" + qs, [&] {
        BoundsTable t = bounds_report(q);
        if (!dir.empty()) emit(bounds_to_json(t), dir + "/bounds_q" + qs + ".json");
        return std::pair{!t.rows.empty(), std::to_string(t.rows.size()) + " rows"};
    }));

    return rows;
}

int cmd_report(const std::string& q_list, const std::string& out_dir, int workers) {
    std::vector<std::uint64_t> qs;
    std::stringstream ss(q_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        qs.push_back(std::stoull(tok));
    }
    if (qs.empty()) throw ParseError("report: empty q list");
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    njson table = njson::array();
    bool all = true;
    for (std::uint64_t q : qs)
        for (const Row& r : report_rows(q, workers, out_dir)) {
            all = all && r.pass;
            table.push_back({{"name", r.name},
                             {"pass", r.pass},
                             {"detail", r.detail},
                             {"ms", r.ms}});
        }
    njson j{{"schema", kSchema}, {"type", "report"}, {"rows", std::move(table)}};
    emit(j, out_dir.empty() ? std::string{} : out_dir + "/report.json");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"higgledy-piggledy subspace arrangements: construction, certification, "
                 "and coding/graph artifacts"};
    app.require_subcommand(1);

    int workers = 0;
    app.add_option("--workers", workers, "worker threads (default: HPFORGE_WORKERS or cores)")
        ->capture_default_str();

    std::string in_path, out_path, method = "auto", name, q_list = "2,3", out_dir;
    std::uint64_t q = 2, seed = 1, budget = 1000000;
    unsigned subline_m = 2;
    int rho = -1;
    bool attach = false, text = false, embed = false, check_only = false;

    CLI::App* verify = app.add_subcommand("verify", "verify an arrangement file");
    verify->add_option("input", in_path, "arrangement JSON")->required();
    verify->add_option("--method", method, "auto|strong|transversal");

    CLI::App* construct = app.add_subcommand("construct", "run a named construction");
    construct->add_option("name", name, "construction name")->required();
    construct->add_option("--q", q, "field order")->required();
    construct->add_option("--seed", seed, "master seed for seeded searches");
    construct->add_option("--budget", budget, "trial budget for seeded searches");
    construct->add_option("--m", subline_m, "extension degree for subline_triples");
    construct->add_option("-o,--out", out_path, "output file (default: stdout)");

    CLI::App* search = app.add_subcommand("search", "run a search template");
    search->add_option("template", in_path, "template JSON")->required();
    CLI::Option* seed_opt = search->add_option("--seed", seed, "override template seed");
    search->add_option("-o,--out", out_path, "output file (default: stdout)");

    CLI::App* codes = app.add_subcommand("codes", "code-side analysis");
    codes->require_subcommand(1);
    CLI::App* minimality = codes->add_subcommand("minimality", "brute-force minimality");
    minimality->add_option("input", in_path, "code or arrangement JSON")->required();
    minimality->add_option("-o,--out", out_path, "output file");
    CLI::App* covering = codes->add_subcommand("covering-radius", "syndrome BFS radius");
    covering->add_option("input", in_path, "code or arrangement JSON")->required();
    covering->add_option("-o,--out", out_path, "output file");
    CLI::App* saturating = codes->add_subcommand("saturating", "saturating-set check");
    saturating->add_option("input", in_path, "arrangement JSON")->required();
    saturating->add_option("--rho", rho, "saturation parameter");
    saturating->add_flag("--embed", embed, "check the coverage in PG(N, q^{N-k+1})");
    saturating->add_option("-o,--out", out_path, "output file");
    CLI::App* bounds = codes->add_subcommand("bounds", "closed-form bounds table");
    bounds->add_option("--q", q, "field order")->required();
    bounds->add_flag("--attach", attach, "rebuild desk-scale artifacts for the table");
    bounds->add_flag("--text", text, "aligned text instead of JSON");
    bounds->add_option("-o,--out", out_path, "output file");

    CLI::App* resolve = app.add_subcommand("resolve", "resolving sets of the incidence graph");
    resolve->add_option("input", in_path, "line arrangement or resolving-set JSON")->required();
    resolve->add_flag("--check", check_only, "only re-check a resolving-set file");
    resolve->add_option("-o,--out", out_path, "output file");

    CLI::App* report = app.add_subcommand("report", "regenerate desk-scale claims");
    report->add_option("--q-list", q_list, "comma-separated field orders");
    report->add_option("--out-dir", out_dir, "artifact directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(verify)) return cmd_verify(in_path, method, workers);
        if (app.got_subcommand(construct))
            return cmd_construct(name, q, seed, budget, subline_m, workers, out_path);
        if (app.got_subcommand(search))
            return cmd_search(in_path, seed_opt->count() > 0, seed, workers, out_path);
        if (app.got_subcommand(codes)) {
            if (codes->got_subcommand(minimality)) return cmd_codes_minimality(in_path, out_path);
            if (codes->got_subcommand(covering))
                return cmd_codes_covering_radius(in_path, out_path);
            if (codes->got_subcommand(saturating))
                return cmd_codes_saturating(in_path, rho, embed, out_path);
            if (codes->got_subcommand(bounds))
                return cmd_codes_bounds(q, attach, text, workers, out_path);
        }
        if (app.got_subcommand(resolve)) return cmd_resolve(in_path, check_only, out_path);
        if (app.got_subcommand(report)) return cmd_report(q_list, out_dir, workers);
    } catch (const SearchBudgetExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
