// Acceptance gate: twelve numbered criteria, one [PASS]/[FAIL] line each,
// exit 0 only if every criterion holds.  Every number is recomputed from
// scratch through the public API; stated wall-clock budgets are asserted.
#include "hpforge/hpforge.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace hpforge;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Check {
    bool ok = true;
    std::string note;         // first failing condition
    std::ostringstream info;  // one-line summary of the verified numbers

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            note = what;
        }
    }
};

int g_failures = 0;

void criterion(int id, const std::string& label, const std::function<void(Check&)>& body) {
    const auto t0 = Clock::now();
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.note = std::string("exception: ") + e.what();
    }
    std::string detail = c.info.str();
    if (!c.ok) detail = (detail.empty() ? "" : detail + "; ") + "FAILED: " + c.note;
    std::printf("[%s] %02d %s — %s (%.0f ms)\n", c.ok ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str(), ms_since(t0));
    std::fflush(stdout);
    if (!c.ok) ++g_failures;
}

// Families built once and shared between criteria.
struct Suite {
    std::map<std::uint64_t, Constructed> four, six, six_planes, eight, spread7;
    std::map<std::string, Constructed> singles;  // seven_lines_2, seven_solids_7

    std::vector<const Constructed*> all() const {
        std::vector<const Constructed*> out;
        for (const auto* m : {&four, &six, &six_planes, &eight, &spread7})
            for (const auto& [q, c] : *m) out.push_back(&c);
        for (const auto& [name, c] : singles) out.push_back(&c);
        return out;
    }
};

int meeting_pairs(const Arrangement& arr, int dim) {
    int count = 0;
    for (std::size_t i = 0; i < arr.elements.size(); ++i)
        for (std::size_t j = i + 1; j < arr.elements.size(); ++j)
            if (meet_dim(arr.elements[i], arr.elements[j]) == dim) ++count;
    return count;
}

bool pairwise_disjoint(const Arrangement& arr) {
    return meeting_pairs(arr, -1) ==
           static_cast<int>(arr.elements.size() * (arr.elements.size() - 1) / 2);
}

}  // namespace

int main() {
    Suite suite;

    criterion(1, "four certified lines in PG(3,q) for q in {2,3,4,5,7,9}", [&](Check& c) {
        const auto t0 = Clock::now();
        c.info << "coverage";
        for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull, 9ull}) {
            const Constructed& f =
                suite.four.emplace(q, construct_pg3_four_lines(q)).first->second;
            c.require(f.certificate.verdict == Verdict::HigPig, "verdict at q=" + std::to_string(q));
            c.require(f.arrangement.k == 1 && f.arrangement.elements.size() == 4,
                      "shape at q=" + std::to_string(q));
            const std::size_t pts = coverage(f.arrangement).points.size();
            c.require(pts == 4 * (q + 1), "size 4(q+1) at q=" + std::to_string(q));
            c.info << " " << pts;
        }
        c.require(ms_since(t0) < 10000, "10 s budget");
    });

    criterion(2, "six lines in PG(4,q) with exactly one meeting pair, q in {2,3,4,5}",
              [&](Check& c) {
                  c.info << "hyperplane scans";
                  for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull}) {
                      const auto tq = Clock::now();
                      const Constructed& f =
                          suite.six.emplace(q, construct_pg4_six_lines(q)).first->second;
                      c.require(f.certificate.verdict == Verdict::HigPig,
                                "verdict at q=" + std::to_string(q));
                      c.require(coverage(f.arrangement).points.size() == 6 * q + 5,
                                "size 6q+5 at q=" + std::to_string(q));
                      c.require(meeting_pairs(f.arrangement, 0) == 1 &&
                                    meeting_pairs(f.arrangement, -1) == 14,
                                "one meeting pair at q=" + std::to_string(q));
                      c.require(f.certificate.method == ScanMethod::StrongBlockingScan,
                                "strong scan at q=" + std::to_string(q));
                      c.require(f.certificate.scanned == gaussian_binomial(5, 4, q),
                                "scan domain at q=" + std::to_string(q));
                      c.info << " " << f.certificate.scanned;
                      if (q == 5) c.require(ms_since(tq) < 60000, "60 s budget at q=5");
                  }
              });

    criterion(3, "six planes in PG(4,q): seeded search q in {2,3,4,5}, dualization at q=7",
              [&](Check& c) {
                  c.info << "winning seeds";
                  const std::map<std::uint64_t, std::size_t> union_size{
                      {2, 27}, {3, 62}, {4, 107}, {5, 166}};
                  for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull}) {
                      const Constructed& f =
                          suite.six_planes.emplace(q, construct_pg4_six_planes(q)).first->second;
                      c.require(f.certificate.verdict == Verdict::HigPig,
                                "verdict at q=" + std::to_string(q));
                      c.require(coverage(f.arrangement).points.size() == union_size.at(q),
                                "size at q=" + std::to_string(q));
                      c.require(meeting_pairs(f.arrangement, 1) == 1 &&
                                    meeting_pairs(f.arrangement, 0) == 14,
                                "one line-sharing pair at q=" + std::to_string(q));
                      const std::uint64_t trial = f.arrangement.provenance.choices.at(0);
                      c.require(trial < 1000000, "trial budget at q=" + std::to_string(q));
                      c.info << " " << mix_seed(f.arrangement.provenance.seed, trial);
                  }
                  const Constructed& d =
                      suite.six_planes.emplace(7, construct_pg4_six_planes(7)).first->second;
                  c.require(d.certificate.verdict == Verdict::HigPig, "verdict at q=7");
                  c.require(coverage(d.arrangement).points.size() == 320, "size 320 at q=7");
                  c.require(meeting_pairs(d.arrangement, 1) == 1 &&
                                meeting_pairs(d.arrangement, 0) == 14,
                            "one line-sharing pair at q=7");
                  c.info << ", q=7 dual";
              });

    criterion(4, "eight mutually disjoint planes in PG(5,q), q in {2,3}", [&](Check& c) {
        c.info << "solid scans";
        for (std::uint64_t q : {2ull, 3ull}) {
            const auto tq = Clock::now();
            const Constructed& f =
                suite.eight.emplace(q, construct_pg5_eight_planes(q)).first->second;
            c.require(f.certificate.verdict == Verdict::HigPig, "verdict at q=" + std::to_string(q));
            c.require(f.arrangement.elements.size() == 8 && pairwise_disjoint(f.arrangement),
                      "disjointness at q=" + std::to_string(q));
            c.require(coverage(f.arrangement).points.size() == 8 * (q * q + q + 1),
                      "size 8(q^2+q+1) at q=" + std::to_string(q));
            c.require(f.certificate.scanned == (q == 2 ? 651u : 11011u),
                      "scan domain at q=" + std::to_string(q));
            c.require(ms_since(tq) < (q == 2 ? 5000 : 60000),
                      "time budget at q=" + std::to_string(q));
            c.info << " " << f.certificate.scanned;
        }
    });

    criterion(5, "seven disjoint lines in PG(5,2); seven solids in PG(5,7) by dualization",
              [&](Check& c) {
                  const auto t0 = Clock::now();
                  const Constructed& l =
                      suite.singles.emplace("seven_lines_2", construct_pg5_seven_lines(2))
                          .first->second;
                  c.require(l.certificate.verdict == Verdict::HigPig, "line verdict");
                  c.require(l.arrangement.elements.size() == 7 && pairwise_disjoint(l.arrangement),
                            "seven disjoint lines");
                  c.require(coverage(l.arrangement).points.size() == 21, "21 covered points");

                  const Constructed& s =
                      suite.singles.emplace("seven_solids_7", construct_pg5_seven_solids(7))
                          .first->second;
                  c.require(s.certificate.verdict == Verdict::HigPig, "solid verdict");
                  c.require(s.arrangement.k == 3 && s.arrangement.elements.size() == 7,
                            "seven solids");
                  c.require(s.certificate.method == ScanMethod::TransversalScan,
                            "transversal scan decides at |K| = q");
                  c.require(s.certificate.scanned == 6865251, "line-count scan domain");
                  std::vector<Subspace> cuts;
                  for (std::size_t i = 0; i < 7; ++i)
                      for (std::size_t j = i + 1; j < 7; ++j)
                          cuts.push_back(meet(s.arrangement.elements[i], s.arrangement.elements[j]));
                  bool all_lines = true, all_disjoint = true;
                  for (const Subspace& x : cuts) all_lines = all_lines && x.dim() == 1;
                  for (std::size_t a = 0; a < cuts.size(); ++a)
                      for (std::size_t b = a + 1; b < cuts.size(); ++b)
                          all_disjoint = all_disjoint && meet_dim(cuts[a], cuts[b]) == -1;
                  c.require(all_lines, "pairwise intersections are lines");
                  c.require(all_disjoint, "the 21 intersection lines are pairwise disjoint");
                  c.require(ms_since(t0) < 600000, "10 min budget");
                  c.info << "scanned " << s.certificate.scanned << ", 21 disjoint cut lines";
              });

    criterion(6, "seven planes of PG(5,q) from one plane-spread within 10^6 trials, q in {2,3,4,5}",
              [&](Check& c) {
                  c.info << "trials";
                  for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull}) {
                      auto found = seven_planes_spread_search(q, 0, 1000000, 1);
                      c.require(found.has_value(), "search exhausted at q=" + std::to_string(q));
                      if (!found) continue;
                      const Constructed& f =
                          suite.spread7.emplace(q, std::move(*found)).first->second;
                      c.require(f.certificate.verdict == Verdict::HigPig,
                                "verdict at q=" + std::to_string(q));
                      c.require(f.arrangement.elements.size() == 7 &&
                                    pairwise_disjoint(f.arrangement),
                                "seven disjoint planes at q=" + std::to_string(q));
                      SpreadMap sm(1, 2, gf(q));
                      std::set<Subspace> members;
                      for (const Subspace& p : all_points(sm.domain())) members.insert(sm.image(p));
                      bool from_spread = true;
                      for (const Subspace& e : f.arrangement.elements)
                          from_spread = from_spread && members.count(e) == 1;
                      c.require(from_spread, "spread membership at q=" + std::to_string(q));
                      c.info << " " << f.arrangement.provenance.choices.at(0);
                  }
              });

    criterion(7, "subline triples in PG(1,q^m): found for even m, ruled out for odd m",
              [&](Check& c) {
                  const auto a0 = Clock::now();
                  auto t32 = subline_triples_search(3, 2);
                  c.require(t32.has_value(), "triple in PG(1,9)");
                  if (t32)
                      for (const Subline& s : *t32)
                          c.require(s.points.size() == 4, "subline size in PG(1,9)");
                  c.require(ms_since(a0) < 300000, "5 min budget for (3,2)");

                  const auto b0 = Clock::now();
                  auto t42 = subline_triples_search(4, 2);
                  c.require(t42.has_value(), "triple in PG(1,16)");
                  c.require(ms_since(b0) < 300000, "5 min budget for (4,2)");

                  const auto c0 = Clock::now();
                  c.require(!subline_triples_search(3, 3).has_value(),
                            "no triple in PG(1,27)");
                  c.require(ms_since(c0) < 300000, "5 min budget for (3,3)");
                  c.info << "PG(1,9) yes, PG(1,16) yes, PG(1,27) no";
              });

    criterion(8, "closed-form lower bounds, and every suite family clears them", [&](Check& c) {
        for (std::uint64_t q : {6ull, 7ull, 8ull, 9ull, 11ull, 13ull, 16ull, 25ull, 64ull, 101ull})
            c.require(lower_bound_elements(5, 2, q) == 7,
                      "plane-family floor at q=" + std::to_string(q));
        for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull})
            c.require(lower_bound_elements(5, 2, q) == q + 1,
                      "plane-family bound below the floor at q=" + std::to_string(q));
        for (std::uint64_t q : {4ull, 5ull, 7ull, 8ull, 9ull, 16ull, 101ull})
            c.require(lower_bound_lines(4, q) == 6, "line bound at q=" + std::to_string(q));
        for (std::uint64_t q : {2ull, 3ull})
            c.require(lower_bound_lines(4, q) == 5, "line bound at small q");

        int swept = 0;
        for (const Constructed* f : suite.all()) {
            const Arrangement& a = f->arrangement;
            c.require(a.elements.size() >= lower_bound_elements(a.space.n, a.k, a.space.q()),
                      "element bound violated by a suite family");
            if (a.k == 1)
                c.require(a.elements.size() >= lower_bound_lines(a.space.n, a.space.q()),
                          "line bound violated by a suite family");
            ++swept;
        }
        c.require(swept >= 18, "suite sweep covered the built families");
        c.info << swept << " families swept";
    });

    criterion(9, "coverage codes are minimal; the 13-point binary optimum records a length-17 witness",
              [&](Check& c) {
                  for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull}) {
                      const Arrangement& fa = suite.four.at(q).arrangement;
                      const Arrangement& sa = suite.six.at(q).arrangement;
                      c.require(is_minimal_code(
                                    code_from_points(fa.space, coverage(fa).points))
                                    .minimal,
                                "four-line code at q=" + std::to_string(q));
                      const auto t5 = Clock::now();
                      MinimalityReport six =
                          is_minimal_code(code_from_points(sa.space, coverage(sa).points));
                      c.require(six.minimal, "six-line code at q=" + std::to_string(q));
                      if (q == 5) {
                          c.require(six.classes == 781 && six.pairs_tested == 304590,
                                    "class census of the [35,5] code");
                          c.require(ms_since(t5) < 5000, "5 s budget for the [35,5] code");
                          c.info << "[35,5]: " << six.classes << " classes, " << six.pairs_tested
                                 << " pairs";
                      }
                  }
                  const BoundsTable bt = bounds_report(2, true);
                  bool row13 = false, row17 = false;
                  for (const BoundRow& r : bt.rows) {
                      if (r.quantity == "m(5,2)" && r.relation == "=" && r.value == 13 &&
                          r.attachment.find("17") != std::string::npos)
                          row13 = true;
                      if (r.quantity == "m(5,q)" && r.relation == "<=" && r.value == 17 &&
                          r.attachment.find("minimal") != std::string::npos)
                          row17 = true;
                  }
                  c.require(row13, "m(5,2) = 13 with the length-17 witness attached");
                  c.require(row17, "m(5,q) <= 17 with a verified minimal instance");
                  c.info << "; m(5,2)=13 attached";
              });

    criterion(10, "six-line coverage 3-saturates PG(4,16); its [17,12] code has covering radius 4",
              [&](Check& c) {
                  const auto t0 = Clock::now();
                  const EmbedCheck ec = embed_and_check(suite.six.at(2).arrangement);
                  c.require(ec.report.saturated, "saturation verdict");
                  c.require(ec.report.rho == 3, "saturation level 3");
                  c.require(ec.ambient.q() == 16, "ambient field GF(16)");
                  c.require(ec.report.points_total == 69905, "69905 ambient points");
                  c.require(ec.points.size() == 17, "17 embedded points");

                  const LinearCode code = covering_code_from_points(ec.ambient, ec.points);
                  c.require(code.length() == 17 && code.dim() == 12, "[17,12] shape");
                  const CoveringRadiusReport cr = covering_radius_detail(code);
                  c.require(cr.radius == 4, "covering radius exactly 4");
                  c.require(cr.syndromes == 1048576, "all 16^5 syndromes reached");
                  std::uint64_t layered = 0;
                  for (std::uint64_t n : cr.layer_sizes) layered += n;
                  c.require(layered == cr.syndromes, "layer decomposition is a partition");
                  c.require(ms_since(t0) < 120000, "2 min budget");
                  c.info << "rho=3 over 69905 points; radius 4 over 16^5 syndromes";
              });

    criterion(11, "line families resolve their incidence graphs with zero augmentation",
              [&](Check& c) {
                  const auto expect = [&](const Arrangement& arr, std::size_t want,
                                          const std::string& what) {
                      const LineResolvingSet rs = resolving_from_lines(arr);
                      c.require(rs.report.resolving, what + ": resolves");
                      c.require(rs.augmentations == 0, what + ": no augmentation");
                      c.require(rs.vertices.size() == want,
                                what + ": size " + std::to_string(want));
                      c.info << " " << rs.vertices.size();
                  };
                  c.info << "sizes";
                  expect(suite.four.at(2).arrangement, 16, "PG(3,2) four lines");
                  expect(suite.four.at(3).arrangement, 24, "PG(3,3) four lines");
                  expect(suite.six.at(2).arrangement, 22, "PG(4,2) six lines");
                  expect(suite.singles.at("seven_lines_2").arrangement, 28,
                         "PG(5,2) seven lines");
              });

    criterion(12, "scan agreement up to q elements; every strong refutation has a transversal",
              [&](Check& c) {
                  struct Case {
                      int N;
                      std::uint64_t q;
                      std::vector<int> ks;
                  };
                  std::uint64_t agree = 0, total = 0, refuted = 0, advisory = 0;
                  for (const Case& sc :
                       {Case{3, 2, {1}}, Case{3, 3, {1}}, Case{4, 3, {1, 2}}}) {
                      ProjSpace sp(sc.N, gf(sc.q));
                      Rng rng(99 * sc.N + sc.q);
                      for (int t = 0; t < 500; ++t) {
                          const int k = sc.ks[t % sc.ks.size()];
                          const std::size_t size = 2 + rng.below(sc.q - 1);  // at most q
                          std::set<Subspace> elems;
                          while (elems.size() < size) elems.insert(random_subspace(sp, k, rng));
                          Arrangement arr(sp, k, {elems.begin(), elems.end()});
                          const Certificate s = is_higgledy_piggledy(arr, VerifyMethod::Strong);
                          const Certificate tr =
                              is_higgledy_piggledy(arr, VerifyMethod::Transversal);
                          ++total;
                          if (s.verdict == tr.verdict) ++agree;
                      }
                      for (int t = 0; t < 150; ++t) {
                          const int k = sc.ks[t % sc.ks.size()];
                          const std::size_t size = 2 + rng.below(2 * sc.q);  // often above q
                          std::set<Subspace> elems;
                          while (elems.size() < size) elems.insert(random_subspace(sp, k, rng));
                          Arrangement arr(sp, k, {elems.begin(), elems.end()});
                          const Certificate s = is_higgledy_piggledy(arr, VerifyMethod::Strong);
                          const TransversalSearch ts =
                              find_transversal(sp, arr.elements, sp.n - k - 1);
                          if (s.verdict == Verdict::NotHigPig) {
                              ++refuted;
                              c.require(ts.found.has_value(),
                                        "a refuted family must admit a transversal");
                          } else if (ts.found) {
                              ++advisory;  // legal above q: strong family with a transversal
                          }
                          if (!ts.found)
                              c.require(s.verdict == Verdict::HigPig,
                                        "no transversal must certify at any size");
                          const Certificate forced =
                              is_higgledy_piggledy(arr, VerifyMethod::Transversal);
                          c.require(forced.verdict == s.verdict,
                                    "forced transversal method must agree with the strong scan");
                      }
                  }
                  c.require(agree == total, "verdict agreement up to q elements");
                  c.require(total == 1500, "sample size");
                  c.require(refuted > 0, "the any-size sweep saw refutations");
                  c.info << agree << "/" << total << " agree (all refutations: bounds exceed q"
                         << " in these spaces); " << refuted
                         << " refutations each with a transversal; " << advisory
                         << " strong families with advisory transversals";
              });

    std::printf("acceptance: %d/12 criteria passed\n", 12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
