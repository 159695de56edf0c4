// Seeded randomized search over arrangement templates: reproducible winning
// trials, budget and worker invariance, constraint enforcement, honest
// exhaustion, and template validation.
#include <catch2/catch_amalgamated.hpp>

#include "hpforge/search.hpp"

#include <set>
#include <vector>

using namespace hpforge;

namespace {

SearchTemplate disjoint_lines_template(std::uint64_t q, int cardinality,
                                       std::uint64_t budget, std::uint64_t seed = 1) {
    SearchTemplate t;
    t.N = 3;
    t.k = 1;
    t.q = q;
    t.cardinality = cardinality;
    t.constraints = {Constraint::pairwise_disjoint()};
    t.budget = budget;
    t.master_seed = seed;
    return t;
}

bool pairwise_disjoint(const Arrangement& arr) {
    for (std::size_t i = 0; i < arr.elements.size(); ++i)
        for (std::size_t j = i + 1; j < arr.elements.size(); ++j)
            if (meets(arr.elements[i], arr.elements[j])) return false;
    return true;
}

}  // namespace

TEST_CASE("a disjoint four-line template over GF(2) wins at a fixed trial") {
    const SearchTemplate t = disjoint_lines_template(2, 4, 1000);
    const SearchOutcome out = run_search(t, 1);

    REQUIRE(out.found.has_value());
    CHECK(out.winning_trial == 243);
    CHECK(out.trials == 244);
    CHECK(out.winning_seed == mix_seed(1, 243));
    CHECK(out.found->certificate.verdict == Verdict::HigPig);

    const Arrangement& arr = out.found->arrangement;
    CHECK(arr.k == 1);
    CHECK(arr.elements.size() == 4);
    CHECK(pairwise_disjoint(arr));
    CHECK(satisfies_constraints(arr, t));

    CHECK(arr.provenance.construction == "search");
    CHECK(arr.provenance.seed == out.winning_seed);
    CHECK(arr.provenance.choices == std::vector<std::uint64_t>{243});
}

TEST_CASE("the winning trial does not depend on budget or worker count") {
    const SearchOutcome base = run_search(disjoint_lines_template(2, 4, 1000), 1);
    REQUIRE(base.found.has_value());

    const SearchOutcome wide = run_search(disjoint_lines_template(2, 4, 5000), 1);
    const SearchOutcome par = run_search(disjoint_lines_template(2, 4, 1000), 3);
    for (const SearchOutcome* o : {&wide, &par}) {
        REQUIRE(o->found.has_value());
        CHECK(o->winning_trial == base.winning_trial);
        CHECK(o->winning_seed == base.winning_seed);
        CHECK(o->found->arrangement.elements == base.found->arrangement.elements);
    }

    // A budget that stops one short of the winning trial exhausts; one more
    // trial flips it to success.
    const SearchOutcome shy = run_search(disjoint_lines_template(2, 4, 243), 1);
    CHECK_FALSE(shy.found.has_value());
    CHECK(shy.trials == 243);
    const SearchOutcome exact = run_search(disjoint_lines_template(2, 4, 244), 1);
    REQUIRE(exact.found.has_value());
    CHECK(exact.winning_trial == 243);

    // Forcing the method the dispatcher would pick anyway changes nothing.
    SearchTemplate forced = disjoint_lines_template(2, 4, 1000);
    forced.method = VerifyMethod::Strong;
    const SearchOutcome strong = run_search(forced, 1);
    REQUIRE(strong.found.has_value());
    CHECK(strong.winning_trial == base.winning_trial);
}

TEST_CASE("different master seeds explore different trial sequences") {
    const SearchOutcome a = run_search(disjoint_lines_template(2, 4, 1000, 1), 1);
    const SearchOutcome b = run_search(disjoint_lines_template(2, 4, 1000, 2), 1);
    REQUIRE(a.found.has_value());
    REQUIRE(b.found.has_value());
    CHECK(a.winning_seed != b.winning_seed);
    CHECK(b.found->certificate.verdict == Verdict::HigPig);

    const SearchOutcome q3 = run_search(disjoint_lines_template(3, 4, 100000), 1);
    REQUIRE(q3.found.has_value());
    CHECK(q3.winning_trial == 10);
    CHECK(q3.found->arrangement.elements.size() == 4);
    CHECK(pairwise_disjoint(q3.found->arrangement));
}

TEST_CASE("a pair-shares template finds six planes with two sharing a line") {
    SearchTemplate t;
    t.N = 4;
    t.k = 2;
    t.q = 2;
    t.cardinality = 6;
    t.constraints = {Constraint::pair_shares(1)};
    t.budget = 100000;
    const SearchOutcome out = run_search(t, 1);

    REQUIRE(out.found.has_value());
    CHECK(out.winning_trial == 4);
    CHECK(satisfies_constraints(out.found->arrangement, t));
    // The first two elements are the constrained pair.
    CHECK(meet_dim(out.found->arrangement.elements[0], out.found->arrangement.elements[1]) >= 1);
}

TEST_CASE("spread templates draw every element from one plane-spread") {
    for (std::uint64_t q : {2ull, 3ull}) {
        SearchTemplate t;
        t.N = 5;
        t.k = 2;
        t.q = q;
        t.cardinality = 7;
        t.constraints = {Constraint::all_from_spread(1)};
        t.budget = 1000000;
        const SearchOutcome out = run_search(t, 1);

        REQUIRE(out.found.has_value());
        CHECK(out.winning_trial == (q == 2 ? 0 : 2));
        const Arrangement& arr = out.found->arrangement;
        CHECK(satisfies_constraints(arr, t));
        CHECK(pairwise_disjoint(arr));  // distinct spread members never meet

        SpreadMap sm(1, 2, gf(q));
        std::set<Subspace> members;
        for (const Subspace& p : all_points(sm.domain())) members.insert(sm.image(p));
        for (const Subspace& e : arr.elements) CHECK(members.count(e) == 1);
    }
}

TEST_CASE("fixed elements come first and are kept verbatim") {
    const Constructed four = construct_pg3_four_lines(2);
    std::vector<Subspace> fixed{four.arrangement.elements[0], four.arrangement.elements[1]};
    SearchTemplate t;
    t.N = 3;
    t.k = 1;
    t.q = 2;
    t.cardinality = 4;
    t.constraints = {Constraint::fixed_elements(fixed), Constraint::pairwise_disjoint()};
    t.budget = 10000;
    const SearchOutcome out = run_search(t, 1);

    REQUIRE(out.found.has_value());
    CHECK(out.winning_trial == 8);
    CHECK(out.found->arrangement.elements[0] == fixed[0]);
    CHECK(out.found->arrangement.elements[1] == fixed[1]);
    CHECK(satisfies_constraints(out.found->arrangement, t));

    // The post-hoc check notices a broken prefix.
    Arrangement tampered = out.found->arrangement;
    std::swap(tampered.elements[0], tampered.elements[2]);
    CHECK_FALSE(satisfies_constraints(tampered, t));
}

TEST_CASE("exhaustion is an outcome, not an error") {
    // Two disjoint lines of PG(3,2) cover six points, but a plane meets them
    // in at most two points and is never spanned, so no trial can succeed.
    const SearchOutcome out = run_search(disjoint_lines_template(2, 2, 300), 1);
    CHECK_FALSE(out.found.has_value());
    CHECK(out.trials == 300);
    CHECK(out.winning_trial == 0);
    CHECK(out.winning_seed == 0);
}

TEST_CASE("post-hoc constraint checks reject mismatched arrangements") {
    const SearchTemplate t = disjoint_lines_template(2, 4, 1000);
    const Constructed four = construct_pg3_four_lines(2);
    CHECK(satisfies_constraints(four.arrangement, t));  // also four disjoint lines

    SearchTemplate wrong_card = t;
    wrong_card.cardinality = 5;
    CHECK_FALSE(satisfies_constraints(four.arrangement, wrong_card));
    SearchTemplate wrong_q = t;
    wrong_q.q = 3;
    CHECK_FALSE(satisfies_constraints(four.arrangement, wrong_q));

    // A family with a meeting pair fails the disjointness template.
    const Constructed six = construct_pg4_six_lines(2);
    SearchTemplate six_t = disjoint_lines_template(2, 6, 1);
    six_t.N = 4;
    CHECK_FALSE(satisfies_constraints(six.arrangement, six_t));
}

TEST_CASE("malformed templates are rejected up front") {
    SearchTemplate t = disjoint_lines_template(2, 4, 1000);

    SearchTemplate clash = t;
    clash.constraints.push_back(Constraint::pair_shares(0));
    CHECK_THROWS_AS(run_search(clash, 1), ArgumentOutOfRange);

    SearchTemplate bad_dim = t;
    bad_dim.constraints = {Constraint::pair_shares(1)};  // need share dim < k
    CHECK_THROWS_AS(run_search(bad_dim, 1), ArgumentOutOfRange);

    SearchTemplate tight = t;
    tight.cardinality = 1;
    tight.constraints = {Constraint::pair_shares(0)};
    CHECK_THROWS_AS(run_search(tight, 1), ArgumentOutOfRange);

    SearchTemplate no_budget = t;
    no_budget.budget = 0;
    CHECK_THROWS_AS(run_search(no_budget, 1), ArgumentOutOfRange);

    SearchTemplate bad_spread = t;
    bad_spread.constraints = {Constraint::all_from_spread(1)};  // (2)(2)-1 = 3 = N is fine...
    bad_spread.cardinality = 6;  // ...but PG(1,4) has only 5 points
    CHECK_THROWS_AS(run_search(bad_spread, 1), ArgumentOutOfRange);

    SearchTemplate off_spread = t;
    off_spread.N = 4;  // (n'+1)(k+1)-1 = 3 != 4
    off_spread.constraints = {Constraint::all_from_spread(1)};
    CHECK_THROWS_AS(run_search(off_spread, 1), ArgumentOutOfRange);

    SearchTemplate two_spreads = disjoint_lines_template(2, 4, 1000);
    two_spreads.constraints = {Constraint::all_from_spread(1), Constraint::all_from_spread(1)};
    CHECK_THROWS_AS(run_search(two_spreads, 1), ArgumentOutOfRange);

    SearchTemplate planes_fixed = t;
    const Constructed planes = construct_pg4_six_planes(2);
    planes_fixed.constraints = {Constraint::fixed_elements({planes.arrangement.elements[0]})};
    CHECK_THROWS_AS(run_search(planes_fixed, 1), Error);  // wrong space entirely

    SearchTemplate bad_k = t;
    bad_k.k = 3;  // k <= N-1 required
    CHECK_THROWS_AS(run_search(bad_k, 1), DimensionOutOfRange);
}
