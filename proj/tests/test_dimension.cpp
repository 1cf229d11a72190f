#include <doctest.h>

#include <algorithm>

#include "mshift/dimension.hpp"
#include "mshift/json_io.hpp"

using namespace mshift;

namespace {

struct Reference {
    const char* preset;
    Real hausdorff;
    Real minkowski;
    Equality verdict;
};

// 50-digit evaluations of (q-1) log_m t_root and of the count series, q = 2.
const Reference kReferences[] = {
    {"golden", 0.811370462751649091620L, 0.824293605711592665778L, Equality::StrictlyLess},
    {"tribonacci", 0.726227369929819920L, 0.753730061273200454L, Equality::StrictlyLess},
    {"forbidden111", 0.956651311754610539L, 0.961788897362150246L, Equality::StrictlyLess},
    {"full:2", 1, 1, Equality::Equal},
    {"full:3", 1, 1, Equality::Equal},
};

}  // namespace

TEST_SUITE("dimension") {

TEST_CASE("reference dimensions") {
    for (const Reference& ref : kReferences) {
        CAPTURE(ref.preset);
        const DimensionReport r = analyze(preset_spec(ref.preset));
        REQUIRE(r.converged());
        CHECK(r.hausdorff.contains(ref.hausdorff, 1e-15L));
        CHECK(r.hausdorff.width() <= 1e-10L);
        CHECK(r.minkowski.contains(ref.minkowski, 1e-15L));
        CHECK(r.minkowski.width() <= 1e-10L);
        CHECK(r.equality == ref.verdict);
        CHECK(r.hausdorff.lo <= r.minkowski.hi);
    }
}

TEST_CASE("beta-shift at 1.8") {
    const DimensionReport r = analyze(preset_spec("beta:1.8"));
    REQUIRE(r.converged());
    CHECK(r.hausdorff.contains(0.952923784902852483L, 1e-15L));
    CHECK(r.equality == Equality::StrictlyLess);
    CHECK(r.series_depth <= 64);
}

TEST_CASE("strict inequality separates the brackets") {
    for (const char* name : {"golden", "tribonacci", "forbidden111"}) {
        const DimensionReport r = analyze(preset_spec(name));
        CHECK(r.hausdorff.disjoint_from(r.minkowski));
        CHECK(r.hausdorff.hi < r.minkowski.lo);
    }
}

TEST_CASE("a symmetric non-primitive SFT has equal dimensions") {
    const DimensionReport r = analyze(OmegaSpec::sft({{0, 1}, {1, 0}}, 2));
    CHECK(r.equality == Equality::Equal);
    CHECK(r.hausdorff.contains(0.5L, 1e-15L));
    CHECK(r.minkowski.contains(0.5L, 1e-15L));
    REQUIRE(r.warnings.size() == 1);
}

TEST_CASE("full shifts for q = 3") {
    for (int m = 2; m <= 4; ++m) {
        const DimensionReport r = analyze(OmegaSpec::full_shift(m, 3));
        CHECK(r.hausdorff.contains(1, 1e-15L));
        CHECK(r.minkowski.contains(1, 1e-15L));
        CHECK(r.hausdorff.width() <= 1e-10L);
        CHECK(r.minkowski.width() <= 1e-10L);
        CHECK(r.equality == Equality::Equal);
    }
}

TEST_CASE("Hausdorff dimension through the root's children") {
    for (const char* name : {"golden", "tribonacci", "forbidden111"}) {
        for (int q = 2; q <= 3; ++q) {
            const FixedPointSolution sol = solve(build_automaton(preset_spec(name, q)), q);
            CHECK(hausdorff_dim(sol).contains(hausdorff_dim_from_children(sol), 1e-12L));
        }
    }
}

TEST_CASE("weighted series of linear terms sums to the slope") {
    for (int q = 2; q <= 4; ++q) {
        for (Real c : {0.25L, 0.5L, 1.0L}) {
            std::vector<Real> terms;
            for (int k = 1; k <= 60; ++k) terms.push_back(c * k);
            const Bracket b = weighted_series(terms, q);
            CHECK(b.contains(c));
            CHECK(b.width() < 1e-15L);
        }
    }
}

TEST_CASE("the Minkowski bracket tightens with depth") {
    const OmegaSpec spec = preset_spec("golden");
    const PrefixCountTable counts = count_prefixes(build_automaton(spec), 60);
    Real previous = 2;
    for (int depth : {5, 10, 20, 40, 60}) {
        const Bracket b = minkowski_dim(counts, 2, 2, depth);
        CHECK(b.contains(0.824293605711592665778L, 1e-15L));
        CHECK(b.width() <= previous);
        previous = b.width();
    }
}

TEST_CASE("dim_H never exceeds dim_M on random SFTs") {
    std::uint64_t state = 99;
    for (int trial = 0; trial < 30; ++trial) {
        BinaryMatrix a(3, std::vector<int>(3));
        for (auto& row : a) {
            do {
                for (auto& x : row) {
                    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
                    x = static_cast<int>(state >> 63);
                }
            } while (std::count(row.begin(), row.end(), 1) == 0);
        }
        const DimensionReport r = analyze(OmegaSpec::sft(a, 2));
        REQUIRE(r.converged());
        CHECK(r.hausdorff.lo <= r.minkowski.hi);
        if (r.equality == Equality::StrictlyLess) CHECK(r.hausdorff.hi < r.minkowski.lo);
        if (r.equality == Equality::Equal) CHECK_FALSE(r.hausdorff.disjoint_from(r.minkowski));
    }
}

TEST_CASE("nested radical") {
    SUBCASE("golden digits") {
        std::vector<int> digits;
        for (int k = 0; k < 64; ++k) digits.push_back(k % 2 == 0 ? 1 : 0);
        const RadicalValue r = nested_radical_value(digits, 2, 2);
        REQUIRE(r.converged);
        CHECK(r.t.contains(1.75487766624669276005L));
    }
    SUBCASE("agrees with the solver for beta = 1.8") {
        const OmegaSpec spec = preset_spec("beta:1.8");
        const FixedPointSolution sol = solve(build_automaton(spec), 2);
        const RadicalValue r = nested_radical_value(std::get<BetaShift>(spec.payload()).digits, 2, 2);
        REQUIRE(r.converged);
        CHECK_FALSE(r.t.disjoint_from(sol.root_value()));
    }
    SUBCASE("q = 3") {
        const OmegaSpec spec = preset_spec("beta:1.8", 3);
        const FixedPointSolution sol = solve(build_automaton(spec), 3);
        const RadicalValue r = nested_radical_value(std::get<BetaShift>(spec.payload()).digits, 2, 3);
        REQUIRE(r.converged);
        CHECK_FALSE(r.t.disjoint_from(sol.root_value()));
    }
}

TEST_CASE("truncated specs stay undetermined without a witness") {
    const DimensionReport r = analyze(OmegaSpec::beta_digits(std::vector<int>(8, 1), 2, 2));
    CHECK(r.equality == Equality::Undetermined);
    CHECK(r.series_depth == 8);
}

TEST_CASE("report JSON carries explicit brackets") {
    const Json doc = report_json(analyze(preset_spec("golden")));
    CHECK(doc["verdict"] == "StrictlyLess");
    CHECK(doc["hausdorff"]["lo"].get<double>() <= doc["hausdorff"]["hi"].get<double>());
    CHECK(doc["minkowski"]["lo"].get<double>() <= doc["minkowski"]["hi"].get<double>());
    CHECK(doc["t"]["root"].size() == 2);
    CHECK(doc["prefix_counts"][2] == "5");
}

}  // TEST_SUITE
