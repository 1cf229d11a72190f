#include <doctest.h>

#include <cmath>
#include <random>

#include "mshift/dimension.hpp"
#include "mshift/fixed_point.hpp"
#include "mshift/json_io.hpp"

using namespace mshift;

namespace {

// Reference roots, 20 digits, from 50-digit polynomial root finding.
constexpr Real kGoldenT1 = 1.32471795724474602596L;      // t^3 = t + 1
constexpr Real kGoldenRoot = 1.75487766624669276005L;    // t_1^2
constexpr Real kTribonacciT2 = 1.22074408460575947536L;  // t^4 = t + 1
constexpr Real kForbiddenZ = 1.39312591194388626670L;    // z^7 - 2z^5 + z^3 - z - 1 = 0

FixedPointSolution solve_preset(const char* name, int q = 2, SolveOptions options = {}) {
    const OmegaSpec spec = preset_spec(name, q);
    return solve(build_automaton(spec), q, options);
}

int state(const FixedPointSolution& sol, const char* name) {
    const auto s = sol.automaton.find(name);
    REQUIRE(s.has_value());
    return *s;
}

}  // namespace

TEST_SUITE("fixed_point") {

TEST_CASE("golden brackets contain the reference roots") {
    const FixedPointSolution sol = solve_preset("golden");
    REQUIRE(sol.converged());
    const Bracket t1 = sol.at(state(sol, "1"));
    CHECK(t1.contains(kGoldenT1));
    CHECK(sol.root_value().contains(kGoldenRoot));
    CHECK(t1.width() <= 1e-12L);
    const std::vector<long long> cubic{1, 0, -1, -1};
    CHECK(verify_polynomial(sol, cubic, state(sol, "1")));
    CHECK(std::abs(eval_polynomial(cubic, t1.mid())) < 1e-10L);
}

TEST_CASE("tribonacci and forbidden-111 roots") {
    const FixedPointSolution trib = solve_preset("tribonacci");
    REQUIRE(trib.converged());
    CHECK(trib.at(state(trib, "2")).contains(kTribonacciT2));
    const std::vector<long long> quartic{1, 0, 0, -1, -1};
    CHECK(verify_polynomial(trib, quartic, state(trib, "2")));

    const FixedPointSolution f111 = solve_preset("forbidden111");
    REQUIRE(f111.converged());
    CHECK(f111.at(state(f111, "11")).contains(kForbiddenZ));
    const std::vector<long long> septic{1, 0, -2, 0, 1, 0, -1, -1};
    CHECK(verify_polynomial(f111, septic, state(f111, "11")));
    CHECK_FALSE(verify_polynomial(f111, quartic, state(f111, "11")));
}

TEST_CASE("full shift solves to m^(1/(q-1))") {
    for (int m = 2; m <= 4; ++m) {
        for (int q = 2; q <= 3; ++q) {
            const FixedPointSolution sol = solve(build_automaton(OmegaSpec::full_shift(m, q)), q);
            REQUIRE(sol.converged());
            CHECK(sol.root_value().contains(std::pow(static_cast<Real>(m), 1.0L / (q - 1)), 1e-15L));
        }
    }
}

TEST_CASE("iterates are monotone and ordered") {
    SolveOptions options;
    std::vector<Real> prev_lo;
    std::vector<Real> prev_hi;
    bool monotone = true;
    bool ordered = true;
    long sweeps = 0;
    options.observer = [&](long, std::span<const Real> lo, std::span<const Real> hi) {
        ++sweeps;
        for (std::size_t v = 0; v < lo.size(); ++v) {
            ordered = ordered && lo[v] <= hi[v];
            if (!prev_lo.empty()) monotone = monotone && prev_lo[v] <= lo[v] && hi[v] <= prev_hi[v];
        }
        prev_lo.assign(lo.begin(), lo.end());
        prev_hi.assign(hi.begin(), hi.end());
    };
    for (const char* name : {"golden", "tribonacci", "forbidden111"}) {
        prev_lo.clear();
        prev_hi.clear();
        const FixedPointSolution sol = solve_preset(name, 2, options);
        CHECK(sol.converged());
    }
    CHECK(sweeps > 10);
    CHECK(monotone);
    CHECK(ordered);
}

TEST_CASE("random starts converge to the same fixed point") {
    std::mt19937_64 rng(4242);
    for (const char* name : {"golden", "tribonacci", "forbidden111"}) {
        const FixedPointSolution sol = solve_preset(name);
        const PrefixAutomaton& aut = sol.automaton;
        const Real top = upper_start(aut, 2);
        std::uniform_real_distribution<double> start(1.0, static_cast<double>(top));
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Real> y(static_cast<std::size_t>(aut.size()));
            for (auto& v : y) v = start(rng);
            const std::vector<Real> end = iterate_map(aut, 2, y, 400);
            for (int v = 0; v < aut.size(); ++v) CHECK(sol.at(v).contains(end[static_cast<std::size_t>(v)], 1e-12L));
        }
    }
}

TEST_CASE("the fixed-point equation holds at the midpoints") {
    for (const char* name : {"golden", "tribonacci", "forbidden111", "full:3"}) {
        const FixedPointSolution sol = solve_preset(name);
        const auto mid = sol.midpoints();
        for (int v = 0; v < sol.automaton.size(); ++v) {
            Real sum = 0;
            for (int w : sol.automaton.edges(v)) {
                if (w != PrefixAutomaton::kNoEdge) sum += mid[static_cast<std::size_t>(w)];
            }
            CHECK(std::abs(mid[static_cast<std::size_t>(v)] * mid[static_cast<std::size_t>(v)] - sum) < 1e-10L);
        }
        CHECK(sol.residual < 1e-10L);
    }
}

TEST_CASE("multi-precision run agrees with extended precision") {
    SolveOptions multi;
    multi.precision = Precision::Multi;
    multi.tol = 1e-15L;
    const FixedPointSolution a = solve_preset("golden");
    const FixedPointSolution b = solve_preset("golden", 2, multi);
    REQUIRE(b.converged());
    CHECK_FALSE(a.root_value().disjoint_from(b.root_value()));
    CHECK(b.root_value().contains(kGoldenRoot));
    CHECK(b.root_value().width() < 1e-15L);
}

TEST_CASE("iteration budget exhaustion is reported") {
    SolveOptions options;
    options.max_iterations = 2;
    const FixedPointSolution sol = solve_preset("golden", 2, options);
    CHECK(sol.status == SolveStatus::NotConverged);
    CHECK(sol.root_value().contains(kGoldenRoot));
}

TEST_CASE("truncated beta automaton at the golden ratio") {
    const FixedPointSolution sol = solve(build_automaton(preset_spec("beta:golden")), 2);
    REQUIRE(sol.converged());
    CHECK(sol.root_value().contains(kGoldenRoot));
    const RadicalValue r = nested_radical_value(std::get<BetaShift>(preset_spec("beta:golden").payload()).digits, 2, 2);
    REQUIRE(r.converged);
    CHECK_FALSE(r.t.disjoint_from(sol.root_value()));
}

TEST_CASE("q = 3 on the golden shift") {
    const FixedPointSolution sol = solve_preset("golden", 3);
    REQUIRE(sol.converged());
    const auto mid = sol.midpoints();
    const int root = sol.automaton.root();
    Real sum = 0;
    for (int w : sol.automaton.edges(root)) {
        if (w != PrefixAutomaton::kNoEdge) sum += mid[static_cast<std::size_t>(w)];
    }
    CHECK(std::abs(std::pow(mid[static_cast<std::size_t>(root)], 3) - sum) < 1e-10L);
}

}  // TEST_SUITE
