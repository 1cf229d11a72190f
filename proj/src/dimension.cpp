#include "mshift/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mshift {

Bracket hausdorff_dim(const FixedPointSolution& sol) {
    const int m = sol.automaton.alphabet_size();
    const Bracket logs = log_base_outward(sol.root_value(), m);
    const Real factor = static_cast<Real>(sol.q - 1);
    return clamp_unit({step_down(factor * logs.lo, 2), step_up(factor * logs.hi, 2)});
}

Real hausdorff_dim_from_children(const FixedPointSolution& sol) {
    const PrefixAutomaton& aut = sol.automaton;
    Real sum = 0;
    for (int w : aut.edges(aut.root())) {
        if (w != PrefixAutomaton::kNoEdge) sum += sol.mid(w);
    }
    return static_cast<Real>(sol.q - 1) / static_cast<Real>(sol.q) * log_base(sum, aut.alphabet_size());
}

Real weighted_series_tail(Real last_term, int depth, int q) {
    const Real qq = static_cast<Real>(q);
    const Real capped = std::min(last_term, static_cast<Real>(depth));
    return (qq - 1) * capped / std::pow(qq, static_cast<Real>(depth + 1)) + std::pow(qq, -static_cast<Real>(depth));
}

Bracket weighted_series(std::span<const Real> terms, int q) {
    const int depth = static_cast<int>(terms.size());
    if (depth < 1) throw std::invalid_argument("series depth must be >= 1");
    const Real qq = static_cast<Real>(q);
    const Real weight0 = (qq - 1) * (qq - 1);
    Real partial = 0;
    Real scale = 1 / (qq * qq);  // q^{-(k+1)} for k = 1
    for (int k = 1; k <= depth; ++k) {
        partial += weight0 * terms[k - 1] * scale;
        scale /= qq;
    }
    const Real tail = weighted_series_tail(terms.back(), depth, q);
    const Real margin = static_cast<Real>(8 + 2 * depth) * std::numeric_limits<Real>::epsilon() * (1 + std::abs(partial));
    return {partial - margin, partial + tail + margin};
}

Bracket minkowski_dim(const PrefixCountTable& counts, int m, int q, int depth) {
    if (depth < 1) throw std::invalid_argument("Minkowski series depth must be >= 1");
    if (depth > counts.depth()) throw std::invalid_argument("prefix counts not available to the requested depth");
    std::vector<Real> logs(static_cast<std::size_t>(depth));
    for (int k = 1; k <= depth; ++k) logs[k - 1] = counts.log_count(k, m);
    return clamp_unit(weighted_series(logs, q));
}

std::string_view equality_name(Equality e) {
    switch (e) {
        case Equality::Equal: return "Equal";
        case Equality::StrictlyLess: return "StrictlyLess";
        case Equality::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

EqualityVerdict equality_verdict(const PrefixAutomaton& aut) {
    EqualityVerdict out;
    out.symmetry = structural_symmetry(aut);
    if (out.symmetry.witness) {
        out.verdict = Equality::StrictlyLess;
    } else if (out.symmetry.symmetric && out.symmetry.decided_forever) {
        out.verdict = Equality::Equal;
    } else {
        out.verdict = Equality::Undetermined;
    }
    return out;
}

namespace {

// Innermost-first evaluation of the radical with directed rounding.
Real radical(std::span<const int> digits, int q, Real t, Real seed, bool upward) {
    Real x = seed;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        Real inner = static_cast<Real>(*it) * t + x;
        inner = upward ? step_up(inner, 2) : step_down(inner, 2);
        Real r = q == 2 ? std::sqrt(inner) : std::pow(inner, 1.0L / q);
        x = upward ? step_up(r, q == 2 ? 2 : 8) : step_down(r, q == 2 ? 2 : 8);
    }
    return x;
}

}  // namespace

RadicalValue nested_radical_value(std::span<const int> digits, int m, int q, Real tol) {
    if (digits.empty()) throw std::invalid_argument("nested radical needs at least one digit");
    if (q < 2 || m < 2) throw std::invalid_argument("nested radical needs m, q >= 2");
    const Real upper = q == 2 ? static_cast<Real>(m) : step_up(std::pow(static_cast<Real>(m), 1.0L / (q - 1)), 8);

    // The radical is concave and increasing in t, exceeds t at t = 1 and the true value
    // lies in [1, upper], so bisection on the sign of radical(t) - t is valid.
    Real lo_a = 1;
    Real lo_b = upper;
    Real hi_a = 1;
    Real hi_b = upper;
    for (int it = 0; it < 256; ++it) {
        const Real c = lo_a + (lo_b - lo_a) / 2;
        if (c <= lo_a || c >= lo_b) break;
        if (radical(digits, q, c, 1, false) >= c) lo_a = c; else lo_b = c;
    }
    for (int it = 0; it < 256; ++it) {
        const Real c = hi_a + (hi_b - hi_a) / 2;
        if (c <= hi_a || c >= hi_b) break;
        if (radical(digits, q, c, upper, true) <= c) hi_b = c; else hi_a = c;
    }
    RadicalValue out;
    out.t = {lo_a, hi_b};
    out.converged = out.t.width() < tol;
    return out;
}

DimensionReport analyze(const OmegaSpec& spec, const AnalyzeOptions& options) {
    PrefixAutomaton aut = build_automaton(spec);
    int depth = options.series_depth;
    if (const auto trunc = aut.truncation_depth()) depth = std::min(depth, *trunc);
    if (depth < 1) throw std::invalid_argument("series depth must be >= 1");

    PrefixCountTable counts = count_prefixes(aut, depth);
    SolveOptions solve_options;
    solve_options.tol = options.tol;
    solve_options.precision = options.precision;
    FixedPointSolution sol = solve(aut, spec.q(), solve_options);
    EqualityVerdict verdict = equality_verdict(aut);

    DimensionReport report{
        hausdorff_dim(sol),
        minkowski_dim(counts, spec.m(), spec.q(), depth),
        verdict.verdict,
        depth,
        std::move(counts),
        std::move(sol),
        std::move(verdict.symmetry),
        spec.warnings(),
    };
    return report;
}

}  // namespace mshift
