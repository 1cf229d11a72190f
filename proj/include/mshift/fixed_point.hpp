#pragma once

// Certified solution of t_v^q = sum_{v->w} t_w on a prefix automaton.

#include <functional>
#include <span>
#include <vector>

#include "mshift/bracket.hpp"
#include "mshift/omega.hpp"

namespace mshift {

enum class Precision {
    Extended,  // long double iterates
    Multi,     // 50 decimal digits, narrowed outward to long double at the end
};

enum class SolveStatus { Converged, NotConverged };

struct SolveOptions {
    Real tol = 1e-12L;
    long max_iterations = 1'000'000;
    Precision precision = Precision::Extended;
    /// Called after every sweep with the current lower and upper iterates (Extended only).
    std::function<void(long, std::span<const Real>, std::span<const Real>)> observer;
};

/// Per-state brackets [lo, hi] around the unique solution in [1, M^{1/(q-1)}]^V.
struct FixedPointSolution {
    PrefixAutomaton automaton;
    int q = 2;
    std::vector<Real> lo;
    std::vector<Real> hi;
    /// max |mid_v^q - sum mid_w| over non-frontier states whose own and children's
    /// brackets are narrower than the tolerance.
    Real residual = 0;
    long iterations = 0;
    SolveStatus status = SolveStatus::NotConverged;
    Real tol = 0;

    bool converged() const { return status == SolveStatus::Converged; }
    Bracket at(int state) const { return {lo[state], hi[state]}; }
    Bracket root_value() const { return at(automaton.root()); }
    Real mid(int state) const { return at(state).mid(); }
    std::vector<Real> midpoints() const;
};

/// Upper starting value for the decreasing run: B^{1/(q-1)} with B the maximal outdegree
/// (or m for truncated automata, whose frontier may hide larger outdegrees), rounded up.
Real upper_start(const PrefixAutomaton& aut, int q);

/// Runs the monotone map F(y)_v = (sum_{v->w} y_w)^{1/q} from the constant-1 vector and
/// from upper_start() until every bracket (the root bracket for truncated automata) is
/// narrower than `tol`. Frontier states are pinned to 1 below and m^{1/(q-1)} above.
/// Lower iterates round down, upper iterates round up.
FixedPointSolution solve(const PrefixAutomaton& aut, int q, const SolveOptions& options = {});

/// Plain Jacobi iteration of F from an arbitrary start (frontier entries stay fixed).
std::vector<Real> iterate_map(const PrefixAutomaton& aut, int q, std::vector<Real> start, long iterations);

/// True iff the polynomial (coefficients highest degree first) changes sign on the bracket
/// of `state`, or is zero at its midpoint up to evaluation error.
bool verify_polynomial(const FixedPointSolution& sol, std::span<const long long> coefficients, int state);

/// Polynomial value by Horner's rule, coefficients highest degree first.
Real eval_polynomial(std::span<const long long> coefficients, Real x);

}  // namespace mshift
