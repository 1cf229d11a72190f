#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mshift/bracket.hpp"
#include "mshift/fixed_point.hpp"
#include "mshift/omega.hpp"

namespace mshift {

/// [(q-1) log_m t_lo(root), (q-1) log_m t_hi(root)], rounded outward and clipped to [0, 1].
/// The caller checks sol.converged(); the bracket is valid either way.
Bracket hausdorff_dim(const FixedPointSolution& sol);

/// ((q-1)/q) log_m sum_i t_i over the children of the root, from midpoints.
Real hausdorff_dim_from_children(const FixedPointSolution& sol);

/// Bracket for (q-1)^2 sum_k a_k / q^{k+1} given a_1..a_K with a_k <= k and
/// a_{k+1} <= a_k + 1: the partial sum below, the partial sum plus the closed-form tail
/// (q-1) a_K / q^{K+1} + q^{-K} above. Both sides rounded outward.
Bracket weighted_series(std::span<const Real> terms, int q);

/// Upper bound on the tail of weighted_series beyond the last term.
Real weighted_series_tail(Real last_term, int depth, int q);

/// Minkowski dimension bracket from log_m N_1..log_m N_K.
Bracket minkowski_dim(const PrefixCountTable& counts, int m, int q, int depth);

enum class Equality { Equal, StrictlyLess, Undetermined };

std::string_view equality_name(Equality e);

struct EqualityVerdict {
    Equality verdict = Equality::Undetermined;
    SymmetryResult symmetry;
};

/// Equal iff the prefix tree is spherically symmetric at every depth; StrictlyLess once a
/// witness of asymmetry exists; Undetermined for truncated automata that look symmetric
/// up to the truncation depth.
EqualityVerdict equality_verdict(const PrefixAutomaton& aut);

struct RadicalValue {
    Bracket t;
    bool converged = false;
};

/// Fixed point of t = (d_1 t + (d_2 t + (... + (d_D t + seed)^{1/q} ...)^{1/q})^{1/q})^{1/q},
/// solved twice: with the innermost seed 1 (lower end) and m^{1/(q-1)} (upper end).
/// Converged iff the resulting bracket is narrower than `tol`.
RadicalValue nested_radical_value(std::span<const int> digits, int m, int q, Real tol = 1e-12L);

struct AnalyzeOptions {
    Real tol = 1e-12L;
    int series_depth = 40;
    Precision precision = Precision::Extended;
};

/// Full pipeline result for one Omega.
struct DimensionReport {
    Bracket hausdorff;
    Bracket minkowski;
    Equality equality = Equality::Undetermined;
    int series_depth = 0;
    PrefixCountTable prefix_counts{{}};
    FixedPointSolution solution;
    SymmetryResult symmetry;
    std::vector<std::string> warnings;

    bool converged() const { return solution.converged(); }
};

/// build -> count -> solve -> dimensions -> equality. The series depth is capped by the
/// truncation depth of truncated automata.
DimensionReport analyze(const OmegaSpec& spec, const AnalyzeOptions& options = {});

}  // namespace mshift
