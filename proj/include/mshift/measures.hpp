#pragma once

// Measures on Omega, the product measures P_mu they induce on X_Omega, and the entropy
// series s(Omega, mu).

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mshift/bracket.hpp"
#include "mshift/fixed_point.hpp"
#include "mshift/omega.hpp"

namespace mshift {

/// Measure on Omega given by transition rows on the prefix automaton. Rows may depend on
/// the depth: layer k drives the (k+1)-th symbol, the last layer every later one.
class MarkovMeasure {
public:
    using Rows = std::vector<std::vector<Real>>;

    MarkovMeasure(PrefixAutomaton aut, Rows rows);
    MarkovMeasure(PrefixAutomaton aut, std::vector<Rows> layers);

    const PrefixAutomaton& automaton() const { return aut_; }
    int layer_count() const { return static_cast<int>(layers_.size()); }
    const Rows& layer(int k) const { return layers_[static_cast<std::size_t>(std::min(k, layer_count() - 1))]; }
    std::span<const Real> row(int state, int depth = 0) const { return layer(depth)[state]; }

    /// mu[u]: product of transition probabilities along u; 0 if u is not a prefix.
    Real cylinder_prob(std::span<const int> word) const;

private:
    PrefixAutomaton aut_;
    std::vector<Rows> layers_;
};

/// The measure with mu[u] = prod_j t_{u_1..u_j} / t^q_{u_1..u_{j-1}}.
struct OptimalMeasure {
    MarkovMeasure measure;
    FixedPointSolution solution;

    const MarkovMeasure::Rows& transitions() const { return measure.layer(0); }
    std::span<const Real> initial() const { return measure.row(measure.automaton().root()); }
};

/// Rows are t_w / sum_{v->w'} t_w' from the solution midpoints, which equals t_w / t_v^q at
/// the fixed point and is stochastic by construction. Throws TruncationError on truncated
/// automata.
OptimalMeasure optimal_measure(const FixedPointSolution& sol);

/// Each available continuation equally likely.
MarkovMeasure uniform_continuation_measure(const PrefixAutomaton& aut);

/// Uniform measure on Pref_depth(Omega) (the Bernoulli measure conditioned on Omega to that
/// depth), continued by uniform continuations beyond it.
MarkovMeasure conditioned_uniform_measure(const PrefixAutomaton& aut, int depth);

/// Adds independent uniform(-amplitude, amplitude) noise to every entry on an edge of
/// every row with two or more edges, floors at 1e-6 and renormalises.
MarkovMeasure perturb_rows(const MarkovMeasure& base, Real amplitude, std::uint64_t seed);

/// Arbitrary prefix-consistent masses on Pref_k(Omega), k = 1..depth.
class GeneralMeasure {
public:
    /// `levels[k-1]` maps length-k words to their mass. Throws std::invalid_argument if the
    /// masses are not consistent and normalised within `tolerance`.
    GeneralMeasure(int m, std::vector<std::map<Word, Real>> levels, Real tolerance = 1e-12L);

    static GeneralMeasure from_markov(const MarkovMeasure& measure, int depth);

    int alphabet_size() const { return m_; }
    int depth() const { return static_cast<int>(levels_.size()); }
    const std::map<Word, Real>& level(int k) const { return levels_[static_cast<std::size_t>(k - 1)]; }
    Real mass(const Word& word) const;

    /// max over u of |mu[u] - sum_j mu[uj]|, including |sum_{|u|=1} mu[u] - 1|.
    Real consistency_error() const;

private:
    int m_;
    std::vector<std::map<Word, Real>> levels_;
};

/// P_mu[u] = prod over i <= |u|, q not dividing i, of mu[u|J_i].
Real cylinder_prob_X(const MarkovMeasure& measure, std::span<const int> word, int q);

struct EntropyProfile {
    int m = 2;
    int q = 2;
    /// H_k = H_m^mu(alpha_k), k = 1..K.
    std::vector<Real> entropies;
    /// H_m^mu(alpha_{k+1} | alpha_k), k = 1..K-1.
    std::vector<Real> conditional;
    /// s(Omega, mu) bracket: partial sum plus tail bound.
    Bracket s;

    int depth() const { return static_cast<int>(entropies.size()); }
    /// (q-1)^2 sum_{k<=K} H_k / q^{k+1}.
    Real partial_direct() const;
    /// The same partial sum rearranged through conditional entropies:
    /// ((q-1)/q) [H_1 (1 - q^{-K}) + sum_{j<K} H(alpha_{j+1}|alpha_j) (q^{-j} - q^{-K})].
    Real partial_conditional() const;
    Real tail_bound() const;
};

/// Entropies by aggregating mass over automaton states: H_{k+1} = H_k + sum_v mass_k(v) h(row_v).
EntropyProfile entropy_profile(const MarkovMeasure& measure, int depth, int q);

/// Entropies by summing -mu[u] log_m mu[u] over the explicit cylinders.
EntropyProfile entropy_profile(const GeneralMeasure& measure, int depth, int q);

struct OptimalityGap {
    /// Partial s of the optimal measure minus partial s of the candidate, at equal depth.
    Real gap = 0;
    /// Largest tail bound of the two series plus rounding allowance.
    Real slack = 0;

    /// The candidate is certainly worse than the optimum.
    bool strictly_dominated() const { return gap > slack; }
};

/// Partial sums of two profiles of equal depth and q, `reference` minus `candidate`.
OptimalityGap compare(const EntropyProfile& reference, const EntropyProfile& candidate);

OptimalityGap optimality_gap(const FixedPointSolution& sol, const MarkovMeasure& candidate, int depth);
OptimalityGap optimality_gap(const FixedPointSolution& sol, const GeneralMeasure& candidate, int depth);

}  // namespace mshift
