#include "mshift/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mshift/dimension.hpp"
#include "mshift/rng.hpp"

namespace mshift {

namespace {

constexpr Real kRowTolerance = 1e-9L;

void validate_layer(const PrefixAutomaton& aut, const MarkovMeasure::Rows& rows) {
    if (static_cast<int>(rows.size()) != aut.size()) throw std::invalid_argument("measure rows do not match state count");
    const int m = aut.alphabet_size();
    for (int v = 0; v < aut.size(); ++v) {
        const auto& row = rows[v];
        if (aut.is_frontier(v) && row.empty()) continue;
        if (static_cast<int>(row.size()) != m) {
            throw std::invalid_argument("measure row for state " + aut.name(v) + " has wrong length");
        }
        if (aut.is_frontier(v)) continue;
        Real sum = 0;
        for (int j = 0; j < m; ++j) {
            if (!(row[j] >= 0)) throw std::invalid_argument("negative probability at state " + aut.name(v));
            if (row[j] > 0 && aut.next(v, j) == PrefixAutomaton::kNoEdge) {
                throw std::invalid_argument("probability on a missing edge at state " + aut.name(v));
            }
            sum += row[j];
        }
        if (std::abs(sum - 1) > kRowTolerance) {
            throw std::invalid_argument("measure row for state " + aut.name(v) + " does not sum to 1");
        }
    }
}

Real row_entropy(std::span<const Real> row, int m) {
    Real h = 0;
    for (Real p : row) {
        if (p > 0) h -= p * log_base(p, m);
    }
    return h;
}

Real to_real(const BigInt& x) { return x.convert_to<Real>(); }

}  // namespace

// ---------------------------------------------------------------------------------------
// MarkovMeasure

MarkovMeasure::MarkovMeasure(PrefixAutomaton aut, Rows rows) : MarkovMeasure(std::move(aut), std::vector<Rows>{std::move(rows)}) {}

MarkovMeasure::MarkovMeasure(PrefixAutomaton aut, std::vector<Rows> layers) : aut_(std::move(aut)), layers_(std::move(layers)) {
    if (layers_.empty()) throw std::invalid_argument("measure needs at least one layer of rows");
    for (const auto& rows : layers_) validate_layer(aut_, rows);
}

Real MarkovMeasure::cylinder_prob(std::span<const int> word) const {
    int state = aut_.root();
    Real prob = 1;
    for (std::size_t k = 0; k < word.size(); ++k) {
        const int symbol = word[k];
        if (symbol < 0 || symbol >= aut_.alphabet_size()) throw std::out_of_range("symbol outside alphabet");
        if (aut_.is_frontier(state)) throw TruncationError("cylinder runs past the truncation depth");
        const int next = aut_.next(state, symbol);
        if (next == PrefixAutomaton::kNoEdge) return 0;
        prob *= row(state, static_cast<int>(k))[symbol];
        state = next;
    }
    return prob;
}

OptimalMeasure optimal_measure(const FixedPointSolution& sol) {
    const PrefixAutomaton& aut = sol.automaton;
    if (!aut.is_exact()) {
        throw TruncationError("the optimal measure needs an exact automaton; frontier states have no certificate");
    }
    const auto mids = sol.midpoints();
    MarkovMeasure::Rows rows(static_cast<std::size_t>(aut.size()), std::vector<Real>(aut.alphabet_size(), 0));
    for (int v = 0; v < aut.size(); ++v) {
        Real total = 0;
        for (int w : aut.edges(v)) {
            if (w != PrefixAutomaton::kNoEdge) total += mids[w];
        }
        for (int j = 0; j < aut.alphabet_size(); ++j) {
            const int w = aut.next(v, j);
            if (w != PrefixAutomaton::kNoEdge) rows[v][j] = mids[w] / total;
        }
    }
    return OptimalMeasure{MarkovMeasure(aut, std::move(rows)), sol};
}

MarkovMeasure uniform_continuation_measure(const PrefixAutomaton& aut) {
    MarkovMeasure::Rows rows(static_cast<std::size_t>(aut.size()));
    for (int v = 0; v < aut.size(); ++v) {
        if (aut.is_frontier(v)) continue;
        rows[v].assign(static_cast<std::size_t>(aut.alphabet_size()), 0);
        const Real share = 1 / static_cast<Real>(aut.outdegree(v));
        for (int j = 0; j < aut.alphabet_size(); ++j) {
            if (aut.next(v, j) != PrefixAutomaton::kNoEdge) rows[v][j] = share;
        }
    }
    return MarkovMeasure(aut, std::move(rows));
}

MarkovMeasure conditioned_uniform_measure(const PrefixAutomaton& aut, int depth) {
    if (depth < 1) throw std::invalid_argument("conditioning depth must be >= 1");
    const int n = aut.size();
    // paths[r][v]: number of length-r paths leaving v.
    std::vector<std::vector<BigInt>> paths(static_cast<std::size_t>(depth + 1), std::vector<BigInt>(n, 0));
    std::fill(paths[0].begin(), paths[0].end(), BigInt(1));
    for (int r = 1; r <= depth; ++r) {
        for (int v = 0; v < n; ++v) {
            if (aut.is_frontier(v)) continue;
            for (int w : aut.edges(v)) {
                if (w == PrefixAutomaton::kNoEdge) continue;
                if (aut.is_frontier(w) && r > 1) throw TruncationError("conditioning depth exceeds truncation");
                paths[r][v] += paths[r - 1][w];
            }
        }
    }
    std::vector<MarkovMeasure::Rows> layers;
    for (int k = 0; k < depth; ++k) {
        const int remaining = depth - k;
        MarkovMeasure::Rows rows(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            if (aut.is_frontier(v)) continue;
            rows[v].assign(static_cast<std::size_t>(aut.alphabet_size()), 0);
            const Real total = to_real(paths[remaining][v]);
            for (int j = 0; j < aut.alphabet_size(); ++j) {
                const int w = aut.next(v, j);
                if (w != PrefixAutomaton::kNoEdge) rows[v][j] = to_real(paths[remaining - 1][w]) / total;
            }
        }
        layers.push_back(std::move(rows));
    }
    layers.push_back(uniform_continuation_measure(aut).layer(0));
    return MarkovMeasure(aut, std::move(layers));
}

MarkovMeasure perturb_rows(const MarkovMeasure& base, Real amplitude, std::uint64_t seed) {
    const PrefixAutomaton& aut = base.automaton();
    std::vector<MarkovMeasure::Rows> layers;
    for (int k = 0; k < base.layer_count(); ++k) {
        MarkovMeasure::Rows rows = base.layer(k);
        for (int v = 0; v < aut.size(); ++v) {
            if (aut.is_frontier(v) || aut.outdegree(v) < 2) continue;
            SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(v));
            Real total = 0;
            for (int j = 0; j < aut.alphabet_size(); ++j) {
                if (aut.next(v, j) == PrefixAutomaton::kNoEdge) continue;
                const Real noise = amplitude * static_cast<Real>(2 * rng.uniform() - 1);
                rows[v][j] = std::max<Real>(rows[v][j] + noise, 1e-6L);
                total += rows[v][j];
            }
            for (Real& p : rows[v]) p /= total;
        }
        layers.push_back(std::move(rows));
    }
    return MarkovMeasure(aut, std::move(layers));
}

// ---------------------------------------------------------------------------------------
// GeneralMeasure

GeneralMeasure::GeneralMeasure(int m, std::vector<std::map<Word, Real>> levels, Real tolerance)
    : m_(m), levels_(std::move(levels)) {
    if (m_ < 2) throw std::invalid_argument("alphabet size must be >= 2");
    if (levels_.empty()) throw std::invalid_argument("general measure needs depth >= 1");
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        for (const auto& [word, mass] : levels_[k]) {
            if (word.size() != k + 1) throw std::invalid_argument("cylinder word stored at the wrong depth");
            for (int s : word) {
                if (s < 0 || s >= m_) throw std::invalid_argument("cylinder word leaves the alphabet");
            }
            if (!(mass >= 0 && mass <= 1 + tolerance)) throw std::invalid_argument("cylinder mass outside [0, 1]");
        }
    }
    const Real err = consistency_error();
    if (!(err <= tolerance)) {
        throw std::invalid_argument("cylinder masses are not consistent (error " + std::to_string(static_cast<double>(err)) + ")");
    }
}

GeneralMeasure GeneralMeasure::from_markov(const MarkovMeasure& measure, int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    const PrefixAutomaton& aut = measure.automaton();
    std::vector<std::map<Word, Real>> levels(static_cast<std::size_t>(depth));
    struct Node {
        Word word;
        int state;
        Real mass;
    };
    std::vector<Node> frontier{{Word{}, aut.root(), 1}};
    for (int k = 0; k < depth; ++k) {
        std::vector<Node> next;
        for (const Node& node : frontier) {
            if (aut.is_frontier(node.state)) throw TruncationError("measure depth exceeds truncation");
            const auto row = measure.row(node.state, k);
            for (int j = 0; j < aut.alphabet_size(); ++j) {
                const int w = aut.next(node.state, j);
                if (w == PrefixAutomaton::kNoEdge || row[j] <= 0) continue;
                Word word = node.word;
                word.push_back(j);
                const Real mass = node.mass * row[j];
                levels[k].emplace(word, mass);
                next.push_back({std::move(word), w, mass});
            }
        }
        frontier = std::move(next);
    }
    return GeneralMeasure(aut.alphabet_size(), std::move(levels), 1e-9L);
}

Real GeneralMeasure::mass(const Word& word) const {
    if (word.empty()) return 1;
    if (static_cast<int>(word.size()) > depth()) throw std::out_of_range("word longer than the measure depth");
    const auto& lvl = levels_[word.size() - 1];
    const auto it = lvl.find(word);
    return it == lvl.end() ? 0 : it->second;
}

Real GeneralMeasure::consistency_error() const {
    Real total = 0;
    for (const auto& [word, mass] : levels_.front()) total += mass;
    Real err = std::abs(total - 1);
    for (std::size_t k = 0; k + 1 < levels_.size(); ++k) {
        std::map<Word, Real> child_sums;
        for (const auto& [word, mass] : levels_[k + 1]) {
            Word parent(word.begin(), word.end() - 1);
            child_sums[parent] += mass;
        }
        for (const auto& [word, mass] : levels_[k]) {
            const auto it = child_sums.find(word);
            const Real sum = it == child_sums.end() ? 0 : it->second;
            err = std::max(err, std::abs(mass - sum));
        }
        for (const auto& [parent, sum] : child_sums) {
            if (!levels_[k].count(parent)) err = std::max(err, sum);
        }
    }
    return err;
}

// ---------------------------------------------------------------------------------------
// Product measure on X_Omega

Real cylinder_prob_X(const MarkovMeasure& measure, std::span<const int> word, int q) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    const long n = static_cast<long>(word.size());
    Real prob = 1;
    Word fiber;
    for (long i = 1; i <= n; ++i) {
        if (i % q == 0) continue;
        fiber.clear();
        for (long pos = i; pos <= n; pos *= q) fiber.push_back(word[static_cast<std::size_t>(pos - 1)]);
        prob *= measure.cylinder_prob(fiber);
        if (prob == 0) return 0;
    }
    return prob;
}

// ---------------------------------------------------------------------------------------
// Entropy

Real EntropyProfile::partial_direct() const {
    const Real qq = static_cast<Real>(q);
    Real sum = 0;
    Real scale = 1 / (qq * qq);
    for (Real h : entropies) {
        sum += (qq - 1) * (qq - 1) * h * scale;
        scale /= qq;
    }
    return sum;
}

Real EntropyProfile::partial_conditional() const {
    const Real qq = static_cast<Real>(q);
    const int depth_k = depth();
    const Real last = std::pow(qq, -static_cast<Real>(depth_k));
    Real sum = entropies.front() * (1 - last);
    Real scale = 1 / qq;
    for (Real c : conditional) {
        sum += c * (scale - last);
        scale /= qq;
    }
    return (qq - 1) / qq * sum;
}

Real EntropyProfile::tail_bound() const { return weighted_series_tail(entropies.back(), depth(), q); }

EntropyProfile entropy_profile(const MarkovMeasure& measure, int depth, int q) {
    if (depth < 1) throw std::invalid_argument("entropy depth must be >= 1");
    const PrefixAutomaton& aut = measure.automaton();
    const int m = aut.alphabet_size();
    std::vector<Real> mass(static_cast<std::size_t>(aut.size()), 0);
    mass[aut.root()] = 1;

    EntropyProfile profile;
    profile.m = m;
    profile.q = q;
    Real running = 0;
    for (int k = 0; k < depth; ++k) {
        Real step = 0;
        std::vector<Real> next(mass.size(), 0);
        for (int v = 0; v < aut.size(); ++v) {
            if (mass[v] == 0) continue;
            if (aut.is_frontier(v)) throw TruncationError("entropy depth exceeds the truncation depth");
            const auto row = measure.row(v, k);
            step += mass[v] * row_entropy(row, m);
            for (int j = 0; j < m; ++j) {
                const int w = aut.next(v, j);
                if (w != PrefixAutomaton::kNoEdge) next[w] += mass[v] * row[j];
            }
        }
        if (k > 0) profile.conditional.push_back(step);
        running += step;
        profile.entropies.push_back(running);
        mass = std::move(next);
    }
    profile.s = clamp_unit(weighted_series(profile.entropies, q));
    return profile;
}

EntropyProfile entropy_profile(const GeneralMeasure& measure, int depth, int q) {
    if (depth < 1) throw std::invalid_argument("entropy depth must be >= 1");
    if (depth > measure.depth()) throw std::invalid_argument("general measure is not defined to the requested depth");
    EntropyProfile profile;
    profile.m = measure.alphabet_size();
    profile.q = q;
    for (int k = 1; k <= depth; ++k) {
        Real h = 0;
        for (const auto& [word, mass] : measure.level(k)) {
            if (mass > 0) h -= mass * log_base(mass, profile.m);
        }
        if (k > 1) profile.conditional.push_back(h - profile.entropies.back());
        profile.entropies.push_back(h);
    }
    profile.s = clamp_unit(weighted_series(profile.entropies, q));
    return profile;
}

OptimalityGap compare(const EntropyProfile& optimal, const EntropyProfile& candidate) {
    OptimalityGap out;
    out.gap = optimal.partial_direct() - candidate.partial_direct();
    out.slack = std::max(optimal.tail_bound(), candidate.tail_bound()) +
                64 * static_cast<Real>(optimal.depth()) * std::numeric_limits<Real>::epsilon();
    return out;
}

OptimalityGap optimality_gap(const FixedPointSolution& sol, const MarkovMeasure& candidate, int depth) {
    const OptimalMeasure opt = optimal_measure(sol);
    return compare(entropy_profile(opt.measure, depth, sol.q), entropy_profile(candidate, depth, sol.q));
}

OptimalityGap optimality_gap(const FixedPointSolution& sol, const GeneralMeasure& candidate, int depth) {
    const OptimalMeasure opt = optimal_measure(sol);
    return compare(entropy_profile(opt.measure, depth, sol.q), entropy_profile(candidate, depth, sol.q));
}

}  // namespace mshift
