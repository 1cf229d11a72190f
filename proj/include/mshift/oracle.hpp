#pragma once

// Brute-force ground truth for X_Omega: exhaustive prefix enumeration, the fiber product
// count, Minkowski convergents and Monte-Carlo pointwise dimension.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mshift/bracket.hpp"
#include "mshift/measures.hpp"
#include "mshift/omega.hpp"

namespace mshift {

/// Positions i, qi, q^2 i, ... <= n for one i not divisible by q.
struct Fiber {
    long start = 1;
    std::vector<long> positions;

    int length() const { return static_cast<int>(positions.size()); }
};

/// Partition of {1..n} into the fibers J_i cap [1, n], q not dividing i.
class FiberDecomposition {
public:
    FiberDecomposition(long n, int q);

    long n() const { return n_; }
    int q() const { return q_; }
    const std::vector<Fiber>& fibers() const { return fibers_; }
    int max_length() const;
    /// Number of fibers of length exactly k.
    long count_of_length(int k) const;

private:
    long n_;
    int q_;
    std::vector<Fiber> fibers_;
};

struct EnumerationResult {
    BigInt count;
    /// Present when listing was requested and fit the budget.
    std::optional<std::vector<Word>> words;
    /// True when the count came from the product formula because the search was over budget.
    bool used_product_formula = false;
};

struct EnumerateOptions {
    bool list = false;
    /// Maximum number of search nodes before falling back to the product formula.
    std::uint64_t node_budget = std::uint64_t{1} << 28;
};

/// Visits every length-n word whose fiber words are all prefixes of Omega, in
/// lexicographic order. Positions are filled left to right; x_j continues the automaton
/// state of the fiber through j/q.
void for_each_X_prefix(const PrefixAutomaton& aut, int q, long n, const std::function<void(std::span<const int>)>& visit);

EnumerationResult enumerate_X_prefixes(const PrefixAutomaton& aut, int q, long n, const EnumerateOptions& options = {});

/// prod over fibers of N_{length}. Needs counts to depth floor(log_q n) + 1.
BigInt product_count(const PrefixCountTable& counts, int q, long n);
BigInt product_count(const PrefixAutomaton& aut, int q, long n);

struct Convergent {
    long n = 0;
    BigInt count;
    /// log_m |Pref_n(X_Omega)| / n
    Real value = 0;
};

std::vector<Convergent> empirical_minkowski(const PrefixAutomaton& aut, int q, std::span<const long> ns);

struct SampleRun {
    std::uint64_t seed = 0;
    long n = 0;
    int replicates = 0;
    /// -log_m P_mu[x_1^n] / n per replicate.
    std::vector<Real> values;
    Real mean = 0;
    Real stddev = 0;
    Real standard_error = 0;
    /// n divisible by q; the dimension theory is stated along such n.
    bool regular_n = true;
};

/// Samples each fiber word independently as a path of the measure and accumulates
/// -log_m of the product of its probabilities. Fiber i of replicate r draws from the
/// stream (seed, r, i), so results do not depend on evaluation order.
SampleRun sample_pointwise_dimension(const MarkovMeasure& measure, int q, long n, int replicates, std::uint64_t seed);

/// Sum of P_mu[u] over all u in Pref_n(X_Omega), enumerated exhaustively.
Real total_X_mass(const MarkovMeasure& measure, int q, long n);

}  // namespace mshift
