#pragma once

// Closed sets Omega in the sequence space {0..m-1}^N and the quotient automata of their
// prefix trees.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mshift/beta.hpp"
#include "mshift/bracket.hpp"
#include "mshift/errors.hpp"

namespace mshift {

using Word = std::vector<int>;
using BigInt = boost::multiprecision::cpp_int;
using BinaryMatrix = std::vector<std::vector<int>>;

/// Digits concatenated for m <= 10, comma separated otherwise.
std::string format_word(std::span<const int> word, int m);
Word parse_word(std::string_view text, int m);

/// Deterministic automaton whose unfolding from the root is the tree of prefixes of Omega.
///
/// Each state stands for the class of prefixes sharing one follower tree. A truncated
/// automaton (beta-shifts) marks the states at the cut as frontier states; their
/// continuations are unknown rather than absent.
class PrefixAutomaton {
public:
    static constexpr int kNoEdge = -1;

    /// `edges[v][j]` is the target of symbol j from state v, or kNoEdge. `labels[v]` is a
    /// representative prefix leading to v. Throws SpecError when the invariants fail.
    PrefixAutomaton(int m, int root, std::vector<std::vector<int>> edges, std::vector<Word> labels,
                    std::optional<int> truncation_depth = std::nullopt,
                    std::vector<bool> frontier = {});

    int alphabet_size() const { return m_; }
    int size() const { return static_cast<int>(edges_.size()); }
    int root() const { return root_; }
    int next(int state, int symbol) const { return edges_[state][symbol]; }
    std::span<const int> edges(int state) const { return edges_[state]; }
    int outdegree(int state) const;
    /// Largest outdegree over non-frontier states.
    int max_outdegree() const;

    bool is_exact() const { return !truncation_depth_.has_value(); }
    std::optional<int> truncation_depth() const { return truncation_depth_; }
    bool is_frontier(int state) const { return frontier_[state]; }

    const Word& label(int state) const { return labels_[state]; }
    /// "root" for the root state, the formatted label otherwise.
    std::string name(int state) const;
    std::optional<int> find(std::string_view name) const;

    /// State reached by reading `word` from the root; nullopt when the word is not a prefix.
    /// Throws TruncationError when the word runs past a frontier state.
    std::optional<int> walk(std::span<const int> word) const;

private:
    int m_;
    int root_;
    std::vector<std::vector<int>> edges_;
    std::vector<Word> labels_;
    std::optional<int> truncation_depth_;
    std::vector<bool> frontier_;
};

struct FullShift {};

struct SftMatrix {
    BinaryMatrix matrix;
};

/// Forbidden words all share length `step`.
struct MultiStepSft {
    int step = 2;
    std::vector<Word> forbidden;
};

/// Parry digits of the beta-shift, truncated at `digits.size()`.
struct BetaShift {
    std::optional<BetaReal> beta;
    Word digits;
};

struct ExplicitAutomaton {
    PrefixAutomaton automaton;
};

enum class Variant { FullShift, SftMatrix, MultiStepSft, BetaShift, ExplicitAutomaton };

/// Declarative description of Omega together with the multiplicative base q.
class OmegaSpec {
public:
    using Payload = std::variant<FullShift, SftMatrix, MultiStepSft, BetaShift, ExplicitAutomaton>;

    static constexpr int kDefaultBetaDepth = 64;

    static OmegaSpec full_shift(int m, int q);
    static OmegaSpec sft(BinaryMatrix matrix, int q);
    static OmegaSpec multi_step(int m, int step, std::vector<Word> forbidden, int q);
    static OmegaSpec beta(const BetaReal& beta, int m, int q, int depth = kDefaultBetaDepth);
    static OmegaSpec beta_digits(Word digits, int m, int q);
    static OmegaSpec explicit_automaton(PrefixAutomaton automaton, int q);

    int m() const { return m_; }
    int q() const { return q_; }
    Variant variant() const { return static_cast<Variant>(payload_.index()); }
    const Payload& payload() const { return payload_; }

    /// Non-fatal observations made while validating (e.g. an SFT matrix that is not primitive).
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    OmegaSpec(int m, int q, Payload payload);

    int m_;
    int q_;
    Payload payload_;
    std::vector<std::string> warnings_;
};

std::string_view variant_name(Variant v);

PrefixAutomaton build_automaton(const OmegaSpec& spec);

/// N_k = |Pref_k(Omega)| for k = 1..depth.
class PrefixCountTable {
public:
    explicit PrefixCountTable(std::vector<BigInt> counts) : counts_(std::move(counts)) {}

    int depth() const { return static_cast<int>(counts_.size()); }
    const BigInt& at(int k) const { return counts_.at(static_cast<std::size_t>(k - 1)); }
    Real log_count(int k, int m) const;
    const std::vector<BigInt>& counts() const { return counts_; }

private:
    std::vector<BigInt> counts_;
};

/// Natural logarithm of a positive big integer.
Real log_big(const BigInt& x);

/// Throws TruncationError if `depth` exceeds what a truncated automaton determines.
PrefixCountTable count_prefixes(const PrefixAutomaton& aut, int depth);

struct SymmetryResult {
    bool symmetric = true;
    /// Depths 0..checked_depth-1 were examined.
    int checked_depth = 0;
    /// True when the answer holds for every depth, not just the examined ones.
    bool decided_forever = false;
    /// Two prefixes of equal length with different numbers of continuations.
    std::optional<std::pair<Word, Word>> witness;
};

/// Checks that all prefixes of each length k < depth have the same number of continuations.
SymmetryResult is_spherically_symmetric(const PrefixAutomaton& aut, int depth);

/// Decides spherical symmetry at every depth for an exact automaton by following the sets
/// of states reachable at each depth until that sequence repeats. Truncated automata are
/// checked up to their truncation depth and left undecided when no witness is found.
SymmetryResult structural_symmetry(const PrefixAutomaton& aut);

/// True iff some boolean power A^k with k <= (m-1)^2 + 1 is entrywise positive.
bool is_primitive(const BinaryMatrix& a);

}  // namespace mshift
