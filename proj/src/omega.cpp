#include "mshift/omega.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace mshift {

std::string format_word(std::span<const int> word, int m) {
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (m > 10 && i > 0) out += ',';
        out += std::to_string(word[i]);
    }
    return out;
}

Word parse_word(std::string_view text, int m) {
    Word word;
    if (m > 10) {
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t comma = text.find(',', pos);
            if (comma == std::string_view::npos) comma = text.size();
            std::string_view item = text.substr(pos, comma - pos);
            if (item.empty()) throw SpecError("empty symbol in word '" + std::string(text) + "'");
            int value = 0;
            for (char c : item) {
                if (c < '0' || c > '9') throw SpecError("invalid symbol in word '" + std::string(text) + "'");
                value = value * 10 + (c - '0');
            }
            word.push_back(value);
            pos = comma + 1;
        }
    } else {
        for (char c : text) {
            if (c < '0' || c > '9') throw SpecError("invalid symbol in word '" + std::string(text) + "'");
            word.push_back(c - '0');
        }
    }
    for (int s : word) {
        if (s >= m) throw SpecError("symbol " + std::to_string(s) + " outside alphabet of size " + std::to_string(m));
    }
    return word;
}

// ---------------------------------------------------------------------------------------
// PrefixAutomaton

PrefixAutomaton::PrefixAutomaton(int m, int root, std::vector<std::vector<int>> edges, std::vector<Word> labels,
                                 std::optional<int> truncation_depth, std::vector<bool> frontier)
    : m_(m),
      root_(root),
      edges_(std::move(edges)),
      labels_(std::move(labels)),
      truncation_depth_(truncation_depth),
      frontier_(std::move(frontier)) {
    const int n = size();
    if (m_ < 2) throw SpecError("alphabet size must be >= 2");
    if (n == 0) throw SpecError("automaton has no states");
    if (root_ < 0 || root_ >= n) throw SpecError("root state out of range");
    if (frontier_.empty()) frontier_.assign(static_cast<std::size_t>(n), false);
    if (static_cast<int>(frontier_.size()) != n) throw SpecError("frontier flags do not match state count");
    if (labels_.empty()) labels_.resize(static_cast<std::size_t>(n));
    if (static_cast<int>(labels_.size()) != n) throw SpecError("labels do not match state count");
    const bool any_frontier = std::find(frontier_.begin(), frontier_.end(), true) != frontier_.end();
    if (any_frontier && !truncation_depth_) throw SpecError("frontier states require a truncation depth");

    for (int v = 0; v < n; ++v) {
        const auto& row = edges_[v];
        if (static_cast<int>(row.size()) != m_) {
            throw SpecError("state " + std::to_string(v) + " has " + std::to_string(row.size()) +
                            " edge slots, expected " + std::to_string(m_));
        }
        for (int target : row) {
            if (target != kNoEdge && (target < 0 || target >= n)) {
                throw SpecError("edge target out of range at state " + std::to_string(v));
            }
        }
        const int deg = outdegree(v);
        if (frontier_[v] && deg != 0) throw SpecError("frontier state " + std::to_string(v) + " has edges");
        if (!frontier_[v] && deg == 0) {
            throw SpecError("state " + std::to_string(v) + " ('" + format_word(labels_[v], m_) +
                            "') has no outgoing edge");
        }
    }

    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<int> queue{root_};
    seen[root_] = true;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : edges_[v]) {
            if (w != kNoEdge && !seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (!seen[v]) throw SpecError("state " + std::to_string(v) + " is unreachable from the root");
    }
}

int PrefixAutomaton::outdegree(int state) const {
    return static_cast<int>(std::count_if(edges_[state].begin(), edges_[state].end(),
                                          [](int w) { return w != kNoEdge; }));
}

int PrefixAutomaton::max_outdegree() const {
    int best = 0;
    for (int v = 0; v < size(); ++v) {
        if (!frontier_[v]) best = std::max(best, outdegree(v));
    }
    return best;
}

std::string PrefixAutomaton::name(int state) const {
    if (state == root_) return "root";
    return format_word(labels_[state], m_);
}

std::optional<int> PrefixAutomaton::find(std::string_view name) const {
    for (int v = 0; v < size(); ++v) {
        if (this->name(v) == name) return v;
    }
    return std::nullopt;
}

std::optional<int> PrefixAutomaton::walk(std::span<const int> word) const {
    int state = root_;
    for (int symbol : word) {
        if (symbol < 0 || symbol >= m_) throw std::out_of_range("symbol outside alphabet");
        if (frontier_[state]) throw TruncationError("word runs past the truncation depth of the automaton");
        state = edges_[state][symbol];
        if (state == kNoEdge) return std::nullopt;
    }
    return state;
}

// ---------------------------------------------------------------------------------------
// OmegaSpec

std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::FullShift: return "full_shift";
        case Variant::SftMatrix: return "sft";
        case Variant::MultiStepSft: return "multi_step_sft";
        case Variant::BetaShift: return "beta_shift";
        case Variant::ExplicitAutomaton: return "automaton";
    }
    return "unknown";
}

OmegaSpec::OmegaSpec(int m, int q, Payload payload) : m_(m), q_(q), payload_(std::move(payload)) {
    if (m_ < 2) throw SpecError("alphabet size m must be >= 2, got " + std::to_string(m_));
    if (q_ < 2) throw SpecError("multiplicative base q must be >= 2, got " + std::to_string(q_));
}

OmegaSpec OmegaSpec::full_shift(int m, int q) { return OmegaSpec(m, q, FullShift{}); }

OmegaSpec OmegaSpec::sft(BinaryMatrix matrix, int q) {
    const int m = static_cast<int>(matrix.size());
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        if (static_cast<int>(matrix[i].size()) != m) throw SpecError("SFT matrix must be square");
        bool any = false;
        for (int a : matrix[i]) {
            if (a != 0 && a != 1) throw SpecError("SFT matrix entries must be 0 or 1");
            any = any || a == 1;
        }
        if (!any) throw SpecError("SFT matrix row " + std::to_string(i) + " has no allowed successor");
    }
    const bool primitive = m >= 2 && is_primitive(matrix);
    OmegaSpec spec(m, q, SftMatrix{std::move(matrix)});
    if (!primitive) spec.warnings_.push_back("SFT matrix is not primitive");
    return spec;
}

OmegaSpec OmegaSpec::multi_step(int m, int step, std::vector<Word> forbidden, int q) {
    if (step < 2) throw SpecError("multi-step SFT step length must be >= 2");
    for (const Word& w : forbidden) {
        if (static_cast<int>(w.size()) != step) {
            throw SpecError("forbidden word '" + format_word(w, m) + "' does not have length " + std::to_string(step));
        }
        for (int s : w) {
            if (s < 0 || s >= m) throw SpecError("forbidden word '" + format_word(w, m) + "' leaves the alphabet");
        }
    }
    return OmegaSpec(m, q, MultiStepSft{step, std::move(forbidden)});
}

OmegaSpec OmegaSpec::beta(const BetaReal& beta, int m, int q, int depth) {
    Word digits = greedy_beta_digits(beta, depth, m);
    validate_beta_digits(digits, m);
    return OmegaSpec(m, q, BetaShift{beta, std::move(digits)});
}

OmegaSpec OmegaSpec::beta_digits(Word digits, int m, int q) {
    validate_beta_digits(digits, m);
    return OmegaSpec(m, q, BetaShift{std::nullopt, std::move(digits)});
}

OmegaSpec OmegaSpec::explicit_automaton(PrefixAutomaton automaton, int q) {
    const int m = automaton.alphabet_size();
    return OmegaSpec(m, q, ExplicitAutomaton{std::move(automaton)});
}

// ---------------------------------------------------------------------------------------
// build_automaton

namespace {

PrefixAutomaton build_full(int m) {
    return PrefixAutomaton(m, 0, {std::vector<int>(static_cast<std::size_t>(m), 0)}, {Word{}});
}

PrefixAutomaton build_sft(const BinaryMatrix& a) {
    const int m = static_cast<int>(a.size());
    std::vector<std::vector<int>> edges(static_cast<std::size_t>(m + 1), std::vector<int>(m, PrefixAutomaton::kNoEdge));
    std::vector<Word> labels(static_cast<std::size_t>(m + 1));
    for (int j = 0; j < m; ++j) edges[0][j] = j + 1;
    for (int i = 0; i < m; ++i) {
        labels[i + 1] = Word{i};
        for (int j = 0; j < m; ++j) {
            if (a[i][j]) edges[i + 1][j] = j + 1;
        }
    }
    return PrefixAutomaton(m, 0, std::move(edges), std::move(labels));
}

// Removes states without infinite continuations and states no longer reachable, then
// renumbers. Throws if the root itself dies (Omega is empty).
PrefixAutomaton prune_and_compact(int m, std::vector<std::vector<int>> edges, std::vector<Word> labels) {
    const int n = static_cast<int>(edges.size());
    std::vector<bool> dead(static_cast<std::size_t>(n), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < n; ++v) {
            if (dead[v]) continue;
            for (int& w : edges[v]) {
                if (w != PrefixAutomaton::kNoEdge && dead[w]) w = PrefixAutomaton::kNoEdge;
            }
            if (std::all_of(edges[v].begin(), edges[v].end(), [](int w) { return w == PrefixAutomaton::kNoEdge; })) {
                dead[v] = true;
                changed = true;
            }
        }
    }
    if (dead[0]) throw SpecError("Omega is empty: every prefix dies after pruning forbidden words");

    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    std::vector<int> order;
    std::deque<int> queue{0};
    remap[0] = 0;
    order.push_back(0);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : edges[v]) {
            if (w != PrefixAutomaton::kNoEdge && remap[w] < 0) {
                remap[w] = static_cast<int>(order.size());
                order.push_back(w);
                queue.push_back(w);
            }
        }
    }
    std::vector<std::vector<int>> out_edges;
    std::vector<Word> out_labels;
    for (int v : order) {
        std::vector<int> row(static_cast<std::size_t>(m), PrefixAutomaton::kNoEdge);
        for (int j = 0; j < m; ++j) {
            if (edges[v][j] != PrefixAutomaton::kNoEdge) row[j] = remap[edges[v][j]];
        }
        out_edges.push_back(std::move(row));
        out_labels.push_back(labels[v]);
    }
    return PrefixAutomaton(m, 0, std::move(out_edges), std::move(out_labels));
}

PrefixAutomaton build_multi_step(int m, const MultiStepSft& sft) {
    const int context = sft.step - 1;
    std::set<Word> forbidden(sft.forbidden.begin(), sft.forbidden.end());

    // Short prefixes (length < context) form a tree below the root; every word of length
    // `context` gets one state, indexed in base m after the tree part.
    std::vector<Word> labels;
    std::vector<int> layer_start;
    for (int len = 0; len < context; ++len) {
        layer_start.push_back(static_cast<int>(labels.size()));
        const int count = static_cast<int>(std::pow(m, len));
        for (int idx = 0; idx < count; ++idx) {
            Word w(static_cast<std::size_t>(len));
            for (int pos = len - 1, x = idx; pos >= 0; --pos, x /= m) w[pos] = x % m;
            labels.push_back(std::move(w));
        }
    }
    const int context_start = static_cast<int>(labels.size());
    const int context_count = static_cast<int>(std::pow(m, context));
    for (int idx = 0; idx < context_count; ++idx) {
        Word w(static_cast<std::size_t>(context));
        for (int pos = context - 1, x = idx; pos >= 0; --pos, x /= m) w[pos] = x % m;
        labels.push_back(std::move(w));
    }

    std::vector<std::vector<int>> edges(labels.size(), std::vector<int>(m, PrefixAutomaton::kNoEdge));
    for (int len = 0; len < context; ++len) {
        const int count = static_cast<int>(std::pow(m, len));
        const int child_start = len + 1 < context ? layer_start[len + 1] : context_start;
        for (int idx = 0; idx < count; ++idx) {
            for (int j = 0; j < m; ++j) edges[layer_start[len] + idx][j] = child_start + idx * m + j;
        }
    }
    for (int idx = 0; idx < context_count; ++idx) {
        const Word& w = labels[context_start + idx];
        Word extended = w;
        extended.push_back(0);
        for (int j = 0; j < m; ++j) {
            extended.back() = j;
            if (forbidden.count(extended)) continue;
            const int next_idx = (idx * m + j) % context_count;
            edges[context_start + idx][j] = context_start + next_idx;
        }
    }
    return prune_and_compact(m, std::move(edges), std::move(labels));
}

PrefixAutomaton build_beta(int m, const Word& digits) {
    const int depth = static_cast<int>(digits.size());
    std::vector<std::vector<int>> edges(static_cast<std::size_t>(depth + 1), std::vector<int>(m, PrefixAutomaton::kNoEdge));
    std::vector<Word> labels(static_cast<std::size_t>(depth + 1));
    std::vector<bool> frontier(static_cast<std::size_t>(depth + 1), false);
    for (int k = 0; k < depth; ++k) {
        const int d = digits[k];
        for (int j = 0; j < d; ++j) edges[k][j] = 0;
        edges[k][d] = k + 1;
        labels[k + 1] = labels[k];
        labels[k + 1].push_back(d);
    }
    frontier[depth] = true;
    return PrefixAutomaton(m, 0, std::move(edges), std::move(labels), depth, std::move(frontier));
}

}  // namespace

PrefixAutomaton build_automaton(const OmegaSpec& spec) {
    const int m = spec.m();
    return std::visit(
        [m](const auto& payload) -> PrefixAutomaton {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, FullShift>) {
                return build_full(m);
            } else if constexpr (std::is_same_v<T, SftMatrix>) {
                return build_sft(payload.matrix);
            } else if constexpr (std::is_same_v<T, MultiStepSft>) {
                return build_multi_step(m, payload);
            } else if constexpr (std::is_same_v<T, BetaShift>) {
                return build_beta(m, payload.digits);
            } else {
                return payload.automaton;
            }
        },
        spec.payload());
}

// ---------------------------------------------------------------------------------------
// Counting

Real log_big(const BigInt& x) {
    if (x <= 0) throw std::domain_error("log of non-positive integer");
    const auto bits = static_cast<long>(boost::multiprecision::msb(x)) + 1;
    if (bits <= 64) return std::log(static_cast<Real>(static_cast<std::uint64_t>(x)));
    const long shift = bits - 64;
    const BigInt top = x >> shift;
    return std::log(static_cast<Real>(static_cast<std::uint64_t>(top))) + static_cast<Real>(shift) * std::log(2.0L);
}

Real PrefixCountTable::log_count(int k, int m) const { return log_big(at(k)) / std::log(static_cast<Real>(m)); }

PrefixCountTable count_prefixes(const PrefixAutomaton& aut, int depth) {
    if (depth < 0) throw std::invalid_argument("count depth must be non-negative");
    const int n = aut.size();
    std::vector<BigInt> paths(static_cast<std::size_t>(n), 0);
    paths[aut.root()] = 1;
    std::vector<BigInt> counts;
    counts.reserve(static_cast<std::size_t>(depth));
    for (int k = 1; k <= depth; ++k) {
        std::vector<BigInt> next(static_cast<std::size_t>(n), 0);
        for (int v = 0; v < n; ++v) {
            if (paths[v] == 0) continue;
            if (aut.is_frontier(v)) {
                throw TruncationError("prefix counts at depth " + std::to_string(k) +
                                      " need a deeper truncation than " +
                                      std::to_string(aut.truncation_depth().value_or(0)));
            }
            for (int w : aut.edges(v)) {
                if (w != PrefixAutomaton::kNoEdge) next[w] += paths[v];
            }
        }
        paths = std::move(next);
        counts.push_back(std::accumulate(paths.begin(), paths.end(), BigInt(0)));
    }
    return PrefixCountTable(std::move(counts));
}

// ---------------------------------------------------------------------------------------
// Spherical symmetry

namespace {

struct Layer {
    std::vector<int> states;  // sorted, distinct
    std::vector<Word> reps;   // representative prefix per state
};

Layer advance(const PrefixAutomaton& aut, const Layer& layer) {
    std::vector<std::pair<int, Word>> found;
    std::vector<bool> seen(static_cast<std::size_t>(aut.size()), false);
    for (std::size_t i = 0; i < layer.states.size(); ++i) {
        const int v = layer.states[i];
        for (int j = 0; j < aut.alphabet_size(); ++j) {
            const int w = aut.next(v, j);
            if (w == PrefixAutomaton::kNoEdge || seen[w]) continue;
            seen[w] = true;
            Word rep = layer.reps[i];
            rep.push_back(j);
            found.emplace_back(w, std::move(rep));
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Layer out;
    for (auto& [state, rep] : found) {
        out.states.push_back(state);
        out.reps.push_back(std::move(rep));
    }
    return out;
}

enum class LayerCheck { Uniform, Witness, Frontier };

LayerCheck check_layer(const PrefixAutomaton& aut, const Layer& layer, SymmetryResult& result) {
    for (int v : layer.states) {
        if (aut.is_frontier(v)) return LayerCheck::Frontier;
    }
    const int deg0 = aut.outdegree(layer.states.front());
    for (std::size_t i = 1; i < layer.states.size(); ++i) {
        if (aut.outdegree(layer.states[i]) != deg0) {
            result.symmetric = false;
            result.decided_forever = true;
            // Order the witness by outdegree, larger first.
            if (deg0 > aut.outdegree(layer.states[i])) {
                result.witness = std::make_pair(layer.reps.front(), layer.reps[i]);
            } else {
                result.witness = std::make_pair(layer.reps[i], layer.reps.front());
            }
            return LayerCheck::Witness;
        }
    }
    return LayerCheck::Uniform;
}

}  // namespace

SymmetryResult is_spherically_symmetric(const PrefixAutomaton& aut, int depth) {
    if (depth < 1) throw std::invalid_argument("symmetry check depth must be >= 1");
    SymmetryResult result;
    Layer layer{{aut.root()}, {Word{}}};
    for (int k = 0; k < depth; ++k) {
        const LayerCheck check = check_layer(aut, layer, result);
        if (check == LayerCheck::Witness) {
            result.checked_depth = k + 1;
            return result;
        }
        if (check == LayerCheck::Frontier) {
            throw TruncationError("symmetry check at depth " + std::to_string(k) +
                                  " reaches the truncation frontier");
        }
        result.checked_depth = k + 1;
        layer = advance(aut, layer);
    }
    return result;
}

SymmetryResult structural_symmetry(const PrefixAutomaton& aut) {
    // The state sets of consecutive depths form a deterministic sequence over subsets of a
    // finite set, so it becomes periodic; once a set repeats, every later depth was checked.
    constexpr int kMaxLayers = 1 << 16;
    SymmetryResult result;
    Layer layer{{aut.root()}, {Word{}}};
    std::set<std::vector<int>> seen;
    for (int k = 0; k < kMaxLayers; ++k) {
        if (!seen.insert(layer.states).second) {
            result.decided_forever = true;
            return result;
        }
        const LayerCheck check = check_layer(aut, layer, result);
        if (check == LayerCheck::Witness) {
            result.checked_depth = k + 1;
            return result;
        }
        if (check == LayerCheck::Frontier) return result;
        result.checked_depth = k + 1;
        layer = advance(aut, layer);
    }
    return result;
}

bool is_primitive(const BinaryMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0) return false;
    const std::size_t bound = (n - 1) * (n - 1) + 1;
    BinaryMatrix power = a;
    for (std::size_t k = 1; k <= bound; ++k) {
        bool positive = true;
        for (const auto& row : power) {
            positive = positive && std::all_of(row.begin(), row.end(), [](int x) { return x != 0; });
        }
        if (positive) return true;
        BinaryMatrix next(n, std::vector<int>(n, 0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t l = 0; l < n; ++l) {
                if (!power[i][l]) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    if (a[l][j]) next[i][j] = 1;
                }
            }
        }
        power = std::move(next);
    }
    return false;
}

}  // namespace mshift
