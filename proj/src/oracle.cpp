#include "mshift/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mshift/rng.hpp"

namespace mshift {

FiberDecomposition::FiberDecomposition(long n, int q) : n_(n), q_(q) {
    if (n < 1) throw std::invalid_argument("prefix length must be >= 1");
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    for (long i = 1; i <= n; ++i) {
        if (i % q == 0) continue;
        Fiber fiber{i, {}};
        for (long pos = i; pos <= n; pos *= q) fiber.positions.push_back(pos);
        fibers_.push_back(std::move(fiber));
    }
}

int FiberDecomposition::max_length() const {
    int best = 0;
    for (const auto& f : fibers_) best = std::max(best, f.length());
    return best;
}

long FiberDecomposition::count_of_length(int k) const {
    long count = 0;
    for (const auto& f : fibers_) count += f.length() == k ? 1 : 0;
    return count;
}

namespace {

class PrefixSearch {
public:
    PrefixSearch(const PrefixAutomaton& aut, int q, long n, std::uint64_t budget,
                 const std::function<void(std::span<const int>)>* visit)
        : aut_(aut), q_(q), n_(n), budget_(budget), visit_(visit),
          word_(static_cast<std::size_t>(n)), state_(static_cast<std::size_t>(n + 1), -1) {}

    // Returns false when the node budget ran out.
    bool run() { return descend(1); }
    const BigInt& leaves() const { return leaves_; }

private:
    bool descend(long pos) {
        if (pos > n_) {
            ++leaves_;
            if (visit_) (*visit_)(word_);
            return true;
        }
        const int parent = pos % q_ == 0 ? state_[static_cast<std::size_t>(pos / q_)] : aut_.root();
        if (aut_.is_frontier(parent)) {
            throw TruncationError("fiber through position " + std::to_string(pos) + " runs past the truncation depth");
        }
        for (int s = 0; s < aut_.alphabet_size(); ++s) {
            const int next = aut_.next(parent, s);
            if (next == PrefixAutomaton::kNoEdge) continue;
            if (++nodes_ > budget_) return false;
            word_[static_cast<std::size_t>(pos - 1)] = s;
            state_[static_cast<std::size_t>(pos)] = next;
            if (!descend(pos + 1)) return false;
        }
        return true;
    }

    const PrefixAutomaton& aut_;
    int q_;
    long n_;
    std::uint64_t budget_;
    const std::function<void(std::span<const int>)>* visit_;
    Word word_;
    std::vector<int> state_;
    std::uint64_t nodes_ = 0;
    BigInt leaves_ = 0;
};

// Integers in [1, x] not divisible by q.
long not_divisible_up_to(long x, int q) { return x - x / q; }

}  // namespace

void for_each_X_prefix(const PrefixAutomaton& aut, int q, long n, const std::function<void(std::span<const int>)>& visit) {
    if (n < 1) throw std::invalid_argument("prefix length must be >= 1");
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    PrefixSearch search(aut, q, n, std::numeric_limits<std::uint64_t>::max(), &visit);
    search.run();
}

EnumerationResult enumerate_X_prefixes(const PrefixAutomaton& aut, int q, long n, const EnumerateOptions& options) {
    if (n < 1) throw std::invalid_argument("prefix length must be >= 1");
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    EnumerationResult result;
    std::vector<Word> words;
    std::function<void(std::span<const int>)> collect = [&](std::span<const int> w) { words.emplace_back(w.begin(), w.end()); };
    PrefixSearch search(aut, q, n, options.node_budget, options.list ? &collect : nullptr);
    if (search.run()) {
        result.count = search.leaves();
        if (options.list) result.words = std::move(words);
    } else {
        result.count = product_count(aut, q, n);
        result.used_product_formula = true;
    }
    return result;
}

BigInt product_count(const PrefixCountTable& counts, int q, long n) {
    if (n < 1) throw std::invalid_argument("prefix length must be >= 1");
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    BigInt total = 1;
    // Fibers of length k start at i in (n/q^k, n/q^{k-1}] with q not dividing i.
    long upper = n;
    for (int k = 1; upper > 0; ++k) {
        const long lower = upper / q;
        const long fibers = not_divisible_up_to(upper, q) - not_divisible_up_to(lower, q);
        if (fibers > 0) {
            if (k > counts.depth()) {
                throw std::invalid_argument("prefix counts needed to depth " + std::to_string(k));
            }
            total *= boost::multiprecision::pow(counts.at(k), static_cast<unsigned>(fibers));
        }
        upper = lower;
    }
    return total;
}

BigInt product_count(const PrefixAutomaton& aut, int q, long n) {
    int depth = 0;
    for (long x = n; x > 0; x /= q) ++depth;
    return product_count(count_prefixes(aut, depth), q, n);
}

std::vector<Convergent> empirical_minkowski(const PrefixAutomaton& aut, int q, std::span<const long> ns) {
    std::vector<Convergent> out;
    const Real log_m = std::log(static_cast<Real>(aut.alphabet_size()));
    for (long n : ns) {
        Convergent c;
        c.n = n;
        c.count = product_count(aut, q, n);
        c.value = log_big(c.count) / (static_cast<Real>(n) * log_m);
        out.push_back(std::move(c));
    }
    return out;
}

SampleRun sample_pointwise_dimension(const MarkovMeasure& measure, int q, long n, int replicates, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("prefix length must be >= 1");
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    const PrefixAutomaton& aut = measure.automaton();
    const int m = aut.alphabet_size();
    SampleRun run;
    run.seed = seed;
    run.n = n;
    run.replicates = replicates;
    run.regular_n = n % q == 0;

    const Real scale = 1 / (static_cast<Real>(n) * std::log(static_cast<Real>(m)));
    for (int r = 0; r < replicates; ++r) {
        Real neg_log = 0;
        for (long i = 1; i <= n; ++i) {
            if (i % q == 0) continue;
            SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(i));
            int state = aut.root();
            int depth = 0;
            for (long pos = i; pos <= n; pos *= q, ++depth) {
                if (aut.is_frontier(state)) throw TruncationError("sampled fiber runs past the truncation depth");
                const auto row = measure.row(state, depth);
                const Real u = static_cast<Real>(rng.uniform());
                Real cumulative = 0;
                int symbol = -1;
                for (int j = 0; j < m; ++j) {
                    if (row[j] <= 0) continue;
                    symbol = j;
                    cumulative += row[j];
                    if (u < cumulative) break;
                }
                if (symbol < 0 || aut.next(state, symbol) == PrefixAutomaton::kNoEdge) {
                    throw std::logic_error("sampled a zero-probability transition");
                }
                neg_log -= std::log(row[symbol]);
                state = aut.next(state, symbol);
            }
        }
        run.values.push_back(neg_log * scale);
    }

    Real sum = 0;
    for (Real v : run.values) sum += v;
    run.mean = sum / static_cast<Real>(replicates);
    Real sq = 0;
    for (Real v : run.values) sq += (v - run.mean) * (v - run.mean);
    run.stddev = replicates > 1 ? std::sqrt(sq / static_cast<Real>(replicates - 1)) : 0;
    run.standard_error = run.stddev / std::sqrt(static_cast<Real>(replicates));
    return run;
}

Real total_X_mass(const MarkovMeasure& measure, int q, long n) {
    Real total = 0;
    for_each_X_prefix(measure.automaton(), q, n, [&](std::span<const int> w) { total += cylinder_prob_X(measure, w, q); });
    return total;
}

}  // namespace mshift
