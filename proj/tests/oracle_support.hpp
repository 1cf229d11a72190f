#pragma once

// Independent ground truth for the tests: admissibility straight from the defining
// constraints of each Omega, and brute-force counts over all m^n words.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "mshift/omega.hpp"

namespace testing {

using mshift::Word;

/// True iff `word` is a prefix of some point of Omega.
using RawOmega = std::function<bool(const Word&)>;

inline RawOmega raw_sft(const mshift::BinaryMatrix& a) {
    return [a](const Word& w) {
        for (std::size_t i = 1; i < w.size(); ++i) {
            if (!a[w[i - 1]][w[i]]) return false;
        }
        return true;
    };
}

/// Words with no factor in `forbidden`. Every such word extends (the tests only use
/// forbidden sets where a safe continuation exists).
inline RawOmega raw_forbidden(const std::vector<Word>& forbidden) {
    return [forbidden](const Word& w) {
        for (const Word& f : forbidden) {
            for (std::size_t i = 0; i + f.size() <= w.size(); ++i) {
                if (std::equal(f.begin(), f.end(), w.begin() + static_cast<long>(i))) return false;
            }
        }
        return true;
    };
}

/// Every suffix of the word is lexicographically at most the digit sequence.
inline RawOmega raw_beta(const std::vector<int>& digits) {
    return [digits](const Word& w) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            for (std::size_t j = i; j < w.size(); ++j) {
                const int d = digits.at(j - i);
                if (w[j] < d) break;
                if (w[j] > d) return false;
            }
        }
        return true;
    };
}

inline RawOmega raw_full() {
    return [](const Word&) { return true; };
}

/// Calls visit on every word of length n over {0..m-1}, in lexicographic order.
inline void for_each_word(int m, int n, const std::function<void(const Word&)>& visit) {
    Word w(static_cast<std::size_t>(n), 0);
    while (true) {
        visit(w);
        int i = n - 1;
        while (i >= 0 && w[static_cast<std::size_t>(i)] == m - 1) w[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) return;
        ++w[static_cast<std::size_t>(i)];
    }
}

inline std::uint64_t brute_prefix_count(int m, int k, const RawOmega& omega) {
    std::uint64_t count = 0;
    for_each_word(m, k, [&](const Word& w) { count += omega(w) ? 1 : 0; });
    return count;
}

/// x in X_Omega restricted to length n: the subsequence along every i, qi, q^2 i, ... passes.
inline bool raw_X_admissible(const Word& x, int q, const RawOmega& omega) {
    const long n = static_cast<long>(x.size());
    for (long i = 1; i <= n; ++i) {
        if (i % q == 0) continue;
        Word fiber;
        for (long pos = i; pos <= n; pos *= q) fiber.push_back(x[static_cast<std::size_t>(pos - 1)]);
        if (!omega(fiber)) return false;
    }
    return true;
}

inline std::uint64_t brute_X_count(int m, int q, int n, const RawOmega& omega) {
    std::uint64_t count = 0;
    for_each_word(m, n, [&](const Word& w) { count += raw_X_admissible(w, q, omega) ? 1 : 0; });
    return count;
}

}  // namespace testing

namespace testing {

/// Factor-free words that also admit a factor-free continuation long enough to close a
/// cycle in the graph of (step-1)-words, hence an infinite one.
inline RawOmega raw_forbidden_extendable(int m, int step, const std::vector<Word>& forbidden) {
    RawOmega free = raw_forbidden(forbidden);
    int extension = 1;
    for (int i = 0; i < step - 1; ++i) extension *= m;
    extension += 1;
    return [=](const Word& w) {
        if (!free(w)) return false;
        bool found = false;
        for_each_word(m, extension, [&](const Word& u) {
            if (found) return;
            Word longer = w;
            longer.insert(longer.end(), u.begin(), u.end());
            found = free(longer);
        });
        return found;
    };
}

}  // namespace testing
