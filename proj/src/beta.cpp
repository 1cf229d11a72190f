#include "mshift/beta.hpp"

#include <cctype>
#include <string>

#include "mshift/errors.hpp"

namespace mshift {

namespace {

// Remainders below this are treated as an exact termination of the expansion.
const BetaReal& snap_tolerance() {
    static const BetaReal tol("1e-250");
    return tol;
}

// log10 of the amplification that the working precision can absorb.
constexpr double kPrecisionBudgetDigits = 50.0;

}  // namespace

BetaReal parse_beta(std::string_view text) {
    std::string s(text);
    if (s == "golden" || s == "phi") return (1 + boost::multiprecision::sqrt(BetaReal(5))) / 2;
    bool seen_digit = false;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            seen_digit = true;
        } else if (c != '.' && c != 'e' && c != 'E' && c != '-' && c != '+') {
            throw SpecError("invalid beta literal '" + s + "'");
        }
    }
    if (!seen_digit) throw SpecError("invalid beta literal '" + s + "'");
    try {
        return BetaReal(s);
    } catch (const std::exception&) {
        throw SpecError("invalid beta literal '" + s + "'");
    }
}

std::vector<int> greedy_beta_digits(const BetaReal& beta, int depth, int m) {
    if (depth < 1) throw SpecError("beta digit depth must be >= 1");
    if (m < 2) throw SpecError("alphabet size must be >= 2");
    if (beta <= 1) throw SpecError("beta must exceed 1");
    if (beta > m) throw SpecError("beta must not exceed the alphabet size m=" + std::to_string(m));

    const double log_beta = static_cast<double>(boost::multiprecision::log10(beta));
    std::vector<int> digits;
    digits.reserve(static_cast<std::size_t>(depth));
    BetaReal x = 1;
    for (int k = 1; k <= depth; ++k) {
        if (k * log_beta > kPrecisionBudgetDigits) {
            throw SpecError("beta digit depth " + std::to_string(depth) +
                            " exceeds the working precision for this beta");
        }
        BetaReal y = beta * x;
        BetaReal d = boost::multiprecision::floor(y + snap_tolerance());
        x = y - d;
        digits.push_back(static_cast<int>(d));
        if (boost::multiprecision::abs(x) <= snap_tolerance()) {
            // Finite expansion d_1..d_k: switch to the quasi-greedy periodic form.
            std::vector<int> block = digits;
            block.back() -= 1;
            digits.clear();
            while (static_cast<int>(digits.size()) < depth) {
                for (int b : block) {
                    if (static_cast<int>(digits.size()) == depth) break;
                    digits.push_back(b);
                }
            }
            return digits;
        }
    }
    return digits;
}

void validate_beta_digits(const std::vector<int>& digits, int m) {
    if (digits.empty()) throw SpecError("beta digit sequence is empty");
    const int d1 = digits.front();
    if (d1 < 1 || d1 > m - 1) {
        throw SpecError("first beta digit must lie in [1, m-1], got " + std::to_string(d1));
    }
    for (std::size_t k = 1; k < digits.size(); ++k) {
        if (digits[k] < 0 || digits[k] > d1) {
            throw SpecError("beta digit d_" + std::to_string(k + 1) + "=" + std::to_string(digits[k]) +
                            " outside [0, d_1]");
        }
    }
    const std::size_t n = digits.size();
    for (std::size_t shift = 1; shift < n; ++shift) {
        for (std::size_t i = 0; shift + i < n; ++i) {
            if (digits[shift + i] < digits[i]) break;
            if (digits[shift + i] > digits[i]) {
                throw SpecError("beta digits are not self-dominating: suffix at position " +
                                std::to_string(shift + 1) + " exceeds the sequence");
            }
        }
    }
}

}  // namespace mshift
