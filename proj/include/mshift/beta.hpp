#pragma once

#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace mshift {

/// 300 significant decimal digits; enough for greedy digits of 1 while beta^depth < 1e50.
using BetaReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<300>>;

/// Parses a decimal literal ("1.8"), or "golden" / "phi" for (1+sqrt 5)/2.
BetaReal parse_beta(std::string_view text);

/// Greedy digits d_1..d_depth of 1 in base beta. When the expansion terminates
/// (d_N >= 1, remainder 0) the quasi-greedy periodic form (d_1..d_{N-1}(d_N - 1))^inf is
/// returned instead. Requires 1 < beta <= m; throws SpecError otherwise.
std::vector<int> greedy_beta_digits(const BetaReal& beta, int depth, int m);

/// Checks 1 <= d_1 <= m-1, 0 <= d_k <= d_1, and that every suffix of the (truncated)
/// sequence is lexicographically <= the sequence itself. Throws SpecError with the
/// first violation.
void validate_beta_digits(const std::vector<int>& digits, int m);

}  // namespace mshift
