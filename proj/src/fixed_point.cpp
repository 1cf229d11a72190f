#include "mshift/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace mshift {

namespace {

using Multi = boost::multiprecision::cpp_bin_float_50;

template <class T>
T root_down(const T& s, int q) {
    using std::pow;
    using std::sqrt;
    if (q == 2) return step_down(T(sqrt(s)), 2);
    return step_down(T(pow(s, T(1) / q)), 8);
}

template <class T>
T root_up(const T& s, int q) {
    using std::pow;
    using std::sqrt;
    if (q == 2) return step_up(T(sqrt(s)), 2);
    return step_up(T(pow(s, T(1) / q)), 8);
}

// b^{1/(q-1)} rounded up.
template <class T>
T upper_power(int b, int q) {
    using std::pow;
    if (q == 2) return T(b);
    return step_up(T(pow(T(b), T(1) / (q - 1))), 8);
}

template <class T>
Real narrow_down(const T& x) {
    if constexpr (std::is_same_v<T, Real>) {
        return x;
    } else {
        Real r = static_cast<Real>(x);
        if (T(r) > x) r = step_down(r);
        return r;
    }
}

template <class T>
Real narrow_up(const T& x) {
    if constexpr (std::is_same_v<T, Real>) {
        return x;
    } else {
        Real r = static_cast<Real>(x);
        if (T(r) < x) r = step_up(r);
        return r;
    }
}

template <class T>
void run_brackets(const PrefixAutomaton& aut, int q, const SolveOptions& options, FixedPointSolution& out) {
    const int n = aut.size();
    const T upper = upper_power<T>(aut.is_exact() ? aut.max_outdegree() : std::max(aut.max_outdegree(), aut.alphabet_size()), q);
    std::vector<T> lo(static_cast<std::size_t>(n), T(1));
    std::vector<T> hi(static_cast<std::size_t>(n), upper);
    std::vector<T> next_lo(lo.size());
    std::vector<T> next_hi(hi.size());
    const T tol(options.tol);

    auto criterion_met = [&]() {
        if (!aut.is_exact()) return hi[aut.root()] - lo[aut.root()] < tol;
        for (int v = 0; v < n; ++v) {
            if (!(hi[v] - lo[v] < tol)) return false;
        }
        return true;
    };

    long iteration = 0;
    bool met = criterion_met();
    while (!met && iteration < options.max_iterations) {
        ++iteration;
        bool changed = false;
        for (int v = 0; v < n; ++v) {
            if (aut.is_frontier(v)) {
                next_lo[v] = lo[v];
                next_hi[v] = hi[v];
                continue;
            }
            T sum_lo(0);
            T sum_hi(0);
            for (int w : aut.edges(v)) {
                if (w == PrefixAutomaton::kNoEdge) continue;
                sum_lo = step_down(T(sum_lo + lo[w]));
                sum_hi = step_up(T(sum_hi + hi[w]));
            }
            next_lo[v] = std::max(lo[v], root_down(sum_lo, q));
            next_hi[v] = std::min(hi[v], root_up(sum_hi, q));
            changed = changed || next_lo[v] != lo[v] || next_hi[v] != hi[v];
        }
        lo.swap(next_lo);
        hi.swap(next_hi);
        if constexpr (std::is_same_v<T, Real>) {
            if (options.observer) options.observer(iteration, lo, hi);
        }
        met = criterion_met();
        if (!changed) break;
    }

    out.lo.resize(lo.size());
    out.hi.resize(hi.size());
    for (int v = 0; v < n; ++v) {
        out.lo[v] = narrow_down(lo[v]);
        out.hi[v] = narrow_up(hi[v]);
    }
    out.iterations = iteration;
    out.status = met ? SolveStatus::Converged : SolveStatus::NotConverged;
}

}  // namespace

std::vector<Real> FixedPointSolution::midpoints() const {
    std::vector<Real> mids(lo.size());
    for (std::size_t v = 0; v < lo.size(); ++v) mids[v] = at(static_cast<int>(v)).mid();
    return mids;
}

Real upper_start(const PrefixAutomaton& aut, int q) {
    const int b = aut.is_exact() ? aut.max_outdegree() : std::max(aut.max_outdegree(), aut.alphabet_size());
    return upper_power<Real>(b, q);
}

FixedPointSolution solve(const PrefixAutomaton& aut, int q, const SolveOptions& options) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    if (!(options.tol > 0)) throw std::invalid_argument("tolerance must be positive");
    FixedPointSolution sol{aut, q, {}, {}, 0, 0, SolveStatus::NotConverged, options.tol};
    if (options.precision == Precision::Multi) {
        run_brackets<Multi>(aut, q, options, sol);
    } else {
        run_brackets<Real>(aut, q, options, sol);
    }

    const auto mids = sol.midpoints();
    auto narrow = [&](int v) { return sol.hi[v] - sol.lo[v] < options.tol; };
    Real residual = 0;
    for (int v = 0; v < aut.size(); ++v) {
        if (aut.is_frontier(v) || !narrow(v)) continue;
        Real sum = 0;
        bool children_narrow = true;
        for (int w : aut.edges(v)) {
            if (w == PrefixAutomaton::kNoEdge) continue;
            children_narrow = children_narrow && narrow(w);
            sum += mids[w];
        }
        if (!children_narrow) continue;
        residual = std::max(residual, std::abs(std::pow(mids[v], static_cast<Real>(q)) - sum));
    }
    sol.residual = residual;
    return sol;
}

std::vector<Real> iterate_map(const PrefixAutomaton& aut, int q, std::vector<Real> start, long iterations) {
    if (static_cast<int>(start.size()) != aut.size()) throw std::invalid_argument("start vector size mismatch");
    std::vector<Real> next(start.size());
    for (long it = 0; it < iterations; ++it) {
        for (int v = 0; v < aut.size(); ++v) {
            if (aut.is_frontier(v)) {
                next[v] = start[v];
                continue;
            }
            Real sum = 0;
            for (int w : aut.edges(v)) {
                if (w != PrefixAutomaton::kNoEdge) sum += start[w];
            }
            next[v] = q == 2 ? std::sqrt(sum) : std::pow(sum, 1.0L / q);
        }
        start.swap(next);
    }
    return start;
}

Real eval_polynomial(std::span<const long long> coefficients, Real x) {
    Real acc = 0;
    for (long long c : coefficients) acc = acc * x + static_cast<Real>(c);
    return acc;
}

bool verify_polynomial(const FixedPointSolution& sol, std::span<const long long> coefficients, int state) {
    if (coefficients.empty() || std::all_of(coefficients.begin(), coefficients.end(), [](long long c) { return c == 0; })) {
        throw std::invalid_argument("polynomial must be nonzero");
    }
    const Bracket b = sol.at(state);
    const Real at_lo = eval_polynomial(coefficients, b.lo);
    const Real at_hi = eval_polynomial(coefficients, b.hi);
    if ((at_lo <= 0 && at_hi >= 0) || (at_lo >= 0 && at_hi <= 0)) return true;

    // |p(mid)| bounded by |p'| over half the bracket plus Horner rounding error.
    const Real x = b.mid();
    const std::size_t degree = coefficients.size() - 1;
    Real derivative = 0;
    Real magnitude = 0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        const std::size_t power = degree - i;
        const Real c = static_cast<Real>(coefficients[i]);
        magnitude += std::abs(c) * std::pow(std::abs(x), static_cast<Real>(power));
        if (power > 0) derivative += c * static_cast<Real>(power) * std::pow(x, static_cast<Real>(power - 1));
    }
    const Real eps = std::numeric_limits<Real>::epsilon();
    const Real allowance = std::abs(derivative) * b.width() / 2 + 4 * static_cast<Real>(degree + 1) * eps * magnitude;
    return std::abs(eval_polynomial(coefficients, x)) <= allowance;
}

}  // namespace mshift
