#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/next.hpp>

namespace mshift {

/// Working precision for solutions, dimensions and probabilities.
using Real = long double;

/// Closed interval [lo, hi] used as a two-sided certificate.
struct Bracket {
    Real lo = 0;
    Real hi = 0;

    Real width() const { return hi - lo; }
    Real mid() const { return lo + (hi - lo) / 2; }
    bool contains(Real x, Real slack = 0) const { return lo - slack <= x && x <= hi + slack; }
    bool disjoint_from(const Bracket& other) const { return hi < other.lo || other.hi < lo; }
};

template <class T>
T step_down(T x, int ulps = 1) {
    for (int i = 0; i < ulps; ++i) x = boost::math::float_prior(x);
    return x;
}

template <class T>
T step_up(T x, int ulps = 1) {
    for (int i = 0; i < ulps; ++i) x = boost::math::float_next(x);
    return x;
}

// Logarithm in base m. Callers that need a certificate widen with step_down/step_up.
inline Real log_base(Real x, int m) { return std::log(x) / std::log(static_cast<Real>(m)); }

// log_m applied to both ends, rounded outward.
inline Bracket log_base_outward(const Bracket& x, int m) {
    return {step_down(log_base(x.lo, m), 4), step_up(log_base(x.hi, m), 4)};
}

inline Bracket clamp_unit(Bracket b) {
    b.lo = std::clamp<Real>(b.lo, 0, 1);
    b.hi = std::clamp<Real>(b.hi, 0, 1);
    return b;
}

// Narrow a long double to double without moving the value inward.
inline double to_double_down(Real x) {
    double d = static_cast<double>(x);
    if (static_cast<Real>(d) > x) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
    return d;
}

inline double to_double_up(Real x) {
    double d = static_cast<double>(x);
    if (static_cast<Real>(d) < x) d = std::nextafter(d, std::numeric_limits<double>::infinity());
    return d;
}

}  // namespace mshift
