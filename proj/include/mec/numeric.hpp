#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "mec/errors.hpp"

namespace mec {

// Exact arithmetic backing the rational numeric mode. Arbitrary precision:
// greedy subtractions and polytope enumeration keep denominators bounded by
// the lcm of the input denominators, but that lcm can be large.
using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

enum class numeric_mode { float64, exact_rational };

inline const char* numeric_mode_name(numeric_mode m) {
    return m == numeric_mode::float64 ? "float64" : "exact-rational";
}

// All tolerance knobs live here. Exact-rational mode ignores mass/bound and
// compares with equality; entropy values are always float64, so bound still
// applies to entropy inequalities in either mode.
struct tolerances {
    double mass = 1e-9;   // unit-sum and marginal-conservation slack
    double bound = 1e-9;  // slack when checking proven inequalities
    double snap = 1e-12;  // float-mode residual snap-to-zero threshold
};

inline constexpr double log2_e = std::numbers::log2e;

template <class R>
struct numeric_traits;

template <>
struct numeric_traits<double> {
    static constexpr numeric_mode mode = numeric_mode::float64;
    static constexpr bool exact = false;
    static double to_double(double x) { return x; }
    static double from_double(double x) { return x; }
    static bool leq(double a, double b, double tol) { return a <= b + tol; }
    static bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
};

template <>
struct numeric_traits<rational> {
    static constexpr numeric_mode mode = numeric_mode::exact_rational;
    static constexpr bool exact = true;
    static double to_double(const rational& x) { return x.convert_to<double>(); }
    // The exact binary value of x, not a decimal reinterpretation.
    static rational from_double(double x) { return rational(x); }
    static bool leq(const rational& a, const rational& b, double) { return a <= b; }
    static bool close(const rational& a, const rational& b, double) { return a == b; }
};

// Smallest-denominator rational within eps of x (Stern-Brocot / continued
// fractions), so 0.1 snaps to 1/10 rather than its 2^-52 binary neighbour.
// Used when float inputs enter an exact-mode computation.
inline rational rationalize(double x, double eps = 1e-12) {
    if (!std::isfinite(x)) throw domain_error("rationalize: value is not finite");
    if (x < 0) return -rationalize(-x, eps);
    bigint h_prev = 1, k_prev = 0;  // convergent recurrence state
    bigint h = bigint(std::floor(x)), k = 1;
    double frac = x - std::floor(x);
    for (int iter = 0; iter < 64; ++iter) {
        double approx = numeric_traits<rational>::to_double(rational(h, k));
        if (std::fabs(approx - x) <= eps || frac == 0.0) break;
        frac = 1.0 / frac;
        double a_f = std::floor(frac);
        if (a_f > 1e18) break;  // x was (numerically) already rational
        bigint a = bigint(a_f);
        bigint h_next = a * h + h_prev;
        bigint k_next = a * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        frac -= a_f;
    }
    return rational(h, k);
}

inline std::string to_string(const rational& x) {
    return x.str();
}

}  // namespace mec
