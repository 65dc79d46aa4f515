// scaled_value.hpp - overflow-free arithmetic for Hermite and factorial terms
//
// Values are carried as sign * mantissa * 2^exponent with mantissa in [1, 2).
// Rescaling by powers of two is exact, so the recurrences below lose nothing
// beyond ordinary rounding even when H_n itself would overflow a double.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

namespace kerrlambda {

struct ScaledValue {
    double mantissa = 0.0;  // signed; |mantissa| in [1, 2) or exactly 0
    std::int64_t exponent = 0;

    static ScaledValue from(double x, std::int64_t extra_exponent = 0) {
        if (x == 0.0 || !std::isfinite(x)) return {x, 0};
        int e = 0;
        const double m = std::frexp(x, &e);  // |m| in [0.5, 1)
        return {m * 2.0, extra_exponent + e - 1};
    }

    bool is_zero() const { return mantissa == 0.0; }
    int sign() const { return (mantissa > 0.0) - (mantissa < 0.0); }

    /// Natural log of |value|; -inf for zero.
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(mantissa)) + static_cast<double>(exponent) * std::numbers::ln2;
    }

    /// Plain double; saturates to +-inf or 0 outside the representable range.
    double value() const {
        if (exponent > std::numeric_limits<double>::max_exponent) {
            return sign() * std::numeric_limits<double>::infinity();
        }
        if (exponent < std::numeric_limits<double>::min_exponent - 60) return 0.0 * sign();
        return std::ldexp(mantissa, static_cast<int>(exponent));
    }
};

/// Complex counterpart: a complex mantissa sharing one binary exponent.
struct ScaledComplex {
    std::complex<double> mantissa{0.0, 0.0};
    std::int64_t exponent = 0;

    bool is_zero() const { return mantissa == std::complex<double>{0.0, 0.0}; }

    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(mantissa)) + static_cast<double>(exponent) * std::numbers::ln2;
    }
};

namespace detail {

constexpr int kRescaleBits = 512;

inline double rescale_factor_for(double magnitude) {
    if (magnitude > std::ldexp(1.0, kRescaleBits)) return std::ldexp(1.0, -kRescaleBits);
    if (magnitude != 0.0 && magnitude < std::ldexp(1.0, -kRescaleBits)) return std::ldexp(1.0, kRescaleBits);
    return 1.0;
}

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(std::complex<double> z) { return std::max(std::abs(z.real()), std::abs(z.imag())); }

// H_{k+1} = 2x H_k - 2k H_{k-1}, with both carried terms sharing an exponent.
template <typename T>
std::pair<T, std::int64_t> hermite_recurrence(unsigned n, T x) {
    T prev{1.0};
    if (n == 0) return {prev, 0};
    T curr = T{2.0} * x;
    std::int64_t exponent = 0;
    for (unsigned k = 1; k < n; ++k) {
        T next = T{2.0} * x * curr - T{2.0 * k} * prev;
        prev = curr;
        curr = next;
        const double f = rescale_factor_for(std::max(magnitude(curr), magnitude(prev)));
        if (f != 1.0) {
            curr *= f;
            prev *= f;
            exponent += (f < 1.0) ? kRescaleBits : -kRescaleBits;
        }
    }
    return {curr, exponent};
}

}  // namespace detail

/// Physicists' Hermite polynomial H_n(x) in scaled form. Exact sign.
inline ScaledValue hermite_scaled(unsigned n, double x) {
    const auto [h, e] = detail::hermite_recurrence(n, x);
    return ScaledValue::from(h, e);
}

/// H_n(z) for complex z, needed when the coherent and squeezing phases differ.
inline ScaledComplex hermite_scaled(unsigned n, std::complex<double> z) {
    const auto [h, e] = detail::hermite_recurrence(n, z);
    return {h, e};
}

}  // namespace kerrlambda
