#pragma once

// Scalar shim: the library is written once against a generic real type R and
// instantiated for `double` and for the quad-precision `quad` used when
// cancellation in a determinant or a third-order identity needs headroom.

#include <cmath>
#include <quadmath.h>
#include <type_traits>

namespace octo {

using quad = __float128;

inline double to_double(double x) { return x; }
inline double to_double(quad x) { return static_cast<double>(x); }

namespace rmath {

inline double sqrt(double x) { return std::sqrt(x); }
inline double pow(double x, double k) { return std::pow(x, k); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double abs(double x) { return std::fabs(x); }

inline quad sqrt(quad x) { return sqrtq(x); }
inline quad pow(quad x, double k) { return powq(x, static_cast<quad>(k)); }
inline quad exp(quad x) { return expq(x); }
inline quad log(quad x) { return logq(x); }
inline quad abs(quad x) { return fabsq(x); }

} // namespace rmath

template <class R>
inline constexpr bool is_real_v = std::is_same_v<R, double> || std::is_same_v<R, quad>;

} // namespace octo
