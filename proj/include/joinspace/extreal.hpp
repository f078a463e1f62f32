#pragma once
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace joinspace {

// Arithmetic on the extended line [-inf,+inf] with the conventions used
// throughout the library:
//   r + (+-inf) = +-inf            (+inf) + (-inf) = 0
//   |(+-inf) - (+-inf)| = 0        |(+-inf) - (-+inf)| = inf
//   |(+-inf) - r| = inf            l * (+-inf) = +-inf for l in (0,inf]
//   0 * x = 0                      exp(-inf) = 0, exp(+inf) = +inf
// Values are IEEE doubles; NaN never enters or leaves any of these ops.

constexpr double INF = std::numeric_limits<double>::infinity();

inline bool is_fin(double x) { return std::isfinite(x); }
inline bool is_pinf(double x) { return x == INF; }
inline bool is_ninf(double x) { return x == -INF; }

inline double ext_add(double a, double b) {
  if (std::isinf(a) && std::isinf(b) && (a > 0) != (b > 0)) return 0.0;
  return a + b;
}

inline double ext_sub(double a, double b) { return ext_add(a, -b); }

// generalized metric on [-inf,+inf]: equal infinities are at distance 0
inline double ext_absdiff(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return (a == b) ? 0.0 : INF;
  return std::fabs(a - b);
}

inline double ext_mul(double a, double l) {
  if (a == 0.0 || l == 0.0) return 0.0;
  return a * l;
}

inline double ext_exp(double t) { return std::exp(t); }

struct ExtReal {
  double v = 0.0;
  ExtReal() = default;
  ExtReal(double x) : v(x) {
    if (std::isnan(x)) throw std::invalid_argument("ExtReal: NaN");
  }
  static ExtReal pinf() { return ExtReal(INF); }
  static ExtReal ninf() { return ExtReal(-INF); }
  bool finite() const { return std::isfinite(v); }
  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(ext_add(a.v, b.v)); }
  friend ExtReal operator-(ExtReal a, ExtReal b) { return ExtReal(ext_sub(a.v, b.v)); }
  ExtReal operator-() const { return ExtReal(-v); }
  friend bool operator==(ExtReal a, ExtReal b) { return a.v == b.v; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v < b.v; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v <= b.v; }
};

inline ExtReal abs_diff(ExtReal a, ExtReal b) { return ExtReal(ext_absdiff(a.v, b.v)); }
inline ExtReal exp_ext(ExtReal t) { return ExtReal(ext_exp(t.v)); }

// raised when a truncated structure (ray depth, stabilization budget, caps)
// cannot support the requested computation
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// closed interval [lo,hi] inside [-inf,+inf]
struct Interval {
  double lo = 0.0, hi = 0.0;
  Interval() = default;
  Interval(double l, double h) : lo(l), hi(h) {
    if (std::isnan(l) || std::isnan(h) || l > h)
      throw std::invalid_argument("Interval: need lo <= hi, no NaN");
  }
  double length() const { return ext_absdiff(hi, lo) == 0.0 && std::isinf(lo) ? 0.0 : hi - lo; }
  bool contains(double t) const { return lo <= t && t <= hi; }
  bool degenerate() const { return lo == hi; }
};

}  // namespace joinspace
