#include "joinspace/mspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace joinspace {

namespace {

double triangle_defect_impl(const FiniteMetricSpace& S, bool parallel) {
  const int n = S.n;
  double worst = -INF;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : worst) schedule(dynamic, 4) if (parallel)
#endif
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double best = INF;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        best = std::min(best, S.dist(i, k) + S.dist(k, j));
      }
      worst = std::max(worst, S.dist(i, j) - best);
    }
  (void)parallel;
  return worst;
}

}  // namespace

double triangle_defect(const FiniteMetricSpace& S) { return triangle_defect_impl(S, true); }
double triangle_defect_serial(const FiniteMetricSpace& S) { return triangle_defect_impl(S, false); }

FiniteMetricSpace from_matrix_impl(int n, std::vector<double> D, int x0) {
  if (n < 1 || n > 4096) throw std::invalid_argument("FiniteMetricSpace: need 1 <= n <= 4096");
  if ((int)D.size() != n * n) throw std::invalid_argument("FiniteMetricSpace: matrix size");
  if (x0 < 0 || x0 >= n) throw std::invalid_argument("FiniteMetricSpace: basepoint out of range");
  FiniteMetricSpace S;
  S.n = n;
  S.x0 = x0;
  S.D = std::move(D);
  for (int i = 0; i < n; ++i) {
    if (S.dist(i, i) != 0.0) throw std::invalid_argument("FiniteMetricSpace: nonzero diagonal");
    for (int j = 0; j < i; ++j) {
      double v = S.dist(i, j);
      if (!(v > 0.0) || !is_fin(v)) throw std::invalid_argument("FiniteMetricSpace: need d > 0 off-diagonal");
      if (v != S.dist(j, i)) throw std::invalid_argument("FiniteMetricSpace: not symmetric");
    }
  }
  if (n <= 1024) {
    S.axioms_exhaustive = true;
    if (triangle_defect(S) > 1e-12)
      throw std::invalid_argument("FiniteMetricSpace: triangle inequality fails");
  } else {
    // sampled triangle check above the exhaustive threshold
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int it = 0; it < 2000000; ++it) {
      int i = pick(rng), j = pick(rng), k = pick(rng);
      if (S.dist(i, j) > S.dist(i, k) + S.dist(k, j) + 1e-12)
        throw std::invalid_argument("FiniteMetricSpace: triangle inequality fails (sampled)");
    }
  }
  return S;
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(int n, std::vector<double> D, int x0) {
  return from_matrix_impl(n, std::move(D), x0);
}

FiniteMetricSpace FiniteMetricSpace::scaled(double s) const {
  if (!(s > 0.0) || !is_fin(s)) throw std::invalid_argument("scaled: need s > 0");
  FiniteMetricSpace T = *this;
  for (double& v : T.D) v *= s;
  return T;
}

void ConvexPoint::validate(int n) const {
  if (w.empty()) throw std::invalid_argument("ConvexPoint: empty");
  double sum = 0.0;
  for (auto [i, c] : w) {
    if (i < 0 || i >= n) throw std::invalid_argument("ConvexPoint: vertex out of range");
    if (!(c > 0.0)) throw std::invalid_argument("ConvexPoint: coefficients must be positive");
    sum += c;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw std::invalid_argument("ConvexPoint: coefficients must sum to 1");
}

double dist(const Ground& S, const ConvexPoint& p, const ConvexPoint& q) {
  p.validate(S.size());
  q.validate(S.size());
  double s = 0.0;
  for (auto [x, ax] : p.w)
    for (auto [y, by] : q.w) s += ax * by * S.dist(x, y);
  return s;
}

double dd(const Ground& S, int a, int a2, int b, int b2) {
  return 0.5 * (S.dist(a, b) - S.dist(a2, b) - S.dist(a, b2) + S.dist(a2, b2));
}

double dd(const Ground& S, const ConvexPoint& a, const ConvexPoint& a2, const ConvexPoint& b,
          const ConvexPoint& b2) {
  return 0.5 * (dist(S, a, b) - dist(S, a2, b) - dist(S, a, b2) + dist(S, a2, b2));
}

double gp(const Ground& S, int a, int b, int c) {
  return 0.5 * (S.dist(a, c) + S.dist(b, c) - S.dist(a, b));
}

namespace {

// smallest admissible B for a fixed A, i.e. certifying g/A - B <= f <= A g + B
double b_for(const std::vector<double>& f, const std::vector<double>& g, double A) {
  double B = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    B = std::max(B, f[i] - A * g[i]);
    B = std::max(B, g[i] / A - f[i]);
  }
  return B;
}

double quantile75(std::vector<double> v) {
  if (v.empty()) return 0.0;
  size_t k = (3 * (v.size() - 1)) / 4;
  std::nth_element(v.begin(), v.begin() + k, v.end());
  return v[k];
}

}  // namespace

EquivReport estimate_equivalence(const std::vector<double>& f, const std::vector<double>& g,
                                 EquivMode mode) {
  if (f.size() != g.size() || f.empty())
    throw std::invalid_argument("estimate_equivalence: need equal nonempty samples");
  for (size_t i = 0; i < f.size(); ++i)
    if (!(f[i] >= 0.0) || !(g[i] >= 0.0) || !is_fin(f[i]) || !is_fin(g[i]))
      throw std::invalid_argument("estimate_equivalence: samples must be finite and >= 0");

  EquivReport r;
  r.mode = mode;
  if (mode == EquivMode::Plus) {
    r.A = 1.0;
    for (size_t i = 0; i < f.size(); ++i) r.B = std::max(r.B, std::fabs(f[i] - g[i]));
    return r;
  }

  double ratio = 1.0, zero_violation = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] > 0.0 && g[i] > 0.0)
      ratio = std::max({ratio, f[i] / g[i], g[i] / f[i]});
    else if (f[i] != g[i])
      zero_violation = std::max(zero_violation, std::fabs(f[i] - g[i]));
  }
  if (mode == EquivMode::Times) {
    r.A = ratio;
    r.B = 0.0;
    r.max_violation = zero_violation;  // no multiplicative constant absorbs these
    return r;
  }

  // TimesPlus: geometric grid on A, pick the admissible pair with the best
  // score B + (A-1) * Q75(g); the result is a certificate, not a canonical minimum
  double q75 = quantile75(g);
  double bestA = 1.0, bestB = b_for(f, g, 1.0);
  double bestScore = bestB;
  const int steps = 240;
  double hi = std::max(ratio, 1.0 + 1e-12);
  for (int k = 1; k <= steps; ++k) {
    double A = std::exp(std::log(hi) * k / steps);
    double B = b_for(f, g, A);
    double score = B + (A - 1.0) * q75;
    if (score < bestScore) {
      bestScore = score;
      bestA = A;
      bestB = B;
    }
  }
  r.A = bestA;
  r.B = bestB;
  r.max_violation = 0.0;
  return r;
}

}  // namespace joinspace
