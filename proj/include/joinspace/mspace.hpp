#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "extreal.hpp"

namespace joinspace {

// ground set with a metric and a basepoint; implemented by FiniteMetricSpace
// and by the hat-metric providers
struct Ground {
  virtual ~Ground() = default;
  virtual int size() const = 0;
  virtual int basepoint() const = 0;
  virtual double dist(int i, int j) const = 0;
};

// dense symmetric matrix, n <= 4096
struct FiniteMetricSpace final : Ground {
  int n = 0;
  int x0 = 0;
  std::vector<double> D;
  bool axioms_exhaustive = false;  // triangle inequality swept in full at construction

  int size() const override { return n; }
  int basepoint() const override { return x0; }
  double dist(int i, int j) const override { return D[size_t(i) * n + j]; }

  static FiniteMetricSpace from_matrix(int n, std::vector<double> D, int x0 = 0);
  // uniform scale: returns space with distances s*d
  FiniteMetricSpace scaled(double s) const;
};

// worst triangle-inequality defect max d(i,k) - d(i,j) - d(j,k); <= 0 for a metric.
// parallel kernel with a serial twin kept as the test reference
double triangle_defect(const FiniteMetricSpace& S);
double triangle_defect_serial(const FiniteMetricSpace& S);

// convex combination of vertices, sparse; coefficients > 0 summing to 1
struct ConvexPoint {
  std::vector<std::pair<int, double>> w;
  static ConvexPoint vertex(int i) { return {{{i, 1.0}}}; }
  void validate(int n) const;
};

// bilinear extension of the metric to convex combinations
double dist(const Ground& S, const ConvexPoint& p, const ConvexPoint& q);

// double difference <a,a'|b,b'> = (d(a,b) - d(a',b) - d(a,b') + d(a',b'))/2
double dd(const Ground& S, int a, int a2, int b, int b2);
double dd(const Ground& S, const ConvexPoint& a, const ConvexPoint& a2, const ConvexPoint& b,
          const ConvexPoint& b2);
// Gromov product <a|b>_c = <a,c|c,b>
double gp(const Ground& S, int a, int b, int c);

// How close two nonnegative samples f,g are to satisfying
//   g(s)/A - B <= f(s) <= A g(s) + B.
enum class EquivMode { Plus, Times, TimesPlus };
struct EquivReport {
  EquivMode mode = EquivMode::Plus;
  double A = 1.0;
  double B = 0.0;
  // residual of the certificate with the reported (A,B); 0 when it certifies,
  // positive when no constants of the requested shape exist (e.g. Times with
  // a zero on exactly one side)
  double max_violation = 0.0;
};
EquivReport estimate_equivalence(const std::vector<double>& f, const std::vector<double>& g,
                                 EquivMode mode);

}  // namespace joinspace
