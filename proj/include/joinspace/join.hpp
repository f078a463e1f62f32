#pragma once
#include <string>
#include <vector>

#include "hatmetric.hpp"
#include "smooth.hpp"

namespace joinspace {

// The symmetric join of a finite ground space: formal lines between point
// pairs, parameterized as subintervals of R around the basepoint, with the
// R-shift, the order-two flip, and the isometry group acting on them.

// line between a and b as the interval [alpha,beta]; beta-alpha = d(a,b),
// 0 always inside, alpha = beta = 0 iff a = b
struct Line {
  int a = 0, b = 0;
  double alpha = 0.0, beta = 0.0;
};
Line make_line(const HatView& S, int a, int b);

enum class Flavor { raw, smoothed };

// point on a line; coord is the actual position in [alpha,beta], param the
// input parameter that produced it (kept so the shift action can move the
// smoothed preimage exactly)
struct JoinPoint {
  Line line;
  double coord = 0.0;
  ExtReal param = ExtReal(0.0);
  Flavor flavor = Flavor::raw;

  // endpoint positions are identified with ground points
  bool ground() const {
    return line.a == line.b || coord == line.alpha || coord == line.beta;
  }
  int ground_id() const;  // the ground point; only when ground()
};

// raw flavor clamps the parameter into the interval, smoothed flavor applies
// the strictly increasing smoothing of the clamp
JoinPoint point_at(const HatView& S, const Line& L, ExtReal t, Flavor f);
JoinPoint ground_point(const HatView& S, int a);

// observational equality in the quotient (endpoints glued to ground points)
bool same_point(const JoinPoint& x, const JoinPoint& y, double tol = 0.0);

// coordinate of the same point when the interval is re-origined at x1
double change_basepoint(const HatView& S, const JoinPoint& x, int x1);

// permutation preserving the ground metric exactly, with its inverse
struct Isometry {
  std::vector<int> perm, inv;
  int operator()(int v) const { return perm[v]; }
  static Isometry from_permutation(const HatView& S, std::vector<int> p);
};

// the three actions: the shift fixes ground points and translates the
// smoothed parameter; the flip reverses lines; isometries relabel endpoints
// and shift coordinates by a double difference
JoinPoint r_action(const HatView& S, double r, const JoinPoint& x);
JoinPoint star_involution(const HatView& S, const JoinPoint& x);
JoinPoint isom_action(const HatView& S, const Isometry& g, const JoinPoint& x);

// projection of ground point b to the line through (a, a2)
double project_coord(const HatView& S, int a, int a2, int b);
JoinPoint project(const HatView& S, int a, int a2, int b);

// distance-like cocycle: ell(u,x) agrees with d(u,x) for ground x and is
// 2-Lipschitz in u
double ell(const HatView& S, int u, const JoinPoint& x);
double beta_cross(const HatView& S, int u, const JoinPoint& x, const JoinPoint& y);

// d_cross = exact max of |beta_cross| over the finite ground set
double d_cross(const HatView& S, const JoinPoint& x, const JoinPoint& y);
double d_cross_serial(const HatView& S, const JoinPoint& x, const JoinPoint& y);

// d_star = integral of d_cross along shift orbits against exp(-|r|)/2.
// Computed by exact piecewise integration (the integrand is piecewise
// exp-affine in r between analytically enumerable breakpoints), so the
// certified error is roundoff-level, far below any admissible eps.
double d_star(const HatView& S, const JoinPoint& x, const JoinPoint& y, double eps = 1e-7);
// independent slow oracle: composite trapezoid with certified truncation
// radius and step derived from the Lipschitz bound; feasible for eps >= 1e-4
double d_star_quadrature(const HatView& S, const JoinPoint& x, const JoinPoint& y, double eps);

// batch kernels over point lists (full symmetric matrices, row-major)
std::vector<double> pairwise_d_cross(const HatView& S, const std::vector<JoinPoint>& pts);
std::vector<double> pairwise_d_cross_serial(const HatView& S, const std::vector<JoinPoint>& pts);
std::vector<double> pairwise_d_star(const HatView& S, const std::vector<JoinPoint>& pts,
                                    double eps = 1e-7);
std::vector<double> pairwise_d_star_serial(const HatView& S, const std::vector<JoinPoint>& pts,
                                           double eps = 1e-7);

// orbit average of a point: fixes ground points, maps each line onto itself
// monotonically, and turns lines into d_star geodesics
JoinPoint phi(const HatView& S, const JoinPoint& x);

// nearest vertex on the chosen geodesic from a to b, by projection
// coordinate; ties resolved toward the smaller vertex id
int psi(const HypGraph& G, const HatView& S, const JoinPoint& x);

// JSON round trip {a, b, coord, flavor, basepoint}
std::string join_point_to_json(const JoinPoint& x, int basepoint);
JoinPoint join_point_from_json(const HatView& S, const std::string& text);

}  // namespace joinspace
