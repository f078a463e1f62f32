#pragma once
#include <array>
#include <string>
#include <vector>

#include "boundary.hpp"

namespace joinspace {

// Geodesic flow on the space of bi-infinite lines: points of lines with both
// endpoints at infinity, the shift action along them, stable translation
// lengths of graph self-maps, and the exponential synchronization of the
// reparametrized lines of a triple.

// An isometric self-map of the graph.  A group element acting on a truncated
// Cayley ball need not map the ball into itself, so images are partial:
// apply returns -1 once the image falls outside the available vertices.
struct BallMap {
  virtual ~BallMap() = default;
  virtual int apply(const HypGraph& G, int v) const = 0;
  virtual int apply_inv(const HypGraph& G, int v) const = 0;
};

// left multiplication by a reduced word on a free-group Cayley ball
struct WordShift final : BallMap {
  std::string word;
  explicit WordShift(std::string w);
  int apply(const HypGraph& G, int v) const override;
  int apply_inv(const HypGraph& G, int v) const override;
};

// a full vertex permutation, e.g. a letter-swapping graph automorphism
struct PermMap final : BallMap {
  std::vector<int> perm, inv;
  explicit PermMap(std::vector<int> p);
  int apply(const HypGraph& G, int v) const override;
  int apply_inv(const HypGraph& G, int v) const override;
};

// raised when a basepoint orbit leaves the available ball before the
// translation length estimates settle; carries the last two estimates
struct OrbitTruncation : TruncationError {
  double prev, last;
  OrbitTruncation(const std::string& msg, double prev_, double last_)
      : TruncationError(msg), prev(prev_), last(last_) {}
};

enum class LengthMethod { limit, formula };

// fixed direction of a map with unbounded orbits: iterate on the basepoint
// until the orbit leaves the (radius - 2) ball and take the direction of the
// canonical geodesic through the last orbit point reached.  attracting=false
// iterates the inverse.  Bounded orbits raise invalid_argument.
ExtPoint fixed_direction(const HypGraph& G, const BallMap& g, bool attracting);

// stable translation length lim d(x, g^n x)/n.  The limit method walks the
// basepoint orbit to the edge of the ball and returns the stabilized
// increment d(x,g^n x) - d(x,g^{n-1} x), the Cauchy differences of the
// defining sequence (the plain quotient carries an O(1/n) additive drift
// that the increments cancel); orbits that revisit a vertex are bounded and
// give 0.  The formula method evaluates <g-, g+ | g x0, x0> and requires
// unbounded orbits.
double translation_length(const HypGraph& G, const HatView& S, const BallMap& g,
                          LengthMethod method, double tol = 1e-9);

// image of an extended-line point: endpoints map through g (directions by
// their deepest applicable ray vertex) and the coordinate picks up the
// basepoint displacement <a, b | x0, g^-1 x0>
ExtJoinPoint flow_isom_action(const HypGraph& G, const HatView& S, const BallMap& g,
                              const ExtJoinPoint& x, double tol = 1e-9);

// shift r+x along the line of x, in the parametrization of x's flavor
ExtJoinPoint flow_shift(const ExtJoinPoint& x, double r);

// d-cross between points whose lines may have endpoints at infinity: the
// largest |ell(u,x) - ell(u,y)| over all vertices u whose stabilized queries
// fit inside the seeded rays.  Points at infinity are at distance 0 from
// their own direction and +inf from everything else.
double ext_d_cross(const HypGraph& G, const HatView& S, const ExtJoinPoint& x,
                   const ExtJoinPoint& y, double tol = 1e-9);
double ext_d_cross_serial(const HypGraph& G, const HatView& S, const ExtJoinPoint& x,
                          const ExtJoinPoint& y, double tol = 1e-9);

// d-star companion: the integral of the shifted d-cross against exp(-|r|)/2,
// by product-trapezoid quadrature with the per-vertex profiles precomputed
// once and reused at every node
double ext_d_star(const HypGraph& G, const HatView& S, const ExtJoinPoint& x,
                  const ExtJoinPoint& y, double eps = 1e-6, double tol = 1e-9);

// nearest vertex: the point of the canonical tip-to-tip geodesic of x's line
// whose projection coordinate is closest to x (smallest id on ties)
int flow_psi(const HypGraph& G, const HatView& S, const ExtJoinPoint& x, double tol = 1e-9);

// shift-orbit check along one bi-infinite line: measures d*(r1+x, r2+x)
// against |r2 - r1| for all pairs from the list
struct FlowOrbitReport {
  std::vector<std::array<double, 3>> rows;  // r1, r2, measured d*
  double max_deviation = 0.0;
};
FlowOrbitReport flow_orbit_check(const HypGraph& G, const HatView& S, const ExtJoinPoint& x,
                                 const std::vector<double>& rs, double eps = 1e-6,
                                 double tol = 1e-9);

// Synchronized reparametrizations of a triple: x_t on [[b,c]] with origin at
// the projection of a, y_t on [[a,c]] with origin at the projection of b.
// For each sampled t the distances between x_t and y_t and the horofunction
// gap at c are measured, and a bound d_cross <= N * lambda^t is fitted.
struct ConvergenceFit {
  std::vector<double> t;
  std::vector<double> d_cross, d_star, beta_gap;
  double N = 0.0;       // front constant covering every d_cross sample
  double M = 0.0;       // same for d_star
  double lambda = 0.0;  // fitted decay rate
  bool certifies = false;
};
ConvergenceFit exp_convergence_measure(const HypGraph& G, const HatView& S, const ExtPoint& a,
                                       const ExtPoint& b, const ExtPoint& c,
                                       const std::vector<double>& t_samples, double tol = 1e-9);

// CSV dump of a fit: header t,d_cross,d_star,beta_gap and one row per sample
std::string convergence_csv(const ConvergenceFit& fit);

}  // namespace joinspace
