#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include "hypgraph.hpp"
#include "join.hpp"

namespace joinspace {

// Desk-scale boundary of a hyperbolic graph: directions at infinity held as
// geodesic rays from the basepoint, the double difference / Gromov product /
// cross-ratio extended to them by stabilized limits along the rays, lines
// with endpoints at infinity, and horofunctions.

// a vertex or a direction at infinity
struct ExtPoint {
  bool boundary = false;
  int v = -1;    // vertex id when !boundary
  RaySeed ray;   // geodesic from x0 when boundary
};
ExtPoint ext_vertex(const HatView& S, int v);
ExtPoint ext_boundary(RaySeed ray);
// direction of the canonical geodesic from x0 through the given vertex
ExtPoint ext_boundary_toward(const HypGraph& G, int target);

// equality surrogate: vertices by id; two directions are identified when
// their rays stay within 2*delta of each other over the common depth
bool ext_equal(const HypGraph& G, const ExtPoint& p, const ExtPoint& q);

struct ExtQuadruple {
  ExtPoint a, a2, b, b2;
};

// admissibility: every triple of entries lying at infinity must not
// represent a single direction
bool admissible(const HypGraph& G, const ExtQuadruple& q);
// triple admissibility for the Gromov product: a base at infinity must
// differ from both arguments
bool admissible_triple(const HypGraph& G, const ExtPoint& a, const ExtPoint& b,
                       const ExtPoint& c);

// raised when a ray is exhausted before the iterates settle; carries the
// last two iterates so the caller can see how far the value drifted
struct RayTruncation : TruncationError {
  double prev, last;
  RayTruncation(const std::string& msg, double prev_, double last_)
      : TruncationError(msg), prev(prev_), last(last_) {}
};

// a limit computed by deepening all rays in lockstep; value may be +-inf
// when the infinity is structural (detected from the entries, not numerics)
struct StabilizedValue {
  double value = 0.0;
  int depth_used = 0;
  std::vector<double> trace;  // iterates, vertex queries have a single entry
};

// double difference extended to the boundary.  Vertex-only quadruples are
// answered exactly; otherwise boundary entries are replaced by ray points of
// growing depth until three consecutive gaps are below tol and non-increasing.
// +inf iff a and b2 (or a2 and b) are the same direction; -inf iff a and b
// (or a2 and b2) are.
StabilizedValue dd_extended(const HypGraph& G, const HatView& S, const ExtQuadruple& q,
                            double tol);

// Gromov product of a and b at c, in [0, inf]; inf iff c is at infinity or
// a and b are the same direction
StabilizedValue gromov_extended(const HypGraph& G, const HatView& S, const ExtPoint& a,
                                const ExtPoint& b, const ExtPoint& c, double tol);

// exp of the extended double difference, in [0, inf]
StabilizedValue cross_ratio(const HypGraph& G, const HatView& S, const ExtQuadruple& q,
                            double tol);

// line between points of the compactified space; endpoint coordinates may be
// infinite, and a line between two copies of one direction degenerates to [0,0]
struct ExtLine {
  ExtPoint a, b;
  double alpha = 0.0, beta = 0.0;
  int depth_used = 0;
};
ExtLine extended_line(const HypGraph& G, const HatView& S, const ExtPoint& a,
                      const ExtPoint& b, double tol);

struct ExtJoinPoint {
  ExtLine line;
  double coord = 0.0;
  ExtReal param = ExtReal(0.0);
  Flavor flavor = Flavor::raw;
  bool at_infinity() const;  // sits on the boundary rather than in the join
};
// raw flavor clamps into [alpha,beta]; smoothed flavor applies the smoothed
// clamp, which degenerates to the identity on [-inf,inf]
ExtJoinPoint ext_point_at(const ExtLine& L, ExtReal t, Flavor f);
ExtJoinPoint ext_ground(const HatView& S, int v);
ExtJoinPoint ext_star(const ExtJoinPoint& x);

// horofunction: for a vertex u the cocycle ell(u,x) - ell(u,y) evaluated
// through the extended products; for u at infinity its stabilized limit
// along the ray.  x and y must not sit on the boundary themselves.
double horofunction(const HypGraph& G, const HatView& S, const ExtPoint& u,
                    const ExtJoinPoint& x, const ExtJoinPoint& y, double tol);

// the four projections [[a,u|b]], [[b,u|a]], [[u,a|b]], [[u,b|a]] lie on one
// horosphere at u; returns the largest |horofunction| among the six pairs
double horosphere_check(const HypGraph& G, const HatView& S, const ExtPoint& u,
                        const ExtPoint& a, const ExtPoint& b, double tol);

}  // namespace joinspace
