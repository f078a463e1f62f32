#include "joinspace/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace joinspace {

namespace {

void check_entry(const HypGraph& G, const ExtPoint& p, const char* who) {
  if (p.boundary) {
    if (p.ray.verts.size() < 2)
      throw std::invalid_argument(std::string(who) + ": boundary ray needs depth >= 1");
    if (p.ray.base() != G.x0)
      throw std::invalid_argument(std::string(who) + ": ray must start at the basepoint");
  } else if (p.v < 0 || p.v >= G.n) {
    throw std::invalid_argument(std::string(who) + ": vertex id out of range");
  }
}

int entry_at(const ExtPoint& p, int i) { return p.boundary ? p.ray.verts[i] : p.v; }

// deepen all rays in lockstep until three consecutive iterate gaps are below
// tol and non-increasing; the guard keeps accidental early agreement from
// being mistaken for the decay regime
StabilizedValue stabilize(int maxdepth, double tol, const char* who,
                          const std::function<double(int)>& f) {
  StabilizedValue out;
  for (int i = 1; i <= maxdepth; ++i) {
    out.trace.push_back(f(i));
    out.depth_used = i;
    size_t k = out.trace.size();
    if (k >= 4) {
      double g1 = std::fabs(out.trace[k - 3] - out.trace[k - 4]);
      double g2 = std::fabs(out.trace[k - 2] - out.trace[k - 3]);
      double g3 = std::fabs(out.trace[k - 1] - out.trace[k - 2]);
      if (g1 < tol && g2 < tol && g3 < tol && g1 >= g2 && g2 >= g3) {
        out.value = out.trace.back();
        return out;
      }
    }
  }
  double last = out.trace.empty() ? 0.0 : out.trace.back();
  double prev = out.trace.size() >= 2 ? out.trace[out.trace.size() - 2] : last;
  throw RayTruncation(std::string(who) + ": ray exhausted before stabilization", prev,
                      last);
}

bool same_direction(const HypGraph& G, const ExtPoint& p, const ExtPoint& q) {
  return p.boundary && q.boundary && ext_equal(G, p, q);
}

StabilizedValue exact_value(double v) {
  StabilizedValue out;
  out.value = v;
  out.trace = {v};
  return out;
}

}  // namespace

ExtPoint ext_vertex(const HatView& S, int v) {
  if (v < 0 || v >= S.size()) throw std::invalid_argument("ext_vertex: id out of range");
  ExtPoint p;
  p.boundary = false;
  p.v = v;
  return p;
}

ExtPoint ext_boundary(RaySeed ray) {
  if (ray.verts.size() < 2)
    throw std::invalid_argument("ext_boundary: ray needs depth >= 1");
  ExtPoint p;
  p.boundary = true;
  p.ray = std::move(ray);
  return p;
}

ExtPoint ext_boundary_toward(const HypGraph& G, int target) {
  return ext_boundary(ray_toward(G, target));
}

bool ext_equal(const HypGraph& G, const ExtPoint& p, const ExtPoint& q) {
  if (p.boundary != q.boundary) return false;
  if (!p.boundary) return p.v == q.v;
  int common = std::min(p.ray.depth(), q.ray.depth());
  double fuzz = 2.0 * G.fineness.delta;
  for (int i = 0; i <= common; ++i)
    if (G.idist(p.ray.verts[i], q.ray.verts[i]) > fuzz) return false;
  return true;
}

bool admissible(const HypGraph& G, const ExtQuadruple& q) {
  const ExtPoint* e[4] = {&q.a, &q.a2, &q.b, &q.b2};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        if (!e[i]->boundary || !e[j]->boundary || !e[k]->boundary) continue;
        if (ext_equal(G, *e[i], *e[j]) && ext_equal(G, *e[j], *e[k])) return false;
      }
  return true;
}

bool admissible_triple(const HypGraph& G, const ExtPoint& a, const ExtPoint& b,
                       const ExtPoint& c) {
  if (!c.boundary) return true;
  return !ext_equal(G, a, c) && !ext_equal(G, b, c);
}

StabilizedValue dd_extended(const HypGraph& G, const HatView& S, const ExtQuadruple& q,
                            double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("dd_extended: tol must be positive");
  if (S.size() != G.n) throw std::invalid_argument("dd_extended: view/graph mismatch");
  check_entry(G, q.a, "dd_extended");
  check_entry(G, q.a2, "dd_extended");
  check_entry(G, q.b, "dd_extended");
  check_entry(G, q.b2, "dd_extended");
  if (!admissible(G, q)) throw std::invalid_argument("dd_extended: inadmissible quadruple");

  // infinities are structural, decided from coincident directions
  if (same_direction(G, q.a, q.b2) || same_direction(G, q.a2, q.b))
    return exact_value(INF);
  if (same_direction(G, q.a, q.b) || same_direction(G, q.a2, q.b2))
    return exact_value(-INF);

  if (!q.a.boundary && !q.a2.boundary && !q.b.boundary && !q.b2.boundary)
    return exact_value(S.dd4(q.a.v, q.a2.v, q.b.v, q.b2.v));

  int maxd = INT32_MAX;
  for (const ExtPoint* p : {&q.a, &q.a2, &q.b, &q.b2})
    if (p->boundary) maxd = std::min(maxd, p->ray.depth());
  return stabilize(maxd, tol, "dd_extended", [&](int i) {
    return S.dd4(entry_at(q.a, i), entry_at(q.a2, i), entry_at(q.b, i),
                 entry_at(q.b2, i));
  });
}

StabilizedValue gromov_extended(const HypGraph& G, const HatView& S, const ExtPoint& a,
                                const ExtPoint& b, const ExtPoint& c, double tol) {
  check_entry(G, a, "gromov_extended");
  check_entry(G, b, "gromov_extended");
  check_entry(G, c, "gromov_extended");
  if (!admissible_triple(G, a, b, c))
    throw std::invalid_argument("gromov_extended: base coincides with an argument");
  if (c.boundary || same_direction(G, a, b)) return exact_value(INF);
  return dd_extended(G, S, ExtQuadruple{a, c, c, b}, tol);
}

StabilizedValue cross_ratio(const HypGraph& G, const HatView& S, const ExtQuadruple& q,
                            double tol) {
  StabilizedValue out = dd_extended(G, S, q, tol);
  out.value = ext_exp(out.value);
  for (double& t : out.trace) t = ext_exp(t);
  return out;
}

ExtLine extended_line(const HypGraph& G, const HatView& S, const ExtPoint& a,
                      const ExtPoint& b, double tol) {
  check_entry(G, a, "extended_line");
  check_entry(G, b, "extended_line");
  ExtLine L;
  L.a = a;
  L.b = b;
  if (ext_equal(G, a, b)) return L;  // one point, the interval [0,0]
  ExtPoint o = ext_vertex(S, S.basepoint());
  StabilizedValue ga = gromov_extended(G, S, b, o, a, tol);
  StabilizedValue gb = gromov_extended(G, S, a, o, b, tol);
  L.alpha = std::min(0.0, -ga.value);
  L.beta = std::max(0.0, gb.value);
  L.depth_used = std::max(ga.depth_used, gb.depth_used);
  return L;
}

bool ExtJoinPoint::at_infinity() const {
  if (std::isinf(coord)) return true;
  // a line between two copies of one direction is that single boundary point
  return line.a.boundary && line.b.boundary && line.alpha == 0.0 && line.beta == 0.0;
}

ExtJoinPoint ext_point_at(const ExtLine& L, ExtReal t, Flavor f) {
  ExtJoinPoint x;
  x.line = L;
  x.param = t;
  x.flavor = f;
  x.coord = (f == Flavor::raw) ? theta(L.alpha, L.beta, t.v)
                               : theta_prime(L.alpha, L.beta, t.v);
  return x;
}

ExtJoinPoint ext_ground(const HatView& S, int v) {
  ExtJoinPoint x;
  x.line.a = x.line.b = ext_vertex(S, v);
  return x;
}

ExtJoinPoint ext_star(const ExtJoinPoint& x) {
  ExtJoinPoint y;
  y.line.a = x.line.b;
  y.line.b = x.line.a;
  y.line.alpha = -x.line.beta;
  y.line.beta = -x.line.alpha;
  y.line.depth_used = x.line.depth_used;
  y.coord = -x.coord;
  y.param = -x.param;
  y.flavor = x.flavor;
  return y;
}

namespace {

// ell through the extended products; exact when the line endpoints are
// vertices
double ell_ext(const HypGraph& G, const HatView& S, int w, const ExtJoinPoint& x,
               double tol) {
  const ExtPoint& a = x.line.a;
  const ExtPoint& b = x.line.b;
  ExtPoint wp = ext_vertex(S, w);
  ExtPoint o = ext_vertex(S, S.basepoint());
  double ga = gromov_extended(G, S, a, b, wp, tol).value;
  double pc = dd_extended(G, S, ExtQuadruple{a, b, wp, o}, tol).value;
  return ga + std::fabs(x.coord - pc);
}

}  // namespace

double horofunction(const HypGraph& G, const HatView& S, const ExtPoint& u,
                    const ExtJoinPoint& x, const ExtJoinPoint& y, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("horofunction: tol must be positive");
  check_entry(G, u, "horofunction");
  if (x.at_infinity() || y.at_infinity())
    throw std::invalid_argument("horofunction: arguments must avoid the boundary");
  if (!u.boundary)
    return ell_ext(G, S, u.v, x, tol) - ell_ext(G, S, u.v, y, tol);
  return stabilize(u.ray.depth(), tol, "horofunction", [&](int i) {
           int w = u.ray.verts[i];
           return ell_ext(G, S, w, x, tol) - ell_ext(G, S, w, y, tol);
         })
      .value;
}

double horosphere_check(const HypGraph& G, const HatView& S, const ExtPoint& u,
                        const ExtPoint& a, const ExtPoint& b, double tol) {
  check_entry(G, u, "horosphere_check");
  check_entry(G, a, "horosphere_check");
  check_entry(G, b, "horosphere_check");
  if (same_direction(G, u, a) || same_direction(G, u, b) || same_direction(G, a, b))
    throw std::invalid_argument("horosphere_check: boundary entries must be distinct");

  ExtPoint o = ext_vertex(S, S.basepoint());
  auto proj = [&](const ExtPoint& p, const ExtPoint& q, const ExtPoint& w) {
    double c = dd_extended(G, S, ExtQuadruple{p, q, w, o}, tol).value;
    return ext_point_at(extended_line(G, S, p, q, tol), ExtReal(c), Flavor::raw);
  };
  ExtJoinPoint pts[4] = {proj(a, u, b), proj(b, u, a), proj(u, a, b), proj(u, b, a)};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      worst = std::max(worst, std::fabs(horofunction(G, S, u, pts[i], pts[j], tol)));
  return worst;
}

}  // namespace joinspace
