#include "joinspace/flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "joinspace/smooth.hpp"

namespace joinspace {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

ExtPoint vertex_point(int v) {
  ExtPoint p;
  p.boundary = false;
  p.v = v;
  return p;
}

int label_image(const HypGraph& G, const std::string& w, int v) {
  if (v < 0 || v >= G.n) return -1;
  if ((int)G.label.size() != G.n) return -1;
  const std::string& lbl = G.label[v];
  std::string img = fg_mul(w, lbl == "e" ? std::string() : lbl);
  return G.vertex_by_label(img.empty() ? "e" : img);
}

}  // namespace

WordShift::WordShift(std::string w) : word(fg_reduce(std::move(w))) {}

int WordShift::apply(const HypGraph& G, int v) const { return label_image(G, word, v); }

int WordShift::apply_inv(const HypGraph& G, int v) const {
  return label_image(G, fg_inv(word), v);
}

PermMap::PermMap(std::vector<int> p) : perm(std::move(p)) {
  inv.assign(perm.size(), -1);
  for (int v = 0; v < (int)perm.size(); ++v) {
    int w = perm[v];
    require(w >= 0 && w < (int)perm.size() && inv[w] < 0, "PermMap: not a permutation");
    inv[w] = v;
  }
}

int PermMap::apply(const HypGraph&, int v) const {
  return (v >= 0 && v < (int)perm.size()) ? perm[v] : -1;
}

int PermMap::apply_inv(const HypGraph&, int v) const {
  return (v >= 0 && v < (int)inv.size()) ? inv[v] : -1;
}

ExtPoint fixed_direction(const HypGraph& G, const BallMap& g, bool attracting) {
  int radius = *std::max_element(G.depth.begin(), G.depth.end());
  int cutoff = radius - 2;
  std::vector<char> seen(G.n, 0);
  int cur = G.x0;
  seen[cur] = 1;
  for (;;) {
    int next = attracting ? g.apply(G, cur) : g.apply_inv(G, cur);
    if (next < 0) {
      // orbit left the whole ball; the current point is the deepest available
      require(cur != G.x0, "fixed_direction: orbit leaves the ball immediately");
      return ext_boundary_toward(G, cur);
    }
    if (seen[next]) throw std::invalid_argument("fixed_direction: bounded orbit (elliptic map)");
    seen[next] = 1;
    cur = next;
    if (G.depth[cur] > cutoff) return ext_boundary_toward(G, cur);
  }
}

double translation_length(const HypGraph& G, const HatView& S, const BallMap& g,
                          LengthMethod method, double tol) {
  require(tol > 0.0, "translation_length: tol must be positive");
  if (method == LengthMethod::formula) {
    ExtPoint plus = fixed_direction(G, g, true);
    ExtPoint minus = fixed_direction(G, g, false);
    require(!ext_equal(G, minus, plus),
            "translation_length: fixed directions coincide, formula method inapplicable");
    int gx0 = g.apply(G, G.x0);
    require(gx0 >= 0, "translation_length: basepoint image leaves the ball");
    ExtQuadruple q{minus, plus, ext_vertex(S, gx0), ext_vertex(S, G.x0)};
    return dd_extended(G, S, q, tol).value;
  }

  // limit method: walk the basepoint orbit to the edge of the ball
  std::vector<char> seen(G.n, 0);
  std::vector<double> dist{0.0};
  int cur = G.x0;
  seen[cur] = 1;
  for (;;) {
    int next = g.apply(G, cur);
    if (next < 0) break;
    if (seen[next]) return 0.0;  // orbit revisits a vertex: bounded, length 0
    seen[next] = 1;
    cur = next;
    dist.push_back(S(G.x0, cur));
  }
  int N = (int)dist.size() - 1;
  if (N < 3) {
    double prev = N >= 2 ? dist[N - 1] - dist[N - 2] : 0.0;
    double last = N >= 1 ? dist[N] - dist[N - 1] : 0.0;
    throw OrbitTruncation("translation_length: orbit escaped after " + std::to_string(N) +
                              " steps, before the increments could settle",
                          prev, last);
  }
  double s1 = dist[N - 2] - dist[N - 3];
  double s2 = dist[N - 1] - dist[N - 2];
  double s3 = dist[N] - dist[N - 1];
  if (std::fabs(s3 - s2) <= tol && std::fabs(s2 - s1) <= tol) return s3;
  throw OrbitTruncation("translation_length: orbit escaped before the increments settled", s2,
                        s3);
}

namespace {

ExtPoint map_ext(const HypGraph& G, const BallMap& g, const ExtPoint& e) {
  if (!e.boundary) {
    int w = g.apply(G, e.v);
    require(w >= 0, "flow_isom_action: vertex image leaves the ball");
    return vertex_point(w);
  }
  // image direction: through the deepest ray vertex that still maps inside
  for (int k = e.ray.depth(); k >= 1; --k) {
    int im = g.apply(G, e.ray.verts[k]);
    if (im >= 0 && im != G.x0) return ext_boundary_toward(G, im);
  }
  throw std::invalid_argument("flow_isom_action: direction image leaves the ball");
}

}  // namespace

ExtJoinPoint flow_isom_action(const HypGraph& G, const HatView& S, const BallMap& g,
                              const ExtJoinPoint& x, double tol) {
  require(!x.at_infinity(), "flow_isom_action: point at infinity");
  if (!x.line.a.boundary && !x.line.b.boundary && x.line.a.v == x.line.b.v) {
    int w = g.apply(G, x.line.a.v);
    require(w >= 0, "flow_isom_action: vertex image leaves the ball");
    return ext_ground(S, w);
  }
  int back = g.apply_inv(G, G.x0);
  require(back >= 0, "flow_isom_action: basepoint preimage leaves the ball");
  ExtQuadruple q{x.line.a, x.line.b, ext_vertex(S, G.x0), ext_vertex(S, back)};
  double shift = dd_extended(G, S, q, tol).value;
  ExtPoint ga = map_ext(G, g, x.line.a);
  ExtPoint gb = map_ext(G, g, x.line.b);
  ExtLine L = extended_line(G, S, ga, gb, tol);
  return ext_point_at(L, x.param + ExtReal(shift), x.flavor);
}

ExtJoinPoint flow_shift(const ExtJoinPoint& x, double r) {
  require(std::isfinite(r), "flow_shift: shift must be finite");
  require(!x.at_infinity(), "flow_shift: point at infinity");
  return ext_point_at(x.line, x.param + ExtReal(r), x.flavor);
}

namespace {

// the direction a point at infinity stands for
ExtPoint infinite_direction(const ExtJoinPoint& x) {
  if (x.line.a.boundary && x.line.b.boundary && x.line.alpha == 0.0 && x.line.beta == 0.0)
    return x.line.a;
  return x.coord > 0 ? x.line.b : x.line.a;
}

// stable parts of ell(u, .) on both lines, for every vertex whose stabilized
// queries fit inside the seeded rays: ell(u, p) = g[u] + |p.coord - p[u]|
struct PairProfiles {
  std::vector<int> ids;
  std::vector<double> gx, px, gy, py;
};

PairProfiles build_profiles(const HypGraph& G, const HatView& S, const ExtLine& Lx,
                            const ExtLine& Ly, double tol, bool parallel) {
  const int n = G.n;
  bool same = ext_equal(G, Lx.a, Ly.a) && ext_equal(G, Lx.b, Ly.b);
  std::vector<char> keep(n, 0);
  std::vector<double> gx(n), px(n), gy(n), py(n);
  ExtPoint origin = vertex_point(G.x0);

  auto one = [&](int u) {
    ExtPoint up = vertex_point(u);
    try {
      gx[u] = gromov_extended(G, S, Lx.a, Lx.b, up, tol).value;
      px[u] = dd_extended(G, S, ExtQuadruple{Lx.a, Lx.b, up, origin}, tol).value;
      if (same) {
        gy[u] = gx[u];
        py[u] = px[u];
      } else {
        gy[u] = gromov_extended(G, S, Ly.a, Ly.b, up, tol).value;
        py[u] = dd_extended(G, S, ExtQuadruple{Ly.a, Ly.b, up, origin}, tol).value;
      }
      keep[u] = 1;
    } catch (const RayTruncation&) {
      keep[u] = 0;  // too deep for the seeded rays; drop this witness
    }
  };

  if (parallel && n >= 512) {
#pragma omp parallel for schedule(dynamic, 32)
    for (int u = 0; u < n; ++u) one(u);
  } else {
    for (int u = 0; u < n; ++u) one(u);
  }

  PairProfiles P;
  for (int u = 0; u < n; ++u)
    if (keep[u]) {
      P.ids.push_back(u);
      P.gx.push_back(gx[u]);
      P.px.push_back(px[u]);
      P.gy.push_back(gy[u]);
      P.py.push_back(py[u]);
    }
  if (P.ids.empty()) throw std::invalid_argument("ext_d_cross: no vertex witness fits the rays");
  return P;
}

double profile_max(const PairProfiles& P, double cx, double cy) {
  double best = 0.0;
  for (size_t k = 0; k < P.ids.size(); ++k) {
    double v = (P.gx[k] + std::fabs(cx - P.px[k])) - (P.gy[k] + std::fabs(cy - P.py[k]));
    best = std::max(best, std::fabs(v));
  }
  return best;
}

double ext_d_cross_impl(const HypGraph& G, const HatView& S, const ExtJoinPoint& x,
                        const ExtJoinPoint& y, double tol, bool parallel) {
  require(tol > 0.0, "ext_d_cross: tol must be positive");
  if (x.at_infinity() || y.at_infinity()) {
    if (x.at_infinity() && y.at_infinity())
      return ext_equal(G, infinite_direction(x), infinite_direction(y)) ? 0.0 : INF;
    return INF;
  }
  PairProfiles P = build_profiles(G, S, x.line, y.line, tol, parallel);
  return profile_max(P, x.coord, y.coord);
}

// exact integral of the chord A + B*(r - r0) against exp(-|r|)/2 over
// [r0, r1]; the interval must not straddle 0
double chord_weighted(double A, double B, double r0, double r1) {
  if (r1 <= 0.0) {  // reflect onto the positive side
    return chord_weighted(A + B * (r1 - r0), -B, -r1, -r0);
  }
  double h = r1 - r0;
  double e = std::exp(-h);
  return 0.5 * std::exp(-r0) * (A * (1.0 - e) + B * (1.0 - (1.0 + h) * e));
}

}  // namespace

double ext_d_cross(const HypGraph& G, const HatView& S, const ExtJoinPoint& x,
                   const ExtJoinPoint& y, double tol) {
  return ext_d_cross_impl(G, S, x, y, tol, true);
}

double ext_d_cross_serial(const HypGraph& G, const HatView& S, const ExtJoinPoint& x,
                          const ExtJoinPoint& y, double tol) {
  return ext_d_cross_impl(G, S, x, y, tol, false);
}

double ext_d_star(const HypGraph& G, const HatView& S, const ExtJoinPoint& x,
                  const ExtJoinPoint& y, double eps, double tol) {
  require(eps > 0.0, "ext_d_star: eps must be positive");
  if (x.at_infinity() || y.at_infinity()) {
    if (x.at_infinity() && y.at_infinity())
      return ext_equal(G, infinite_direction(x), infinite_direction(y)) ? 0.0 : INF;
    return INF;
  }
  PairProfiles P = build_profiles(G, S, x.line, y.line, tol, true);

  // the shifted integrand is bounded by a constant: the r terms cancel in
  // the reverse triangle bound, so the tail beyond R costs at most B e^-R
  double B = 0.0;
  for (size_t k = 0; k < P.ids.size(); ++k) {
    double b = std::fabs(P.gx[k] - P.gy[k]) +
               std::fabs((x.coord - P.px[k]) - (y.coord - P.py[k]));
    B = std::max(B, b);
  }
  if (B == 0.0) return 0.0;
  double R = std::max(8.0, std::log(2.0 * B / eps));

  // raw shifts move both coordinates by r until the clamp; points on finite
  // lines saturate at the ends, so the integrand is evaluated through the
  // clamped coordinates exactly as the definition prescribes
  const double h = 0.25;
  int K = (int)std::ceil(R / h);
  int m = 2 * K + 1;
  std::vector<double> F(m);
#pragma omp parallel for schedule(static) if (m * (int)P.ids.size() >= 1 << 16)
  for (int i = 0; i < m; ++i) {
    double r = (i - K) * h;
    double cx = theta(x.line.alpha, x.line.beta, x.coord + r);
    double cy = theta(y.line.alpha, y.line.beta, y.coord + r);
    F[i] = profile_max(P, cx, cy);
  }
  double total = 0.0;
  for (int i = 0; i + 1 < m; ++i) {
    double r0 = (i - K) * h, r1 = (i + 1 - K) * h;
    total += chord_weighted(F[i], (F[i + 1] - F[i]) / h, r0, r1);
  }
  return total;
}

int flow_psi(const HypGraph& G, const HatView& S, const ExtJoinPoint& x, double tol) {
  require(!x.at_infinity(), "flow_psi: point at infinity");
  if (!x.line.a.boundary && !x.line.b.boundary && x.line.a.v == x.line.b.v)
    return x.line.a.v;
  int va = x.line.a.boundary ? x.line.a.ray.tip() : x.line.a.v;
  int vb = x.line.b.boundary ? x.line.b.ray.tip() : x.line.b.v;
  Path path = canonical_geodesic(G, va, vb);
  ExtPoint origin = vertex_point(G.x0);
  int best = -1;
  double gap = INF;
  for (int u : path) {
    double p;
    try {
      p = dd_extended(G, S, ExtQuadruple{x.line.a, x.line.b, vertex_point(u), origin},
                      tol)
              .value;
    } catch (const RayTruncation&) {
      continue;
    }
    double d = std::fabs(p - x.coord);
    if (d < gap - 1e-12 || (d < gap + 1e-12 && u < best)) {
      gap = d;
      best = u;
    }
  }
  require(best >= 0, "flow_psi: no realization vertex fits the rays");
  return best;
}

FlowOrbitReport flow_orbit_check(const HypGraph& G, const HatView& S, const ExtJoinPoint& x,
                                 const std::vector<double>& rs, double eps, double tol) {
  require(x.line.a.boundary && x.line.b.boundary && !ext_equal(G, x.line.a, x.line.b),
          "flow_orbit_check: point must sit on a bi-infinite line");
  require(!x.at_infinity(), "flow_orbit_check: point at infinity");
  FlowOrbitReport rep;
  for (size_t i = 0; i < rs.size(); ++i)
    for (size_t j = i + 1; j < rs.size(); ++j) {
      double d = ext_d_star(G, S, flow_shift(x, rs[i]), flow_shift(x, rs[j]), eps, tol);
      rep.rows.push_back({rs[i], rs[j], d});
      rep.max_deviation = std::max(rep.max_deviation, std::fabs(d - std::fabs(rs[j] - rs[i])));
    }
  return rep;
}

ConvergenceFit exp_convergence_measure(const HypGraph& G, const HatView& S, const ExtPoint& a,
                                       const ExtPoint& b, const ExtPoint& c,
                                       const std::vector<double>& t_samples, double tol) {
  require(tol > 0.0, "exp_convergence_measure: tol must be positive");
  require(!ext_equal(G, c, a) && !ext_equal(G, c, b) && !ext_equal(G, a, b),
          "exp_convergence_measure: the three points must be pairwise distinct");

  ExtPoint origin = vertex_point(G.x0);
  double obc = dd_extended(G, S, ExtQuadruple{b, c, a, origin}, tol).value;
  double oac = dd_extended(G, S, ExtQuadruple{a, c, b, origin}, tol).value;

  ConvergenceFit fit;
  fit.t = t_samples;
  const int m = (int)t_samples.size();
  fit.d_cross.assign(m, 0.0);
  fit.d_star.assign(m, 0.0);
  fit.beta_gap.assign(m, 0.0);

  bool vertex_only = !a.boundary && !b.boundary && !c.boundary;
  if (vertex_only) {
    Line Lbc = make_line(S, b.v, c.v);
    Line Lac = make_line(S, a.v, c.v);
#pragma omp parallel for schedule(dynamic) if (m >= 4)
    for (int i = 0; i < m; ++i) {
      double t = t_samples[i];
      JoinPoint xt = point_at(S, Lbc, ExtReal(obc + t), Flavor::raw);
      JoinPoint yt = point_at(S, Lac, ExtReal(oac + t), Flavor::raw);
      fit.d_cross[i] = d_cross(S, xt, yt);
      fit.d_star[i] = d_star(S, xt, yt, 1e-7);
      fit.beta_gap[i] = std::fabs(beta_cross(S, c.v, xt, yt));
    }
  } else {
    ExtLine Lbc = extended_line(G, S, b, c, tol);
    ExtLine Lac = extended_line(G, S, a, c, tol);
    for (int i = 0; i < m; ++i) {
      double t = t_samples[i];
      ExtJoinPoint xt = ext_point_at(Lbc, ExtReal(obc + t), Flavor::raw);
      ExtJoinPoint yt = ext_point_at(Lac, ExtReal(oac + t), Flavor::raw);
      fit.d_cross[i] = ext_d_cross(G, S, xt, yt, tol);
      fit.d_star[i] = ext_d_star(G, S, xt, yt, 1e-6, tol);
      fit.beta_gap[i] = std::fabs(horofunction(G, S, c, xt, yt, tol));
    }
  }

  // least-squares decay fit on the positive samples, then front constants
  // chosen to cover every sample (fits are single-threaded)
  std::vector<std::pair<double, double>> pos;
  for (int i = 0; i < m; ++i)
    if (std::isfinite(fit.d_cross[i]) && fit.d_cross[i] > tol)
      pos.push_back({t_samples[i], std::log(fit.d_cross[i])});
  if (pos.size() < 2) {
    // d-cross can collapse to exact zero past the meeting time; the decay
    // rate is then read off the d-star column instead
    pos.clear();
    for (int i = 0; i < m; ++i)
      if (std::isfinite(fit.d_star[i]) && fit.d_star[i] > tol)
        pos.push_back({t_samples[i], std::log(fit.d_star[i])});
  }
  double slope = 0.0;
  if (pos.size() >= 2) {
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (auto& p : pos) {
      st += p.first;
      sl += p.second;
      stt += p.first * p.first;
      stl += p.first * p.second;
    }
    double den = pos.size() * stt - st * st;
    slope = den > 0 ? (pos.size() * stl - st * sl) / den : 0.0;
    fit.lambda = std::clamp(std::exp(slope), 1e-9, 1.0 - 1e-9);
  } else {
    fit.lambda = 0.5;
  }
  bool covered = true;
  for (int i = 0; i < m; ++i) {
    if (!std::isfinite(fit.d_cross[i]) || !std::isfinite(fit.d_star[i])) {
      covered = false;
      continue;
    }
    double w = std::pow(fit.lambda, t_samples[i]);
    fit.N = std::max(fit.N, fit.d_cross[i] / w);
    fit.M = std::max(fit.M, fit.d_star[i] / w);
  }
  for (int i = 0; i < m && covered; ++i)
    if (std::isfinite(fit.d_cross[i]) &&
        fit.d_cross[i] > fit.N * std::pow(fit.lambda, t_samples[i]) + 1e-9)
      covered = false;
  fit.certifies = covered && fit.lambda < 1.0 && (pos.size() < 2 || slope < 0.0);
  return fit;
}

std::string convergence_csv(const ConvergenceFit& fit) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "t,d_cross,d_star,beta_gap\n";
  for (size_t i = 0; i < fit.t.size(); ++i)
    out << fit.t[i] << ',' << fit.d_cross[i] << ',' << fit.d_star[i] << ',' << fit.beta_gap[i]
        << '\n';
  return out.str();
}

}  // namespace joinspace
