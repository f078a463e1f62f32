#include "joinspace/join.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace joinspace {

namespace {

void check_id(const HatView& S, int v, const char* who) {
  if (v < 0 || v >= S.size()) throw std::invalid_argument(std::string(who) + ": id out of range");
}

}  // namespace

Line make_line(const HatView& S, int a, int b) {
  check_id(S, a, "make_line");
  check_id(S, b, "make_line");
  int x0 = S.basepoint();
  // alpha = -<b|x0>_a, beta = <a|x0>_b; clamps keep 0 inside under roundoff
  double alpha = std::min(0.0, -S.gp3(b, x0, a));
  double beta = std::max(0.0, S.gp3(a, x0, b));
  return Line{a, b, alpha, beta};
}

int JoinPoint::ground_id() const {
  if (line.a == line.b) return line.a;
  if (coord == line.alpha) return line.a;
  if (coord == line.beta) return line.b;
  throw std::logic_error("ground_id: interior point");
}

JoinPoint point_at(const HatView& S, const Line& L, ExtReal t, Flavor f) {
  check_id(S, L.a, "point_at");
  check_id(S, L.b, "point_at");
  double c = (f == Flavor::raw) ? theta(L.alpha, L.beta, t.v) : theta_prime(L.alpha, L.beta, t.v);
  return JoinPoint{L, c, t, f};
}

JoinPoint ground_point(const HatView& S, int a) {
  check_id(S, a, "ground_point");
  return JoinPoint{Line{a, a, 0.0, 0.0}, 0.0, ExtReal(0.0), Flavor::raw};
}

bool same_point(const JoinPoint& x, const JoinPoint& y, double tol) {
  bool gx = x.ground(), gy = y.ground();
  if (gx || gy) return gx && gy && x.ground_id() == y.ground_id();
  return x.line.a == y.line.a && x.line.b == y.line.b && std::fabs(x.coord - y.coord) <= tol;
}

double change_basepoint(const HatView& S, const JoinPoint& x, int x1) {
  check_id(S, x1, "change_basepoint");
  return x.coord - S.dd4(x.line.a, x.line.b, x1, S.basepoint());
}

Isometry Isometry::from_permutation(const HatView& S, std::vector<int> p) {
  const int n = S.size();
  if ((int)p.size() != n) throw std::invalid_argument("isometry: permutation size mismatch");
  std::vector<int> inv(n, -1);
  for (int i = 0; i < n; ++i) {
    if (p[i] < 0 || p[i] >= n || inv[p[i]] != -1)
      throw std::invalid_argument("isometry: not a permutation");
    inv[p[i]] = i;
  }
  int bad = 0;
  if (n >= 1024) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      if (bad) continue;
      for (int j = i + 1; j < n; ++j)
        if (S(p[i], p[j]) != S(i, j)) {
#pragma omp atomic write
          bad = 1;
          break;
        }
    }
  } else {
    for (int i = 0; i < n && !bad; ++i)
      for (int j = i + 1; j < n; ++j)
        if (S(p[i], p[j]) != S(i, j)) {
          bad = 1;
          break;
        }
  }
  if (bad) throw std::invalid_argument("isometry: permutation does not preserve the metric");
  Isometry g;
  g.perm = std::move(p);
  g.inv = std::move(inv);
  return g;
}

namespace {

// parameter whose smoothed image is the position of x; finite for interior x
double smoothed_preimage(const JoinPoint& x) {
  if (x.flavor == Flavor::smoothed) return x.param.v;
  return theta_prime_inv(x.line.alpha, x.line.beta, x.coord);
}

}  // namespace

JoinPoint r_action(const HatView& S, double r, const JoinPoint& x) {
  if (!std::isfinite(r)) throw std::invalid_argument("r_action: r must be finite");
  if (x.ground()) return ground_point(S, x.ground_id());
  return point_at(S, x.line, ExtReal(smoothed_preimage(x) + r), Flavor::smoothed);
}

JoinPoint star_involution(const HatView& S, const JoinPoint& x) {
  if (x.ground()) return ground_point(S, x.ground_id());
  Line L{x.line.b, x.line.a, -x.line.beta, -x.line.alpha};
  return JoinPoint{L, -x.coord, -x.param, x.flavor};
}

JoinPoint isom_action(const HatView& S, const Isometry& g, const JoinPoint& x) {
  if (x.ground()) return ground_point(S, g(x.ground_id()));
  int x0 = S.basepoint();
  double shift = S.dd4(x.line.a, x.line.b, x0, g.inv[x0]);
  Line L = make_line(S, g(x.line.a), g(x.line.b));
  double c = theta(L.alpha, L.beta, x.coord + shift);
  return JoinPoint{L, c, x.param + ExtReal(shift), x.flavor};
}

double project_coord(const HatView& S, int a, int a2, int b) {
  check_id(S, b, "project_coord");
  return S.dd4(a, a2, b, S.basepoint());
}

JoinPoint project(const HatView& S, int a, int a2, int b) {
  Line L = make_line(S, a, a2);
  return point_at(S, L, ExtReal(project_coord(S, a, a2, b)), Flavor::raw);
}

double ell(const HatView& S, int u, const JoinPoint& x) {
  check_id(S, u, "ell");
  int a = x.line.a, b = x.line.b;
  return S.gp3(a, b, u) + std::fabs(x.coord - S.dd4(a, b, u, S.basepoint()));
}

double beta_cross(const HatView& S, int u, const JoinPoint& x, const JoinPoint& y) {
  return ell(S, u, x) - ell(S, u, y);
}

double d_cross_serial(const HatView& S, const JoinPoint& x, const JoinPoint& y) {
  const int n = S.size();
  double m = 0.0;
  for (int u = 0; u < n; ++u) m = std::max(m, std::fabs(beta_cross(S, u, x, y)));
  return m;
}

double d_cross(const HatView& S, const JoinPoint& x, const JoinPoint& y) {
  const int n = S.size();
  if (n < 2048) return d_cross_serial(S, x, y);
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (int u = 0; u < n; ++u) m = std::max(m, std::fabs(beta_cross(S, u, x, y)));
  return m;
}

// ---------------------------------------------------------------------------
// d_star: exact integration of F(r) = d_cross(r+x, r+y) against exp(-|r|)/2.
//
// Write the orbit positions as Theta(r) = theta'(alpha, beta, r + s).  Then
//   beta_cross_u(r) = K_u + |Theta_x(r) - P_u| - |Theta_y(r) - Q_u|
// with P, Q the projection coordinates of u onto the two lines and K_u the
// difference of the endpoint Gromov products.  Between breakpoints (branch
// edges of both thetas, radii where an orbit passes over a projection, and
// the kernel kink at 0) every |.| has a fixed sign, so beta_cross_u is
// A + B r + C e^r + D e^{-r} with u entering only through constants.  F is
// then a max of at most eight such candidates (four sign classes, two
// orientations), each keyed by the extreme constant of its class.  Crossings
// between candidates are isolated exactly (the second derivative has at most
// one root, found in log space), and each atom integrates in closed form.
//
// Exponentials are kept as sign + log magnitude; every exponent actually
// evaluated is bounded above by a small constant on its piece, so there is
// no overflow regardless of interval sizes or parameter magnitudes.
// ---------------------------------------------------------------------------

namespace {

constexpr double RMAX = 745.0;  // exp(-RMAX) underflows: tails are exact zero
constexpr double LN2 = 0.6931471805599453;

struct SLog {
  int sg = 0;        // -1, 0, +1
  double lg = -INF;  // value = sg * exp(lg)
};

SLog slog_sum(const double* lgs, const int* sgs, int k) {
  double m = -INF;
  for (int i = 0; i < k; ++i)
    if (sgs[i] != 0 && lgs[i] > m) m = lgs[i];
  if (m == -INF) return {};
  // positive and negative parts accumulated separately so that equal
  // multisets of magnitudes cancel to exactly zero
  double pos = 0.0, neg = 0.0;
  for (int i = 0; i < k; ++i) {
    if (sgs[i] > 0) pos += std::exp(lgs[i] - m);
    else if (sgs[i] < 0) neg += std::exp(lgs[i] - m);
  }
  double v = pos - neg;
  if (v == 0.0) return {};
  return SLog{v > 0.0 ? 1 : -1, m + std::log(std::fabs(v))};
}

// orbit position theta'(alpha, beta, r + s); a ground point packs as
// alpha = beta = s = 0, which is identically zero
struct Moving {
  double alpha = 0.0, beta = 0.0, s = 0.0;
  double at(double r) const { return theta_prime(alpha, beta, r + s); }
  int branch(double r) const {
    double tau = r + s;
    if (tau <= alpha) return 0;
    if (tau >= beta) return 2;
    return 1;
  }
};

// A + B r + C e^r + D e^{-r} on one piece
struct PieceFun {
  double A = 0.0, B = 0.0;
  SLog C, D;
  double at(double r) const {
    double v = A + B * r;
    if (C.sg) v += C.sg * std::exp(C.lg + r);
    if (D.sg) v += D.sg * std::exp(D.lg - r);
    return v;
  }
  double d1(double r) const {
    double v = B;
    if (C.sg) v += C.sg * std::exp(C.lg + r);
    if (D.sg) v -= D.sg * std::exp(D.lg - r);
    return v;
  }
};

PieceFun piece_delta(const PieceFun& f, const PieceFun& g) {
  PieceFun d;
  d.A = f.A - g.A;
  d.B = f.B - g.B;
  double lgs[2];
  int sgs[2];
  lgs[0] = f.C.lg, sgs[0] = f.C.sg, lgs[1] = g.C.lg, sgs[1] = -g.C.sg;
  d.C = slog_sum(lgs, sgs, 2);
  lgs[0] = f.D.lg, sgs[0] = f.D.sg, lgs[1] = g.D.lg, sgs[1] = -g.D.sg;
  d.D = slog_sum(lgs, sgs, 2);
  return d;
}

// contribution w * Theta on a piece lying in branch br of Theta
void add_theta(PieceFun& f, const Moving& m, int w, int br, double* clg, int* csg, int& ck,
               double* dlg, int* dsg, int& dk) {
  if (br == 0) {  // alpha + (e^{tau-alpha} - e^{tau-beta})/2
    f.A += w * m.alpha;
    clg[ck] = m.s - m.alpha - LN2, csg[ck] = w, ++ck;
    clg[ck] = m.s - m.beta - LN2, csg[ck] = -w, ++ck;
  } else if (br == 1) {  // tau + (e^{alpha-tau} - e^{tau-beta})/2
    f.A += w * m.s;
    f.B += w;
    clg[ck] = m.s - m.beta - LN2, csg[ck] = -w, ++ck;
    dlg[dk] = m.alpha - m.s - LN2, dsg[dk] = w, ++dk;
  } else {  // beta + (e^{alpha-tau} - e^{beta-tau})/2
    f.A += w * m.beta;
    dlg[dk] = m.alpha - m.s - LN2, dsg[dk] = w, ++dk;
    dlg[dk] = m.beta - m.s - LN2, dsg[dk] = -w, ++dk;
  }
}

template <class F>
double bisect_root(F&& f, double lo, double hi, double flo) {
  for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::fabs(lo) + std::fabs(hi)); ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) lo = mid, flo = fm;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// roots of g in (l,u); g'' has at most one root, so g' has at most two and
// g at most three, each isolated on a monotone stretch
void add_crossings(const PieceFun& g, double l, double u, std::vector<double>& out) {
  double k1[3];
  int n1 = 0;
  k1[n1++] = l;
  if (g.C.sg != 0 && g.D.sg != 0 && g.C.sg * g.D.sg < 0) {
    double r2 = 0.5 * (g.D.lg - g.C.lg);
    if (r2 > l && r2 < u) k1[n1++] = r2;
  }
  k1[n1++] = u;
  double k2[5];
  int n2 = 0;
  k2[n2++] = l;
  for (int i = 0; i + 1 < n1; ++i) {
    double fa = g.d1(k1[i]), fb = g.d1(k1[i + 1]);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0))
      k2[n2++] = bisect_root([&](double r) { return g.d1(r); }, k1[i], k1[i + 1], fa);
  }
  k2[n2++] = u;
  for (int i = 0; i + 1 < n2; ++i) {
    double fa = g.at(k2[i]), fb = g.at(k2[i + 1]);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0))
      out.push_back(bisect_root([&](double r) { return g.at(r); }, k2[i], k2[i + 1], fa));
  }
}

// int_l^u exp(k r + c) dr; all exponents bounded at the ends by construction
double int_exp(double c, double k, double l, double u) {
  if (k == 0.0) return std::exp(c) * (u - l);
  return (std::exp(k * u + c) - std::exp(k * l + c)) / k;
}

// int_l^u f(r) exp(ek r) dr with ek = +-1 and [l,u] on one side of 0
double integrate_piece(const PieceFun& f, double l, double u, double ek) {
  double v = f.A * int_exp(0.0, ek, l, u);
  if (f.B != 0.0)
    v += f.B * (std::exp(ek * u) * (ek * u - 1.0) - std::exp(ek * l) * (ek * l - 1.0));
  if (f.C.sg) v += f.C.sg * int_exp(f.C.lg, 1.0 + ek, l, u);
  if (f.D.sg) v += f.D.sg * int_exp(f.D.lg, -1.0 + ek, l, u);
  return v;
}

struct PackedPoint {
  Moving m;
  int a = 0, b = 0;  // carrying line (ground points: a == b)
};

PackedPoint pack_point(const JoinPoint& x) {
  PackedPoint P;
  if (x.ground()) {
    P.a = P.b = x.ground_id();
    return P;
  }
  P.a = x.line.a;
  P.b = x.line.b;
  P.m.alpha = x.line.alpha;
  P.m.beta = x.line.beta;
  P.m.s = smoothed_preimage(x);
  return P;
}

}  // namespace

double d_star(const HatView& S, const JoinPoint& x, const JoinPoint& y, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("d_star: eps must be positive");
  const int n = S.size();
  const int x0 = S.basepoint();
  PackedPoint X = pack_point(x), Y = pack_point(y);
  check_id(S, X.a, "d_star");
  check_id(S, X.b, "d_star");
  check_id(S, Y.a, "d_star");
  check_id(S, Y.b, "d_star");

  // ground set grouped by exact projection pair, with the range of the
  // Gromov-product constant inside each group.  rsx/rsy hold the radius at
  // which the orbit passes the projection: the sign of Theta - P on a piece
  // is decided in r-space (Theta saturates to its endpoints in floating
  // point, so comparing positions at large radii would misclassify the
  // groups whose projection is an endpoint)
  struct Group {
    double Px, Py, Kmin, Kmax, rsx, rsy;
  };
  std::vector<Group> groups;
  {
    std::map<std::pair<double, double>, std::pair<double, double>> acc;
    for (int u = 0; u < n; ++u) {
      double Pu = S.dd4(X.a, X.b, u, x0);
      double Qu = S.dd4(Y.a, Y.b, u, x0);
      double K = S.gp3(X.a, X.b, u) - S.gp3(Y.a, Y.b, u);
      auto [it, fresh] = acc.emplace(std::make_pair(Pu, Qu), std::make_pair(K, K));
      if (!fresh) {
        it->second.first = std::min(it->second.first, K);
        it->second.second = std::max(it->second.second, K);
      }
    }
    // crossing radius: -inf when Theta - P is positive on all of R (the
    // projection sits at or below alpha), +inf when negative (at beta)
    std::map<double, double> rsx_of, rsy_of;
    auto cross_radius = [](const Moving& m, double p) {
      if (m.alpha == m.beta || p <= m.alpha) return -INF;
      if (p >= m.beta) return INF;
      return theta_prime_inv(m.alpha, m.beta, p) - m.s;
    };
    groups.reserve(acc.size());
    for (auto& kv : acc) {
      double Pu = kv.first.first, Qu = kv.first.second;
      auto ix = rsx_of.find(Pu);
      if (ix == rsx_of.end()) ix = rsx_of.emplace(Pu, cross_radius(X.m, Pu)).first;
      auto iy = rsy_of.find(Qu);
      if (iy == rsy_of.end()) iy = rsy_of.emplace(Qu, cross_radius(Y.m, Qu)).first;
      groups.push_back(
          {Pu, Qu, kv.second.first, kv.second.second, ix->second, iy->second});
    }
  }

  // breakpoints: kernel kink, branch edges, and the crossing radii
  std::vector<double> bks{-RMAX, 0.0, RMAX};
  auto add_bk = [&](double r) {
    if (std::isfinite(r) && r > -RMAX && r < RMAX) bks.push_back(r);
  };
  if (X.m.alpha < X.m.beta) {
    add_bk(X.m.alpha - X.m.s);
    add_bk(X.m.beta - X.m.s);
  }
  if (Y.m.alpha < Y.m.beta) {
    add_bk(Y.m.alpha - Y.m.s);
    add_bk(Y.m.beta - Y.m.s);
  }
  for (const Group& g : groups) {
    add_bk(g.rsx);
    add_bk(g.rsy);
  }
  std::sort(bks.begin(), bks.end());
  bks.erase(std::unique(bks.begin(), bks.end()), bks.end());

  double total = 0.0;
  std::vector<double> subs;
  for (size_t pi = 0; pi + 1 < bks.size(); ++pi) {
    double l = bks[pi], u = bks[pi + 1];
    if (!(u > l)) continue;
    double rm = 0.5 * (l + u);
    double ek = (l >= 0.0) ? -1.0 : 1.0;
    int brx = X.m.branch(rm), bry = Y.m.branch(rm);

    // extreme constants of the four sign classes present on this piece
    double emin[4] = {0, 0, 0, 0}, emax[4] = {0, 0, 0, 0};
    bool has[4] = {false, false, false, false};
    for (const Group& g : groups) {
      int sx = (rm > g.rsx) ? 1 : -1;
      int sy = (rm > g.rsy) ? 1 : -1;
      int c = ((sx > 0) ? 2 : 0) | ((sy > 0) ? 1 : 0);
      double e1 = g.Kmin - sx * g.Px + sy * g.Py;
      double e2 = g.Kmax - sx * g.Px + sy * g.Py;
      if (!has[c]) has[c] = true, emin[c] = e1, emax[c] = e2;
      else emin[c] = std::min(emin[c], e1), emax[c] = std::max(emax[c], e2);
    }

    PieceFun cand[8];
    int nc = 0;
    for (int c = 0; c < 4; ++c) {
      if (!has[c]) continue;
      int sx = (c & 2) ? 1 : -1, sy = (c & 1) ? 1 : -1;
      for (int dir = 0; dir < 2; ++dir) {
        int p = dir ? -sx : sx;
        int q = dir ? sy : -sy;
        PieceFun f;
        f.A = dir ? -emin[c] : emax[c];
        double clg[4], dlg[4];
        int csg[4], dsg[4], ck = 0, dk = 0;
        add_theta(f, X.m, p, brx, clg, csg, ck, dlg, dsg, dk);
        add_theta(f, Y.m, q, bry, clg, csg, ck, dlg, dsg, dk);
        f.C = slog_sum(clg, csg, ck);
        f.D = slog_sum(dlg, dsg, dk);
        cand[nc++] = f;
      }
    }

    subs.clear();
    subs.push_back(l);
    subs.push_back(u);
    for (int i = 0; i < nc; ++i)
      for (int j = i + 1; j < nc; ++j) add_crossings(piece_delta(cand[i], cand[j]), l, u, subs);
    std::sort(subs.begin(), subs.end());
    for (size_t si = 0; si + 1 < subs.size(); ++si) {
      double sl = subs[si], su = subs[si + 1];
      if (!(su > sl)) continue;
      // atoms are crossing-free, so the dominant candidate is the one with
      // the largest closed-form integral; picking by point samples instead
      // would go blind once the exponential terms leave double range
      double best = -INF;
      for (int i = 0; i < nc; ++i)
        best = std::max(best, integrate_piece(cand[i], sl, su, ek));
      total += 0.5 * best;
    }
  }
  return total;
}

double d_star_quadrature(const HatView& S, const JoinPoint& x, const JoinPoint& y, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("d_star_quadrature: eps must be positive");
  double F0 = d_cross(S, x, y);
  // truncation: int_R^inf (F0 + 2r) e^{-r} dr = e^{-R} (F0 + 2R + 2) << eps/2
  double R = std::max(20.0, F0) + std::log(1.0 / eps);
  // chord of the 2-Lipschitz integrand errs by at most h pointwise, and the
  // kernel has unit mass, so h = 0.45 eps certifies the total
  double h = 0.45 * eps;
  long long N = (long long)std::ceil(2.0 * R / h);
  if (N % 2) ++N;  // keep 0 on the grid: the kernel has a kink there
  double hh = 2.0 * R / (double)N;
  JoinPoint xs = r_action(S, 0.0, x), ys = r_action(S, 0.0, y);
  std::vector<double> F((size_t)N + 1);
  for (long long i = 0; i <= N; ++i) {
    double r = -R + hh * (double)i;
    F[(size_t)i] = d_cross_serial(S, r_action(S, r, xs), r_action(S, r, ys));
  }
  double total = 0.0;
  for (long long i = 0; i < N; ++i) {
    double a = -R + hh * (double)i, b = a + hh;
    double ek = (a >= 0.0) ? -1.0 : 1.0;
    PieceFun f;  // chord, integrated against the exact kernel
    f.B = (F[(size_t)i + 1] - F[(size_t)i]) / hh;
    f.A = F[(size_t)i] - a * f.B;
    total += 0.5 * integrate_piece(f, a, b, ek);
  }
  return total;
}

namespace {

template <class Fn>
std::vector<double> pairwise_parallel(int m, Fn&& f) {
  std::vector<double> out((size_t)m * m, 0.0);
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < m; ++i) {
    try {
      for (int j = i + 1; j < m; ++j) {
        double v = f(i, j);
        out[(size_t)i * m + j] = v;
        out[(size_t)j * m + i] = v;
      }
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

template <class Fn>
std::vector<double> pairwise_serial_impl(int m, Fn&& f) {
  std::vector<double> out((size_t)m * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double v = f(i, j);
      out[(size_t)i * m + j] = v;
      out[(size_t)j * m + i] = v;
    }
  return out;
}

}  // namespace

std::vector<double> pairwise_d_cross(const HatView& S, const std::vector<JoinPoint>& pts) {
  return pairwise_parallel((int)pts.size(),
                           [&](int i, int j) { return d_cross_serial(S, pts[i], pts[j]); });
}

std::vector<double> pairwise_d_cross_serial(const HatView& S, const std::vector<JoinPoint>& pts) {
  return pairwise_serial_impl((int)pts.size(),
                              [&](int i, int j) { return d_cross_serial(S, pts[i], pts[j]); });
}

std::vector<double> pairwise_d_star(const HatView& S, const std::vector<JoinPoint>& pts,
                                    double eps) {
  return pairwise_parallel((int)pts.size(),
                           [&](int i, int j) { return d_star(S, pts[i], pts[j], eps); });
}

std::vector<double> pairwise_d_star_serial(const HatView& S, const std::vector<JoinPoint>& pts,
                                           double eps) {
  return pairwise_serial_impl((int)pts.size(),
                              [&](int i, int j) { return d_star(S, pts[i], pts[j], eps); });
}

JoinPoint phi(const HatView& S, const JoinPoint& x) {
  if (x.ground()) return ground_point(S, x.ground_id());
  double s = smoothed_preimage(x);
  double c = theta_second(x.line.alpha, x.line.beta, s);
  return JoinPoint{x.line, c, ExtReal(c), Flavor::raw};
}

int psi(const HypGraph& G, const HatView& S, const JoinPoint& x) {
  if (x.ground()) return x.ground_id();
  Path geo = canonical_geodesic(G, x.line.a, x.line.b);
  int best = geo[0];
  double bd = std::fabs(project_coord(S, x.line.a, x.line.b, geo[0]) - x.coord);
  for (size_t i = 1; i < geo.size(); ++i) {
    double d = std::fabs(project_coord(S, x.line.a, x.line.b, geo[i]) - x.coord);
    if (d < bd || (d == bd && geo[i] < best)) best = geo[i], bd = d;
  }
  return best;
}

std::string join_point_to_json(const JoinPoint& x, int basepoint) {
  nlohmann::json j;
  j["a"] = x.line.a;
  j["b"] = x.line.b;
  j["coord"] = x.coord;
  j["flavor"] = (x.flavor == Flavor::raw) ? "raw" : "smoothed";
  j["basepoint"] = basepoint;
  return j.dump();
}

JoinPoint join_point_from_json(const HatView& S, const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int a = j.at("a").get<int>();
  int b = j.at("b").get<int>();
  if (j.at("basepoint").get<int>() != S.basepoint())
    throw std::invalid_argument("join point: basepoint mismatch");
  std::string fl = j.at("flavor").get<std::string>();
  Flavor f;
  if (fl == "raw") f = Flavor::raw;
  else if (fl == "smoothed") f = Flavor::smoothed;
  else throw std::invalid_argument("join point: unknown flavor");
  Line L = make_line(S, a, b);
  double c = j.at("coord").get<double>();
  if (!(c >= L.alpha - 1e-9 && c <= L.beta + 1e-9))
    throw std::invalid_argument("join point: coordinate outside the line interval");
  c = std::min(std::max(c, L.alpha), L.beta);
  ExtReal prm(c);
  if (f == Flavor::smoothed && L.alpha < c && c < L.beta)
    prm = ExtReal(theta_prime_inv(L.alpha, L.beta, c));
  return JoinPoint{L, c, prm, f};
}

}  // namespace joinspace
