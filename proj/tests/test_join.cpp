#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "joinspace/hypgraph.hpp"
#include "joinspace/join.hpp"

using namespace joinspace;

namespace {

HypGraph path_based_at(int n, int x0) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return HypGraph::from_edges(n, std::move(e), x0);
}

JoinPoint random_point(const HatView& S, std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, S.size() - 1);
  std::uniform_real_distribution<double> par(-8.0, 8.0);
  std::bernoulli_distribution coin(0.5);
  int a = pick(rng), b = pick(rng);
  if (a == b || coin(rng)) return ground_point(S, a);
  return point_at(S, make_line(S, a, b), ExtReal(par(rng)),
                  coin(rng) ? Flavor::raw : Flavor::smoothed);
}

}  // namespace

TEST_CASE("line intervals") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);

  Line L = make_line(S, 2, 8);
  CHECK(L.alpha == 0.0);
  CHECK(L.beta == 6.0);

  auto P5 = path_based_at(11, 5);
  HatView S5 = hat_word_view(P5);
  Line M = make_line(S5, 0, 10);
  CHECK(M.alpha == -5.0);
  CHECK(M.beta == 5.0);

  Line D = make_line(S, 4, 4);
  CHECK(D.alpha == 0.0);
  CHECK(D.beta == 0.0);

  // interval length is the distance, and 0 is always inside
  for (int a = 0; a < 11; ++a)
    for (int b = 0; b < 11; ++b) {
      Line K = make_line(S, a, b);
      CHECK(K.beta - K.alpha == S(a, b));
      CHECK(K.alpha <= 0.0);
      CHECK(K.beta >= 0.0);
    }
}

TEST_CASE("points, endpoint gluing, and equality") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  Line L = make_line(S, 2, 8);

  JoinPoint x = point_at(S, L, ExtReal(3.0), Flavor::raw);
  CHECK(x.coord == 3.0);
  CHECK_FALSE(x.ground());

  // raw flavor clamps to the interval; endpoints are the ground points
  JoinPoint lo = point_at(S, L, ExtReal(-3.0), Flavor::raw);
  CHECK(lo.coord == L.alpha);
  CHECK(lo.ground());
  CHECK(lo.ground_id() == 2);
  JoinPoint hi = point_at(S, L, ExtReal(9.0), Flavor::raw);
  CHECK(hi.coord == L.beta);
  CHECK(hi.ground_id() == 8);

  // smoothed flavor is the strictly increasing clamp
  JoinPoint xs = point_at(S, L, ExtReal(3.0), Flavor::smoothed);
  CHECK(xs.coord == theta_prime(0.0, 6.0, 3.0));
  CHECK(L.alpha < xs.coord);
  CHECK(xs.coord < L.beta);

  CHECK(same_point(lo, ground_point(S, 2)));
  CHECK(same_point(hi, ground_point(S, 8)));
  CHECK_FALSE(same_point(lo, hi));
  CHECK_FALSE(same_point(x, ground_point(S, 2)));
  CHECK(same_point(x, point_at(S, L, ExtReal(3.0), Flavor::raw)));
  CHECK_FALSE(same_point(x, point_at(S, L, ExtReal(3.5), Flavor::raw)));
  CHECK(same_point(x, point_at(S, L, ExtReal(3.5), Flavor::raw), 0.5));

  // a degenerate line carries only the ground point
  JoinPoint g = point_at(S, make_line(S, 4, 4), ExtReal(0.7), Flavor::raw);
  CHECK(g.ground());
  CHECK(g.ground_id() == 4);
}

TEST_CASE("basepoint change of coordinates") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  JoinPoint x = point_at(S, make_line(S, 2, 8), ExtReal(0.0), Flavor::raw);

  CHECK(change_basepoint(S, x, 10) == -6.0);
  CHECK(change_basepoint(S, x, 0) == 0.0);

  // the re-origined interval is the same line seen from the new origin
  auto P10 = path_based_at(11, 10);
  HatView S10 = hat_word_view(P10);
  Line L10 = make_line(S10, 2, 8);
  CHECK(L10.alpha == -6.0);
  CHECK(L10.beta == 0.0);

  // moving the origin onto the third leg of a tripod does not shift the line
  auto T = HypGraph::tripod(2, 2, 2);
  HatView ST = hat_word_view(T);
  JoinPoint tx = point_at(ST, make_line(ST, 4, 6), ExtReal(-1.0), Flavor::raw);
  CHECK(change_basepoint(ST, tx, 2) == -1.0);
}

TEST_CASE("shift action") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  Line L = make_line(S, 2, 8);
  JoinPoint x = point_at(S, L, ExtReal(0.0), Flavor::smoothed);

  JoinPoint x0 = r_action(S, 0.0, x);
  CHECK(same_point(x, x0, 1e-15));

  // ground points are fixed
  JoinPoint a = ground_point(S, 3);
  CHECK(same_point(r_action(S, 7.5, a), a));

  // far shifts saturate toward the endpoint without ever reaching it in
  // exact arithmetic; in doubles both sides round to the endpoint
  JoinPoint far = r_action(S, 100.0, x);
  CHECK(far.coord == 6.0 + 0.5 * (std::exp(-100.0) - std::exp(-94.0)));
  JoinPoint near = r_action(S, 30.0, x);
  CHECK(near.coord == theta_prime(0.0, 6.0, 30.0));
  CHECK(near.coord < 6.0);

  // additivity of the shift along orbits
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> rr(-4.0, 4.0);
  for (int it = 0; it < 200; ++it) {
    JoinPoint p = random_point(S, rng);
    double r1 = rr(rng), r2 = rr(rng);
    JoinPoint ab = r_action(S, r2, r_action(S, r1, p));
    JoinPoint once = r_action(S, r1 + r2, p);
    CHECK(std::abs(ab.coord - once.coord) <= 1e-9);
    CHECK(ab.line.a == once.line.a);
    CHECK(ab.line.b == once.line.b);
  }

  CHECK_THROWS_AS(r_action(S, std::numeric_limits<double>::infinity(), x),
                  std::invalid_argument);
}

TEST_CASE("star involution") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  JoinPoint x = point_at(S, make_line(S, 2, 8), ExtReal(3.0), Flavor::raw);

  JoinPoint sx = star_involution(S, x);
  CHECK(sx.line.a == 8);
  CHECK(sx.line.b == 2);
  CHECK(sx.line.alpha == -6.0);
  CHECK(sx.line.beta == 0.0);
  CHECK(sx.coord == -3.0);

  CHECK(same_point(star_involution(S, sx), x));
  JoinPoint g = ground_point(S, 4);
  CHECK(same_point(star_involution(S, g), g));

  // the flip agrees with rebuilding the reversed point from scratch
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> par(-8.0, 8.0);
  for (int it = 0; it < 200; ++it) {
    int a = rng() % 11, b = rng() % 11;
    if (a == b) continue;
    double t = par(rng);
    for (Flavor f : {Flavor::raw, Flavor::smoothed}) {
      JoinPoint p = point_at(S, make_line(S, a, b), ExtReal(t), f);
      JoinPoint q = point_at(S, make_line(S, b, a), ExtReal(-t), f);
      CHECK(same_point(star_involution(S, p), q, 1e-12));
    }
  }
}

TEST_CASE("isometry action") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  std::vector<int> rev(11);
  for (int i = 0; i < 11; ++i) rev[i] = 10 - i;
  Isometry g = Isometry::from_permutation(S, rev);

  JoinPoint x = point_at(S, make_line(S, 2, 8), ExtReal(3.0), Flavor::raw);
  JoinPoint gx = isom_action(S, g, x);
  CHECK(gx.line.a == 8);
  CHECK(gx.line.b == 2);
  CHECK(gx.coord == -3.0);

  std::vector<int> idp(11);
  for (int i = 0; i < 11; ++i) idp[i] = i;
  Isometry id = Isometry::from_permutation(S, idp);
  CHECK(same_point(isom_action(S, id, x), x));

  // the induced map is an isometry for both join metrics
  std::mt19937 rng(13);
  for (int it = 0; it < 60; ++it) {
    JoinPoint p = random_point(S, rng), q = random_point(S, rng);
    CHECK(std::abs(d_cross(S, isom_action(S, g, p), isom_action(S, g, q)) -
                   d_cross(S, p, q)) <= 1e-9);
    CHECK(std::abs(d_star(S, isom_action(S, g, p), isom_action(S, g, q)) -
                   d_star(S, p, q)) <= 1e-9);
  }

  CHECK_THROWS_AS(Isometry::from_permutation(S, std::vector<int>{0, 1, 2}),
                  std::invalid_argument);
  std::vector<int> dup(11, 0);
  CHECK_THROWS_AS(Isometry::from_permutation(S, dup), std::invalid_argument);
  std::vector<int> swapped = idp;
  std::swap(swapped[0], swapped[1]);  // breaks d(0,2)
  CHECK_THROWS_AS(Isometry::from_permutation(S, swapped), std::invalid_argument);
}

TEST_CASE("action algebra and basepoint independence") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  auto P10 = path_based_at(11, 10);
  HatView S10 = hat_word_view(P10);
  std::vector<int> rev(11);
  for (int i = 0; i < 11; ++i) rev[i] = 10 - i;
  Isometry g = Isometry::from_permutation(S, rev);
  Isometry g10 = Isometry::from_permutation(S10, rev);

  std::mt19937 rng(14);
  std::uniform_real_distribution<double> rr(-4.0, 4.0);
  std::uniform_real_distribution<double> par(-8.0, 8.0);
  for (int it = 0; it < 250; ++it) {
    JoinPoint x = random_point(S, rng);
    double r = rr(rng);

    // isometries commute with the shift and with the flip
    JoinPoint lhs = isom_action(S, g, r_action(S, r, x));
    JoinPoint rhs = r_action(S, r, isom_action(S, g, x));
    CHECK(same_point(lhs, rhs, 1e-9));
    CHECK(same_point(isom_action(S, g, star_involution(S, x)),
                     star_involution(S, isom_action(S, g, x)), 1e-9));

    // the flip reverses the direction of the shift
    CHECK(same_point(star_involution(S, r_action(S, r, x)),
                     r_action(S, -r, star_involution(S, x)), 1e-9));
  }

  // everything transports along a change of origin: rebuild each point in
  // the re-origined parametrization and compare the induced data
  for (int it = 0; it < 120; ++it) {
    int a = rng() % 11, b = rng() % 11;
    if (a == b) continue;
    double t = par(rng), r = rr(rng);
    Flavor f = (rng() & 1) ? Flavor::raw : Flavor::smoothed;
    JoinPoint x = point_at(S, make_line(S, a, b), ExtReal(t), f);
    double shift = change_basepoint(S, x, 10) - x.coord;
    JoinPoint x10 = point_at(S10, make_line(S10, a, b), ExtReal(t + shift), f);
    CHECK(std::abs(x10.coord - change_basepoint(S, x, 10)) <= 1e-9);

    JoinPoint y = random_point(S, rng);
    double sy = y.ground() ? 0.0 : change_basepoint(S, y, 10) - y.coord;
    JoinPoint y10 = y.ground()
                        ? ground_point(S10, y.ground_id())
                        : point_at(S10, make_line(S10, y.line.a, y.line.b),
                                   ExtReal(y.param.v + sy), y.flavor);
    CHECK(std::abs(d_cross(S, x, y) - d_cross(S10, x10, y10)) <= 1e-9);
    CHECK(std::abs(d_star(S, x, y) - d_star(S10, x10, y10)) <= 1e-9);

    JoinPoint rx = r_action(S, r, x), rx10 = r_action(S10, r, x10);
    CHECK(std::abs(change_basepoint(S, rx, 10) - rx10.coord) <= 1e-9);
    JoinPoint sx = star_involution(S, x), sx10 = star_involution(S10, x10);
    CHECK(std::abs(change_basepoint(S, sx, 10) - sx10.coord) <= 1e-9);
    JoinPoint gx = isom_action(S, g, x), gx10 = isom_action(S10, g10, x10);
    CHECK(std::abs(change_basepoint(S, gx, 10) - gx10.coord) <= 1e-9);
  }
}

TEST_CASE("projection to a line") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);

  CHECK(project_coord(S, 2, 8, 5) == 3.0);
  JoinPoint p = project(S, 2, 8, 5);
  CHECK(p.coord == 3.0);
  CHECK(p.line.a == 2);
  CHECK(p.line.b == 8);

  std::mt19937 rng(15);
  for (int it = 0; it < 300; ++it) {
    int a = rng() % 11, b = rng() % 11, u = rng() % 11;
    if (a == b) continue;
    Line L = make_line(S, a, b);
    // endpoints and the origin project to themselves / to coordinate zero
    CHECK(project_coord(S, a, b, a) == L.alpha);
    CHECK(project_coord(S, a, b, b) == L.beta);
    CHECK(project_coord(S, a, b, 0) == 0.0);
    double c = project_coord(S, a, b, u);
    CHECK(c >= L.alpha);
    CHECK(c <= L.beta);
  }
}

TEST_CASE("distance cocycle ell") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  JoinPoint x = point_at(S, make_line(S, 2, 8), ExtReal(3.0), Flavor::raw);
  CHECK(ell(S, 0, x) == 5.0);

  // on ground points it is the ground distance
  for (int u = 0; u < 11; ++u)
    for (int a = 0; a < 11; ++a) CHECK(ell(S, u, ground_point(S, a)) == S(u, a));

  auto T = HypGraph::tripod(3, 3, 3);
  HatView ST = hat_word_view(T);
  JoinPoint tx = point_at(ST, make_line(ST, 6, 9), ExtReal(1.0), Flavor::raw);
  CHECK(ell(ST, 3, tx) == 4.0);

  // 2-Lipschitz in the ground variable
  std::mt19937 rng(16);
  for (int it = 0; it < 200; ++it) {
    JoinPoint p = random_point(S, rng);
    int u = rng() % 11, v = rng() % 11;
    CHECK(std::abs(ell(S, u, p) - ell(S, v, p)) <= 2.0 * S(u, v) + 1e-12);
  }
}

TEST_CASE("beta_cross cocycle") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  Line L = make_line(S, 2, 8);
  JoinPoint x3 = point_at(S, L, ExtReal(3.0), Flavor::raw);
  JoinPoint x5 = point_at(S, L, ExtReal(5.0), Flavor::raw);

  CHECK(beta_cross(S, 0, x3, x5) == -2.0);
  CHECK(beta_cross(S, 2, ground_point(S, 2), ground_point(S, 8)) == -6.0);
  CHECK(beta_cross(S, 7, x3, x3) == 0.0);

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> par(-8.0, 8.0);
  for (int it = 0; it < 200; ++it) {
    int u = rng() % 11;
    JoinPoint p = random_point(S, rng), q = random_point(S, rng),
              w = random_point(S, rng);
    // cocycle identity
    CHECK(std::abs(beta_cross(S, u, p, q) + beta_cross(S, u, q, w) -
                   beta_cross(S, u, p, w)) <= 1e-12);
    // flip invariance in each slot
    CHECK(std::abs(beta_cross(S, u, star_involution(S, p), q) -
                   beta_cross(S, u, p, q)) <= 1e-12);
    CHECK(std::abs(beta_cross(S, u, p, star_involution(S, q)) -
                   beta_cross(S, u, p, q)) <= 1e-12);
  }

  // same-line bound |beta| <= |s-t| <= d(a,b), sharp at u = a
  for (int it = 0; it < 200; ++it) {
    int a = rng() % 11, b = rng() % 11;
    if (a == b) continue;
    Line K = make_line(S, a, b);
    double s = par(rng), t = par(rng);
    JoinPoint xs = point_at(S, K, ExtReal(s), Flavor::raw);
    JoinPoint xt = point_at(S, K, ExtReal(t), Flavor::raw);
    double gap = std::abs(xs.coord - xt.coord);
    CHECK(gap <= S(a, b) + 1e-12);
    for (int u = 0; u < 11; ++u)
      CHECK(std::abs(beta_cross(S, u, xs, xt)) <= gap + 1e-12);
    CHECK(std::abs(beta_cross(S, a, xs, xt) - (xs.coord - xt.coord)) <= 1e-12);
  }
  CHECK(beta_cross(S, 2, ground_point(S, 2), ground_point(S, 8)) == -S(2, 8));
}

TEST_CASE("d_cross pseudometric") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  Line L = make_line(S, 2, 8);

  // on one line the coordinate is an isometric embedding
  for (double s : {0.0, 1.0, 2.5, 4.0, 6.0})
    for (double t : {0.0, 0.5, 3.0, 5.5}) {
      JoinPoint xs = point_at(S, L, ExtReal(s), Flavor::raw);
      JoinPoint xt = point_at(S, L, ExtReal(t), Flavor::raw);
      CHECK(d_cross(S, xs, xt) == std::abs(s - t));
    }

  CHECK(d_cross(S, ground_point(S, 2), ground_point(S, 8)) == 6.0);

  auto T = HypGraph::tripod(2, 2, 2);
  HatView ST = hat_word_view(T);
  JoinPoint tx = point_at(ST, make_line(ST, 4, 6), ExtReal(-1.0), Flavor::raw);
  JoinPoint ty = point_at(ST, make_line(ST, 2, 6), ExtReal(-1.0), Flavor::raw);
  CHECK(d_cross(ST, tx, ty) == 2.0);

  auto R = HypGraph::random_tree(40, 5);
  HatView SR = hat_word_view(R);
  std::mt19937 rng(18);
  for (int it = 0; it < 150; ++it) {
    JoinPoint p = random_point(SR, rng), q = random_point(SR, rng),
              w = random_point(SR, rng);
    double pq = d_cross(SR, p, q);
    CHECK(pq == d_cross(SR, q, p));
    CHECK(d_cross(SR, p, p) == 0.0);
    CHECK(pq <= d_cross(SR, p, w) + d_cross(SR, w, q) + 1e-12);
    CHECK(pq == d_cross_serial(SR, p, q));
  }

  // coarse continuity across nearby lines, smoothed flavor
  std::uniform_real_distribution<double> par(-6.0, 6.0);
  for (int it = 0; it < 200; ++it) {
    int a = rng() % 40, a2 = rng() % 40, b = rng() % 40, b2 = rng() % 40;
    if (a == a2 || b == b2) continue;
    double s = par(rng), t = par(rng);
    JoinPoint x = point_at(SR, make_line(SR, a, a2), ExtReal(s), Flavor::smoothed);
    JoinPoint y = point_at(SR, make_line(SR, b, b2), ExtReal(t), Flavor::smoothed);
    CHECK(d_cross(SR, x, y) <=
          std::abs(t - s) + 4.0 * SR(a, b) + 4.0 * SR(a2, b2) + 1e-9);
  }
}

TEST_CASE("d_star against its oracles") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);

  CHECK(std::abs(d_star(S, ground_point(S, 2), ground_point(S, 8)) - 6.0) <= 1e-9);

  std::mt19937 rng(19);
  std::uniform_real_distribution<double> par(-8.0, 8.0);
  for (int it = 0; it < 40; ++it) {
    JoinPoint p = random_point(S, rng);
    CHECK(d_star(S, p, p) == 0.0);
  }

  // same line: the orbit-average coordinate gives a closed form
  Line L = make_line(S, 2, 8);
  for (int it = 0; it < 60; ++it) {
    double s = par(rng), t = par(rng);
    JoinPoint xs = point_at(S, L, ExtReal(s), Flavor::smoothed);
    JoinPoint xt = point_at(S, L, ExtReal(t), Flavor::smoothed);
    double want = std::abs(theta_second(L.alpha, L.beta, s) -
                           theta_second(L.alpha, L.beta, t));
    CHECK(std::abs(d_star(S, xs, xt) - want) <= 1e-10);
  }

  // independent slow quadrature agrees within its certified error
  for (int it = 0; it < 12; ++it) {
    JoinPoint p = random_point(S, rng), q = random_point(S, rng);
    double fast = d_star(S, p, q);
    double slow = d_star_quadrature(S, p, q, 1e-4);
    CHECK(std::abs(fast - slow) <= 1.2e-4);
    CHECK(std::abs(fast - d_star(S, q, p)) <= 1e-12);
  }
}

TEST_CASE("d_star comparisons with d_cross") {
  auto R = HypGraph::random_tree(40, 5);
  HatView SR = hat_word_view(R);
  std::mt19937 rng(20);

  for (int it = 0; it < 1000; ++it) {
    JoinPoint p = random_point(SR, rng), q = random_point(SR, rng);
    double dc = d_cross(SR, p, q), ds = d_star(SR, p, q);
    CHECK(std::abs(ds - dc) <= 2.0);
    CHECK(dc <= omega_inv(ds) + 1e-6);
  }
}

TEST_CASE("d_star bi-Lipschitz under the shift") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  std::mt19937 rng(21);

  for (int it = 0; it < 25; ++it) {
    JoinPoint p = random_point(S, rng), q = random_point(S, rng);
    double base = d_star(S, p, q);
    for (double r : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
      double moved = d_star(S, r_action(S, r, p), r_action(S, r, q));
      double c = std::exp(std::abs(r));
      CHECK(moved <= c * base + 2e-6);
      CHECK(base <= c * moved + 2e-6);
    }
  }
}

TEST_CASE("d_star convergence along a line") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  Line L = make_line(S, 2, 8);
  JoinPoint limit = point_at(S, L, ExtReal(3.0), Flavor::smoothed);

  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 10; ++i) {
    JoinPoint xi =
        point_at(S, L, ExtReal(3.0 + 8.0 * std::pow(2.0, -i)), Flavor::smoothed);
    double d = d_star(S, xi, limit);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("orbit average phi") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  Line L = make_line(S, 2, 8);

  JoinPoint a = ground_point(S, 4);
  CHECK(same_point(phi(S, a), a));

  JoinPoint xs = point_at(S, L, ExtReal(3.0), Flavor::smoothed);
  CHECK(std::abs(phi(S, xs).coord - 3.0) <= 1e-6);

  // stays on the line, monotone in the parameter
  std::mt19937 rng(22);
  std::uniform_real_distribution<double> par(-8.0, 8.0);
  double s0 = -9.0, c0 = -1.0;
  for (double s = -8.0; s <= 8.0; s += 0.5) {
    JoinPoint p = point_at(S, L, ExtReal(s), Flavor::smoothed);
    JoinPoint fp = phi(S, p);
    CHECK(fp.line.a == 2);
    CHECK(fp.line.b == 8);
    CHECK(fp.coord >= L.alpha);
    CHECK(fp.coord <= L.beta);
    if (s0 > -9.0) CHECK(fp.coord > c0);
    s0 = s, c0 = fp.coord;
  }

  // phi turns a line into a d_star geodesic parameterized by d_cross
  for (int it = 0; it < 60; ++it) {
    double s = par(rng), t = par(rng);
    JoinPoint p = point_at(S, L, ExtReal(s), Flavor::smoothed);
    JoinPoint q = point_at(S, L, ExtReal(t), Flavor::smoothed);
    CHECK(std::abs(d_cross(S, phi(S, p), phi(S, q)) - d_star(S, p, q)) <= 2e-6);
  }
}

TEST_CASE("psi snaps to the chosen geodesic") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  Line L = make_line(S, 2, 8);

  CHECK(psi(P, S, point_at(S, L, ExtReal(3.0), Flavor::raw)) == 5);
  for (int a = 0; a < 11; ++a) CHECK(psi(P, S, ground_point(S, a)) == a);
  JoinPoint sx = star_involution(S, point_at(S, L, ExtReal(3.0), Flavor::raw));
  CHECK(psi(P, S, sx) == 5);

  // psi is uniformly close to the point it snaps: compare via ell
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> par(-8.0, 8.0);
  for (int it = 0; it < 100; ++it) {
    int a = rng() % 11, b = rng() % 11;
    if (a == b) continue;
    JoinPoint p = point_at(S, make_line(S, a, b), ExtReal(par(rng)), Flavor::raw);
    int v = psi(P, S, p);
    CHECK(ell(S, v, p) <= 1.0 + 1e-12);  // nearest grid point on the geodesic
  }
}

TEST_CASE("json round trip") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  std::mt19937 rng(24);

  for (int it = 0; it < 100; ++it) {
    JoinPoint p = random_point(S, rng);
    JoinPoint q = join_point_from_json(S, join_point_to_json(p, S.basepoint()));
    CHECK(same_point(p, q, 1e-12));
    CHECK(p.flavor == q.flavor);
    CHECK(std::abs(p.coord - q.coord) <= 1e-12);
  }

  CHECK_THROWS_AS(join_point_from_json(
                      S, R"({"a":2,"b":8,"coord":3.0,"flavor":"raw","basepoint":1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(join_point_from_json(
                      S, R"({"a":2,"b":8,"coord":3.0,"flavor":"other","basepoint":0})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(join_point_from_json(
                      S, R"({"a":2,"b":8,"coord":99.0,"flavor":"raw","basepoint":0})"),
                  std::invalid_argument);
}

TEST_CASE("parallel kernels match the serial reference") {
  // large explicit matrix so the parallel paths are actually taken
  const int n = 2200;
  std::vector<double> D(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) D[static_cast<size_t>(i) * n + j] = std::abs(i - j);
  auto M = FiniteMetricSpace::from_matrix(n, std::move(D));
  HatView S = space_view(M);

  std::vector<int> rev(n);
  for (int i = 0; i < n; ++i) rev[i] = n - 1 - i;
  Isometry g = Isometry::from_permutation(S, rev);
  CHECK(g(0) == n - 1);

  std::mt19937 rng(25);
  std::vector<JoinPoint> pts;
  for (int i = 0; i < 24; ++i) pts.push_back(random_point(S, rng));

  for (int it = 0; it < 30; ++it) {
    JoinPoint p = pts[rng() % pts.size()], q = pts[rng() % pts.size()];
    CHECK(d_cross(S, p, q) == d_cross_serial(S, p, q));
  }

  auto mc = pairwise_d_cross(S, pts), mcs = pairwise_d_cross_serial(S, pts);
  auto ms = pairwise_d_star(S, pts), mss = pairwise_d_star_serial(S, pts);
  REQUIRE(mc.size() == pts.size() * pts.size());
  REQUIRE(ms.size() == pts.size() * pts.size());
  for (size_t k = 0; k < mc.size(); ++k) {
    CHECK(mc[k] == mcs[k]);
    CHECK(ms[k] == mss[k]);
  }
  // matrices are symmetric with zero diagonal
  for (size_t i = 0; i < pts.size(); ++i) {
    CHECK(ms[i * pts.size() + i] == 0.0);
    for (size_t j = 0; j < pts.size(); ++j)
      CHECK(ms[i * pts.size() + j] == ms[j * pts.size() + i]);
  }
}

TEST_CASE("argument validation") {
  auto P = HypGraph::path_graph(11);
  HatView S = hat_word_view(P);
  JoinPoint x = point_at(S, make_line(S, 2, 8), ExtReal(3.0), Flavor::raw);

  CHECK_THROWS_AS(ground_point(S, -1), std::invalid_argument);
  CHECK_THROWS_AS(ground_point(S, 11), std::invalid_argument);
  CHECK_THROWS_AS(make_line(S, 0, 99), std::invalid_argument);
  CHECK_THROWS_AS(d_star(S, x, x, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(d_star_quadrature(S, x, x, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(x.ground_id(), std::logic_error);
}
