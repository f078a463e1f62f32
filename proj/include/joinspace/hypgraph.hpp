#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "mspace.hpp"

namespace joinspace {

using Path = std::vector<int>;  // consecutive adjacent vertices

struct DeltaReport {
  double delta = 0.0;  // half-integer
  bool exhaustive = false;
  uint64_t triples = 0;
};

// connected simple graph, all edges length 1, with a basepoint.
// Dense all-pairs distances for n <= 4096; larger graphs must be trees and
// use parent/depth ancestor walks.
struct HypGraph final : Ground {
  int n = 0;
  int x0 = 0;
  std::vector<int> adj_off;  // CSR offsets, size n+1
  std::vector<int> adj_dat;  // sorted neighbor lists
  std::vector<std::string> label;  // per-vertex names (cayley words); may be empty
  bool tree = false;
  bool dense = false;
  std::vector<uint16_t> Dm;        // dense mode
  std::vector<int> parent, depth;  // tree mode, rooted at x0
  std::vector<int> frontier;  // vertices at the truncation radius of a cayley ball

  DeltaReport fineness;

  int size() const override { return n; }
  int basepoint() const override { return x0; }
  double dist(int i, int j) const override { return idist(i, j); }
  int idist(int u, int v) const;
  int degree(int v) const { return adj_off[v + 1] - adj_off[v]; }
  const int* nbr_begin(int v) const { return adj_dat.data() + adj_off[v]; }
  const int* nbr_end(int v) const { return adj_dat.data() + adj_off[v + 1]; }
  int vertex_by_label(const std::string& s) const;  // -1 if absent

  static HypGraph from_edges(int n, std::vector<std::pair<int, int>> edges, int x0 = 0,
                             std::vector<std::string> labels = {});
  static HypGraph path_graph(int n);
  // legs of the given lengths glued at vertex 0
  static HypGraph tripod(int l1, int l2, int l3);
  static HypGraph random_tree(int n, uint64_t seed);
  static HypGraph cycle(int n);
  // ball of the given radius in the Cayley graph of the free group on
  // rank <= 3 generators; labels are reduced words over a,b,c,A,B,C and
  // vertex 0 is the identity "e"; frontier = sphere of the given radius
  static HypGraph cayley_free(int rank, int radius);
  static HypGraph cayley_f2(int radius) { return cayley_free(2, radius); }
  // ball in the Cayley graph of <gens | relators>, vertices identified by
  // shortlex rewriting closure; throws if the rewriting does not stabilize
  // or the identification fails a relator walk consistency check
  static HypGraph presentation_ball(const std::vector<std::string>& gens,
                                    const std::vector<std::string>& relators, int radius);
  // named presets: f2, f3, z2z3 (free product Z/2 * Z/3)
  static HypGraph cayley_preset(const std::string& preset, int radius);
  // "u v" per line, '#' comments; vertex ids 0..n-1
  static HypGraph parse_edge_list(const std::string& text, int x0 = 0);

  std::string to_json() const;
  static HypGraph from_json(const std::string& text);
};

// reduced words in a free group: lowercase generators, uppercase inverses
std::string fg_reduce(std::string w);
std::string fg_inv(const std::string& w);
std::string fg_mul(const std::string& u, const std::string& v);

// delta sweep controls; exhaustive for trees (any size, geodesic uniqueness
// argument) and for non-trees with n <= 400, falling back to sampling when
// geodesic multiplicity exceeds the pair cap
struct DeltaOpts {
  bool force_exhaustive = false;
  bool force_sampled = false;
  uint64_t samples = 20000;
  uint64_t seed = 1;
  uint64_t pair_cap = 100000;  // geodesic pairs per triple before overflow error
};
DeltaReport delta_fine(const HypGraph& G, const DeltaOpts& opts = {});
DeltaReport delta_fine_serial(const HypGraph& G, const DeltaOpts& opts = {});

// all geodesics u -> v as vertex paths; throws overflow error beyond cap
std::vector<Path> all_geodesics(const HypGraph& G, int u, int v, uint64_t cap = 1000000);
uint64_t count_geodesics(const HypGraph& G, int u, int v, uint64_t cap = 1000000);
// lex-smallest geodesic vertex sequence
Path canonical_geodesic(const HypGraph& G, int u, int v);

// distance in the geometric realization between quarter-integer positions
// s and t along the paths p and q (positions measured in edge lengths)
double realization_dist(const HypGraph& G, const Path& p, double s, const Path& q, double t);

// positions of the inscribed points: on_alpha is the offset of the point of
// alpha (a geodesic b->c) with d(b,.) - d(.,c) = d(b,a) - d(a,c), measured
// from alpha's first vertex; likewise on_beta (c->a) and on_gamma (a->b).
// All offsets are half-integers.
struct InscribedTriple {
  double on_alpha, on_beta, on_gamma;
};
InscribedTriple inscribed_triple(const HypGraph& G, int a, int b, int c, const Path& alpha,
                                 const Path& beta, const Path& gamma);

// nearest-point projection of vertex y to the path alpha (set of argmin vertices)
std::vector<int> np(const HypGraph& G, const Path& alpha, int y);

// geodesic from the basepoint, standing in for a boundary direction
struct RaySeed {
  Path verts;  // verts[i] at distance i from x0
  int base() const { return verts.front(); }
  int tip() const { return verts.back(); }
  int depth() const { return (int)verts.size() - 1; }
};
// canonical geodesic from x0 toward the given vertex
RaySeed ray_toward(const HypGraph& G, int target);

// half-spaces for a ray from the basepoint: U+(a,t) contains x iff some
// projection of x to the ray is at distance >= t from x0, U-(a,t) iff <= t
struct HalfSpace {
  std::vector<int> verts;
  bool truncated = false;  // t beyond the available ray depth
};
HalfSpace half_space_plus(const HypGraph& G, const RaySeed& ray, double t);
HalfSpace half_space_minus(const HypGraph& G, const RaySeed& ray, double t);

struct InvariantReport {
  std::string name;
  uint64_t checks = 0;
  double worst = 0.0;  // most negative margin seen; >= -tol passes
  bool pass = false;
};

// d(al(i), be(j)) >= |i| + d(al,be) + |j| - 6 delta for separated geodesics
InvariantReport check_separated_geodesics(const HypGraph& G, int samples, uint64_t seed);
// nearest-point projections onto geodesics: 1-Lipschitz on trees,
// d(x,y) < n delta implies d(x',y') < (n+6) delta in general
InvariantReport check_projection_coarse_lipschitz(const HypGraph& G, int samples, uint64_t seed);
// d(U-(a,s), U+(a,t)) >= t - s - 6 delta
InvariantReport check_half_space_separation(const HypGraph& G, int samples, uint64_t seed);
// [U+(a,s), U+(a,s)] inside U+(a, s - 8 delta), same for U- with +8 delta
InvariantReport check_half_space_convexity(const HypGraph& G, int samples, uint64_t seed);

}  // namespace joinspace
