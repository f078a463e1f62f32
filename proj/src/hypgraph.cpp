#include "joinspace/hypgraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace joinspace {

using ordered_json = nlohmann::ordered_json;

int HypGraph::idist(int u, int v) const {
  if (dense) return Dm[size_t(u) * n + v];
  // ancestor walk in the tree rooted at x0
  int w = 0;
  while (u != v) {
    if (depth[u] < depth[v]) std::swap(u, v);
    u = parent[u];
    ++w;
  }
  return w;
}

int HypGraph::vertex_by_label(const std::string& s) const {
  for (int i = 0; i < n; ++i)
    if (label[i] == s) return i;
  return -1;
}

namespace {

void bfs_row(const HypGraph& G, int src, uint16_t* row) {
  std::fill(row, row + G.n, uint16_t(65535));
  std::deque<int> q{src};
  row[src] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (const int* w = G.nbr_begin(u); w != G.nbr_end(u); ++w)
      if (row[*w] == 65535) {
        row[*w] = uint16_t(row[u] + 1);
        q.push_back(*w);
      }
  }
}

}  // namespace

HypGraph HypGraph::from_edges(int n, std::vector<std::pair<int, int>> edges, int x0,
                              std::vector<std::string> labels) {
  if (n < 1) throw std::invalid_argument("graph: need n >= 1");
  if (x0 < 0 || x0 >= n) throw std::invalid_argument("graph: basepoint out of range");
  if (!labels.empty() && (int)labels.size() != n)
    throw std::invalid_argument("graph: label count mismatch");
  HypGraph G;
  G.n = n;
  G.x0 = x0;
  G.label = std::move(labels);
  std::vector<std::vector<int>> a(n);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n || u == v)
      throw std::invalid_argument("graph: bad edge");
    a[u].push_back(v);
    a[v].push_back(u);
  }
  G.adj_off.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    std::sort(a[v].begin(), a[v].end());
    if (std::adjacent_find(a[v].begin(), a[v].end()) != a[v].end())
      throw std::invalid_argument("graph: duplicate edge");
    G.adj_off[v + 1] = G.adj_off[v] + (int)a[v].size();
  }
  G.adj_dat.reserve(G.adj_off[n]);
  for (int v = 0; v < n; ++v) G.adj_dat.insert(G.adj_dat.end(), a[v].begin(), a[v].end());

  G.tree = ((int)edges.size() == n - 1);
  G.dense = (n <= 4096);
  if (!G.dense && !G.tree)
    throw std::invalid_argument("graph: n > 4096 requires a tree (no dense matrix)");

  // parent/depth from x0, also the connectivity check
  G.parent.assign(n, -1);
  G.depth.assign(n, -1);
  std::deque<int> q{x0};
  G.depth[x0] = 0;
  int seen = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (const int* w = G.nbr_begin(u); w != G.nbr_end(u); ++w)
      if (G.depth[*w] < 0) {
        G.depth[*w] = G.depth[u] + 1;
        G.parent[*w] = u;
        q.push_back(*w);
        ++seen;
      }
  }
  if (seen != n) throw std::invalid_argument("graph: not connected");

  if (G.dense) {
    G.Dm.assign(size_t(n) * n, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (int s = 0; s < n; ++s) bfs_row(G, s, G.Dm.data() + size_t(s) * n);
  }
  G.fineness = delta_fine(G);
  return G;
}

HypGraph HypGraph::path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return from_edges(n, std::move(e), 0);
}

HypGraph HypGraph::tripod(int l1, int l2, int l3) {
  if (l1 < 1 || l2 < 1 || l3 < 1) throw std::invalid_argument("tripod: legs must be >= 1");
  std::vector<std::pair<int, int>> e;
  int id = 1;
  for (int leg : {l1, l2, l3}) {
    int prev = 0;
    for (int i = 0; i < leg; ++i) {
      e.push_back({prev, id});
      prev = id++;
    }
  }
  return from_edges(id, std::move(e), 0);
}

HypGraph HypGraph::random_tree(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i)
    e.push_back({(int)(rng() % i), i});
  return from_edges(n, std::move(e), 0);
}

HypGraph HypGraph::cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle: need n >= 3");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return from_edges(n, std::move(e), 0);
}

namespace {

char fg_invc(char c) {
  if (c >= 'a' && c <= 'z') return (char)(c - 'a' + 'A');
  if (c >= 'A' && c <= 'Z') return (char)(c - 'A' + 'a');
  throw std::invalid_argument("group letters are latin, uppercase = inverse");
}

}  // namespace

std::string fg_reduce(std::string w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() == fg_invc(c)) out.pop_back();
    else out.push_back(c);
  }
  return out;
}

std::string fg_inv(const std::string& w) {
  std::string out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(fg_invc(*it));
  return out;
}

std::string fg_mul(const std::string& u, const std::string& v) { return fg_reduce(u + v); }

HypGraph HypGraph::cayley_free(int rank, int radius) {
  if (rank < 1 || rank > 3) throw std::invalid_argument("cayley_free: rank in [1,3]");
  if (radius < 1 || radius > 12) throw std::invalid_argument("cayley_free: radius in [1,12]");
  std::string gens;
  for (int i = 0; i < rank; ++i) {
    gens += (char)('a' + i);
    gens += (char)('A' + i);
  }
  std::vector<std::string> words{""};
  std::vector<std::pair<int, int>> edges;
  size_t head = 0;
  while (head < words.size()) {
    std::string w = words[head];
    int u = (int)head;
    ++head;
    if ((int)w.size() == radius) continue;
    for (char g : gens) {
      if (!w.empty() && w.back() == fg_invc(g)) continue;  // stays reduced
      int v = (int)words.size();
      words.push_back(w + g);
      edges.push_back({u, v});
    }
  }
  std::vector<std::string> labels(words.size());
  for (size_t i = 0; i < words.size(); ++i) labels[i] = words[i].empty() ? "e" : words[i];
  HypGraph G = from_edges((int)words.size(), std::move(edges), 0, std::move(labels));
  for (int v = 0; v < G.n; ++v)
    if (G.depth[v] == radius) G.frontier.push_back(v);
  return G;
}

namespace {

// shortlex order used to orient rewrite rules: shorter first, then a < A < b < B
bool shortlex_less(const std::string& x, const std::string& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  auto key = [](char c) {
    bool up = c >= 'A' && c <= 'Z';
    return int(up ? c - 'A' : c - 'a') * 2 + (up ? 1 : 0);
  };
  for (size_t i = 0; i < x.size(); ++i)
    if (key(x[i]) != key(y[i])) return key(x[i]) < key(y[i]);
  return false;
}

struct Rewriter {
  std::vector<std::pair<std::string, std::string>> rules;  // lhs -> rhs, lhs shortlex-greater

  void add(std::string lhs, std::string rhs) {
    if (lhs == rhs) return;
    if (shortlex_less(lhs, rhs)) std::swap(lhs, rhs);
    for (auto& r : rules)
      if (r.first == lhs) return;
    rules.push_back({std::move(lhs), std::move(rhs)});
  }

  // free reduction plus rule application to a fixpoint
  std::string normalize(const std::string& w) const {
    std::string cur = fg_reduce(w);
    size_t guard = 4 * (w.size() + 4) * (w.size() + 4) + 64;
    for (size_t it = 0; it < guard; ++it) {
      bool hit = false;
      for (const auto& [lhs, rhs] : rules) {
        size_t p = cur.find(lhs);
        if (p != std::string::npos) {
          cur = fg_reduce(cur.substr(0, p) + rhs + cur.substr(p + lhs.size()));
          hit = true;
          break;
        }
      }
      if (!hit) return cur;
    }
    throw std::runtime_error("presentation ball: rewriting did not stabilize");
  }
};

}  // namespace

HypGraph HypGraph::presentation_ball(const std::vector<std::string>& gens,
                                     const std::vector<std::string>& relators, int radius) {
  if (gens.empty() || gens.size() > 3)
    throw std::invalid_argument("presentation ball: 1..3 generators");
  if (radius < 1 || radius > 14) throw std::invalid_argument("presentation ball: radius in [1,14]");
  std::string alphabet;
  for (const auto& g : gens) {
    if (g.size() != 1 || g[0] < 'a' || g[0] > 'c')
      throw std::invalid_argument("presentation ball: generators are single letters a..c");
    alphabet += g[0];
    alphabet += fg_invc(g[0]);
  }
  Rewriter rw;
  for (const std::string& rel : relators) {
    for (char c : rel)
      if (alphabet.find(c) == std::string::npos)
        throw std::invalid_argument("presentation ball: relator uses unknown letter");
    for (const std::string& base : {fg_reduce(rel), fg_inv(fg_reduce(rel))}) {
      if (base.empty()) continue;
      const size_t L = base.size();
      std::string dbl = base + base;
      for (size_t rot = 0; rot < L; ++rot) {
        std::string r = dbl.substr(rot, L);
        // r = u v with |u| >= |v|: u -> inverse(v), never length-increasing
        for (size_t k = (L + 1) / 2; k <= L; ++k)
          rw.add(r.substr(0, k), fg_inv(r.substr(k)));
      }
    }
  }
  std::vector<std::string> words{""};
  std::unordered_map<std::string, int> id{{"", 0}};
  std::vector<int> dep{0};
  std::vector<std::pair<int, int>> edges;
  size_t head = 0;
  while (head < words.size()) {
    std::string w = words[head];
    int u = (int)head;
    ++head;
    if (words.size() > 200000) throw std::runtime_error("presentation ball: too many vertices");
    for (char g : alphabet) {
      std::string c = rw.normalize(w + g);
      auto it = id.find(c);
      if (it == id.end()) {
        if (dep[u] == radius) continue;  // do not grow past the radius
        it = id.emplace(c, (int)words.size()).first;
        words.push_back(c);
        dep.push_back(dep[u] + 1);
      }
      if (it->second != u)
        edges.push_back({std::min(u, it->second), std::max(u, it->second)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  // identification sanity: multiplying by a relator must come back, and
  // g then its inverse must return, wherever the walk stays inside the ball
  for (size_t u = 0; u < words.size(); ++u) {
    for (char g : alphabet)
      if (dep[u] + 2 <= radius && rw.normalize(rw.normalize(words[u] + g) + fg_invc(g)) != words[u])
        throw std::runtime_error("presentation ball: rewriting did not stabilize");
    for (const std::string& rel : relators) {
      if (dep[u] + (int)rel.size() > radius) continue;
      std::string cur = words[u];
      for (char g : rel) cur = rw.normalize(cur + g);
      if (cur != words[u])
        throw std::runtime_error("presentation ball: rewriting did not stabilize");
    }
  }
  std::vector<std::string> labels(words.size());
  for (size_t i = 0; i < words.size(); ++i) labels[i] = words[i].empty() ? "e" : words[i];
  HypGraph G = from_edges((int)words.size(), std::move(edges), 0, std::move(labels));
  for (int v = 0; v < G.n; ++v)
    if (G.depth[v] == radius) G.frontier.push_back(v);
  return G;
}

HypGraph HypGraph::cayley_preset(const std::string& preset, int radius) {
  if (preset == "f2") return cayley_free(2, radius);
  if (preset == "f3") return cayley_free(3, radius);
  if (preset == "z2z3") return presentation_ball({"a", "b"}, {"aa", "bbb"}, radius);
  throw std::invalid_argument("unknown cayley preset: " + preset);
}

HypGraph HypGraph::parse_edge_list(const std::string& text, int x0) {
  std::vector<std::pair<int, int>> edges;
  int n = 0;
  size_t pos = 0;
  int lineno = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    long u = -1, v = -1;
    int consumed = 0;
    int got = std::sscanf(line.c_str(), " %ld %ld %n", &u, &v, &consumed);
    if (got != 2 || consumed != (int)line.size() || u < 0 || v < 0 || u > 1000000 ||
        v > 1000000)
      throw std::invalid_argument("edge list: bad line " + std::to_string(lineno));
    edges.push_back({(int)u, (int)v});
    n = std::max(n, (int)std::max(u, v) + 1);
  }
  return from_edges(n, std::move(edges), x0);
}

uint64_t count_geodesics(const HypGraph& G, int u, int v, uint64_t cap) {
  if (G.tree) return 1;
  int D = G.idist(u, v);
  // layered DP over the shortest-path DAG
  std::vector<int> order;
  std::unordered_map<int, uint64_t> cnt;
  // collect on-geodesic vertices
  for (int x = 0; x < G.n; ++x)
    if (G.idist(u, x) + G.idist(x, v) == D) order.push_back(x);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return G.idist(u, a) < G.idist(u, b); });
  for (int x : order) {
    if (x == u) {
      cnt[x] = 1;
      continue;
    }
    uint64_t s = 0;
    for (const int* w = G.nbr_begin(x); w != G.nbr_end(x); ++w) {
      auto it = cnt.find(*w);
      if (it != cnt.end() && G.idist(u, *w) == G.idist(u, x) - 1) s += it->second;
      if (s > cap) throw std::overflow_error("geodesic count exceeds cap");
    }
    cnt[x] = s;
  }
  return cnt[v];
}

Path canonical_geodesic(const HypGraph& G, int u, int v) {
  Path p{u};
  if (G.tree && !G.dense) {
    // climb to the meeting point from both sides
    Path a{u}, b{v};
    int x = u, y = v;
    while (x != y) {
      if (G.depth[x] >= G.depth[y]) {
        x = G.parent[x];
        a.push_back(x);
      } else {
        y = G.parent[y];
        b.push_back(y);
      }
    }
    a.insert(a.end(), b.rbegin(), b.rend());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
  }
  int cur = u;
  while (cur != v) {
    for (const int* w = G.nbr_begin(cur); w != G.nbr_end(cur); ++w)
      if (G.idist(*w, v) == G.idist(cur, v) - 1) {
        cur = *w;  // neighbors sorted, first hit is lex-smallest
        break;
      }
    p.push_back(cur);
  }
  return p;
}

std::vector<Path> all_geodesics(const HypGraph& G, int u, int v, uint64_t cap) {
  if (G.tree) return {canonical_geodesic(G, u, v)};
  count_geodesics(G, u, v, cap);  // throws past the cap before we enumerate
  std::vector<Path> out;
  Path cur{u};
  // iterative DFS over the shortest-path DAG
  std::vector<const int*> iter{G.nbr_begin(u)};
  while (!cur.empty()) {
    int x = cur.back();
    if (x == v) {
      out.push_back(cur);
      cur.pop_back();
      iter.pop_back();
      continue;
    }
    const int*& it = iter.back();
    bool advanced = false;
    while (it != G.nbr_end(x)) {
      int w = *it;
      ++it;
      if (G.idist(u, w) == G.idist(u, x) + 1 && G.idist(w, v) == G.idist(x, v) - 1) {
        cur.push_back(w);
        iter.push_back(G.nbr_begin(w));
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      cur.pop_back();
      iter.pop_back();
    }
  }
  return out;
}

namespace {

struct RealPoint {
  bool on_edge = false;
  int a = 0, b = 0;  // vertex a, or edge (a,b)
  double f = 0.0;    // offset from a along the edge
};

RealPoint resolve(const Path& p, double s) {
  double q4 = s * 4.0;
  long q = std::lround(q4);
  if (std::fabs(q4 - (double)q) > 1e-9 || q < 0 || q > 4 * (long)(p.size() - 1))
    throw std::invalid_argument("realization_dist: position must be a quarter-integer in range");
  if (q % 4 == 0) return {false, p[q / 4], 0, 0.0};
  long i = q / 4;
  return {true, p[i], p[i + 1], (q % 4) / 4.0};
}

}  // namespace

double realization_dist(const HypGraph& G, const Path& p, double s, const Path& q, double t) {
  RealPoint x = resolve(p, s), y = resolve(q, t);
  auto D = [&](int u, int v) { return (double)G.idist(u, v); };
  if (!x.on_edge && !y.on_edge) return D(x.a, y.a);
  if (!x.on_edge) return std::min(D(x.a, y.a) + y.f, D(x.a, y.b) + 1.0 - y.f);
  if (!y.on_edge) return std::min(D(y.a, x.a) + x.f, D(y.a, x.b) + 1.0 - x.f);
  double best = std::min(
      std::min(x.f + D(x.a, y.a) + y.f, x.f + D(x.a, y.b) + 1.0 - y.f),
      std::min(1.0 - x.f + D(x.b, y.a) + y.f, 1.0 - x.f + D(x.b, y.b) + 1.0 - y.f));
  if (x.a == y.a && x.b == y.b) best = std::min(best, std::fabs(x.f - y.f));
  if (x.a == y.b && x.b == y.a) best = std::min(best, std::fabs(x.f - (1.0 - y.f)));
  return best;
}

namespace {

// max over matched quarter-grid positions of the realization distance between
// the sides from apex a toward c and toward b, range bounded by <b|c>_a
double triple_sup(const HypGraph& G, int a, int b, int c, uint64_t pair_cap,
                  const std::vector<Path>& to_b, const std::vector<Path>& to_c) {
  int twice_gp = G.idist(a, b) + G.idist(a, c) - G.idist(b, c);
  long qmax = 2L * twice_gp;  // quarter units
  if ((uint64_t)to_b.size() * to_c.size() > pair_cap)
    throw std::overflow_error("delta_fine: geodesic pair cap exceeded");
  double best = 0.0;
  for (const Path& P : to_c)
    for (const Path& Q : to_b)
      for (long qp = 1; qp <= qmax; ++qp) {
        double s = qp / 4.0;
        best = std::max(best, realization_dist(G, P, s, Q, s));
      }
  return best;
}

DeltaReport delta_sweep(const HypGraph& G, const DeltaOpts& opts, bool parallel,
                        bool exhaustive) {
  DeltaReport rep;
  rep.exhaustive = exhaustive;
  double delta = 0.0;
  uint64_t triples = 0;
  if (exhaustive) {
    const int n = G.n;
    bool overflow = false;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : delta) reduction(+ : triples) \
    reduction(|| : overflow) schedule(dynamic, 1) if (parallel)
#endif
    for (int a = 0; a < n; ++a) {
      if (overflow) continue;
      try {
        std::vector<std::vector<Path>> geo(n);
        for (int t = 0; t < n; ++t) geo[t] = all_geodesics(G, a, t, opts.pair_cap);
        for (int b = 0; b < n; ++b)
          for (int c = b; c < n; ++c) {
            delta = std::max(delta, triple_sup(G, a, b, c, opts.pair_cap, geo[b], geo[c]));
            ++triples;
          }
      } catch (const std::overflow_error&) {
        overflow = true;  // rethrown outside the parallel region
      }
    }
    (void)parallel;
    if (overflow) throw std::overflow_error("delta_fine: geodesic pair cap exceeded");
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<int> pick(0, G.n - 1);
    for (uint64_t it = 0; it < opts.samples; ++it) {
      int a = pick(rng), b = pick(rng), c = pick(rng);
      std::vector<Path> gb, gc;
      try {
        uint64_t nb = count_geodesics(G, a, b, 64);
        uint64_t nc = count_geodesics(G, a, c, 64);
        if (nb * nc <= 64) {
          gb = all_geodesics(G, a, b, opts.pair_cap);
          gc = all_geodesics(G, a, c, opts.pair_cap);
        }
      } catch (const std::overflow_error&) {
      }
      if (gb.empty()) {
        // too many to enumerate; compare canonical representatives only
        gb = {canonical_geodesic(G, a, b)};
        gc = {canonical_geodesic(G, a, c)};
      }
      delta = std::max(delta, triple_sup(G, a, b, c, opts.pair_cap, gb, gc));
      ++triples;
    }
  }
  // the sup is always a half-integer; snap away float dust
  rep.delta = std::round(delta * 2.0) / 2.0;
  rep.triples = triples;
  return rep;
}

DeltaReport delta_fine_impl(const HypGraph& G, const DeltaOpts& opts, bool parallel) {
  if (opts.force_sampled) return delta_sweep(G, opts, parallel, false);
  if (G.tree && !opts.force_exhaustive) {
    // geodesics in a tree are unique and the sides from any apex coincide up
    // to the inscribed point, so every matched pair is at distance 0
    return {0.0, true, 0};
  }
  if (opts.force_exhaustive) return delta_sweep(G, opts, parallel, true);
  if (G.n <= 400) {
    try {
      return delta_sweep(G, opts, parallel, true);
    } catch (const std::overflow_error&) {
      // geodesic multiplicity beyond the pair cap; fall back to sampling
    }
  }
  return delta_sweep(G, opts, parallel, false);
}

}  // namespace

DeltaReport delta_fine(const HypGraph& G, const DeltaOpts& opts) {
  return delta_fine_impl(G, opts, true);
}
DeltaReport delta_fine_serial(const HypGraph& G, const DeltaOpts& opts) {
  return delta_fine_impl(G, opts, false);
}

InscribedTriple inscribed_triple(const HypGraph& G, int a, int b, int c, const Path& alpha,
                                 const Path& beta, const Path& gamma) {
  auto check = [&](const Path& p, int from, int to) {
    if (p.empty() || p.front() != from || p.back() != to ||
        (int)p.size() - 1 != G.idist(from, to))
      throw std::invalid_argument("inscribed_triple: geodesic does not match its endpoints");
  };
  check(alpha, b, c);
  check(beta, c, a);
  check(gamma, a, b);
  double ab = G.idist(a, b), bc = G.idist(b, c), ca = G.idist(c, a);
  return {(bc + ab - ca) / 2.0, (ca + bc - ab) / 2.0, (ab + ca - bc) / 2.0};
}

std::vector<int> np(const HypGraph& G, const Path& alpha, int y) {
  int best = INT32_MAX;
  for (int x : alpha) best = std::min(best, G.idist(x, y));
  std::vector<int> out;
  for (int x : alpha)
    if (G.idist(x, y) == best) out.push_back(x);
  return out;
}

RaySeed ray_toward(const HypGraph& G, int target) {
  if (target < 0 || target >= G.n) throw std::invalid_argument("ray_toward: vertex out of range");
  return {canonical_geodesic(G, G.x0, target)};
}

namespace {

void check_ray(const HypGraph& G, const RaySeed& ray) {
  if (ray.verts.empty() || ray.base() != G.x0)
    throw std::invalid_argument("half_space: ray must start at the basepoint");
  for (size_t i = 0; i < ray.verts.size(); ++i)
    if (G.idist(G.x0, ray.verts[i]) != (int)i)
      throw std::invalid_argument("half_space: ray must be geodesic from the basepoint");
}

}  // namespace

HalfSpace half_space_plus(const HypGraph& G, const RaySeed& ray, double t) {
  check_ray(G, ray);
  HalfSpace H;
  H.truncated = t > (double)ray.depth();
  for (int x = 0; x < G.n; ++x) {
    int best = INT32_MAX, hi = -1;
    for (size_t i = 0; i < ray.verts.size(); ++i) {
      int d = G.idist(ray.verts[i], x);
      if (d < best) best = d, hi = (int)i;
      else if (d == best) hi = (int)i;
    }
    if ((double)hi >= t) H.verts.push_back(x);
  }
  return H;
}

HalfSpace half_space_minus(const HypGraph& G, const RaySeed& ray, double t) {
  check_ray(G, ray);
  HalfSpace H;
  H.truncated = t > (double)ray.depth();
  for (int x = 0; x < G.n; ++x) {
    int best = INT32_MAX, lo = -1;
    for (size_t i = 0; i < ray.verts.size(); ++i) {
      int d = G.idist(ray.verts[i], x);
      if (d < best) best = d, lo = (int)i;
    }
    if ((double)lo <= t) H.verts.push_back(x);
  }
  return H;
}

InvariantReport check_separated_geodesics(const HypGraph& G, int samples, uint64_t seed) {
  InvariantReport rep{"separated geodesics lower bound", 0, INF, false};
  double delta = G.fineness.delta;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, G.n - 1);
  for (int it = 0; it < samples; ++it) {
    Path al = canonical_geodesic(G, pick(rng), pick(rng));
    Path be = canonical_geodesic(G, pick(rng), pick(rng));
    int dmin = INT32_MAX, i0 = 0, j0 = 0;
    for (size_t i = 0; i < al.size(); ++i)
      for (size_t j = 0; j < be.size(); ++j) {
        int d = G.idist(al[i], be[j]);
        if (d < dmin) dmin = d, i0 = (int)i, j0 = (int)j;
      }
    if ((double)dmin < 2.0 * delta || dmin == 0) continue;
    for (size_t i = 0; i < al.size(); ++i)
      for (size_t j = 0; j < be.size(); ++j) {
        double need = std::abs((int)i - i0) + dmin + std::abs((int)j - j0) - 6.0 * delta;
        rep.worst = std::min(rep.worst, G.idist(al[i], be[j]) - need);
        ++rep.checks;
      }
  }
  if (rep.checks == 0) rep.worst = 0.0;
  rep.pass = rep.worst >= -1e-9;
  return rep;
}

InvariantReport check_projection_coarse_lipschitz(const HypGraph& G, int samples, uint64_t seed) {
  InvariantReport rep{"projection coarse Lipschitz", 0, INF, false};
  double delta = G.fineness.delta;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, G.n - 1);
  for (int it = 0; it < samples; ++it) {
    Path be = canonical_geodesic(G, pick(rng), pick(rng));
    int x = pick(rng), y = pick(rng);
    std::vector<int> px = np(G, be, x), py = np(G, be, y);
    for (int xp : px)
      for (int yp : py) {
        // delta = 0: projections are 1-Lipschitz exactly; otherwise
        // d(x,y) < n delta gives d(x',y') < (n+6) delta
        double allowed = delta == 0.0
                             ? (double)G.idist(x, y)
                             : (std::floor(G.idist(x, y) / delta) + 7.0) * delta - 0.5;
        rep.worst = std::min(rep.worst, allowed - G.idist(xp, yp));
        ++rep.checks;
      }
  }
  if (rep.checks == 0) rep.worst = 0.0;
  rep.pass = rep.worst >= -1e-9;
  return rep;
}

namespace {

RaySeed deep_ray(const HypGraph& G, std::mt19937_64& rng) {
  // canonical geodesic from the basepoint to one of the deepest vertices
  int far = 0;
  for (int v = 0; v < G.n; ++v)
    if (G.depth[v] > G.depth[far]) far = v;
  // randomize among near-deepest choices
  std::vector<int> cands;
  for (int v = 0; v < G.n; ++v)
    if (G.depth[v] >= G.depth[far] - 1) cands.push_back(v);
  return ray_toward(G, cands[rng() % cands.size()]);
}

}  // namespace

InvariantReport check_half_space_separation(const HypGraph& G, int samples, uint64_t seed) {
  InvariantReport rep{"half-space separation", 0, INF, false};
  double delta = G.fineness.delta;
  std::mt19937_64 rng(seed);
  for (int it = 0; it < samples; ++it) {
    RaySeed ray = deep_ray(G, rng);
    int len = ray.depth();
    int s = (int)(rng() % (len + 1)), t = (int)(rng() % (len + 1));
    if (s > t) std::swap(s, t);
    HalfSpace lo = half_space_minus(G, ray, s), hi = half_space_plus(G, ray, t);
    if ((uint64_t)lo.verts.size() * hi.verts.size() > 4000000) continue;
    int dmin = INT32_MAX;
    for (int x : lo.verts)
      for (int y : hi.verts) dmin = std::min(dmin, G.idist(x, y));
    if (dmin == INT32_MAX) continue;
    rep.worst = std::min(rep.worst, dmin - (t - s - 6.0 * delta));
    ++rep.checks;
  }
  if (rep.checks == 0) rep.worst = 0.0;
  rep.pass = rep.worst >= -1e-9;
  return rep;
}

InvariantReport check_half_space_convexity(const HypGraph& G, int samples, uint64_t seed) {
  InvariantReport rep{"half-space convexity", 0, INF, false};
  double delta = G.fineness.delta;
  std::mt19937_64 rng(seed);
  for (int it = 0; it < samples; ++it) {
    RaySeed ray = deep_ray(G, rng);
    int len = ray.depth();
    int s = (int)(rng() % (len + 1));
    for (int side = 0; side < 2; ++side) {
      HalfSpace hs, target;
      if (side == 0) {
        hs = half_space_plus(G, ray, s);
        target = half_space_plus(G, ray, s - 8.0 * delta);
      } else {
        hs = half_space_minus(G, ray, s);
        target = half_space_minus(G, ray, s + 8.0 * delta);
      }
      std::vector<char> inside(G.n, 0);
      for (int v : target.verts) inside[v] = 1;
      if (hs.verts.empty()) continue;
      for (int rep2 = 0; rep2 < 16; ++rep2) {
        int x = hs.verts[rng() % hs.verts.size()], y = hs.verts[rng() % hs.verts.size()];
        uint64_t cnt = count_geodesics(G, x, y, 4096);
        std::vector<Path> geos = cnt <= 16 ? all_geodesics(G, x, y, 4096)
                                           : std::vector<Path>{canonical_geodesic(G, x, y)};
        for (const Path& p : geos)
          for (int v : p) {
            rep.worst = std::min(rep.worst, inside[v] ? 1.0 : -1.0);
            ++rep.checks;
          }
      }
    }
  }
  if (rep.checks == 0) rep.worst = 0.0;
  rep.pass = rep.worst >= -1e-9;
  return rep;
}

std::string HypGraph::to_json() const {
  ordered_json j;
  j["schema"] = "joinspace/1";
  j["type"] = "graph";
  j["n"] = n;
  j["x0"] = x0;
  ordered_json edges = ordered_json::array();
  for (int u = 0; u < n; ++u)
    for (const int* w = nbr_begin(u); w != nbr_end(u); ++w)
      if (*w > u) edges.push_back({u, *w});
  j["edges"] = std::move(edges);
  if (!label.empty()) j["labels"] = label;
  if (!frontier.empty()) j["frontier"] = frontier;
  j["delta"] = fineness.delta;
  j["delta_exhaustive"] = fineness.exhaustive;
  return j.dump(2);
}

HypGraph HypGraph::from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  if (!j.contains("schema") || j["schema"] != "joinspace/1" || j.value("type", "") != "graph")
    throw std::invalid_argument("graph json: expected schema joinspace/1, type graph");
  int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  HypGraph G = from_edges(n, std::move(edges), j.value("x0", 0), std::move(labels));
  if (j.contains("frontier")) G.frontier = j["frontier"].get<std::vector<int>>();
  return G;
}

}  // namespace joinspace
