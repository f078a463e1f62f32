#pragma once
#include <string>
#include <vector>

#include "hypgraph.hpp"

namespace joinspace {

// a candidate hat metric on the vertices of a graph: a genuine metric,
// validated exhaustively at construction (axioms to 1e-12)
struct HatMetric {
  const HypGraph* G = nullptr;
  FiniteMetricSpace M;  // carries the matrix and the basepoint

  double at(int i, int j) const { return M.dist(i, j); }
  // double difference and Gromov product with respect to this metric
  double dd4(int a, int a2, int b, int b2) const { return dd(M, a, a2, b, b2); }
  double gp3(int a, int b, int c) const { return gp(M, a, b, c); }
};

// matrix-free access to a ground metric: a validated matrix, the word metric
// straight off a graph (the only option for trees above the dense size
// limit), or both; non-owning, keep the referents alive
struct HatView {
  const HypGraph* G = nullptr;
  const FiniteMetricSpace* M = nullptr;  // null means the word metric

  int size() const { return M ? M->size() : G->n; }
  int basepoint() const { return M ? M->basepoint() : G->x0; }
  double operator()(int i, int j) const { return M ? M->dist(i, j) : (double)G->idist(i, j); }
  double dd4(int a, int a2, int b, int b2) const {
    return ((*this)(a, b) - (*this)(a2, b) - (*this)(a, b2) + (*this)(a2, b2)) / 2.0;
  }
  double gp3(int a, int b, int c) const {
    return ((*this)(a, c) + (*this)(b, c) - (*this)(a, b)) / 2.0;
  }
};
inline HatView hat_word_view(const HypGraph& G) { return {&G, nullptr}; }
inline HatView hat_view(const HatMetric& H) { return {H.G, &H.M}; }
inline HatView space_view(const FiniteMetricSpace& M) { return {nullptr, &M}; }

// the word metric as the hat metric: exact contract provider on trees,
// usable with measured constants elsewhere
HatMetric hat_provider_word(const HypGraph& G);
// square matrix with an id header row/column, comma separated
HatMetric hat_provider_csv(const HypGraph& G, const std::string& csv_text);
std::string hat_to_csv(const HatMetric& H);
HatMetric hat_scaled(const HatMetric& H, double s);

// max |hat(gx,gy) - hat(x,y)| over pairs, for a supplied automorphism
double automorphism_invariance_defect(const HatMetric& H, const std::vector<int>& perm);

// measured contract constants; every constant is inflated until it certifies
// its inequality over everything that was tested
struct HatContractReport {
  double A = 1.0, B = 0.0;   // d/A - B <= hat <= A d + B against the word metric
  double C = 0.0, mu = 0.5;  // unit pairs: |hat(a,b)-hat(a',b)-hat(a,b')+hat(a',b')| <= C mu^d(a,b)
  double L = 0.0, mu2 = 0.5;  // separated geodesics: |<a,a'|b,b'>| <= L mu2^d(alpha,beta)
  double Cprime = 0.0;        // on-geodesic additivity: |hat(u,v)-hat(u,w)-hat(w,v)| <= C'
  double P = 0.0;             // |<b|b'>_{a0} - hat(a0,b0)| <= P over projections b0
  std::vector<double> C_profile;  // max unit-pair defect by word distance
  std::vector<double> L_profile;  // max |<a,a'|b,b'>| by geodesic separation
  std::vector<double> fit_residuals;  // log-space residuals of the two decay fits
  bool exhaustive = false;            // unit pairs and on-geodesic triples swept fully
  bool decaying = true;  // false when a tested profile refuses any mu < 1
};

struct ContractOpts {
  uint64_t seed = 1;
  uint64_t quad_samples = 4000;  // separated-geodesic quadruples
  uint64_t proj_samples = 4000;  // projection triples for P
  uint64_t pair_cap = 4096;      // geodesic enumeration cap per pair
};
HatContractReport verify_contract(const HatMetric& H, const ContractOpts& opts = {});
HatContractReport verify_contract_serial(const HatMetric& H, const ContractOpts& opts = {});

// |<u,c|a,b>| <= lambda^max(<u,a|b,c>, <u,b|a,c>) once that max reaches T
struct AbbaReport {
  double T = 0.0, lambda = 0.0;
  uint64_t checks = 0;
  uint64_t triggered = 0;  // samples with the max above T
  bool pass = false;
};
AbbaReport check_abba(const HatMetric& H, uint64_t samples, uint64_t seed);

// d(alpha,beta) >= max dd / A - C with A from the contract report and
// C = Cprime/A + B, following the constant chase in the source inequality
InvariantReport check_dd_dhat(const HatMetric& H, const HatContractReport& rep,
                              uint64_t samples, uint64_t seed);

}  // namespace joinspace
