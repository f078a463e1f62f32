#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "joinspace/hatmetric.hpp"

using namespace joinspace;

namespace {

// the word metric on any tree is an exact contract provider; these are the
// values every tree must report
void require_tree_exact(const HatContractReport& rep) {
  CHECK(rep.A == 1.0);
  CHECK(rep.B == 0.0);
  CHECK(rep.Cprime == 0.0);
  CHECK(rep.P == 0.0);
  CHECK(rep.L == 0.0);
  CHECK(rep.decaying);
  REQUIRE(rep.C_profile.size() >= 2);
  // unit pairs interact only when they use the same edge: defect 2 at word
  // distance 0 and 1, zero beyond
  CHECK(rep.C_profile[0] == 2.0);
  CHECK(rep.C_profile[1] == 2.0);
  for (size_t k = 2; k < rep.C_profile.size(); ++k) CHECK(rep.C_profile[k] == 0.0);
  for (double v : rep.L_profile) CHECK(v == 0.0);
  for (double r : rep.fit_residuals) CHECK(r <= 1e-12);
}

}  // namespace

TEST_CASE("word provider, views, and scaling") {
  auto P = HypGraph::path_graph(11);
  auto H = hat_provider_word(P);
  CHECK(H.at(2, 8) == 6.0);
  CHECK(H.dd4(2, 8, 0, 10) == doctest::Approx(-6.0));
  CHECK(H.gp3(0, 10, 5) == doctest::Approx(0.0));  // 5 sits on the geodesic
  CHECK(H.gp3(10, 5, 0) == doctest::Approx(5.0));

  auto V = hat_view(H);
  auto W = hat_word_view(P);
  for (int i = 0; i < P.n; ++i)
    for (int j = 0; j < P.n; ++j) {
      CHECK(V(i, j) == H.at(i, j));
      CHECK(W(i, j) == H.at(i, j));
    }
  CHECK(V.size() == 11);
  CHECK(V.basepoint() == P.x0);

  // word view stays usable on trees past the dense matrix limit
  auto big = HypGraph::cayley_free(2, 7);
  REQUIRE(big.n > 4096);
  CHECK_FALSE(big.dense);
  CHECK_THROWS_AS((void)hat_provider_word(big), std::invalid_argument);
  auto BV = hat_word_view(big);
  CHECK(BV(big.x0, big.frontier.at(0)) == 7.0);

  auto H2 = hat_scaled(H, 2.0);
  CHECK(H2.at(2, 8) == 12.0);
  auto rep2 = verify_contract(H2);
  CHECK(rep2.A == 2.0);
  CHECK(rep2.B == 0.0);
  CHECK(rep2.Cprime == 0.0);
  CHECK(rep2.P == 0.0);
  CHECK(rep2.C_profile[0] == 4.0);
  CHECK(rep2.C_profile[1] == 4.0);
  for (size_t k = 2; k < rep2.C_profile.size(); ++k) CHECK(rep2.C_profile[k] == 0.0);
}

TEST_CASE("csv import and export round trip") {
  auto P = HypGraph::path_graph(5);
  auto H = hat_provider_word(P);
  std::string csv = hat_to_csv(H);
  auto H2 = hat_provider_csv(P, csv);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(H2.at(i, j) == H.at(i, j));
  CHECK(hat_to_csv(H2) == csv);  // byte stable

  // a custom metric distinct from the word metric
  auto T3 = HypGraph::path_graph(3);
  auto Hc = hat_provider_csv(T3, "id,0,1,2\n0,0,1,1.5\n1,1,0,1\n2,1.5,1,0\n");
  CHECK(Hc.at(0, 2) == 1.5);
  auto rep = verify_contract(Hc);
  CHECK(rep.A == doctest::Approx(2.0 / 1.5));
  CHECK(rep.B == doctest::Approx(0.0));

  CHECK_THROWS_AS((void)hat_provider_csv(T3, "0,1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS((void)hat_provider_csv(T3, "id,0,1,2\n9,0,1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS((void)hat_provider_csv(T3, "id,0,1,2\n0,0,1\n1,1,0,1\n2,2,1,0\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)hat_provider_csv(T3, "id,0,1,2\n0,0,1,2,9\n1,1,0,1\n2,2,1,0\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)hat_provider_csv(T3, "id,0,1,2\n0,0,1,2\n1,1,0,1\n"),
                  std::invalid_argument);
  // asymmetric matrix fails metric validation
  CHECK_THROWS_AS((void)hat_provider_csv(T3, "id,0,1,2\n0,0,1,2\n1,1,0,1\n2,2.5,1,0\n"),
                  std::invalid_argument);
}

TEST_CASE("automorphism invariance defect") {
  auto P = HypGraph::path_graph(11);
  auto H = hat_provider_word(P);
  std::vector<int> rev(11);
  for (int i = 0; i < 11; ++i) rev[i] = 10 - i;
  CHECK(automorphism_invariance_defect(H, rev) == 0.0);

  auto C = HypGraph::cycle(6);
  auto Hc = hat_provider_word(C);
  std::vector<int> rot = {1, 2, 3, 4, 5, 0};
  CHECK(automorphism_invariance_defect(Hc, rot) == 0.0);

  // a permutation that is not an isometry shows a positive defect
  std::vector<int> swap01 = {1, 0, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(automorphism_invariance_defect(H, swap01) > 0.5);

  CHECK_THROWS_AS((void)automorphism_invariance_defect(H, {0, 1, 2}), std::invalid_argument);
  std::vector<int> dup(11, 0);
  CHECK_THROWS_AS((void)automorphism_invariance_defect(H, dup), std::invalid_argument);
  std::vector<int> oob = rev;
  oob[0] = 99;
  CHECK_THROWS_AS((void)automorphism_invariance_defect(H, oob), std::invalid_argument);
}

TEST_CASE("contract constants are exact on trees") {
  for (const HypGraph& G : {HypGraph::path_graph(11), HypGraph::tripod(3, 3, 3),
                            HypGraph::random_tree(60, 5), HypGraph::random_tree(200, 3),
                            HypGraph::cayley_free(2, 3)}) {
    auto rep = verify_contract(hat_provider_word(G));
    CHECK(rep.exhaustive);
    require_tree_exact(rep);
  }
}

TEST_CASE("contract on the order-6 free product ball") {
  auto G = HypGraph::cayley_preset("z2z3", 7);
  REQUIRE(G.fineness.delta == 1.0);
  auto H = hat_provider_word(G);
  auto rep = verify_contract(H);
  // the vertex metric embeds in a tree with triangle hubs at half-integer
  // positions, so everything but P matches the tree values exactly
  CHECK(rep.A == 1.0);
  CHECK(rep.B == 0.0);
  CHECK(rep.Cprime == 0.0);
  CHECK(rep.P == 0.5);  // Gromov products land on hubs, projections on corners
  CHECK(rep.L == 0.0);
  CHECK(rep.decaying);
  CHECK(rep.C_profile[0] == 2.0);
  CHECK(rep.C_profile[1] == 2.0);
  for (size_t k = 2; k < rep.C_profile.size(); ++k) CHECK(rep.C_profile[k] == 0.0);
  // certification: every profile entry sits under its fitted envelope
  for (size_t k = 0; k < rep.C_profile.size(); ++k)
    CHECK(rep.C_profile[k] <= rep.C * std::pow(rep.mu, (double)k) + 1e-12);
  for (size_t k = 0; k < rep.L_profile.size(); ++k)
    CHECK(rep.L_profile[k] <= rep.L * std::pow(rep.mu2, (double)k) + 1e-12);
}

TEST_CASE("flat profiles are reported as non-decaying") {
  auto C = HypGraph::cycle(6);
  auto rep = verify_contract(hat_provider_word(C));
  // C6 keeps defect 2 at every distance: no mu < 1 fits, constants certify anyway
  CHECK_FALSE(rep.decaying);
  CHECK(rep.C == doctest::Approx(2.0));
  for (size_t k = 0; k < rep.C_profile.size(); ++k) CHECK(rep.C_profile[k] <= 2.0);
}

TEST_CASE("parallel and serial verification agree") {
  for (const HypGraph& G :
       {HypGraph::random_tree(60, 5), HypGraph::cayley_preset("z2z3", 6)}) {
    auto H = hat_provider_word(G);
    auto a = verify_contract(H);
    auto b = verify_contract_serial(H);
    CHECK(a.A == b.A);
    CHECK(a.B == b.B);
    CHECK(a.C == b.C);
    CHECK(a.mu == b.mu);
    CHECK(a.L == b.L);
    CHECK(a.mu2 == b.mu2);
    CHECK(a.Cprime == b.Cprime);
    CHECK(a.P == b.P);
    CHECK(a.C_profile == b.C_profile);
    CHECK(a.L_profile == b.L_profile);
  }
}

TEST_CASE("third double difference vanishes once one product dominates") {
  // exhaustive four point sweep on a tripod: whenever one of the first two
  // double differences is positive the third is exactly zero
  auto G = HypGraph::tripod(2, 2, 2);
  auto H = hat_provider_word(G);
  for (int u = 0; u < G.n; ++u)
    for (int a = 0; a < G.n; ++a)
      for (int b = 0; b < G.n; ++b)
        for (int c = 0; c < G.n; ++c)
          if (std::max(H.dd4(u, a, b, c), H.dd4(u, b, a, c)) > 0.0)
            CHECK(H.dd4(u, c, a, b) == 0.0);

  auto rep = check_abba(H, 20000, 7);
  CHECK(rep.pass);
  CHECK(rep.lambda == 0.0);
  CHECK(rep.T == 0.5);
  CHECK(rep.triggered > 0);

  auto Z = HypGraph::cayley_preset("z2z3", 7);
  auto repz = check_abba(hat_provider_word(Z), 20000, 7);
  CHECK(repz.pass);
  CHECK(repz.lambda == 0.0);
  CHECK(repz.triggered > 0);
}

TEST_CASE("geodesic separation bounds the double difference") {
  for (const HypGraph& G :
       {HypGraph::path_graph(11), HypGraph::random_tree(60, 5),
        HypGraph::cayley_preset("z2z3", 7), HypGraph::cycle(6)}) {
    auto H = hat_provider_word(G);
    auto rep = verify_contract(H);
    auto inv = check_dd_dhat(H, rep, 3000, 11);
    CHECK(inv.checks > 0);
    CHECK(inv.pass);
    // singleton quadruples force equality, so the worst margin is exactly zero
    CHECK(inv.worst == 0.0);
  }
}
