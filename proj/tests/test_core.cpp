#include <doctest.h>

#include <random>

#include "subq/core.hpp"
#include "subq/graph.hpp"
#include "subq/zoo.hpp"
#include "test_helpers.hpp"

using namespace subq;
using namespace subq::testing;

TEST_CASE("subset basics") {
  Subset a = Subset::of(5, {0, 2, 3});
  CHECK(a.count() == 3);
  CHECK(a.contains(2));
  CHECK(!a.contains(1));
  CHECK(a.to_string() == "1,3,4");
  CHECK(a.complement().to_string() == "2,5");
  CHECK(Subset::of(5, {0}).mask_less(Subset::of(5, {1})));
  CHECK(Subset::of(5, {1}).mask_less(Subset::of(5, {0, 1})));
  Subset big(130);
  big.add(129);
  CHECK(big.count() == 1);
  CHECK(big.complement().count() == 129);
}

TEST_CASE("oracle normalizes and memoizes") {
  int raw_calls = 0;
  SetFunctionOracle F(GroundSet(3), [&raw_calls](const Subset& a) {
    ++raw_calls;
    return double(a.count()) + 7.0;  // F(empty) = 7 before normalization
  });
  CHECK(F(Subset::empty_set(3)) == 0.0);
  Subset s = Subset::of(3, {1});
  CHECK(F(s) == 1.0);
  CHECK(F(s) == 1.0);
  CHECK(F.calls() == 1);  // repeated evaluation counted once
  F(Subset::of(3, {0, 2}));
  CHECK(F.calls() == 2);
}

TEST_CASE("greedy on min(|A|,1) picks the max coordinate") {
  SetFunctionOracle F = min_card_one(3);
  auto [base, value] = greedy(F, {0.5, 0.2, 0.9});
  CHECK(value == doctest::Approx(0.9));
  CHECK(base.s[0] == doctest::Approx(0.0));
  CHECK(base.s[1] == doctest::Approx(0.0));
  CHECK(base.s[2] == doctest::Approx(1.0));
  CHECK(is_valid_base(F, base));
  // exactly p new evaluations on nested sets
  SetFunctionOracle G = min_card_one(4);
  greedy(G, {0.4, 0.1, 0.3, 0.2});
  CHECK(G.calls() == 4);
}

TEST_CASE("greedy on a modular function returns its weights") {
  std::vector<double> z{0.3, -1.2, 2.0, 0.0};
  SetFunctionOracle F = modular_oracle(z);
  auto [base, value] = greedy(F, {1.0, 2.0, -0.5, 0.25});
  for (int k = 0; k < 4; ++k) CHECK(base.s[k] == doctest::Approx(z[k]));
  CHECK(value == doctest::Approx(0.3 - 2.4 - 1.0 + 0.0));
}

TEST_CASE("fig-3.3 style two-element function") {
  // F({1}) = 1, F({2}) = 2, F({1,2}) = 1
  SetFunctionOracle F(GroundSet(2), [](const Subset& a) {
    if (a.empty()) return 0.0;
    if (a.count() == 2) return 1.0;
    return a.contains(0) ? 1.0 : 2.0;
  });
  auto [base, value] = greedy(F, {0.0, 1.0});
  CHECK(value == doctest::Approx(2.0));
  CHECK(base.s[1] == doctest::Approx(2.0));
  CHECK(base.s[0] == doctest::Approx(-1.0));
  CHECK(lovasz(F, {0.0, 1.0}) == doctest::Approx(2.0));
}

TEST_CASE("lovasz equals cut total variation on a chain") {
  SetFunctionOracle F = cut_function(chain_graph(3, 1.0));
  CHECK(lovasz(F, {3.0, 1.0, 2.0}) == doctest::Approx(3.0));
}

TEST_CASE("lovasz extension properties") {
  std::mt19937_64 rng(7);
  SetFunctionOracle F = random_instance(6, 0, rng);
  const int p = 6;

  SUBCASE("extension: f(1_A) = F(A) with the same oracle values") {
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
      Subset a = Subset::from_mask(p, mask);
      std::vector<double> w(p, 0.0);
      a.for_each([&](int k) { w[k] = 1.0; });
      CHECK(lovasz(F, w) == doctest::Approx(F(a)).epsilon(1e-12));
    }
  }
  SUBCASE("positive homogeneity and translation") {
    auto w = random_vector(p, -2, 2, rng);
    double f = lovasz(F, w);
    std::vector<double> w2 = w, w3 = w;
    for (double& x : w2) x *= 3.5;
    for (double& x : w3) x += 0.7;
    double fv = F(Subset::full_set(p));
    CHECK(lovasz(F, w2) == doctest::Approx(3.5 * f));
    CHECK(lovasz(F, w3) == doctest::Approx(f + 0.7 * fv));
  }
  SUBCASE("greedy value agreement") {
    for (int rep = 0; rep < 50; ++rep) {
      auto w = random_vector(p, -1, 1, rng);
      double a = lovasz(F, w);
      double b = greedy(F, w).value;
      CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
  }
}

TEST_CASE("convexity iff submodularity by sampling") {
  std::mt19937_64 rng(11);
  const int p = 5;
  SetFunctionOracle F = random_instance(p, 1, rng);
  for (int rep = 0; rep < 1000; ++rep) {
    auto u = random_vector(p, -1, 1, rng);
    auto v = random_vector(p, -1, 1, rng);
    std::uniform_real_distribution<double> ur(0, 1);
    double th = ur(rng);
    std::vector<double> mix(p);
    for (int k = 0; k < p; ++k) mix[k] = th * u[k] + (1 - th) * v[k];
    CHECK(lovasz(F, mix) <=
          th * lovasz(F, u) + (1 - th) * lovasz(F, v) + 1e-9);
  }

  // supermodular quadratic: the bruteforce witness also violates convexity
  SetFunctionOracle bad(GroundSet(3), [](const Subset& a) {
    return double(a.count()) * a.count();
  });
  auto witness = is_submodular_bruteforce(bad);
  REQUIRE(!witness.submodular);
  CHECK(witness.lhs == doctest::Approx(1.0));
  CHECK(witness.rhs == doctest::Approx(3.0));
  // 1_{A u {k}} + 1_{A u {j}} midpoint violates midpoint convexity
  Subset ak = witness.a, aj = witness.a;
  ak.add(witness.k);
  aj.add(witness.j);
  std::vector<double> u(3, 0.0), v(3, 0.0), mix(3, 0.0);
  ak.for_each([&](int i) { u[i] = 1.0; });
  aj.for_each([&](int i) { v[i] = 1.0; });
  for (int i = 0; i < 3; ++i) mix[i] = 0.5 * (u[i] + v[i]);
  CHECK(lovasz(bad, mix) > 0.5 * lovasz(bad, u) + 0.5 * lovasz(bad, v) + 1e-9);
}

TEST_CASE("submodularity brute force accepts known families") {
  std::vector<double> w(5, 1.0);
  CHECK(is_submodular_bruteforce(cardinality_based(w, ConcaveSpec::sqrt()))
            .submodular);
  std::mt19937_64 rng(3);
  CHECK(is_submodular_bruteforce(
            cut_function(random_symmetric_graph(5, 0.6, rng)))
            .submodular);
}

TEST_CASE("polyhedron membership") {
  SetFunctionOracle card = cardinality(4);
  std::vector<double> ones(4, 1.0);
  CHECK(in_polyhedron(card, ones, Polyhedron::B));
  CHECK(in_polyhedron(card, ones, Polyhedron::P));
  CHECK(in_polyhedron(card, ones, Polyhedron::Pplus));
  CHECK(in_polyhedron(card, ones, Polyhedron::AbsP));

  SetFunctionOracle F = min_card_one(3);
  for (int k = 0; k < 3; ++k) {
    std::vector<double> s(3, 0.0);
    s[k] = 1.0;
    CHECK(in_polyhedron(F, s, Polyhedron::B));
  }
  std::vector<double> off{0.5, 0.2, 0.0};  // s(V) != F(V)
  CHECK(!in_polyhedron(F, off, Polyhedron::B));
  CHECK(in_polyhedron(F, off, Polyhedron::P));
  // symmetric cut on two nodes: B(F) = {(t,-t), |t| <= 1}
  SetFunctionOracle cut2 = cut_function(chain_graph(2, 1.0));
  std::vector<double> neg{-0.4, 0.4};
  CHECK(in_polyhedron(cut2, neg, Polyhedron::B));
  CHECK(!in_polyhedron(cut2, neg, Polyhedron::Pplus));
  // |P| tests the absolute values
  std::vector<double> flip{-0.4, -0.3, 0.2};
  CHECK(in_polyhedron(F, flip, Polyhedron::AbsP));
  std::vector<double> toobig{-0.9, -0.9, 0.0};
  CHECK(!in_polyhedron(F, toobig, Polyhedron::AbsP));
}

TEST_CASE("maximizer optimality via tight level sets") {
  std::mt19937_64 rng(5);
  const int p = 6;
  for (int family = 0; family < 4; ++family) {
    SetFunctionOracle F = random_instance(p, family, rng);
    auto w = random_vector(p, -1, 1, rng);
    auto gr = greedy(F, w);
    CHECK(maximizer_optimality(F, w, gr.base.s));
  }
  SetFunctionOracle card = cardinality(3);
  CHECK(maximizer_optimality(card, {0.3, -0.2, 0.9},
                             std::vector<double>(3, 1.0)));
  SetFunctionOracle F = min_card_one(2);
  CHECK(!maximizer_optimality(F, {1.0, 0.0}, {0.0, 1.0}));
}

TEST_CASE("extreme points") {
  auto pts = extreme_points(cardinality(3));
  CHECK(pts.size() == 1);
  CHECK(pts[0].s == std::vector<double>{1.0, 1.0, 1.0});

  auto pts2 = extreme_points(min_card_one(2));
  CHECK(pts2.size() == 2);

  SetFunctionOracle nsq(GroundSet(3), [](const Subset& a) {
    return -double(a.count()) * a.count();
  });
  CHECK(extreme_points(nsq).size() == 6);  // p! distinct points
}

TEST_CASE("symmetric functions have even extensions") {
  std::mt19937_64 rng(13);
  WeightedDigraph g = random_symmetric_graph(6, 0.5, rng);
  SetFunctionOracle F = cut_function(g);
  for (int rep = 0; rep < 20; ++rep) {
    auto w = random_vector(6, -2, 2, rng);
    std::vector<double> neg(6);
    for (int k = 0; k < 6; ++k) neg[k] = -w[k];
    CHECK(lovasz(F, w) == doctest::Approx(lovasz(F, neg)).epsilon(1e-10));
  }
}

TEST_CASE("every base vector satisfies s(V) = F(V) and membership") {
  std::mt19937_64 rng(17);
  for (int family = 0; family < 4; ++family) {
    SetFunctionOracle F = random_instance(5, family, rng);
    for (int rep = 0; rep < 5; ++rep) {
      auto gr = greedy(F, random_vector(5, -1, 1, rng));
      CHECK(is_valid_base(F, gr.base));
      CHECK(in_polyhedron(F, gr.base.s, Polyhedron::B));
    }
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS(GroundSet(0));
  CHECK_THROWS(GroundSet(2, {"a", "a"}));
  SetFunctionOracle F = cardinality(3);
  std::vector<double> w{1.0, std::numeric_limits<double>::infinity(), 0.0};
  CHECK_THROWS(greedy(F, w));
  CHECK_THROWS(lovasz(F, w));
}
