#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "confinv/error.hpp"
#include "confinv/geometry.hpp"
#include "confinv/immersion.hpp"
#include "confinv/rng.hpp"
#include "confinv/tensor_algebra.hpp"

using namespace confinv;

namespace {

int randint(SplitMix64& rng, int n) {
  const int k = int(rng.uniform(0.0, double(n)));
  return std::min(std::max(k, 0), n - 1);
}

// Random representative of the same contraction class: shuffles the factor
// list, remaps the pairing through the induced slot bijection, shuffles the
// pair list and flips pair entries.
ContractionTerm relabeled(const ContractionTerm& t, SplitMix64& rng) {
  const int nf = int(t.factors.size());
  std::vector<int> perm(static_cast<size_t>(nf));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = nf - 1; i > 0; --i) std::swap(perm[size_t(i)], perm[size_t(randint(rng, i + 1))]);

  std::vector<int> newpos(static_cast<size_t>(nf));  // old factor index -> new position
  for (int j = 0; j < nf; ++j) newpos[size_t(perm[size_t(j)])] = j;

  ContractionTerm out;
  out.factors.resize(size_t(nf));
  for (int j = 0; j < nf; ++j) out.factors[size_t(j)] = t.factors[size_t(perm[size_t(j)])];

  auto map_slot = [&](int s) {
    const auto [fi, local] = t.locate(s);
    return out.slot_offset(newpos[size_t(fi)]) + local;
  };
  for (const auto& pr : t.pairs) {
    int a = map_slot(pr.first), b = map_slot(pr.second);
    if (rng.uniform() < 0.5) std::swap(a, b);
    out.pairs.emplace_back(a, b);
  }
  for (int i = int(out.pairs.size()) - 1; i > 0; --i)
    std::swap(out.pairs[size_t(i)], out.pairs[size_t(randint(rng, i + 1))]);
  return out;
}

}  // namespace

TEST_SUITE("tensor_algebra") {

TEST_CASE("canonical form is idempotent and relabeling-invariant") {
  SplitMix64 rng(12345);
  std::vector<ContractionTerm> seeds;
  for (const auto& t : enumerate_terms(-2, 2, 1)) seeds.push_back(t);
  for (const auto& t : enumerate_terms(-2, 2, 2)) seeds.push_back(t);
  for (const auto& t : enumerate_terms(-1, 2, 1)) seeds.push_back(t);
  REQUIRE(seeds.size() == 21);

  int trials = 0;
  for (const auto& t : seeds) {
    const std::string key = canonical_key(t);
    CHECK(canonical_key(canonical_form(t)) == key);
    for (int k = 0; k < 50; ++k) {
      const ContractionTerm r = relabeled(t, rng);
      CHECK(canonical_key(r) == key);
      ++trials;
    }
  }
  CHECK(trials >= 1000);
}

TEST_CASE("hand-written symmetry aliases collapse") {
  const char* aliases[] = {
      "g-1(a,c) g-1(b,d) R(a,b,c,d)",
      "g-1(a,c) g-1(b,d) R(c,d,a,b)",   // pair exchange
      "g-1(a,c) g-1(b,d) R(b,a,d,c)",   // both antisymmetry swaps
      "g-1(p,r) g-1(q,s) R(p,q,r,s)",   // renamed letters
      "R(a,b,c,d) g-1(b,d) g-1(a,c)",   // reordered factors
  };
  const std::string key = canonical_key(parse_term(aliases[0]));
  for (const char* s : aliases) CHECK(canonical_key(parse_term(s)) == key);

  const std::string k1 = canonical_key(parse_term("gbar-1(p,q) Rperp(a,b,p,q) g-1(a,b)"));
  const std::string k2 = canonical_key(parse_term("gbar-1(p,q) Rperp(b,a,q,p) g-1(a,b)"));
  CHECK(k1 == k2);  // simultaneous double swap

  // a lone swap of one antisymmetric pair is sign-carrying, hence a new class
  const std::string k3 = canonical_key(parse_term("g-1(a,b) g-1(c,d) R(a,c,b,d)"));
  const std::string k4 = canonical_key(parse_term("g-1(a,b) g-1(c,d) R(a,c,d,b)"));
  CHECK(k3 != k4);
}

TEST_CASE("format and parse are inverse on canonical terms") {
  for (int codim : {1, 2})
    for (const auto& t : enumerate_terms(-2, 2, codim)) {
      const ContractionTerm back = parse_term(format_term(t));
      CHECK(canonical_key(back) == canonical_key(t));
    }
}

TEST_CASE("weight counts declared weights and hidden metric pairs") {
  CHECK(weight(parse_term("g-1(a,c) g-1(b,d) R(a,b,c,d)")) == -2);
  CHECK(weight(parse_term("g-1(a,b) Hg(a,b)")) == -1);
  // lower-lower pairs contract through the metric: -2 each
  CHECK(weight(parse_term("R(a,b,c,d) R(a,b,c,d)")) == -4);
  // upper-upper pairs contract through the inverse: +2 each
  CHECK(weight(parse_term("g-1(a,a)")) == 0);
  CHECK(weight(parse_term("gbar-1(p,q) Rperp(a,b,p,q) g-1(a,b)")) == -2);
}

TEST_CASE("terms scale like t^weight under frame rescaling") {
  SplitMix64 rng(777);
  const PointFrame f2 = random_algebra_frame(2, 2, rng);
  const PointFrame f1 = random_algebra_frame(2, 1, rng);
  auto check_scaling = [](const ContractionTerm& term, const PointFrame& f, double t) {
    const double base = evaluate_term(term, f);
    const double scaled = evaluate_term(term, f.rescaled(t));
    const double expect = std::pow(t, weight(term)) * base;
    CHECK(std::abs(scaled - expect) <= 1e-12 * (1.0 + std::abs(base)));
  };
  for (double t : {0.5, 1.7}) {
    for (const auto& term : enumerate_terms(-2, 2, 2)) check_scaling(term, f2, t);
    // odd h-type counts only make sense as scalars in codim 1
    check_scaling(parse_term("g-1(a,b) Hg(a,b)"), f1, t);
    check_scaling(parse_term("R(a,b,c,d) R(a,b,c,d)"), f1, t);
  }
}

TEST_CASE("enumeration matches the verified class counts") {
  CHECK(enumerate_terms(-1, 2, 1).size() == 2);
  CHECK(enumerate_terms(-2, 2, 1).size() == 9);
  CHECK(enumerate_terms(-2, 2, 2).size() == 10);

  // codim 1 never mentions the normal-bundle factors
  for (const auto& t : enumerate_terms(-2, 2, 1))
    for (FactorKind k : t.factors) {
      CHECK(k != FactorKind::NormalCurv);
      CHECK(k != FactorKind::MetricInvNormal);
    }

  // keys are strictly increasing, so the list is deduplicated and sorted
  for (int codim : {1, 2}) {
    const auto terms = enumerate_terms(-2, 2, codim);
    for (size_t i = 0; i + 1 < terms.size(); ++i)
      CHECK(canonical_key(terms[i]) < canonical_key(terms[i + 1]));
    for (const auto& t : terms) CHECK(weight(t) == -2);
  }
}

TEST_CASE("expected classes appear in the weight -2 list") {
  std::set<std::string> keys;
  for (const auto& t : enumerate_terms(-2, 2, 2)) keys.insert(canonical_key(t));
  for (const char* s : {"g-1(a,c) g-1(b,d) R(a,b,c,d)",
                        "g-1(a,b) Hg(a,b) g-1(c,d) Hg(c,d)",
                        "g-1(a,c) g-1(b,d) ho(a,b) ho(c,d)",
                        "g-1(a,c) g-1(b,d) ho(a,b) Hg(c,d)",
                        "gbar-1(p,q) Rperp(a,b,p,q) g-1(a,b)"})
    CHECK(keys.count(canonical_key(parse_term(s))) == 1);
}

TEST_CASE("evaluation on closed-form frames") {
  const AmbientMetric flat3 = AmbientMetric::flat_space(3);
  Eigen::VectorXd u(2);
  u << M_PI / 2, 0.3;
  const PointFrame eq = frame_at(sphere(2, 1.0), flat3, u);

  // scalar curvature of the unit round sphere is 2, K is 1
  CHECK(evaluate_term(parse_term("g-1(a,c) g-1(b,d) R(a,b,c,d)"), eq) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(evaluate_sum(named_sum("K", 2), eq) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(evaluate_sum(named_sum("H2", 2), eq) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(evaluate_sum(named_sum("hcirc2", 2), eq) == doctest::Approx(0.0).epsilon(1e-12));

  const AmbientMetric flat4 = AmbientMetric::flat_space(4);
  Eigen::VectorXd v(2);
  v << 0.4, 1.1;
  const PointFrame cl = frame_at(clifford_torus(1.0), flat4, v);
  CHECK(evaluate_sum(named_sum("K", 2), cl) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(evaluate_sum(named_sum("H2", 2), cl) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(evaluate_sum(named_sum("hcirc2", 2), cl) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Gauss relation holds on geometric frames of any codimension") {
  const AmbientMetric flat3 = AmbientMetric::flat_space(3);
  const AmbientMetric flat4 = AmbientMetric::flat_space(4);
  const ContractionSum K = named_sum("K", 2);
  const ContractionSum H2 = named_sum("H2", 2);
  const ContractionSum hc2 = named_sum("hcirc2", 2);

  auto check_frame = [&](const PointFrame& f) {
    const double lhs = evaluate_sum(K, f);
    const double rhs = evaluate_sum(H2, f) - 0.5 * evaluate_sum(hc2, f) + f.Kbar();
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
  };

  Eigen::VectorXd u(2);
  u << 0.9, 2.0;
  check_frame(frame_at(ellipsoid({1.0, 1.3, 0.8}), flat3, u));
  check_frame(frame_at(torus(2.0, 1.0), flat3, u));
  check_frame(frame_at(clifford_torus(1.0), flat4, u));
  const Expr phi = parse_expression("0.1*x1 - 0.05*x2*x3", {"x1", "x2", "x3"});
  check_frame(frame_at(sphere(2, 1.0), AmbientMetric::conformal(3, phi), u));
}

TEST_CASE("the Gauss relation is not an algebra identity") {
  // it fails on synthetic frames where R is free of the h data
  SplitMix64 rng(99);
  ContractionSum rhs = named_sum("H2", 2);
  rhs.add(named_sum("hcirc2", 2), -0.5);
  CHECK_FALSE(sums_equal_numeric(named_sum("K", 2), rhs, 50, 1e-8, 2, 2, rng));
  CHECK_FALSE(sums_equal_numeric(named_sum("H2", 2), named_sum("hcirc2", 2), 50, 1e-8, 2, 2, rng));
  CHECK(sums_equal_numeric(named_sum("K", 2), named_sum("K", 2), 50, 1e-12, 2, 2, rng));
}

TEST_CASE("evaluation is linear in each factor tensor") {
  SplitMix64 rng(4242);
  PointFrame f = random_algebra_frame(2, 1, rng);
  const ContractionTerm kterm = parse_term("g-1(a,c) g-1(b,d) R(a,b,c,d)");
  const double base = evaluate_term(kterm, f);
  PointFrame f3 = f;
  f3.R *= 3.0;
  CHECK(evaluate_term(kterm, f3) == doctest::Approx(3.0 * base).epsilon(1e-12));

  const ContractionTerm hterm = parse_term("g-1(a,c) g-1(b,d) ho(a,b) ho(c,d)");
  const double hbase = evaluate_term(hterm, f);
  PointFrame f2 = f;
  for (auto& hc : f2.hcirc) hc *= 2.0;
  CHECK(evaluate_term(hterm, f2) == doctest::Approx(4.0 * hbase).epsilon(1e-12));
}

TEST_CASE("sums parse, merge and report a uniform weight") {
  ContractionSum s = parse_sum("g-1(a,b) Hg(a,b) g-1(c,d) Hg(c,d)");
  CHECK(s.entries.size() == 1);
  CHECK(s.uniform_weight() == -2);
  s.add(-1.0, parse_term("Hg(p,q) g-1(p,q) Hg(r,s) g-1(r,s)"));
  CHECK(s.entries.empty());

  ContractionSum mixed = parse_sum("g-1(a,c) g-1(b,d) R(a,b,c,d)");
  mixed.add(1.0, parse_term("g-1(a,b) Hg(a,b)"));
  CHECK_THROWS_AS(mixed.uniform_weight(), InputError);
  CHECK_THROWS_AS(ContractionSum{}.uniform_weight(), InputError);

  const ContractionSum withCoeff = parse_sum(
      "2 * g-1(a,b) Hg(a,b) g-1(c,d) Hg(c,d) - 0.5 * g-1(a,c) g-1(b,d) ho(a,b) ho(c,d)");
  CHECK(withCoeff.entries.size() == 2);
  SplitMix64 rng(5);
  const PointFrame f = random_algebra_frame(2, 1, rng);
  const double direct = 2.0 * evaluate_term(parse_term("g-1(a,b) Hg(a,b) g-1(c,d) Hg(c,d)"), f) -
                        0.5 * evaluate_term(parse_term("g-1(a,c) g-1(b,d) ho(a,b) ho(c,d)"), f);
  CHECK(evaluate_sum(withCoeff, f) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("malformed terms are rejected") {
  CHECK_THROWS_AS(parse_term("g-1(a,b) R(a,b,c,d)"), InputError);        // c,d unmatched
  CHECK_THROWS_AS(parse_term("g-1(a,b) ho(a,b) ho(a,b)"), InputError);   // letter used 3x
  CHECK_THROWS_AS(parse_term("g-1(a,p) Rperp(a,b,p,q) g-1(b,q)"), InputError);  // mixed sorts
  CHECK_THROWS_AS(parse_term("R(a,b,c)"), InputError);                   // arity
  CHECK_THROWS_AS(parse_term("frob(a,b)"), InputError);                  // unknown factor
  CHECK_THROWS_AS(named_sum("nope", 2), InputError);
}

}  // TEST_SUITE
