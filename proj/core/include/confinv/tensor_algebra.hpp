#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "confinv/frame.hpp"
#include "confinv/rng.hpp"

namespace confinv {

// Factor alphabet of the contraction algebra. Metric inverses carry upper
// slots, everything else lower slots. TracelessH and MeanHMetric expose two
// tangent slots; their normal-bundle index stays implicit and is summed over
// consecutive pairs of such factors at evaluation time.
enum class FactorKind : std::uint8_t {
  MetricInvTangent = 0,  // g-1
  MetricInvNormal = 1,   // gbar-1, normal block
  Riemann = 2,           // R, four tangent slots
  NormalCurv = 3,        // Rperp, two tangent then two normal slots
  TracelessH = 4,        // ho
  MeanHMetric = 5,       // Hg
};

int factor_arity(FactorKind k);
bool factor_is_inverse(FactorKind k);
bool factor_is_htype(FactorKind k);
bool slot_is_normal(FactorKind k, int local_slot);
int declared_weight(FactorKind k);
const char* factor_name(FactorKind k);

// A complete contraction: a factor list plus a perfect matching on the global
// slots (factor f occupies slots offset(f) .. offset(f)+arity-1). Pairs may
// join any two slots of equal sort; a pair of two lower slots contracts
// through the metric, two upper slots through its inverse.
struct ContractionTerm {
  std::vector<FactorKind> factors;
  std::vector<std::pair<int, int>> pairs;

  int num_slots() const;
  int slot_offset(int factor_index) const;
  // factor index and local slot of a global slot id
  std::pair<int, int> locate(int slot) const;
  void validate() const;  // throws InputError if malformed or mixed-sort
};

// Scaling exponent under gbar -> t^2 gbar: the sum of declared factor weights
// plus -2 per direct lower-lower pair and +2 per upper-upper pair (those
// pairs hide a metric contraction of their own). Depends only on the factor
// multiset: equivalently -2 #Riemann-type - #h-type.
int weight(const ContractionTerm& t);

// Lexicographically minimal representative over reorderings of equal factors
// and the sign-free slot symmetries of each factor kind (swap for symmetric
// 2-slot factors, the Klein group of pair swaps for Riemann, the simultaneous
// double swap for NormalCurv).
ContractionTerm canonical_form(const ContractionTerm& t);
std::string canonical_key(const ContractionTerm& t);

std::string format_term(const ContractionTerm& t);
// Inverse of format_term: "g-1(a,b) ho(a,c) ..." with every index letter
// appearing exactly twice.
ContractionTerm parse_term(const std::string& text);

struct ContractionSum {
  struct Entry {
    double coeff;
    ContractionTerm term;
  };
  std::vector<Entry> entries;

  // canonicalizes, merges equal terms, drops coefficients below 1e-12
  ContractionSum& add(double coeff, const ContractionTerm& term);
  ContractionSum& add(const ContractionSum& other, double scale = 1.0);
  // common weight of all entries; throws InputError when mixed or empty
  int uniform_weight() const;
};

// "coeff * factors + coeff * factors - ..." (coefficients optional)
ContractionSum parse_sum(const std::string& text);
// K, hcirc2, H2, conformal_willmore; constants depend on the surface dimension
ContractionSum named_sum(const std::string& name, int m);
std::string format_sum(const ContractionSum& s);

// Fully contracted scalar on a frame. Tangent slots contract through
// g/ginv, normal slots through the orthonormal normal frame.
double evaluate_term(const ContractionTerm& t, const PointFrame& f);
double evaluate_sum(const ContractionSum& s, const PointFrame& f);

// All candidate classes of the given weight, in explicit-metric normal form:
// every lower slot pairs with a metric-inverse slot of its sort. Deduplicated
// by canonical form, sorted by canonical key. codim 1 excludes NormalCurv and
// gbar-1; codim 2 keeps the h-type factor count even. The list does not
// depend on m beyond validation.
std::vector<ContractionTerm> enumerate_terms(int target_weight, int m, int codim);

// Synthetic frame with the right symmetries (g SPD, h-type g-traceless where
// due, curvature factors with their pair symmetries); algebra fields only.
PointFrame random_algebra_frame(int m, int codim, SplitMix64& rng);

// |A - B| <= tol * (1 + |A| + |B|) on every trial frame
bool sums_equal_numeric(const ContractionSum& A, const ContractionSum& B, int trials,
                        double tol, int m, int codim, SplitMix64& rng);
bool sums_equal_numeric(const ContractionSum& A, const ContractionSum& B,
                        const std::vector<PointFrame>& frames, double tol);

} // namespace confinv
