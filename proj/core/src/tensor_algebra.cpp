#include "confinv/tensor_algebra.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace confinv {

namespace {

constexpr int kNumKinds = 6;

struct KindInfo {
  const char* name;
  int arity;
  bool inverse;
  bool htype;
  int declared;
  // true per slot that is normal-sorted
  std::array<bool, 4> normal;
};

const KindInfo kKinds[kNumKinds] = {
    {"g-1", 2, true, false, -2, {false, false, false, false}},
    {"gbar-1", 2, true, false, -2, {true, true, false, false}},
    {"R", 4, false, false, 2, {false, false, false, false}},
    {"Rperp", 4, false, false, 2, {false, false, true, true}},
    {"ho", 2, false, true, 1, {false, false, false, false}},
    {"Hg", 2, false, true, 1, {false, false, false, false}},
};

const KindInfo& info(FactorKind k) { return kKinds[int(k)]; }

// sign-free slot symmetries, each entry maps old local slot -> new local slot
const std::vector<std::array<int, 4>>& sym_group(FactorKind k) {
  static const std::vector<std::array<int, 4>> sym2 = {{0, 1, 2, 3}, {1, 0, 2, 3}};
  static const std::vector<std::array<int, 4>> klein = {
      {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const std::vector<std::array<int, 4>> dswap = {{0, 1, 2, 3}, {1, 0, 3, 2}};
  switch (k) {
    case FactorKind::Riemann: return klein;
    case FactorKind::NormalCurv: return dswap;
    default: return sym2;
  }
}

} // namespace

int factor_arity(FactorKind k) { return info(k).arity; }
bool factor_is_inverse(FactorKind k) { return info(k).inverse; }
bool factor_is_htype(FactorKind k) { return info(k).htype; }
bool slot_is_normal(FactorKind k, int local_slot) { return info(k).normal[size_t(local_slot)]; }
int declared_weight(FactorKind k) { return info(k).declared; }
const char* factor_name(FactorKind k) { return info(k).name; }

int ContractionTerm::num_slots() const {
  int s = 0;
  for (auto k : factors) s += factor_arity(k);
  return s;
}

int ContractionTerm::slot_offset(int factor_index) const {
  int s = 0;
  for (int f = 0; f < factor_index; ++f) s += factor_arity(factors[size_t(f)]);
  return s;
}

std::pair<int, int> ContractionTerm::locate(int slot) const {
  int off = 0;
  for (size_t f = 0; f < factors.size(); ++f) {
    const int a = factor_arity(factors[f]);
    if (slot < off + a) return {int(f), slot - off};
    off += a;
  }
  throw InputError("slot id out of range");
}

void ContractionTerm::validate() const {
  const int S = num_slots();
  std::vector<int> seen(size_t(S), 0);
  for (auto& [a, b] : pairs) {
    if (a < 0 || a >= S || b < 0 || b >= S || a == b)
      throw InputError("contraction pair out of range");
    seen[size_t(a)] += 1;
    seen[size_t(b)] += 1;
    const auto [fa, la] = locate(a);
    const auto [fb, lb] = locate(b);
    const bool na = slot_is_normal(factors[size_t(fa)], la);
    const bool nb = slot_is_normal(factors[size_t(fb)], lb);
    if (na != nb) throw InputError("contraction mixes tangent and normal slots");
  }
  for (int s = 0; s < S; ++s)
    if (seen[size_t(s)] != 1)
      throw InputError("every slot must appear in exactly one contraction pair");
}

int weight(const ContractionTerm& t) {
  int w = 0;
  for (auto k : t.factors) w += declared_weight(k);
  for (auto& [a, b] : t.pairs) {
    const auto [fa, la] = t.locate(a);
    const auto [fb, lb] = t.locate(b);
    const bool ua = factor_is_inverse(t.factors[size_t(fa)]);
    const bool ub = factor_is_inverse(t.factors[size_t(fb)]);
    if (ua && ub) w += 2;
    if (!ua && !ub) w -= 2;
  }
  return w;
}

namespace {

struct CanonSearch {
  const ContractionTerm& t;
  int nf, S;
  std::vector<int> order;        // sorted position -> original factor index
  std::vector<int> new_offset;   // per sorted position
  std::vector<int> orig_offset;  // per original factor index
  std::vector<std::pair<int, int>> blocks;  // [begin, end) ranges of equal kind
  std::vector<int> partner_orig;            // original slot -> partner slot

  std::vector<int> best;          // best partner encoding found
  std::vector<int> best_order;    // factor assignment achieving it
  std::vector<int> best_sym;      // symmetry element per sorted position

  std::vector<int> slot_map;  // original slot -> new slot (work buffer)
  std::vector<int> cur;       // work encoding

  explicit CanonSearch(const ContractionTerm& term) : t(term) {
    nf = int(t.factors.size());
    S = t.num_slots();
    order.resize(size_t(nf));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return t.factors[size_t(a)] < t.factors[size_t(b)];
    });
    new_offset.resize(size_t(nf));
    int off = 0;
    for (int p = 0; p < nf; ++p) {
      new_offset[size_t(p)] = off;
      off += factor_arity(t.factors[size_t(order[size_t(p)])]);
    }
    orig_offset.resize(size_t(nf));
    for (int f = 0; f < nf; ++f) orig_offset[size_t(f)] = t.slot_offset(f);
    int b = 0;
    while (b < nf) {
      int e = b;
      while (e < nf &&
             t.factors[size_t(order[size_t(e)])] == t.factors[size_t(order[size_t(b)])])
        ++e;
      blocks.push_back({b, e});
      b = e;
    }
    partner_orig.assign(size_t(S), -1);
    for (auto& [x, y] : t.pairs) {
      partner_orig[size_t(x)] = y;
      partner_orig[size_t(y)] = x;
    }
    slot_map.resize(size_t(S));
    cur.resize(size_t(S));
  }

  void try_current(std::vector<int>& sym_choice) {
    // recurse over symmetry elements per sorted position
    sym_rec(0, sym_choice);
  }

  void sym_rec(int p, std::vector<int>& sym_choice) {
    if (p == nf) {
      emit(sym_choice);
      return;
    }
    const FactorKind k = t.factors[size_t(order[size_t(p)])];
    const auto& G = sym_group(k);
    for (int s = 0; s < int(G.size()); ++s) {
      sym_choice[size_t(p)] = s;
      sym_rec(p + 1, sym_choice);
    }
  }

  void emit(const std::vector<int>& sym_choice) {
    for (int p = 0; p < nf; ++p) {
      const int f = order[size_t(p)];
      const FactorKind k = t.factors[size_t(f)];
      const auto& perm = sym_group(k)[size_t(sym_choice[size_t(p)])];
      const int a = factor_arity(k);
      for (int l = 0; l < a; ++l)
        slot_map[size_t(orig_offset[size_t(f)] + l)] = new_offset[size_t(p)] + perm[size_t(l)];
    }
    for (int s = 0; s < S; ++s)
      cur[size_t(slot_map[size_t(s)])] = slot_map[size_t(partner_orig[size_t(s)])];
    if (best.empty() || cur < best) {
      best = cur;
      best_order = order;
      best_sym = sym_choice;
    }
  }

  void block_rec(size_t bi, std::vector<int>& sym_choice) {
    if (bi == blocks.size()) {
      try_current(sym_choice);
      return;
    }
    auto [b, e] = blocks[bi];
    std::sort(order.begin() + b, order.begin() + e);
    do {
      block_rec(bi + 1, sym_choice);
    } while (std::next_permutation(order.begin() + b, order.begin() + e));
  }

  ContractionTerm run() {
    std::vector<int> sym_choice(size_t(nf), 0);
    block_rec(0, sym_choice);
    ContractionTerm out;
    out.factors.resize(size_t(nf));
    for (int p = 0; p < nf; ++p)
      out.factors[size_t(p)] = t.factors[size_t(best_order[size_t(p)])];
    for (int s = 0; s < S; ++s)
      if (s < best[size_t(s)]) out.pairs.push_back({s, best[size_t(s)]});
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
  }
};

} // namespace

ContractionTerm canonical_form(const ContractionTerm& t) {
  t.validate();
  if (t.factors.empty()) return t;
  return CanonSearch(t).run();
}

std::string canonical_key(const ContractionTerm& t) {
  const ContractionTerm c = canonical_form(t);
  std::ostringstream os;
  for (auto k : c.factors) os << factor_name(k) << ";";
  os << "|";
  for (auto& [a, b] : c.pairs) os << a << "," << b << ";";
  return os.str();
}

namespace {

std::string pair_letter(int i) {
  if (i < 26) return std::string(1, char('a' + i));
  return "i" + std::to_string(i);
}

} // namespace

std::string format_term(const ContractionTerm& t) {
  const int S = t.num_slots();
  std::vector<int> pair_id(size_t(S), -1);
  for (size_t p = 0; p < t.pairs.size(); ++p) {
    pair_id[size_t(t.pairs[p].first)] = int(p);
    pair_id[size_t(t.pairs[p].second)] = int(p);
  }
  std::vector<int> letter_of_pair(t.pairs.size(), -1);
  int next = 0;
  for (int s = 0; s < S; ++s) {
    const int p = pair_id[size_t(s)];
    if (p >= 0 && letter_of_pair[size_t(p)] < 0) letter_of_pair[size_t(p)] = next++;
  }
  std::ostringstream os;
  int off = 0;
  for (size_t f = 0; f < t.factors.size(); ++f) {
    if (f) os << " ";
    os << factor_name(t.factors[f]) << "(";
    const int a = factor_arity(t.factors[f]);
    for (int l = 0; l < a; ++l) {
      if (l) os << ",";
      os << pair_letter(letter_of_pair[size_t(pair_id[size_t(off + l)])]);
    }
    os << ")";
    off += a;
  }
  return os.str();
}

ContractionTerm parse_term(const std::string& text) {
  ContractionTerm t;
  std::vector<std::string> slot_letters;
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  while (pos < text.size()) {
    size_t open = text.find('(', pos);
    if (open == std::string::npos)
      throw InputError("expected '(' after factor name in term: " + text);
    std::string name = text.substr(pos, open - pos);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
      name.pop_back();
    int kind = -1;
    for (int k = 0; k < kNumKinds; ++k)
      if (name == kKinds[k].name) kind = k;
    if (kind < 0) throw InputError("unknown factor '" + name + "' in term: " + text);
    t.factors.push_back(FactorKind(kind));
    pos = open + 1;
    int got = 0;
    for (;;) {
      skip_ws();
      size_t b = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      if (pos == b) throw InputError("expected index name in term: " + text);
      slot_letters.push_back(text.substr(b, pos - b));
      ++got;
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        break;
      }
      throw InputError("expected ',' or ')' in term: " + text);
    }
    if (got != factor_arity(t.factors.back()))
      throw InputError(std::string("factor ") + name + " takes " +
                       std::to_string(factor_arity(t.factors.back())) +
                       " indices in term: " + text);
    skip_ws();
  }
  std::map<std::string, std::vector<int>> where;
  for (size_t s = 0; s < slot_letters.size(); ++s)
    where[slot_letters[s]].push_back(int(s));
  for (auto& [letter, slots] : where) {
    if (slots.size() != 2)
      throw InputError("index '" + letter + "' must appear exactly twice in term: " + text);
    t.pairs.push_back({slots[0], slots[1]});
  }
  std::sort(t.pairs.begin(), t.pairs.end());
  t.validate();
  return t;
}

ContractionSum& ContractionSum::add(double coeff, const ContractionTerm& term) {
  const ContractionTerm c = canonical_form(term);
  const std::string key = canonical_key(c);
  for (size_t i = 0; i < entries.size(); ++i) {
    if (canonical_key(entries[i].term) == key) {
      entries[i].coeff += coeff;
      if (std::abs(entries[i].coeff) <= 1e-12) entries.erase(entries.begin() + long(i));
      return *this;
    }
  }
  if (std::abs(coeff) > 1e-12) entries.push_back({coeff, c});
  return *this;
}

ContractionSum& ContractionSum::add(const ContractionSum& other, double scale) {
  for (auto& e : other.entries) add(scale * e.coeff, e.term);
  return *this;
}

int ContractionSum::uniform_weight() const {
  if (entries.empty()) throw InputError("empty contraction sum has no weight");
  const int w = weight(entries[0].term);
  for (auto& e : entries)
    if (weight(e.term) != w) throw InputError("contraction sum mixes weights");
  return w;
}

ContractionSum parse_sum(const std::string& text) {
  ContractionSum sum;
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos == text.size()) throw InputError("empty contraction sum");
  bool first = true;
  while (pos < text.size()) {
    double sign = 1.0;
    skip_ws();
    if (!first || text[pos] == '+' || text[pos] == '-') {
      if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-')) {
        if (!first) throw InputError("expected '+' or '-' between addends: " + text);
      } else {
        sign = text[pos] == '-' ? -1.0 : 1.0;
        ++pos;
      }
    }
    first = false;
    skip_ws();
    double coeff = 1.0;
    if (pos < text.size() &&
        (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
      const char* start = text.c_str() + pos;
      char* end = nullptr;
      coeff = std::strtod(start, &end);
      if (end == start) throw InputError("malformed coefficient in sum: " + text);
      pos += size_t(end - start);
      skip_ws();
      if (pos >= text.size() || text[pos] != '*')
        throw InputError("expected '*' after coefficient in sum: " + text);
      ++pos;
      skip_ws();
    }
    // a term runs until a top-level '+'/'-' that follows a closed factor
    size_t term_begin = pos;
    int depth = 0;
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '(') ++depth;
      else if (c == ')') --depth;
      else if ((c == '+' || c == '-') && depth == 0) {
        // '-' inside a factor name is always followed immediately by "1("
        if (c == '-' && pos + 2 < text.size() && text[pos + 1] == '1' &&
            text[pos + 2] == '(') {
          ++pos;
          continue;
        }
        break;
      }
      ++pos;
    }
    sum.add(sign * coeff, parse_term(text.substr(term_begin, pos - term_begin)));
  }
  if (sum.entries.empty()) throw InputError("contraction sum cancels to zero: " + text);
  return sum;
}

ContractionSum named_sum(const std::string& name, int m) {
  ContractionSum s;
  if (name == "K") {
    s.add(0.5, parse_term("g-1(a,c) g-1(b,d) R(a,b,c,d)"));
  } else if (name == "hcirc2") {
    s.add(1.0, parse_term("g-1(a,c) g-1(b,d) ho(a,b) ho(c,d)"));
  } else if (name == "H2") {
    s.add(1.0 / double(m * m), parse_term("g-1(a,b) Hg(a,b) g-1(c,d) Hg(c,d)"));
  } else if (name == "conformal_willmore") {
    s.add(named_sum("hcirc2", m), 0.5);
    s.add(named_sum("K", m), 1.0);
  } else {
    throw InputError("unknown named sum '" + name +
                     "' (expected K, hcirc2, H2 or conformal_willmore)");
  }
  return s;
}

std::string format_sum(const ContractionSum& s) {
  std::ostringstream os;
  for (size_t i = 0; i < s.entries.size(); ++i) {
    if (i) os << " + ";
    os << s.entries[i].coeff << " * " << format_term(s.entries[i].term);
  }
  return os.str();
}

namespace {

struct EvalPlan {
  struct SlotRef {
    int axis;
  };
  std::vector<int> ranges;                  // per axis
  std::vector<SlotRef> slots;               // per global slot
  std::vector<int> hidden_axis;             // per factor, -1 if none
  std::vector<std::array<int, 3>> metrics;  // (kind: 0 raise, 1 lower, axisA, axisB)
};

} // namespace

double evaluate_term(const ContractionTerm& t, const PointFrame& fr) {
  t.validate();
  const int m = fr.m, cd = fr.codim;
  if (m < 1 || cd < 1) throw InputError("frame is not initialized");
  for (auto k : t.factors)
    if (cd == 1 && (k == FactorKind::NormalCurv || k == FactorKind::MetricInvNormal))
      throw InputError("Rperp and gbar-1 factors need codimension >= 2");

  EvalPlan plan;
  plan.slots.resize(size_t(t.num_slots()));
  plan.hidden_axis.assign(t.factors.size(), -1);

  auto new_axis = [&](int range) {
    plan.ranges.push_back(range);
    return int(plan.ranges.size()) - 1;
  };

  for (auto& [a, b] : t.pairs) {
    const auto [fa, la] = t.locate(a);
    const auto [fb, lb] = t.locate(b);
    const bool normal = slot_is_normal(t.factors[size_t(fa)], la);
    const bool ua = factor_is_inverse(t.factors[size_t(fa)]);
    const bool ub = factor_is_inverse(t.factors[size_t(fb)]);
    if (normal || ua != ub) {
      // direct identification; normal pairs contract through the orthonormal
      // frame regardless of variance
      const int ax = new_axis(normal ? cd : m);
      plan.slots[size_t(a)].axis = ax;
      plan.slots[size_t(b)].axis = ax;
    } else {
      const int axA = new_axis(m);
      const int axB = new_axis(m);
      plan.slots[size_t(a)].axis = axA;
      plan.slots[size_t(b)].axis = axB;
      plan.metrics.push_back({ua ? 1 : 0, axA, axB});
    }
  }

  // implicit normal-bundle indices of h-type factors, paired consecutively
  {
    int open_axis = -1;
    int htype_count = 0;
    for (size_t f = 0; f < t.factors.size(); ++f) {
      if (!factor_is_htype(t.factors[f])) continue;
      ++htype_count;
      if (open_axis < 0) {
        open_axis = new_axis(cd);
        plan.hidden_axis[f] = open_axis;
      } else {
        plan.hidden_axis[f] = open_axis;
        open_axis = -1;
      }
    }
    if (open_axis >= 0 && cd > 1)
      throw NumericError("odd number of h-type factors is not scalar-valued in codim " +
                         std::to_string(cd));
    (void)htype_count;
  }

  double total_assignments = 1.0;
  for (int r : plan.ranges) total_assignments *= r;
  if (total_assignments > double(1 << 26))
    throw NumericError("contraction too large to evaluate by direct summation");

  const int naxes = int(plan.ranges.size());
  std::vector<int> idx(size_t(naxes), 0);
  double sum = 0.0;
  for (;;) {
    double prod = 1.0;
    for (auto& mt : plan.metrics) {
      const int i = idx[size_t(mt[1])], j = idx[size_t(mt[2])];
      prod *= (mt[0] == 0) ? fr.ginv(i, j) : fr.g(i, j);
    }
    int off = 0;
    for (size_t f = 0; f < t.factors.size() && prod != 0.0; ++f) {
      const FactorKind k = t.factors[f];
      const int a = factor_arity(k);
      int s0 = idx[size_t(plan.slots[size_t(off)].axis)];
      int s1 = a > 1 ? idx[size_t(plan.slots[size_t(off + 1)].axis)] : 0;
      switch (k) {
        case FactorKind::MetricInvTangent: prod *= fr.ginv(s0, s1); break;
        case FactorKind::MetricInvNormal: prod *= (s0 == s1) ? 1.0 : 0.0; break;
        case FactorKind::Riemann: {
          const int s2 = idx[size_t(plan.slots[size_t(off + 2)].axis)];
          const int s3 = idx[size_t(plan.slots[size_t(off + 3)].axis)];
          prod *= fr.R(s0, s1, s2, s3);
          break;
        }
        case FactorKind::NormalCurv: {
          const int s2 = idx[size_t(plan.slots[size_t(off + 2)].axis)];
          const int s3 = idx[size_t(plan.slots[size_t(off + 3)].axis)];
          prod *= fr.Rperp(s0, s1, s2, s3);
          break;
        }
        case FactorKind::TracelessH: {
          const int al = plan.hidden_axis[f] >= 0 ? idx[size_t(plan.hidden_axis[f])] : 0;
          prod *= fr.hcirc[size_t(al)](s0, s1);
          break;
        }
        case FactorKind::MeanHMetric: {
          const int al = plan.hidden_axis[f] >= 0 ? idx[size_t(plan.hidden_axis[f])] : 0;
          prod *= fr.H[al] * fr.g(s0, s1);
          break;
        }
      }
      off += a;
    }
    sum += prod;

    int ax = 0;
    while (ax < naxes) {
      if (++idx[size_t(ax)] < plan.ranges[size_t(ax)]) break;
      idx[size_t(ax)] = 0;
      ++ax;
    }
    if (ax == naxes) break;
    if (naxes == 0) break;
  }
  return sum;
}

double evaluate_sum(const ContractionSum& s, const PointFrame& f) {
  double v = 0.0;
  for (auto& e : s.entries) v += e.coeff * evaluate_term(e.term, f);
  return v;
}

namespace {

// perfect matchings on `slots`, invoking cb(pairs) for each
void matchings(std::vector<int>& slots, std::vector<std::pair<int, int>>& acc,
               const std::function<void(const std::vector<std::pair<int, int>>&)>& cb) {
  if (slots.empty()) {
    cb(acc);
    return;
  }
  const int first = slots[0];
  for (size_t j = 1; j < slots.size(); ++j) {
    const int other = slots[j];
    std::vector<int> rest;
    rest.reserve(slots.size() - 2);
    for (size_t k = 1; k < slots.size(); ++k)
      if (k != j) rest.push_back(slots[k]);
    acc.push_back({first, other});
    matchings(rest, acc, cb);
    acc.pop_back();
  }
}

} // namespace

std::vector<ContractionTerm> enumerate_terms(int target_weight, int m, int codim) {
  if (m != 2 && m != 4) throw InputError("enumerate_terms: m must be 2 or 4");
  if (codim != 1 && codim != 2) throw InputError("enumerate_terms: codim must be 1 or 2");
  if (target_weight > 0) return {};
  if (target_weight == 0) return {ContractionTerm{}};

  const int w = -target_weight;
  std::map<std::string, ContractionTerm> found;

  // base multiset (r, rp, nho, nhg): 2r + 2rp + nho + nhg = w
  for (int r = 0; 2 * r <= w; ++r) {
    for (int rp = 0; 2 * r + 2 * rp <= w; ++rp) {
      if (codim == 1 && rp > 0) continue;
      for (int nho = 0; 2 * r + 2 * rp + nho <= w; ++nho) {
        const int nhg = w - 2 * r - 2 * rp - nho;
        if (codim >= 2 && (nho + nhg) % 2 != 0) continue;

        std::vector<FactorKind> base;
        for (int i = 0; i < r; ++i) base.push_back(FactorKind::Riemann);
        for (int i = 0; i < rp; ++i) base.push_back(FactorKind::NormalCurv);
        for (int i = 0; i < nho; ++i) base.push_back(FactorKind::TracelessH);
        for (int i = 0; i < nhg; ++i) base.push_back(FactorKind::MeanHMetric);

        // collect lower slots by sort, in the base-only slot numbering
        std::vector<int> tslots, nslots;
        {
          int off = 0;
          for (auto k : base) {
            for (int l = 0; l < factor_arity(k); ++l)
              (slot_is_normal(k, l) ? nslots : tslots).push_back(off + l);
            off += factor_arity(k);
          }
        }

        const int base_slots = int(tslots.size() + nslots.size());
        const int n_ginv = int(tslots.size()) / 2;

        std::vector<std::pair<int, int>> tacc, nacc;
        std::vector<int> ts = tslots;
        matchings(ts, tacc, [&](const std::vector<std::pair<int, int>>& tm) {
          std::vector<int> ns = nslots;
          std::vector<std::pair<int, int>> nacc2;
          matchings(ns, nacc2, [&](const std::vector<std::pair<int, int>>& nm) {
            ContractionTerm t;
            t.factors = base;
            for (size_t i = 0; i < tm.size(); ++i) t.factors.push_back(FactorKind::MetricInvTangent);
            for (size_t i = 0; i < nm.size(); ++i) t.factors.push_back(FactorKind::MetricInvNormal);
            // bridge each lower pair through its own inverse-metric factor
            for (size_t i = 0; i < tm.size(); ++i) {
              const int ga = base_slots + 2 * int(i);
              t.pairs.push_back({std::min(ga, tm[i].first), std::max(ga, tm[i].first)});
              t.pairs.push_back({std::min(ga + 1, tm[i].second), std::max(ga + 1, tm[i].second)});
            }
            for (size_t i = 0; i < nm.size(); ++i) {
              const int ga = base_slots + 2 * n_ginv + 2 * int(i);
              t.pairs.push_back({std::min(ga, nm[i].first), std::max(ga, nm[i].first)});
              t.pairs.push_back({std::min(ga + 1, nm[i].second), std::max(ga + 1, nm[i].second)});
            }
            std::sort(t.pairs.begin(), t.pairs.end());
            const ContractionTerm c = canonical_form(t);
            found.emplace(canonical_key(c), c);
          });
        });
      }
    }
  }

  std::vector<ContractionTerm> out;
  out.reserve(found.size());
  for (auto& [key, term] : found) out.push_back(term);
  return out;
}

PointFrame random_algebra_frame(int m, int codim, SplitMix64& rng) {
  PointFrame f;
  f.m = m;
  f.codim = codim;
  f.n = m + codim;

  Eigen::MatrixXd A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = rng.uniform(-1.0, 1.0);
  f.g = Eigen::MatrixXd::Identity(m, m) + 0.1 * 0.5 * (A + A.transpose());
  f.ginv = f.g.inverse();
  f.sqrt_det_g = std::sqrt(f.g.determinant());

  f.H.resize(codim);
  for (int a = 0; a < codim; ++a) {
    Eigen::MatrixXd S(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) S(i, j) = rng.uniform(-1.0, 1.0);
    S = 0.5 * (S + S.transpose()).eval();
    const double tr = (f.ginv.array() * S.array()).sum();
    S -= (tr / double(m)) * f.g;
    f.hcirc.push_back(S);
    f.H[a] = rng.uniform(-1.0, 1.0);
    f.h.push_back(S + f.H[a] * f.g);
  }

  f.R.resize(m, m, m, m);
  {
    Tensor4 Araw;
    Araw.resize(m, m, m, m);
    for (auto& x : Araw.v) x = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            f.R(i, j, k, l) = 0.25 * (Araw(i, j, k, l) - Araw(j, i, k, l) -
                                      Araw(i, j, l, k) + Araw(j, i, l, k));
    Tensor4 tmp = f.R;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            f.R(i, j, k, l) = 0.5 * (tmp(i, j, k, l) + tmp(k, l, i, j));
  }

  if (codim >= 2) {
    f.Rperp.resize(m, m, codim, codim);
    Tensor4 B;
    B.resize(m, m, codim, codim);
    for (auto& x : B.v) x = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int a = 0; a < codim; ++a)
          for (int b = 0; b < codim; ++b)
            f.Rperp(i, j, a, b) = 0.25 * (B(i, j, a, b) - B(j, i, a, b) -
                                          B(i, j, b, a) + B(j, i, b, a));
  }
  return f;
}

bool sums_equal_numeric(const ContractionSum& A, const ContractionSum& B, int trials,
                        double tol, int m, int codim, SplitMix64& rng) {
  for (int t = 0; t < trials; ++t) {
    const PointFrame f = random_algebra_frame(m, codim, rng);
    const double a = evaluate_sum(A, f);
    const double b = evaluate_sum(B, f);
    if (std::abs(a - b) > tol * (1.0 + std::abs(a) + std::abs(b))) return false;
  }
  return true;
}

bool sums_equal_numeric(const ContractionSum& A, const ContractionSum& B,
                        const std::vector<PointFrame>& frames, double tol) {
  for (auto& f : frames) {
    const double a = evaluate_sum(A, f);
    const double b = evaluate_sum(B, f);
    if (std::abs(a - b) > tol * (1.0 + std::abs(a) + std::abs(b))) return false;
  }
  return true;
}

} // namespace confinv
