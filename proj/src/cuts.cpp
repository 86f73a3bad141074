#include "boxqp/cuts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "catalog_tables.hpp"

namespace boxqp {

namespace {

constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

}  // namespace

std::string_view family_name(CutFamily family) {
  switch (family) {
    case CutFamily::kDiag: return "DIAG";
    case CutFamily::kRlt: return "RLT";
    case CutFamily::kTri: return "TRI";
    case CutFamily::kEtri1: return "ETRI1";
    case CutFamily::kEtri2: return "ETRI2";
    case CutFamily::kEtri3: return "ETRI3";
    case CutFamily::kSimplex: return "SIMPLEX";
  }
  return "?";
}

CutFamily parse_family(std::string_view name) {
  for (CutFamily f : {CutFamily::kDiag, CutFamily::kRlt, CutFamily::kTri, CutFamily::kEtri1,
                      CutFamily::kEtri2, CutFamily::kEtri3, CutFamily::kSimplex}) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == family_name(f)) return f;
  }
  throw std::invalid_argument("unknown cut family '" + std::string(name) + "'");
}

const std::vector<SwitchPattern>& SwitchPattern::all() {
  static const std::vector<SwitchPattern> patterns = [] {
    std::vector<SwitchPattern> out;
    for (std::uint8_t mask = 0; mask < 8; ++mask) {
      std::array<int, 3> perm{0, 1, 2};
      do {
        out.push_back({mask, perm});
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
  }();
  return patterns;
}

SwitchPattern compose(const SwitchPattern& outer, const SwitchPattern& inner) {
  // P2 F2 P1 F1 = P2 P1 F(P1^-1(S2)) F1, and switchings are involutions.
  SwitchPattern out;
  std::uint8_t pulled = 0;
  for (int a = 0; a < 3; ++a) {
    if (outer.is_switched(inner.perm[a])) pulled |= static_cast<std::uint8_t>(1U << a);
    out.perm[a] = outer.perm[inner.perm[a]];
  }
  out.switched = static_cast<std::uint8_t>(pulled ^ inner.switched);
  return out;
}

int cross_slot(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == 0) return b == 1 ? 0 : 1;
  return 2;
}

std::array<double, 10> LinearCut::coefficients() const {
  return {lin[0],   lin[1],   lin[2],   diag[0],  diag[1],
          diag[2],  cross[0], cross[1], cross[2], constant};
}

LinearCut LinearCut::from_coefficients(const std::array<double, 10>& c, CutFamily family) {
  LinearCut cut;
  cut.lin = {c[0], c[1], c[2]};
  cut.diag = {c[3], c[4], c[5]};
  cut.cross = {c[6], c[7], c[8]};
  cut.constant = c[9];
  cut.family = family;
  return cut;
}

LinearCut LinearCut::on(const Triple& t) const {
  LinearCut out = *this;
  out.index = t.as_array();
  out.arity = 3;
  return out;
}

LinearCut LinearCut::restricted(std::array<int, 3> idx, int new_arity) const {
  for (int a = new_arity; a < 3; ++a) {
    if (lin[a] != 0.0 || diag[a] != 0.0) throw std::invalid_argument("cut uses a dropped position");
  }
  for (int s = 0; s < 3; ++s) {
    if (kPairs[s][1] >= new_arity && cross[s] != 0.0) {
      throw std::invalid_argument("cut uses a dropped pair");
    }
  }
  LinearCut out = *this;
  out.index = idx;
  out.arity = new_arity;
  return out;
}

bool LinearCut::same_coefficients(const LinearCut& other) const {
  return coefficients() == other.coefficients();
}

LinearCut apply_switch(const LinearCut& cut, const SwitchPattern& pattern) {
  LinearCut sw = cut;
  sw.lin = {};
  sw.diag = {};
  sw.cross = {};
  sw.constant = cut.constant;
  for (int a = 0; a < 3; ++a) {
    const bool s = pattern.is_switched(a);
    // x_a -> 1 - x_a
    if (s) {
      sw.constant += cut.lin[a];
      sw.lin[a] -= cut.lin[a];
    } else {
      sw.lin[a] += cut.lin[a];
    }
    // X_aa -> 1 - 2 x_a + X_aa
    if (s) {
      sw.constant += cut.diag[a];
      sw.lin[a] -= 2.0 * cut.diag[a];
    }
    sw.diag[a] += cut.diag[a];
  }
  for (int slot = 0; slot < 3; ++slot) {
    const double e = cut.cross[slot];
    const int a = kPairs[slot][0];
    const int b = kPairs[slot][1];
    const bool sa = pattern.is_switched(a);
    const bool sb = pattern.is_switched(b);
    if (sa && sb) {  // X_ab -> X_ab + 1 - x_a - x_b
      sw.cross[slot] += e;
      sw.constant += e;
      sw.lin[a] -= e;
      sw.lin[b] -= e;
    } else if (sa) {  // X_ab -> x_b - X_ab
      sw.lin[b] += e;
      sw.cross[slot] -= e;
    } else if (sb) {
      sw.lin[a] += e;
      sw.cross[slot] -= e;
    } else {
      sw.cross[slot] += e;
    }
  }

  LinearCut out = sw;
  for (int a = 0; a < 3; ++a) {
    out.lin[pattern.perm[a]] = sw.lin[a];
    out.diag[pattern.perm[a]] = sw.diag[a];
  }
  for (int slot = 0; slot < 3; ++slot) {
    out.cross[cross_slot(pattern.perm[kPairs[slot][0]], pattern.perm[kPairs[slot][1]])] =
        sw.cross[slot];
  }
  out.tag.pattern = compose(pattern, cut.tag.pattern);
  return out;
}

double evaluate_cut(const LinearCut& cut, const MomentPoint& p) {
  double v = cut.constant;
  for (int a = 0; a < cut.arity; ++a) {
    const int ia = cut.index[a];
    v += cut.lin[a] * p.x[ia] + cut.diag[a] * p.X(ia, ia);
  }
  for (int s = 0; s < 3; ++s) {
    if (kPairs[s][1] >= cut.arity) continue;
    v += cut.cross[s] * p.X(cut.index[kPairs[s][0]], cut.index[kPairs[s][1]]);
  }
  return v;
}

double evaluate_on_lift(const LinearCut& cut, const std::array<double, 3>& x) {
  double v = cut.constant;
  for (int a = 0; a < 3; ++a) v += cut.lin[a] * x[a] + cut.diag[a] * x[a] * x[a];
  for (int s = 0; s < 3; ++s) v += cut.cross[s] * x[kPairs[s][0]] * x[kPairs[s][1]];
  return v;
}

double coefficient_norm(const LinearCut& cut) {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) s += cut.lin[a] * cut.lin[a] + cut.diag[a] * cut.diag[a] +
                                   cut.cross[a] * cut.cross[a];
  return std::sqrt(s);
}

std::array<long long, 10> canonical_key(const LinearCut& cut) {
  std::array<long long, 10> key{};
  const auto c = cut.coefficients();
  long long g = 0;
  for (int t = 0; t < 10; ++t) {
    if (c[t] != std::round(c[t])) throw std::domain_error("cut has non-integral coefficients");
    key[t] = std::llround(c[t]);
    g = std::gcd(g, key[t]);
  }
  if (g > 1) {
    for (auto& v : key) v /= g;
  }
  return key;
}

const std::vector<LinearCut>& base_cuts(CutFamily family) {
  auto make = [](std::initializer_list<std::array<double, 10>> rows, CutFamily f) {
    std::vector<LinearCut> out;
    int base = 0;
    for (const auto& r : rows) {
      LinearCut c = LinearCut::from_coefficients(r, f);
      c.tag.base = base++;
      out.push_back(c);
    }
    return out;
  };
  static const std::vector<LinearCut> diag = make({{1, 0, 0, -1, 0, 0, 0, 0, 0, 0}}, CutFamily::kDiag);
  static const std::vector<LinearCut> rlt = make({{1, 0, 0, 0, 0, 0, -1, 0, 0, 0},
                                                  {0, 1, 0, 0, 0, 0, -1, 0, 0, 0},
                                                  {0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
                                                  {-1, -1, 0, 0, 0, 0, 1, 0, 0, 1}},
                                                 CutFamily::kRlt);
  static const std::vector<LinearCut> tri = make({{1, 0, 0, 0, 0, 0, -1, -1, 1, 0},
                                                  {0, 1, 0, 0, 0, 0, -1, 1, -1, 0},
                                                  {0, 0, 1, 0, 0, 0, 1, -1, -1, 0},
                                                  {-1, -1, -1, 0, 0, 0, 1, 1, 1, 1}},
                                                 CutFamily::kTri);
  static const std::vector<LinearCut> etri1 = make({{2, 0, 0, 1, 0, 0, -2, -2, 1, 0},
                                                    {0, 2, 0, 0, 1, 0, -2, 1, -2, 0},
                                                    {0, 0, 2, 0, 0, 1, 1, -2, -2, 0}},
                                                   CutFamily::kEtri1);
  static const std::vector<LinearCut> etri2 = make({{4, 0, 0, 4, 0, 0, -4, -4, 1, 0},
                                                    {0, 4, 0, 0, 4, 0, -4, 1, -4, 0},
                                                    {0, 0, 4, 0, 0, 4, 1, -4, -4, 0}},
                                                   CutFamily::kEtri2);
  static const std::vector<LinearCut> etri3 = make({{4, 0, 0, 4, 1, 0, -8, -4, 3, 0},
                                                    {4, 0, 0, 4, 0, 1, -4, -8, 3, 0},
                                                    {0, 4, 0, 1, 4, 0, -8, 3, -4, 0},
                                                    {0, 4, 0, 0, 4, 1, -4, 3, -8, 0},
                                                    {0, 0, 4, 1, 0, 4, 3, -8, -4, 0},
                                                    {0, 0, 4, 0, 1, 4, 3, -4, -8, 0}},
                                                   CutFamily::kEtri3);
  static const std::vector<LinearCut> none;
  switch (family) {
    case CutFamily::kDiag: return diag;
    case CutFamily::kRlt: return rlt;
    case CutFamily::kTri: return tri;
    case CutFamily::kEtri1: return etri1;
    case CutFamily::kEtri2: return etri2;
    case CutFamily::kEtri3: return etri3;
    case CutFamily::kSimplex: break;
  }
  return none;
}

namespace {

std::vector<LinearCut> orbit(const std::vector<LinearCut>& bases) {
  std::vector<LinearCut> out;
  std::set<std::array<long long, 10>> seen;
  for (const LinearCut& base : bases) {
    for (const SwitchPattern& p : SwitchPattern::all()) {
      LinearCut c = apply_switch(base, p);
      if (seen.insert(canonical_key(c)).second) out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<LinearCut> generate_family(CutFamily family, const Triple& t) {
  static const auto build = [](CutFamily f) {
    if (f == CutFamily::kRlt) {
      std::vector<LinearCut> out = orbit(base_cuts(CutFamily::kDiag));
      for (LinearCut& c : orbit(base_cuts(CutFamily::kRlt))) out.push_back(c);
      return out;
    }
    return orbit(base_cuts(f));
  };
  static const std::array<std::vector<LinearCut>, 6> canonical = {
      build(CutFamily::kDiag),  build(CutFamily::kRlt),   build(CutFamily::kTri),
      build(CutFamily::kEtri1), build(CutFamily::kEtri2), build(CutFamily::kEtri3)};
  const auto slot = static_cast<std::size_t>(family);
  if (slot >= canonical.size()) throw std::invalid_argument("family has no switching orbit");
  std::vector<LinearCut> out = canonical[slot];
  if (t != Triple{}) {
    for (LinearCut& c : out) c = c.on(t);
  }
  return out;
}

const std::vector<LinearCut>& catalog(CutFamily family) {
  static const auto load = [](CutFamily f) {
    std::vector<LinearCut> out;
    int row = 0;
    for (const auto& r : detail::reference_rows(f)) {
      std::array<double, 10> c{};
      std::copy(r.begin(), r.end(), c.begin());
      CutFamily tagged = f;
      if (f == CutFamily::kRlt && row < 3) tagged = CutFamily::kDiag;
      LinearCut cut = LinearCut::from_coefficients(c, tagged);
      cut.tag.base = row++;
      out.push_back(cut);
    }
    return out;
  };
  static const std::array<std::vector<LinearCut>, 6> tables = {
      load(CutFamily::kDiag),  load(CutFamily::kRlt),   load(CutFamily::kTri),
      load(CutFamily::kEtri1), load(CutFamily::kEtri2), load(CutFamily::kEtri3)};
  const auto slot = static_cast<std::size_t>(family);
  if (slot >= tables.size()) throw std::invalid_argument("family has no reference table");
  return tables[slot];
}

double verify_validity_by_sampling(const LinearCut& cut, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double lowest = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const std::array<double, 3> x{unit(rng), unit(rng), unit(rng)};
    lowest = std::min(lowest, evaluate_on_lift(cut, x));
  }
  return lowest;
}

std::string format_cut_table(std::span<const LinearCut> cuts) {
  std::ostringstream os;
  os << "x1 x2 x3 X11 X22 X33 X12 X13 X23 b\n";
  for (const LinearCut& cut : cuts) {
    const auto c = cut.coefficients();
    for (int t = 0; t < 10; ++t) {
      if (t) os << ' ';
      if (c[t] == std::round(c[t])) {
        os << std::llround(c[t]);
      } else {
        os << std::setprecision(17) << c[t];
      }
    }
    os << '\n';
  }
  return os.str();
}

std::vector<LinearCut> parse_cut_table(std::string_view text, CutFamily family) {
  std::vector<LinearCut> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("x1", 0) == 0) continue;
    std::istringstream fields(line);
    std::array<double, 10> c{};
    for (double& v : c) {
      if (!(fields >> v)) {
        throw std::invalid_argument("cut table line " + std::to_string(lineno) +
                                    ": expected 10 numbers");
      }
    }
    out.push_back(LinearCut::from_coefficients(c, family));
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const LinearCut& cut) {
  static constexpr std::array<const char*, 9> kNames{"x%0",   "x%1",   "x%2",   "X%0%0", "X%1%1",
                                                     "X%2%2", "X%0%1", "X%0%2", "X%1%2"};
  const auto c = cut.coefficients();
  os << family_name(cut.family) << ": ";
  bool first = true;
  for (int t = 0; t < 9; ++t) {
    if (c[t] == 0.0) continue;
    os << (c[t] < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (std::abs(c[t]) != 1.0) os << std::abs(c[t]);
    for (const char* p = kNames[t]; *p; ++p) {
      if (*p == '%') {
        os << cut.index[*++p - '0'] + 1;
      } else {
        os << *p;
      }
    }
    first = false;
  }
  if (cut.constant != 0.0) os << (cut.constant < 0 ? " - " : " + ") << std::abs(cut.constant);
  return os << " >= 0";
}

}  // namespace boxqp
