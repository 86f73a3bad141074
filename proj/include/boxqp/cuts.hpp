#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boxqp/model.hpp"

namespace boxqp {

enum class CutFamily : std::uint8_t {
  kDiag,
  kRlt,
  kTri,
  kEtri1,
  kEtri2,
  kEtri3,
  // Facets x' M_p Y M_p' x >= 0 of an ordering simplex; not a catalog family.
  kSimplex,
};

std::string_view family_name(CutFamily family);
CutFamily parse_family(std::string_view name);

/// Complementation of some positions of a triple followed by a relabeling.
///
/// A pattern acts on a cut by first substituting x_a -> 1 - x_a for every
/// switched position a, then moving the coefficient of position a to
/// position perm[a]. The 48 patterns form a group under compose().
struct SwitchPattern {
  std::uint8_t switched = 0;  // bit a set <=> position a complemented
  std::array<int, 3> perm{0, 1, 2};

  bool is_switched(int position) const { return (switched >> position) & 1U; }

  static SwitchPattern switching(std::uint8_t mask) { return {mask, {0, 1, 2}}; }
  /// All 8 x 6 patterns; switch mask major, permutations in lexicographic order.
  static const std::vector<SwitchPattern>& all();

  friend bool operator==(const SwitchPattern&, const SwitchPattern&) = default;
};

/// outer o inner, i.e. the pattern equal to applying inner and then outer.
SwitchPattern compose(const SwitchPattern& outer, const SwitchPattern& inner);

struct CutTag {
  int base = 0;  // index of the generating base inequality
  SwitchPattern pattern;
  friend bool operator==(const CutTag&, const CutTag&) = default;
};

/// Affine inequality on at most three variables of the lifted space:
///
///   sum_a lin[a] x_a + sum_a diag[a] X_aa + sum_{a<b} cross[ab] X_ab + constant >= 0
///
/// Positions a in {0, 1, 2} refer to the variables index[a]; cross is ordered
/// (01, 02, 12). Only the first `arity` positions are used, which lets RLT
/// and DIAG rows live on pairs and singletons.
struct LinearCut {
  std::array<int, 3> index{0, 1, 2};
  int arity = 3;
  std::array<double, 3> lin{};
  std::array<double, 3> diag{};
  std::array<double, 3> cross{};
  double constant = 0.0;
  CutFamily family = CutFamily::kRlt;
  CutTag tag;

  /// Coefficients in the order x1 x2 x3 X11 X22 X33 X12 X13 X23 b.
  std::array<double, 10> coefficients() const;
  static LinearCut from_coefficients(const std::array<double, 10>& c, CutFamily family);

  /// Same coefficients on another triple.
  LinearCut on(const Triple& t) const;
  /// Same coefficients on a pair (arity 2) or a single index (arity 1);
  /// coefficients outside the kept positions must vanish.
  LinearCut restricted(std::array<int, 3> idx, int new_arity) const;

  bool same_coefficients(const LinearCut& other) const;
};

/// Position of the pair (a, b), a != b, in LinearCut::cross.
int cross_slot(int a, int b);

LinearCut apply_switch(const LinearCut& cut, const SwitchPattern& pattern);

/// Left-hand side at the point; negative means violated by |value|.
double evaluate_cut(const LinearCut& cut, const MomentPoint& p);

/// Left-hand side at the rank-one lift of a 3-vector (positions, not indices).
double evaluate_on_lift(const LinearCut& cut, const std::array<double, 3>& x);

/// Euclidean norm of the nine variable coefficients.
double coefficient_norm(const LinearCut& cut);

/// Integer tuple of the coefficients divided by their gcd; the duplicate key
/// for switched cuts. Throws std::domain_error on non-integral coefficients.
std::array<long long, 10> canonical_key(const LinearCut& cut);

/// Base inequalities on positions (0, 1, 2) from which a family is generated.
const std::vector<LinearCut>& base_cuts(CutFamily family);

/// Deduplicated orbit of the family's base inequalities under all 48 switch
/// patterns, on triple t. RLT includes the three DIAG rows (family kDiag).
std::vector<LinearCut> generate_family(CutFamily family, const Triple& t = {});

/// Reference coefficient tables for (0, 1, 2): RLT (15 incl. DIAG), TRI (4),
/// ETRI1 (24), ETRI2 (24), ETRI3 (48).
const std::vector<LinearCut>& catalog(CutFamily family);

/// Minimum LHS over `samples` uniform points of the box lifted to rank one.
double verify_validity_by_sampling(const LinearCut& cut, int samples, std::uint64_t seed);

/// Plain-text table, one cut per line, columns x1 x2 x3 X11 X22 X33 X12 X13 X23 b.
std::string format_cut_table(std::span<const LinearCut> cuts);
std::vector<LinearCut> parse_cut_table(std::string_view text, CutFamily family);

std::ostream& operator<<(std::ostream& os, const LinearCut& cut);

}  // namespace boxqp
