#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxqp/cuts.hpp"
#include "boxqp/model.hpp"

namespace boxqp {

/// Constraint families enforced in full on every pair/triple. PSD on Y(x,X)
/// is always present.
struct RelaxationLevel {
  bool diag = true;
  bool rlt = false;
  bool tri = false;
  bool etri1 = false;
  bool etri2 = false;
  bool etri3 = false;
  bool soc = false;

  static RelaxationLevel psd_diag() { return {}; }
  static RelaxationLevel psd_rlt() { return {.rlt = true}; }
  static RelaxationLevel psd_rlt_tri() { return {.rlt = true, .tri = true}; }
  static RelaxationLevel etri1_level() { return {.rlt = true, .tri = true, .etri1 = true}; }
  static RelaxationLevel etri123_level() {
    return {.rlt = true, .tri = true, .etri1 = true, .etri2 = true, .etri3 = true};
  }
  static RelaxationLevel soc_level() {
    return {.rlt = true, .tri = true, .etri1 = true, .etri2 = true, .etri3 = true, .soc = true};
  }

  /// Accepts psd+diag, psd+rlt, psd+rlt+tri, etri1, etri123, soc (and a
  /// leading '+' on the last three).
  static RelaxationLevel parse(std::string_view name);
  std::string name() const;

  /// ETRI families switched on at this level.
  std::vector<CutFamily> etri_families() const;
  RelaxationLevel without_etri() const;

  friend bool operator==(const RelaxationLevel&, const RelaxationLevel&) = default;
};

/// Index into the 11 local coordinates of a triple:
/// 1, x_0, x_1, x_2, X_00, X_11, X_22, X_01, X_02, X_12, z.
using LocalForm = std::array<double, 11>;

enum class SocKind : std::uint8_t {
  kProduct,  // z^2 <= X_ii X_jk
  kShifted,  // (X_ij + z)^2 <= X_ii (X_jj + 3 X_jk)
};

/// One rotated cone u^2 <= v w (v, w >= 0) on a triple, after switching the
/// positions in `switched`. For kProduct, order[0] is the squared-diagonal
/// position; for kShifted, order = (i, j, k).
struct SocCap {
  SocKind kind = SocKind::kProduct;
  std::array<int, 3> order{0, 1, 2};
  std::uint8_t switched = 0;

  LocalForm u() const;
  LocalForm v() const;
  LocalForm w() const;

  friend bool operator==(const SocCap&, const SocCap&) = default;
};

struct SocSelection {
  bool product = true;
  bool shifted = true;
  bool switchings = true;
};

/// Deduplicated caps for a triple: all switchings of the three product cones
/// and all permutations and switchings of the shifted cone by default.
std::vector<SocCap> enumerate_soc_caps(const SocSelection& selection = {});

/// The eight hull inequalities on (x, X_ab, z) of a triple, as LocalForm >= 0.
const std::array<LocalForm, 8>& trilinear_hull_rows();

/// Evaluates a local form at a point, with z taken from `z`.
double evaluate_local(const LocalForm& form, const MomentPoint& p, const Triple& t, double z);

/// Lifted variable z ~ x_i x_j x_k with its hull rows and a set of cones.
struct TrilinearBlock {
  Triple triple;
  std::vector<SocCap> caps;
};

/// Block carrying every cap of the selection.
TrilinearBlock full_trilinear_block(const Triple& t, const SocSelection& selection = {});

/// Sparse affine expression over program variables.
struct AffineExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;

  void add(int var, double coef);
  double evaluate(const Vector& values) const;
};

struct LinearRow {
  AffineExpr expr;  // expr >= 0
  CutFamily family = CutFamily::kRlt;
};

/// dim x dim symmetric matrix of affine expressions, packed by SymIndex.
struct PsdConstraint {
  int dim = 0;
  std::vector<AffineExpr> entries;

  const AffineExpr& at(int i, int j) const { return entries[SymIndex(i, j).offset()]; }
  AffineExpr& at(int i, int j) { return entries[SymIndex(i, j).offset()]; }
};

/// u^2 <= v w with v, w >= 0.
struct RotatedCone {
  AffineExpr u;
  AffineExpr v;
  AffineExpr w;
};

enum class Sense : std::uint8_t { kMaximize, kMinimize };

/// Where the moment variables live in a program's variable vector.
struct MomentLayout {
  int n = 0;
  std::map<Triple, int> z;

  bool empty() const { return n == 0; }
  int x(int i) const { return i; }
  int X(int i, int j) const { return n + static_cast<int>(SymIndex(i, j).offset()); }
  int size() const { return n + static_cast<int>(SymIndex::packed_size(n)) + static_cast<int>(z.size()); }
  /// Program variable of local coordinate `slot` (1..10) of triple t.
  int local(const Triple& t, int slot) const;
};

struct ConicProgram {
  int num_vars = 0;
  std::vector<LinearRow> rows;
  std::vector<AffineExpr> equalities;  // expr == 0
  std::vector<PsdConstraint> psd;
  std::vector<RotatedCone> cones;
  AffineExpr objective;
  Sense sense = Sense::kMaximize;
  MomentLayout layout;

  /// Recovers (x, X, z) from primal values; requires a moment layout.
  MomentPoint point(const Vector& values) const;
  AffineExpr local_expr(const LocalForm& form, const Triple& t) const;
  AffineExpr cut_expr(const LinearCut& cut) const;
};

enum class SolveStatus : std::uint8_t { kOptimal, kInfeasible, kNumericalTrouble };
std::string_view status_name(SolveStatus status);

/// Raised by higher-level operations when a backend solve does not reach an
/// optimal status.
class NumericalTrouble : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BackendSolution {
  SolveStatus status = SolveStatus::kNumericalTrouble;
  double objective = 0.0;
  Vector values;
  double residual = 0.0;  // worst relative infeasibility or gap reached
  int iterations = 0;
  std::string diagnostics;

  bool ok() const { return status == SolveStatus::kOptimal; }
};

struct BackendOptions {
  double tolerance = 1e-10;  // requested
  double accept = 1e-6;     // worst accepted for an optimal status
  int max_iterations = 200;

  /// Defaults, with `tolerance` overridden by BOXQP_SOLVER_TOL when set.
  static BackendOptions from_environment();
};

/// One synchronous solve per call; implementations keep no state between
/// calls and may be used from several threads.
class ConicBackend {
 public:
  virtual ~ConicBackend() = default;
  virtual BackendSolution solve(const ConicProgram& program) const = 0;
  virtual std::string name() const = 0;
};

/// Primal-dual path-following method on the block-diagonal semidefinite
/// form of the program (linear rows as 1x1 blocks, rotated cones as 2x2).
class InteriorPointBackend final : public ConicBackend {
 public:
  explicit InteriorPointBackend(BackendOptions options = {}) : options_(options) {}
  BackendSolution solve(const ConicProgram& program) const override;
  std::string name() const override { return "ipm"; }
  const BackendOptions& options() const { return options_; }

 private:
  BackendOptions options_;
};

/// Throws std::invalid_argument on malformed programs before dispatching.
BackendSolution solve(const ConicProgram& program, const ConicBackend& backend);

/// PSD block on Y(x,X), the level's families on every pair/triple, the given
/// extra cuts, and one z variable with hull rows and cones per block. Hull
/// rows replace the TRI rows of the block's triple and the off-diagonal RLT
/// rows of its pairs. Objective Q.X + q'x, maximized.
///
/// Throws std::invalid_argument when blocks are given without level.soc or
/// when an index is out of range.
ConicProgram build_relaxation(const BoxQpInstance& inst, const RelaxationLevel& level,
                              std::span<const LinearCut> active_cuts = {},
                              std::span<const TrilinearBlock> blocks = {});

/// Range of z left by the hull rows and the given caps at (x, X). Square
/// roots of arguments below -negative_tolerance give an empty range.
struct ZInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool empty(double slack = 0.0) const { return lower > upper + slack; }
};
ZInterval soc_z_interval(const MomentPoint& p, const Triple& t, std::span<const SocCap> caps,
                         double negative_tolerance = 1e-9);
/// Range of z allowed by one cap alone.
ZInterval cap_z_interval(const MomentPoint& p, const Triple& t, const SocCap& cap,
                         double negative_tolerance = 1e-9);
/// Range of z allowed by the hull rows alone.
ZInterval hull_z_interval(const MomentPoint& p, const Triple& t);

}  // namespace boxqp
