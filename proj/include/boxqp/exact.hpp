#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "boxqp/conic.hpp"
#include "boxqp/cuts.hpp"
#include "boxqp/model.hpp"

namespace boxqp {

/// Order simplex {0 <= x_o0 <= x_o1 <= x_o2 <= 1} of the unit cube, one cell
/// of the ordering triangulation.
struct SimplexOrdering {
  std::array<int, 3> order{0, 1, 2};

  /// 3x4, columns are the simplex vertices e, e_o1 + e_o2, e_o2, 0.
  Matrix A() const;
  /// 4x4, a row of ones stacked on A().
  Matrix Abar() const;
  /// Abar()^{-1}; integral.
  Matrix M() const;

  /// The six orderings, permutations in lexicographic order.
  static const std::array<SimplexOrdering, 6>& all();
};

enum class ExtremeSet : std::uint8_t { kP0, kP1 };

struct ExtremeMatrixSet {
  SimplexOrdering ordering;
  ExtremeSet set = ExtremeSet::kP0;
  std::vector<Matrix> generators;  // 4x4, entries summing to one
  std::vector<Matrix> lifted;      // Abar G Abar', i.e. points Y(x, X)
};

/// 10 generators for P0, 32 for P1.
ExtremeMatrixSet enumerate_extreme(ExtremeSet set, const SimplexOrdering& ordering);

/// Entries of M Y M' >= 0 for a <= b, as cuts on (0, 1, 2); (0,0), (0,1),
/// ..., row-major over the upper triangle.
std::vector<LinearCut> m_hyperplanes(const SimplexOrdering& ordering);

/// Linear objective over (x1 x2 x3 X11 X22 X33 X12 X13 X23) plus a constant,
/// in the reference column order.
using Objective9 = std::array<double, 10>;

Objective9 objective_of(const LinearCut& cut);
Objective9 objective_of(const BoxQpInstance& inst);
double norm9(const Objective9& c);

struct ExactResult {
  SolveStatus status = SolveStatus::kNumericalTrouble;
  double value = 0.0;
  Matrix Y;  // 4x4 optimal Y(x, X)
  std::string diagnostics;

  bool ok() const { return status == SolveStatus::kOptimal; }
};

/// Six 4x4 doubly nonnegative blocks X_p with Y = sum_p Abar_p X_p Abar_p'
/// and Y_00 = 1; the feasible Y are exactly the lifted hull of the cube.
ConicProgram disjunctive_program(const Objective9& objective, Sense sense);

/// Optimum of the objective over the hull of rank-one lifts of [0,1]^3.
ExactResult optimize_exact(const Objective9& objective, Sense sense, const ConicBackend& backend);

/// Optimum of the objective over a relaxation on three variables; SOC levels
/// carry the full trilinear block.
ExactResult optimize_relaxation(const Objective9& objective, Sense sense,
                                const RelaxationLevel& level, const ConicBackend& backend,
                                std::span<const LinearCut> extra_cuts = {});

/// max x'Qx + q'x for n = 3 via the disjunctive program. Throws
/// std::invalid_argument for n != 3 and NumericalTrouble on backend failure.
double solve_exact_qpb3(const BoxQpInstance& inst, const ConicBackend& backend);

/// max(0, max -LHS) over the level (plus extra cuts) on three variables,
/// divided by the coefficient norm when normalized. Throws NumericalTrouble.
double max_violation(const LinearCut& cut, const RelaxationLevel& level,
                     const ConicBackend& backend, bool normalized,
                     std::span<const LinearCut> extra_cuts = {});

struct FamilyViolation {
  double raw = 0.0;         // largest violation over the family
  double normalized = 0.0;  // largest violation / norm over the family
};

/// Solves every cut of the family concurrently.
FamilyViolation max_family_violation(CutFamily family, const RelaxationLevel& level,
                                     const ConicBackend& backend,
                                     std::span<const LinearCut> extra_cuts = {});

inline constexpr double kDominationTolerance = 1e-6;

bool is_dominated(const LinearCut& cut, const RelaxationLevel& level,
                  std::span<const LinearCut> extra_cuts, const ConicBackend& backend,
                  double tol = kDominationTolerance);

/// (min over the exact hull) - (min over the relaxation) of the objective;
/// nonnegative up to solver accuracy.
double objective_gap(const Objective9& objective, const RelaxationLevel& level,
                     const ConicBackend& backend);

/// One machine-readable table cell.
struct TableCell {
  std::string table;
  std::string row;
  std::string col;
  double value = 0.0;
  bool ok = true;
};

/// Cells of the violation grids: table 1 (RLT/TRI/ETRI1 over three levels)
/// or table 2 (ETRI2/ETRI3 over four levels), raw then normalized columns.
std::vector<TableCell> violation_table(int which, const ConicBackend& backend);

/// Box points on which the base inequality of an ETRI family is tight.
std::vector<std::array<double, 3>> tight_points(CutFamily family);

/// Affine rank of rank-one lifts (x, xx') of the points, in R^9.
int lifted_affine_rank(std::span<const std::array<double, 3>> points, double tol = 1e-9);

}  // namespace boxqp
