#include "boxqp/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>

namespace boxqp {

namespace {

// (E_ij + E_ji) / 2; E_ii when i == j.
Matrix unit_outer(int i, int j) {
  Matrix E = Matrix::Zero(4, 4);
  E(i, j) += 0.5;
  E(j, i) += 0.5;
  return E;
}

// Coefficient of Y(r, s) (r <= s, 4x4 with index 0 the constant) in an
// Objective9 or cut written in reference order.
double y_coefficient(const Objective9& c, int r, int s) {
  if (r > s) std::swap(r, s);
  if (r == 0 && s == 0) return c[9];
  if (r == 0) return c[s - 1];
  if (r == s) return c[3 + r - 1];
  const int a = r - 1, b = s - 1;
  return c[6 + cross_slot(a, b)];
}

double evaluate_on_Y(const Objective9& c, const Matrix& Y) {
  double v = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int s = r; s < 4; ++s) v += y_coefficient(c, r, s) * Y(r, s);
  }
  return v;
}

ExactResult finish(const BackendSolution& sol, const std::function<Matrix(const Vector&)>& to_Y,
                   const Objective9& objective) {
  ExactResult out;
  out.status = sol.status;
  out.diagnostics = sol.diagnostics;
  if (sol.values.size() == 0) return out;
  out.Y = to_Y(sol.values);
  out.value = evaluate_on_Y(objective, out.Y);
  return out;
}

ConicProgram three_variable_relaxation(const RelaxationLevel& level,
                                       std::span<const LinearCut> extra_cuts) {
  const BoxQpInstance zero(Matrix::Zero(3, 3), Vector::Zero(3));
  if (level.soc) {
    const std::array<TrilinearBlock, 1> blocks{full_trilinear_block({0, 1, 2})};
    return build_relaxation(zero, level, extra_cuts, blocks);
  }
  return build_relaxation(zero, level, extra_cuts);
}

ExactResult require_ok(ExactResult r, const char* what) {
  if (!r.ok()) {
    throw NumericalTrouble(std::string(what) + ": " + std::string(status_name(r.status)) + " (" +
                           r.diagnostics + ")");
  }
  return r;
}

}  // namespace

// ------------------------------------------------------------ orderings

Matrix SimplexOrdering::A() const {
  Matrix A = Matrix::Zero(3, 4);
  A.col(0).setOnes();
  A(order[1], 1) = 1.0;
  A(order[2], 1) = 1.0;
  A(order[2], 2) = 1.0;
  return A;
}

Matrix SimplexOrdering::Abar() const {
  Matrix B(4, 4);
  B.row(0).setOnes();
  B.bottomRows(3) = A();
  return B;
}

Matrix SimplexOrdering::M() const {
  // Barycentric coordinates: x_o0, x_o1 - x_o0, x_o2 - x_o1, 1 - x_o2.
  Matrix M = Matrix::Zero(4, 4);
  M(0, 1 + order[0]) = 1.0;
  M(1, 1 + order[1]) = 1.0;
  M(1, 1 + order[0]) = -1.0;
  M(2, 1 + order[2]) = 1.0;
  M(2, 1 + order[1]) = -1.0;
  M(3, 0) = 1.0;
  M(3, 1 + order[2]) = -1.0;
  return M;
}

const std::array<SimplexOrdering, 6>& SimplexOrdering::all() {
  static const std::array<SimplexOrdering, 6> orderings = [] {
    std::array<SimplexOrdering, 6> out{};
    std::array<int, 3> p{0, 1, 2};
    int k = 0;
    do {
      out[k++].order = p;
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  }();
  return orderings;
}

ExtremeMatrixSet enumerate_extreme(ExtremeSet set, const SimplexOrdering& ordering) {
  ExtremeMatrixSet out;
  out.ordering = ordering;
  out.set = set;
  auto& g = out.generators;
  if (set == ExtremeSet::kP0) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) g.push_back(unit_outer(i, j));
    }
  } else {
    for (int i = 0; i < 4; ++i) g.push_back(unit_outer(i, i));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (j != i) g.push_back(unit_outer(i, i) / 2.0 + unit_outer(i, j) / 2.0);
      }
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (int k = j + 1; k < 4; ++k) {
          if (j == i || k == i) continue;
          g.push_back(unit_outer(i, i) / 3.0 + (unit_outer(i, j) + unit_outer(i, k)) / 3.0);
        }
      }
    }
    for (int i = 0; i < 4; ++i) {
      Matrix G = Matrix::Zero(4, 4);
      G.row(i).array() += 1.0 / 8.0;
      G.col(i).array() += 1.0 / 8.0;
      g.push_back(G);
    }
  }
  const Matrix B = ordering.Abar();
  for (const Matrix& G : g) out.lifted.push_back(B * G * B.transpose());
  return out;
}

std::vector<LinearCut> m_hyperplanes(const SimplexOrdering& ordering) {
  const Matrix M = ordering.M();
  std::vector<LinearCut> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      // Entry (a, b) of M Y M' = sum_rs M(a,r) M(b,s) Y(r,s).
      Objective9 c{};
      for (int r = 0; r < 4; ++r) {
        for (int s = 0; s < 4; ++s) {
          const double w = M(a, r) * M(b, s);
          if (w == 0.0) continue;
          const int lo = std::min(r, s), hi = std::max(r, s);
          if (lo == 0 && hi == 0) {
            c[9] += w;
          } else if (lo == 0) {
            c[hi - 1] += w;
          } else if (lo == hi) {
            c[3 + lo - 1] += w;
          } else {
            c[6 + cross_slot(lo - 1, hi - 1)] += w;
          }
        }
      }
      out.push_back(LinearCut::from_coefficients(c, CutFamily::kSimplex));
    }
  }
  return out;
}

// ------------------------------------------------------------ objectives

Objective9 objective_of(const LinearCut& cut) {
  if (cut.arity != 3) return objective_of(cut.restricted({0, 1, 2}, 3));
  return cut.coefficients();
}

Objective9 objective_of(const BoxQpInstance& inst) {
  if (inst.n() != 3) throw std::invalid_argument("objective over three variables needs n = 3");
  const Matrix& Q = inst.Q();
  return {inst.q()[0], inst.q()[1], inst.q()[2], Q(0, 0), Q(1, 1), Q(2, 2),
          2 * Q(0, 1), 2 * Q(0, 2), 2 * Q(1, 2), 0.0};
}

double norm9(const Objective9& c) {
  double s = 0.0;
  for (int a = 0; a < 9; ++a) s += c[a] * c[a];
  return std::sqrt(s);
}

// ------------------------------------------------------------ programs

ConicProgram disjunctive_program(const Objective9& objective, Sense sense) {
  ConicProgram prog;
  const auto& orderings = SimplexOrdering::all();
  prog.num_vars = 6 * 10;
  auto var = [](int p, int a, int b) { return 10 * p + static_cast<int>(SymIndex(a, b).offset()); };

  // Y(r, s) as an expression in the block entries.
  std::array<std::array<AffineExpr, 4>, 4> Y;
  for (int p = 0; p < 6; ++p) {
    const Matrix B = orderings[p].Abar();
    PsdConstraint blk;
    blk.dim = 4;
    blk.entries.resize(10);
    for (int a = 0; a < 4; ++a) {
      for (int b = a; b < 4; ++b) {
        blk.at(a, b).add(var(p, a, b), 1.0);
        AffineExpr nonneg;
        nonneg.add(var(p, a, b), 1.0);
        prog.rows.push_back({std::move(nonneg), CutFamily::kSimplex});
        for (int r = 0; r < 4; ++r) {
          for (int s = r; s < 4; ++s) {
            double w = B(r, a) * B(s, b);
            if (a != b) w += B(r, b) * B(s, a);
            if (w != 0.0) Y[r][s].add(var(p, a, b), w);
          }
        }
      }
    }
    prog.psd.push_back(std::move(blk));
  }
  AffineExpr total = Y[0][0];
  total.constant = -1.0;
  prog.equalities.push_back(std::move(total));
  for (int r = 0; r < 4; ++r) {
    for (int s = r; s < 4; ++s) {
      const double c = y_coefficient(objective, r, s);
      if (c == 0.0) continue;
      if (r == 0 && s == 0) {
        prog.objective.constant += c;
        continue;
      }
      for (const auto& [v, w] : Y[r][s].terms) prog.objective.add(v, c * w);
    }
  }
  prog.sense = sense;
  return prog;
}

ExactResult optimize_exact(const Objective9& objective, Sense sense, const ConicBackend& backend) {
  const ConicProgram prog = disjunctive_program(objective, sense);
  const BackendSolution sol = solve(prog, backend);
  const auto& orderings = SimplexOrdering::all();
  return finish(sol, [&](const Vector& v) {
    Matrix Y = Matrix::Zero(4, 4);
    for (int p = 0; p < 6; ++p) {
      Matrix X(4, 4);
      for (int a = 0; a < 4; ++a) {
        for (int b = a; b < 4; ++b) X(a, b) = X(b, a) = v[10 * p + static_cast<int>(SymIndex(a, b).offset())];
      }
      const Matrix B = orderings[p].Abar();
      Y += B * X * B.transpose();
    }
    return Y;
  }, objective);
}

ExactResult optimize_relaxation(const Objective9& objective, Sense sense,
                                const RelaxationLevel& level, const ConicBackend& backend,
                                std::span<const LinearCut> extra_cuts) {
  ConicProgram prog = three_variable_relaxation(level, extra_cuts);
  prog.objective = prog.cut_expr(LinearCut::from_coefficients(objective, CutFamily::kSimplex));
  prog.sense = sense;
  const BackendSolution sol = solve(prog, backend);
  return finish(sol, [&](const Vector& v) { return assemble_Y(prog.point(v)); }, objective);
}

double solve_exact_qpb3(const BoxQpInstance& inst, const ConicBackend& backend) {
  if (inst.n() != 3) throw std::invalid_argument("disjunctive representation requires n = 3");
  return require_ok(optimize_exact(objective_of(inst), Sense::kMaximize, backend), "exact solve").value;
}

double max_violation(const LinearCut& cut, const RelaxationLevel& level,
                     const ConicBackend& backend, bool normalized,
                     std::span<const LinearCut> extra_cuts) {
  const Objective9 c = objective_of(cut);
  const ExactResult r =
      require_ok(optimize_relaxation(c, Sense::kMinimize, level, backend, extra_cuts), "max violation");
  double v = std::max(0.0, -r.value);
  if (normalized) v /= norm9(c);
  return v;
}

FamilyViolation max_family_violation(CutFamily family, const RelaxationLevel& level,
                                     const ConicBackend& backend,
                                     std::span<const LinearCut> extra_cuts) {
  const std::vector<LinearCut> cuts = generate_family(family);
  std::vector<std::future<double>> jobs;
  jobs.reserve(cuts.size());
  for (const LinearCut& c : cuts) {
    jobs.push_back(std::async(std::launch::async, [&, c] {
      return max_violation(c, level, backend, false, extra_cuts);
    }));
  }
  FamilyViolation out;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double v = jobs[i].get();
    out.raw = std::max(out.raw, v);
    out.normalized = std::max(out.normalized, v / coefficient_norm(cuts[i]));
  }
  return out;
}

bool is_dominated(const LinearCut& cut, const RelaxationLevel& level,
                  std::span<const LinearCut> extra_cuts, const ConicBackend& backend, double tol) {
  return max_violation(cut, level, backend, false, extra_cuts) <= tol;
}

double objective_gap(const Objective9& objective, const RelaxationLevel& level,
                     const ConicBackend& backend) {
  const ExactResult relaxed =
      require_ok(optimize_relaxation(objective, Sense::kMinimize, level, backend), "relaxation");
  const ExactResult exact = require_ok(optimize_exact(objective, Sense::kMinimize, backend), "exact");
  return exact.value - relaxed.value;
}

std::vector<TableCell> violation_table(int which, const ConicBackend& backend) {
  std::vector<std::pair<std::string, RelaxationLevel>> rows{
      {"PSD+DIAG", RelaxationLevel::psd_diag()},
      {"PSD+RLT", RelaxationLevel::psd_rlt()},
      {"PSD+RLT+TRI", RelaxationLevel::psd_rlt_tri()}};
  std::vector<CutFamily> cols;
  std::string table;
  if (which == 1) {
    cols = {CutFamily::kRlt, CutFamily::kTri, CutFamily::kEtri1};
    table = "T1";
  } else if (which == 2) {
    rows.emplace_back("PSD+RLT+TRI+ETRI1", RelaxationLevel::etri1_level());
    cols = {CutFamily::kEtri2, CutFamily::kEtri3};
    table = "T2";
  } else {
    throw std::invalid_argument("violation tables are 1 and 2");
  }
  std::vector<TableCell> raw, norm;
  for (const auto& [row, level] : rows) {
    for (CutFamily f : cols) {
      const std::string col(family_name(f));
      try {
        const FamilyViolation v = max_family_violation(f, level, backend);
        raw.push_back({table, row, col, v.raw, true});
        norm.push_back({table, row, col + " normalized", v.normalized, true});
      } catch (const NumericalTrouble&) {
        raw.push_back({table, row, col, 0.0, false});
        norm.push_back({table, row, col + " normalized", 0.0, false});
      }
    }
  }
  std::vector<TableCell> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out.push_back(raw[r * cols.size() + c]);
    for (std::size_t c = 0; c < cols.size(); ++c) out.push_back(norm[r * cols.size() + c]);
  }
  return out;
}

std::vector<std::array<double, 3>> tight_points(CutFamily family) {
  switch (family) {
    case CutFamily::kEtri1:
      return {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0.5, 0}, {0, 0, 0.5}, {1, 1, 1}};
    case CutFamily::kEtri2:
      return {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0.5, 0}, {0, 0, 0.5}, {0.5, 1, 1}};
    case CutFamily::kEtri3:
      return {{0, 0, 0}, {0, 0, 1}, {0, 0, 0.5}, {0.5, 1, 0}, {1, 1, 1}};
    default:
      throw std::invalid_argument("tight point sets exist for ETRI families only");
  }
}

int lifted_affine_rank(std::span<const std::array<double, 3>> points, double tol) {
  if (points.size() < 2) return 0;
  auto lift = [](const std::array<double, 3>& x) {
    Eigen::Matrix<double, 9, 1> v;
    v << x[0], x[1], x[2], x[0] * x[0], x[1] * x[1], x[2] * x[2], x[0] * x[1], x[0] * x[2],
        x[1] * x[2];
    return v;
  };
  Matrix D(9, static_cast<Eigen::Index>(points.size() - 1));
  const auto base = lift(points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) D.col(static_cast<Eigen::Index>(i - 1)) = lift(points[i]) - base;
  Eigen::FullPivLU<Matrix> lu(D);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

}  // namespace boxqp
