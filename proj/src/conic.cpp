#include "boxqp/conic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ipm.hpp"

namespace boxqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kZSlot = 10;

int x_slot(int a) { return 1 + a; }
int diag_slot(int a) { return 4 + a; }
int pair_slot(int a, int b) { return 7 + cross_slot(a, b); }

int monomial_slot(unsigned mask) {
  switch (std::popcount(mask)) {
    case 0: return 0;
    case 1: return x_slot(std::countr_zero(mask));
    case 2: {
      const int a = std::countr_zero(mask);
      const int b = std::countr_zero(mask & (mask - 1));
      return pair_slot(a, b);
    }
    default: return kZSlot;
  }
}

// Product over positions in `mask` of x_c or (1 - x_c) when c is switched.
LocalForm switched_product(unsigned mask, unsigned switched) {
  // Expands the product by choosing -x_c (c in T) or 1 from each switched factor.
  LocalForm f{};
  const unsigned flip = mask & switched;
  const unsigned keep = mask & ~switched;
  for (unsigned t = flip;; t = (t - 1) & flip) {
    f[monomial_slot(keep | t)] += (std::popcount(t) % 2 == 0) ? 1.0 : -1.0;
    if (t == 0) break;
  }
  return f;
}

LocalForm switched_diag(int a, unsigned switched) {
  LocalForm f{};
  if ((switched >> a) & 1U) {
    f[0] = 1.0;
    f[x_slot(a)] = -2.0;
  }
  f[diag_slot(a)] = 1.0;
  return f;
}

LocalForm plus(const LocalForm& a, const LocalForm& b, double scale_b = 1.0) {
  LocalForm out{};
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = a[s] + scale_b * b[s];
  return out;
}

unsigned bit(int a) { return 1U << a; }

void merge_terms(AffineExpr& e) {
  std::sort(e.terms.begin(), e.terms.end());
  std::vector<std::pair<int, double>> merged;
  for (const auto& [v, c] : e.terms) {
    if (!merged.empty() && merged.back().first == v) {
      merged.back().second += c;
    } else {
      merged.emplace_back(v, c);
    }
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
  e.terms = std::move(merged);
}

}  // namespace

// ---------------------------------------------------------------- levels

RelaxationLevel RelaxationLevel::parse(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "prt") return psd_rlt_tri();
  // '+'-separated flags; ETRI/SOC without RLT or TRI mean the ladder step
  // on top of PSD+RLT+TRI, as in "+etri1".
  RelaxationLevel out;
  bool any = false;
  bool base_given = false;
  bool extended = false;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find('+', pos);
    if (end == std::string::npos) end = s.size();
    const std::string tok = s.substr(pos, end - pos);
    pos = end + 1;
    if (tok.empty()) continue;
    any = true;
    if (tok == "psd" || tok == "diag") {
      base_given = base_given || tok == "diag";
    } else if (tok == "rlt") {
      out.rlt = true;
      base_given = true;
    } else if (tok == "tri") {
      out.rlt = out.tri = true;
      base_given = true;
    } else if (tok == "etri1") {
      out.etri1 = extended = true;
    } else if (tok == "etri2") {
      out.etri2 = extended = true;
    } else if (tok == "etri3") {
      out.etri3 = extended = true;
    } else if (tok == "etri123" || tok == "etri1/2/3") {
      out.etri1 = out.etri2 = out.etri3 = extended = true;
    } else if (tok == "soc") {
      out.soc = extended = true;
    } else {
      throw std::invalid_argument("unknown relaxation level '" + std::string(name) + "'");
    }
  }
  if (!any) throw std::invalid_argument("empty relaxation level");
  if (extended && !base_given) {
    out.rlt = out.tri = true;
    if (out.soc && !out.etri1 && !out.etri2 && !out.etri3) out.etri1 = out.etri2 = out.etri3 = true;
  }
  return out;
}

std::string RelaxationLevel::name() const {
  std::string out = rlt ? "PSD+RLT" : (diag ? "PSD+DIAG" : "PSD");
  if (tri) out += "+TRI";
  if (etri1 && etri2 && etri3) {
    out += "+ETRI1/2/3";
  } else {
    if (etri1) out += "+ETRI1";
    if (etri2) out += "+ETRI2";
    if (etri3) out += "+ETRI3";
  }
  if (soc) out += "+SOC";
  return out;
}

std::vector<CutFamily> RelaxationLevel::etri_families() const {
  std::vector<CutFamily> out;
  if (etri1) out.push_back(CutFamily::kEtri1);
  if (etri2) out.push_back(CutFamily::kEtri2);
  if (etri3) out.push_back(CutFamily::kEtri3);
  return out;
}

RelaxationLevel RelaxationLevel::without_etri() const {
  RelaxationLevel out = *this;
  out.etri1 = out.etri2 = out.etri3 = false;
  return out;
}

// ------------------------------------------------------------- SOC caps

LocalForm SocCap::u() const {
  const LocalForm z = switched_product(0b111, switched);
  if (kind == SocKind::kProduct) return z;
  const int i = order[0], j = order[1];
  return plus(switched_product(bit(i) | bit(j), switched), z);
}

LocalForm SocCap::v() const { return switched_diag(order[0], switched); }

LocalForm SocCap::w() const {
  const int j = order[1], k = order[2];
  const LocalForm jk = switched_product(bit(j) | bit(k), switched);
  if (kind == SocKind::kProduct) return jk;
  return plus(switched_diag(j, switched), jk, 3.0);
}

std::vector<SocCap> enumerate_soc_caps(const SocSelection& selection) {
  std::vector<SocCap> out;
  std::set<std::array<double, 33>> seen;
  auto consider = [&](const SocCap& cap) {
    // u is determined up to sign and (v, w) up to order.
    LocalForm u = cap.u();
    LocalForm neg{};
    for (std::size_t s = 0; s < u.size(); ++s) neg[s] = -u[s];
    if (neg > u) u = neg;
    LocalForm v = cap.v(), w = cap.w();
    if (w < v) std::swap(v, w);
    std::array<double, 33> key{};
    std::copy(u.begin(), u.end(), key.begin());
    std::copy(v.begin(), v.end(), key.begin() + 11);
    std::copy(w.begin(), w.end(), key.begin() + 22);
    if (seen.insert(key).second) out.push_back(cap);
  };
  const std::uint8_t masks = selection.switchings ? 8 : 1;
  if (selection.product) {
    for (std::uint8_t s = 0; s < masks; ++s) {
      for (int i = 0; i < 3; ++i) {
        std::array<int, 3> order{i, i == 0 ? 1 : 0, i == 2 ? 1 : 2};
        consider({SocKind::kProduct, order, s});
      }
    }
  }
  if (selection.shifted) {
    for (std::uint8_t s = 0; s < masks; ++s) {
      std::array<int, 3> order{0, 1, 2};
      do {
        consider({SocKind::kShifted, order, s});
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }
  return out;
}

const std::array<LocalForm, 8>& trilinear_hull_rows() {
  static const std::array<LocalForm, 8> rows = [] {
    std::array<LocalForm, 8> r{};
    r[0][kZSlot] = 1.0;  // z >= 0
    for (int s = 0; s < 3; ++s) {  // z <= X_ab
      r[1 + s][7 + s] = 1.0;
      r[1 + s][kZSlot] = -1.0;
    }
    // X_ab + X_ac <= x_a + z
    for (int a = 0; a < 3; ++a) {
      LocalForm& f = r[4 + a];
      f[x_slot(a)] = 1.0;
      f[kZSlot] = 1.0;
      for (int b = 0; b < 3; ++b) {
        if (b != a) f[pair_slot(a, b)] = -1.0;
      }
    }
    // x_0 + x_1 + x_2 + z <= X_01 + X_02 + X_12 + 1
    LocalForm& last = r[7];
    last[0] = 1.0;
    for (int a = 0; a < 3; ++a) {
      last[x_slot(a)] = -1.0;
      last[7 + a] = 1.0;
    }
    last[kZSlot] = -1.0;
    return r;
  }();
  return rows;
}

double evaluate_local(const LocalForm& form, const MomentPoint& p, const Triple& t, double z) {
  const auto idx = t.as_array();
  double v = form[0] + form[kZSlot] * z;
  for (int a = 0; a < 3; ++a) {
    v += form[x_slot(a)] * p.x[idx[a]] + form[diag_slot(a)] * p.X(idx[a], idx[a]);
  }
  v += form[7] * p.X(idx[0], idx[1]) + form[8] * p.X(idx[0], idx[2]) +
       form[9] * p.X(idx[1], idx[2]);
  return v;
}

TrilinearBlock full_trilinear_block(const Triple& t, const SocSelection& selection) {
  return {t, enumerate_soc_caps(selection)};
}

// ---------------------------------------------------------------- intervals

ZInterval hull_z_interval(const MomentPoint& p, const Triple& t) {
  ZInterval out{-kInf, kInf};
  for (const LocalForm& row : trilinear_hull_rows()) {
    const double rest = evaluate_local(row, p, t, 0.0);
    if (row[kZSlot] > 0) {
      out.lower = std::max(out.lower, -rest / row[kZSlot]);
    } else {
      out.upper = std::min(out.upper, -rest / row[kZSlot]);
    }
  }
  return out;
}

ZInterval cap_z_interval(const MomentPoint& p, const Triple& t, const SocCap& cap,
                         double negative_tolerance) {
  const double v = evaluate_local(cap.v(), p, t, 0.0);
  const double w = evaluate_local(cap.w(), p, t, 0.0);
  if (v < -negative_tolerance || w < -negative_tolerance) return {kInf, -kInf};
  const double r = std::sqrt(std::max(0.0, v) * std::max(0.0, w));
  const LocalForm u = cap.u();
  const double a = evaluate_local(u, p, t, 0.0);
  // |a + s z| <= r with s = +-1.
  if (u[kZSlot] > 0) return {-r - a, r - a};
  return {a - r, a + r};
}

ZInterval soc_z_interval(const MomentPoint& p, const Triple& t, std::span<const SocCap> caps,
                         double negative_tolerance) {
  ZInterval out = hull_z_interval(p, t);
  for (const SocCap& cap : caps) {
    const ZInterval c = cap_z_interval(p, t, cap, negative_tolerance);
    out.lower = std::max(out.lower, c.lower);
    out.upper = std::min(out.upper, c.upper);
  }
  return out;
}

// ---------------------------------------------------------------- program

void AffineExpr::add(int var, double coef) {
  if (coef != 0.0) terms.emplace_back(var, coef);
}

double AffineExpr::evaluate(const Vector& values) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * values[i];
  return v;
}

int MomentLayout::local(const Triple& t, int slot) const {
  const auto idx = t.as_array();
  if (slot >= 1 && slot <= 3) return x(idx[slot - 1]);
  if (slot >= 4 && slot <= 6) return X(idx[slot - 4], idx[slot - 4]);
  if (slot == 7) return X(idx[0], idx[1]);
  if (slot == 8) return X(idx[0], idx[2]);
  if (slot == 9) return X(idx[1], idx[2]);
  if (slot == kZSlot) {
    const auto it = z.find(t);
    if (it == z.end()) throw std::invalid_argument("triple has no trilinear variable");
    return it->second;
  }
  throw std::invalid_argument("bad local slot");
}

MomentPoint ConicProgram::point(const Vector& values) const {
  if (layout.empty()) throw std::logic_error("program has no moment layout");
  const int n = layout.n;
  MomentPoint p;
  p.x.resize(n);
  p.X.resize(n, n);
  for (int i = 0; i < n; ++i) {
    p.x[i] = values[layout.x(i)];
    for (int j = 0; j <= i; ++j) p.X(i, j) = p.X(j, i) = values[layout.X(i, j)];
  }
  for (const auto& [t, var] : layout.z) p.z[t] = values[var];
  return p;
}

AffineExpr ConicProgram::local_expr(const LocalForm& form, const Triple& t) const {
  AffineExpr e;
  e.constant = form[0];
  for (int s = 1; s <= kZSlot; ++s) {
    if (form[s] != 0.0) e.add(layout.local(t, s), form[s]);
  }
  return e;
}

AffineExpr ConicProgram::cut_expr(const LinearCut& cut) const {
  AffineExpr e;
  e.constant = cut.constant;
  for (int a = 0; a < cut.arity; ++a) {
    e.add(layout.x(cut.index[a]), cut.lin[a]);
    e.add(layout.X(cut.index[a], cut.index[a]), cut.diag[a]);
  }
  static constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (int s = 0; s < 3; ++s) {
    if (pairs[s][1] >= cut.arity) continue;
    e.add(layout.X(cut.index[pairs[s][0]], cut.index[pairs[s][1]]), cut.cross[s]);
  }
  return e;
}

ConicProgram build_relaxation(const BoxQpInstance& inst, const RelaxationLevel& level,
                              std::span<const LinearCut> active_cuts,
                              std::span<const TrilinearBlock> blocks) {
  if (!blocks.empty() && !level.soc) {
    throw std::invalid_argument("trilinear blocks require a level with SOC enabled");
  }
  const int n = inst.n();
  ConicProgram prog;
  prog.layout.n = n;
  int next = n + static_cast<int>(SymIndex::packed_size(n));
  std::set<std::pair<int, int>> covered_pairs;
  for (const TrilinearBlock& blk : blocks) {
    if (!blk.triple.valid(n)) throw std::invalid_argument("trilinear block index out of range");
    if (!prog.layout.z.emplace(blk.triple, next).second) {
      throw std::invalid_argument("duplicate trilinear block");
    }
    ++next;
    const auto idx = blk.triple.as_array();
    covered_pairs.insert({idx[0], idx[1]});
    covered_pairs.insert({idx[0], idx[2]});
    covered_pairs.insert({idx[1], idx[2]});
  }
  prog.num_vars = next;

  PsdConstraint Y;
  Y.dim = n + 1;
  Y.entries.resize(SymIndex::packed_size(n + 1));
  Y.at(0, 0).constant = 1.0;
  for (int i = 0; i < n; ++i) {
    Y.at(0, i + 1).add(prog.layout.x(i), 1.0);
    for (int j = i; j < n; ++j) Y.at(i + 1, j + 1).add(prog.layout.X(i, j), 1.0);
  }
  prog.psd.push_back(std::move(Y));

  const auto& rlt_rows = catalog(CutFamily::kRlt);
  if (level.diag || level.rlt) {
    for (int i = 0; i < n; ++i) {
      prog.rows.push_back({prog.cut_expr(rlt_rows[0].restricted({i, 0, 0}, 1)), CutFamily::kDiag});
    }
  }
  if (level.rlt) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (covered_pairs.contains({i, j})) continue;
        for (int r = 3; r < 7; ++r) {
          prog.rows.push_back({prog.cut_expr(rlt_rows[r].restricted({i, j, 0}, 2)), CutFamily::kRlt});
        }
      }
    }
  }
  std::vector<CutFamily> static_families;
  if (level.tri) static_families.push_back(CutFamily::kTri);
  for (CutFamily f : level.etri_families()) static_families.push_back(f);
  if (!static_families.empty()) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
          const Triple t{i, j, k};
          const bool has_block = prog.layout.z.contains(t);
          for (CutFamily f : static_families) {
            if (f == CutFamily::kTri && has_block) continue;
            for (const LinearCut& c : generate_family(f, t)) {
              prog.rows.push_back({prog.cut_expr(c), f});
            }
          }
        }
      }
    }
  }
  for (const LinearCut& c : active_cuts) {
    for (int a = 0; a < c.arity; ++a) {
      if (c.index[a] < 0 || c.index[a] >= n) throw std::invalid_argument("cut index out of range");
    }
    prog.rows.push_back({prog.cut_expr(c), c.family});
  }
  for (const TrilinearBlock& blk : blocks) {
    for (const LocalForm& row : trilinear_hull_rows()) {
      prog.rows.push_back({prog.local_expr(row, blk.triple), CutFamily::kTri});
    }
    for (const SocCap& cap : blk.caps) {
      prog.cones.push_back({prog.local_expr(cap.u(), blk.triple), prog.local_expr(cap.v(), blk.triple),
                            prog.local_expr(cap.w(), blk.triple)});
    }
  }

  for (int i = 0; i < n; ++i) {
    prog.objective.add(prog.layout.x(i), inst.q()[i]);
    prog.objective.add(prog.layout.X(i, i), inst.Q()(i, i));
    for (int j = i + 1; j < n; ++j) {
      prog.objective.add(prog.layout.X(i, j), inst.Q()(i, j) + inst.Q()(j, i));
    }
  }
  prog.sense = Sense::kMaximize;
  return prog;
}

// ---------------------------------------------------------------- backend

std::string_view status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kNumericalTrouble: return "numerical-trouble";
  }
  return "?";
}

BackendOptions BackendOptions::from_environment() {
  BackendOptions opt;
  if (const char* env = std::getenv("BOXQP_SOLVER_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0 && v < 1.0) {
      opt.tolerance = v;
      opt.accept = std::max(opt.accept, v);
    }
  }
  return opt;
}

namespace {

void check_expr(const AffineExpr& e, int num_vars) {
  for (const auto& [v, c] : e.terms) {
    if (v < 0 || v >= num_vars) throw std::invalid_argument("program references unknown variable");
    if (!std::isfinite(c)) throw std::invalid_argument("program has a non-finite coefficient");
  }
  if (!std::isfinite(e.constant)) throw std::invalid_argument("program has a non-finite constant");
}

void validate(const ConicProgram& p) {
  if (p.num_vars <= 0) throw std::invalid_argument("program has no variables");
  for (const auto& r : p.rows) check_expr(r.expr, p.num_vars);
  for (const auto& e : p.equalities) check_expr(e, p.num_vars);
  for (const auto& blk : p.psd) {
    if (blk.dim < 1 || blk.entries.size() != SymIndex::packed_size(blk.dim)) {
      throw std::invalid_argument("PSD block has the wrong number of entries");
    }
    for (const auto& e : blk.entries) check_expr(e, p.num_vars);
  }
  for (const auto& c : p.cones) {
    check_expr(c.u, p.num_vars);
    check_expr(c.v, p.num_vars);
    check_expr(c.w, p.num_vars);
  }
  check_expr(p.objective, p.num_vars);
}

// Substitutes var = expr into e.
void substitute(AffineExpr& e, int var, const AffineExpr& expr) {
  double coef = 0.0;
  std::erase_if(e.terms, [&](const auto& t) {
    if (t.first != var) return false;
    coef += t.second;
    return true;
  });
  if (coef == 0.0) return;
  e.constant += coef * expr.constant;
  for (const auto& [v, c] : expr.terms) e.terms.emplace_back(v, coef * c);
  merge_terms(e);
}

struct Reduction {
  // Eliminated variables in elimination order, each as an expression of the
  // variables remaining at that point.
  std::vector<std::pair<int, AffineExpr>> eliminated;
  std::vector<int> free_vars;  // compact index -> original variable
  std::vector<int> compact;    // original variable -> compact index or -1
};

double min_eigenvalue(const Matrix& M) {
  if (M.rows() == 1) return M(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()[0];
}

}  // namespace

BackendSolution InteriorPointBackend::solve(const ConicProgram& input) const {
  ConicProgram p = input;
  for (auto& r : p.rows) merge_terms(r.expr);
  for (auto& e : p.equalities) merge_terms(e);
  for (auto& blk : p.psd) {
    for (auto& e : blk.entries) merge_terms(e);
  }
  for (auto& c : p.cones) {
    merge_terms(c.u);
    merge_terms(c.v);
    merge_terms(c.w);
  }
  merge_terms(p.objective);

  BackendSolution sol;
  Reduction red;
  auto apply_everywhere = [&](int var, const AffineExpr& expr) {
    for (auto& r : p.rows) substitute(r.expr, var, expr);
    for (auto& e : p.equalities) substitute(e, var, expr);
    for (auto& blk : p.psd) {
      for (auto& e : blk.entries) substitute(e, var, expr);
    }
    for (auto& c : p.cones) {
      substitute(c.u, var, expr);
      substitute(c.v, var, expr);
      substitute(c.w, var, expr);
    }
    substitute(p.objective, var, expr);
    for (auto& [v, e] : red.eliminated) substitute(e, var, expr);
  };
  for (std::size_t q = 0; q < p.equalities.size(); ++q) {
    const AffineExpr eq = p.equalities[q];
    if (eq.terms.empty()) {
      if (std::abs(eq.constant) > options_.accept) {
        sol.status = SolveStatus::kInfeasible;
        sol.diagnostics = "inconsistent equality constraints";
        return sol;
      }
      continue;
    }
    const auto pivot = std::max_element(eq.terms.begin(), eq.terms.end(), [](auto& a, auto& b) {
      return std::abs(a.second) < std::abs(b.second);
    });
    const int var = pivot->first;
    const double a = pivot->second;
    AffineExpr expr;
    expr.constant = -eq.constant / a;
    for (const auto& [v, c] : eq.terms) {
      if (v != var) expr.terms.emplace_back(v, -c / a);
    }
    apply_everywhere(var, expr);
    red.eliminated.emplace_back(var, expr);
  }

  red.compact.assign(static_cast<std::size_t>(p.num_vars), -1);
  std::vector<bool> gone(static_cast<std::size_t>(p.num_vars), false);
  for (const auto& [v, e] : red.eliminated) gone[static_cast<std::size_t>(v)] = true;
  for (int v = 0; v < p.num_vars; ++v) {
    if (gone[static_cast<std::size_t>(v)]) continue;
    red.compact[static_cast<std::size_t>(v)] = static_cast<int>(red.free_vars.size());
    red.free_vars.push_back(v);
  }

  detail::BlockSdp sdp;
  sdp.m = static_cast<int>(red.free_vars.size());
  const double sign = p.sense == Sense::kMaximize ? 1.0 : -1.0;
  sdp.b = Vector::Zero(sdp.m);
  for (const auto& [v, c] : p.objective.terms) sdp.b[red.compact[static_cast<std::size_t>(v)]] = sign * c;
  const double bscale = std::max(1.0, sdp.b.cwiseAbs().maxCoeff());
  sdp.b /= bscale;

  for (const auto& r : p.rows) {
    detail::LpRow row;
    row.c = r.expr.constant;
    for (const auto& [v, c] : r.expr.terms) row.a.emplace_back(red.compact[static_cast<std::size_t>(v)], -c);
    sdp.lp.push_back(std::move(row));
  }
  auto add_block = [&](int dim, auto&& entry) {
    detail::SdpBlock blk;
    blk.C = Matrix::Zero(dim, dim);
    std::map<int, Matrix> coeffs;
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        const AffineExpr& e = entry(i, j);
        blk.C(i, j) = blk.C(j, i) = e.constant;
        for (const auto& [v, c] : e.terms) {
          const int cv = red.compact[static_cast<std::size_t>(v)];
          auto [it, fresh] = coeffs.try_emplace(cv, Matrix::Zero(dim, dim));
          it->second(i, j) -= c;
          if (i != j) it->second(j, i) -= c;
        }
      }
    }
    for (auto& [v, A] : coeffs) {
      blk.vars.push_back(v);
      blk.A.push_back(std::move(A));
    }
    sdp.blocks.push_back(std::move(blk));
  };
  for (const auto& psd : p.psd) {
    if (psd.dim == 1) {
      detail::LpRow row;
      row.c = psd.entries[0].constant;
      for (const auto& [v, c] : psd.entries[0].terms) row.a.emplace_back(red.compact[static_cast<std::size_t>(v)], -c);
      sdp.lp.push_back(std::move(row));
      continue;
    }
    add_block(psd.dim, [&](int i, int j) -> const AffineExpr& { return psd.at(i, j); });
  }
  for (const auto& cone : p.cones) {
    add_block(2, [&](int i, int j) -> const AffineExpr& {
      if (i == 0 && j == 0) return cone.v;
      if (i == 1 && j == 1) return cone.w;
      return cone.u;
    });
  }

  const detail::IpmResult r = detail::solve_block_sdp(sdp, options_);
  sol.iterations = r.iterations;

  Vector values = Vector::Zero(p.num_vars);
  for (int c = 0; c < sdp.m; ++c) values[red.free_vars[static_cast<std::size_t>(c)]] = r.y[c];
  for (auto it = red.eliminated.rbegin(); it != red.eliminated.rend(); ++it) {
    values[it->first] = it->second.evaluate(values);
  }

  // Constraint violations of the returned point, measured on the input.
  double violation = 0.0;
  for (const auto& row : input.rows) violation = std::max(violation, -row.expr.evaluate(values));
  for (const auto& e : input.equalities) violation = std::max(violation, std::abs(e.evaluate(values)));
  for (const auto& blk : input.psd) {
    Matrix M(blk.dim, blk.dim);
    for (int i = 0; i < blk.dim; ++i) {
      for (int j = i; j < blk.dim; ++j) M(i, j) = M(j, i) = blk.at(i, j).evaluate(values);
    }
    violation = std::max(violation, -min_eigenvalue(M));
  }
  for (const auto& cone : input.cones) {
    Matrix M(2, 2);
    M << cone.v.evaluate(values), cone.u.evaluate(values), cone.u.evaluate(values),
        cone.w.evaluate(values);
    violation = std::max(violation, -min_eigenvalue(M));
  }

  sol.values = std::move(values);
  sol.objective = input.objective.evaluate(sol.values);
  sol.residual = std::max({r.relative_gap, r.primal_infeasibility, r.dual_infeasibility, violation});
  std::ostringstream diag;
  diag << r.message << " after " << r.iterations << " iterations; gap " << r.relative_gap
       << ", primal " << r.primal_infeasibility << ", dual " << r.dual_infeasibility
       << ", violation " << violation;
  sol.diagnostics = diag.str();
  if (std::isfinite(sol.residual) && sol.residual <= options_.accept) {
    sol.status = SolveStatus::kOptimal;
  } else {
    sol.status = SolveStatus::kNumericalTrouble;
  }
  return sol;
}

BackendSolution solve(const ConicProgram& program, const ConicBackend& backend) {
  validate(program);
  return backend.solve(program);
}

}  // namespace boxqp
