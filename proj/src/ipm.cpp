#include "ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace boxqp::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix sym(const Matrix& M) { return 0.5 * (M + M.transpose()); }

// Largest alpha with X + alpha dX still positive semidefinite.
double max_step(const Matrix& X, const Matrix& dX) {
  if (X.rows() == 2) {
    // det(X + a dX) is a quadratic in a; the trace stays positive before it
    // vanishes, so the first positive root bounds the step.
    const double a2 = dX(0, 0) * dX(1, 1) - dX(0, 1) * dX(0, 1);
    const double a1 = X(0, 0) * dX(1, 1) + X(1, 1) * dX(0, 0) - 2.0 * X(0, 1) * dX(0, 1);
    const double a0 = X(0, 0) * X(1, 1) - X(0, 1) * X(0, 1);
    double best = kInf;
    const double tr = X(0, 0) + X(1, 1);
    const double dtr = dX(0, 0) + dX(1, 1);
    if (dtr < 0) best = -tr / dtr;
    if (std::abs(a2) < 1e-300) {
      if (a1 < 0) best = std::min(best, -a0 / a1);
    } else {
      const double disc = a1 * a1 - 4.0 * a2 * a0;
      if (disc >= 0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (a1 + (a1 >= 0 ? sq : -sq));
        for (double root : {q / a2, q != 0.0 ? a0 / q : kInf}) {
          if (root > 0) best = std::min(best, root);
        }
      }
    }
    return best;
  }
  Eigen::LLT<Matrix> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const Matrix left = llt.matrixL().solve(dX);
  const Matrix W = llt.matrixL().solve(left.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym(W), Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()[0];
  return lo < 0 ? -1.0 / lo : kInf;
}

double max_step(const Vector& x, const Vector& dx) {
  double best = kInf;
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    if (dx[r] < 0) best = std::min(best, -x[r] / dx[r]);
  }
  return best;
}

struct Iterate {
  Vector xl, zl;
  std::vector<Matrix> X, Z;
  Vector y;
};

struct Direction {
  Vector dxl, dzl;
  std::vector<Matrix> dX, dZ;
  Vector dy;
};

class Solver {
 public:
  Solver(const BlockSdp& p, const BackendOptions& o) : p_(p), opt_(o) {
    order_ = static_cast<double>(p_.lp.size());
    for (const auto& blk : p_.blocks) order_ += static_cast<double>(blk.C.rows());
    norm_b_ = p_.b.norm();
    double c2 = 0.0;
    for (const auto& r : p_.lp) c2 += r.c * r.c;
    for (const auto& blk : p_.blocks) c2 += blk.C.squaredNorm();
    norm_c_ = std::sqrt(c2);
  }

  IpmResult run() {
    IpmResult out;
    Iterate it = initial_point();
    double prev_ap = 0.0;
    double prev_ad = 0.0;
    double best_merit = kInf;
    Vector best_y = it.y;
    Measures best_measures;
    int stalls = 0;
    for (int iter = 0; iter <= opt_.max_iterations; ++iter) {
      const Residuals res = residuals(it);
      const Measures ms = measures(it, res);
      const double merit = std::max({ms.relgap, ms.pinf, ms.dinf});
      if (merit < best_merit) {
        best_merit = merit;
        best_y = it.y;
        best_measures = ms;
      }
      out.iterations = iter;
      if (merit <= opt_.tolerance) {
        out.converged = true;
        out.message = "converged";
        break;
      }
      if (iter == opt_.max_iterations) {
        out.message = "iteration limit";
        break;
      }
      if (!std::isfinite(merit) || it.y.norm() > 1e12) {
        out.message = "diverging iterates";
        break;
      }

      // Inverses of the dual slacks.
      Vector zinv_l = it.zl.cwiseInverse();
      std::vector<Matrix> Zinv(p_.blocks.size());
      for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
        Eigen::LLT<Matrix> llt(it.Z[k]);
        Zinv[k] = llt.solve(Matrix::Identity(it.Z[k].rows(), it.Z[k].cols()));
        Zinv[k] = sym(Zinv[k]);
      }

      Eigen::LDLT<Matrix> schur = factor_schur(it, zinv_l, Zinv);
      if (schur.info() != Eigen::Success) {
        out.message = "schur complement factorization failed";
        break;
      }

      const double mu = ms.gap / order_;
      // Predictor.
      Direction pred = direction(it, res, zinv_l, Zinv, schur, 0.0, mu, nullptr);
      const double ap_aff = std::min(1.0, step_primal(it, pred));
      const double ad_aff = std::min(1.0, step_dual(it, pred));
      double mu_aff = 0.0;
      mu_aff += (it.xl + ap_aff * pred.dxl).dot(it.zl + ad_aff * pred.dzl);
      for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
        mu_aff += (it.X[k] + ap_aff * pred.dX[k]).cwiseProduct(it.Z[k] + ad_aff * pred.dZ[k]).sum();
      }
      mu_aff /= order_;
      const double expon = std::max(1.0, 3.0 * std::pow(std::min(ap_aff, ad_aff), 2));
      const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, expon), 0.0, 1.0);

      // Corrector.
      Direction dir = direction(it, res, zinv_l, Zinv, schur, sigma, mu, &pred);
      const double gamma = 0.9 + 0.09 * std::min(prev_ap, prev_ad);
      const double ap = std::min(1.0, gamma * step_primal(it, dir));
      const double ad = std::min(1.0, gamma * step_dual(it, dir));
      prev_ap = ap;
      prev_ad = ad;
      if (ap < 1e-10 && ad < 1e-10) {
        if (++stalls >= 3) {
          out.message = "stalled";
          break;
        }
      } else {
        stalls = 0;
      }

      it.xl += ap * dir.dxl;
      it.zl += ad * dir.dzl;
      it.y += ad * dir.dy;
      for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
        it.X[k] = sym(it.X[k] + ap * dir.dX[k]);
        it.Z[k] = sym(it.Z[k] + ad * dir.dZ[k]);
      }
    }
    if (!out.converged) {
      it.y = best_y;
    }
    const Residuals res = residuals(it);
    Measures ms = measures(it, res);
    if (!out.converged) ms = best_measures;
    out.y = it.y;
    out.primal_objective = ms.pobj;
    out.dual_objective = ms.dobj;
    out.relative_gap = ms.relgap;
    out.primal_infeasibility = ms.pinf;
    out.dual_infeasibility = ms.dinf;
    return out;
  }

 private:
  struct Residuals {
    Vector rp;
    Vector rd_l;
    std::vector<Matrix> rd;
  };
  struct Measures {
    double pobj = 0, dobj = 0, gap = 0, relgap = kInf, pinf = kInf, dinf = kInf;
  };

  Vector apply_A(const Vector& xl, const std::vector<Matrix>& X) const {
    Vector out = Vector::Zero(p_.m);
    for (std::size_t r = 0; r < p_.lp.size(); ++r) {
      for (const auto& [i, a] : p_.lp[r].a) out[i] += a * xl[static_cast<Eigen::Index>(r)];
    }
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto& blk = p_.blocks[k];
      for (std::size_t t = 0; t < blk.vars.size(); ++t) {
        out[blk.vars[t]] += blk.A[t].cwiseProduct(X[k]).sum();
      }
    }
    return out;
  }

  void apply_AT(const Vector& y, Vector& out_l, std::vector<Matrix>& out) const {
    out_l.setZero(static_cast<Eigen::Index>(p_.lp.size()));
    for (std::size_t r = 0; r < p_.lp.size(); ++r) {
      double s = 0.0;
      for (const auto& [i, a] : p_.lp[r].a) s += a * y[i];
      out_l[static_cast<Eigen::Index>(r)] = s;
    }
    out.resize(p_.blocks.size());
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto& blk = p_.blocks[k];
      out[k].setZero(blk.C.rows(), blk.C.cols());
      for (std::size_t t = 0; t < blk.vars.size(); ++t) out[k] += y[blk.vars[t]] * blk.A[t];
    }
  }

  Iterate initial_point() const {
    Iterate it;
    const auto L = static_cast<Eigen::Index>(p_.lp.size());
    // Per-variable norms of A restricted to each block, as in standard
    // infeasible-start heuristics.
    auto start_scale = [&](double dim, const std::vector<double>& normA, double normC,
                           double& xi, double& eta) {
      xi = std::max(10.0, std::sqrt(dim));
      eta = std::max({10.0, std::sqrt(dim), normC});
      for (int i = 0; i < p_.m; ++i) {
        if (normA[i] == 0.0) continue;
        xi = std::max(xi, dim * (1.0 + std::abs(p_.b[i])) / (1.0 + normA[i]));
        eta = std::max(eta, normA[i]);
      }
    };
    {
      std::vector<double> normA(p_.m, 0.0);
      double normC = 0.0;
      for (const auto& r : p_.lp) {
        normC += r.c * r.c;
        for (const auto& [i, a] : r.a) normA[i] += a * a;
      }
      for (auto& v : normA) v = std::sqrt(v);
      double xi = 0, eta = 0;
      start_scale(static_cast<double>(L), normA, std::sqrt(normC), xi, eta);
      it.xl = Vector::Constant(L, xi);
      it.zl = Vector::Constant(L, eta);
    }
    for (const auto& blk : p_.blocks) {
      std::vector<double> normA(p_.m, 0.0);
      for (std::size_t t = 0; t < blk.vars.size(); ++t) normA[blk.vars[t]] = blk.A[t].norm();
      double xi = 0, eta = 0;
      const auto d = blk.C.rows();
      start_scale(static_cast<double>(d), normA, blk.C.norm(), xi, eta);
      it.X.push_back(xi * Matrix::Identity(d, d));
      it.Z.push_back(eta * Matrix::Identity(d, d));
    }
    it.y = Vector::Zero(p_.m);
    return it;
  }

  Residuals residuals(const Iterate& it) const {
    Residuals res;
    res.rp = p_.b - apply_A(it.xl, it.X);
    Vector atl;
    std::vector<Matrix> at;
    apply_AT(it.y, atl, at);
    res.rd_l.resize(static_cast<Eigen::Index>(p_.lp.size()));
    for (std::size_t r = 0; r < p_.lp.size(); ++r) {
      const auto idx = static_cast<Eigen::Index>(r);
      res.rd_l[idx] = p_.lp[r].c - it.zl[idx] - atl[idx];
    }
    res.rd.resize(p_.blocks.size());
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
      res.rd[k] = p_.blocks[k].C - it.Z[k] - at[k];
    }
    return res;
  }

  Measures measures(const Iterate& it, const Residuals& res) const {
    Measures ms;
    ms.dobj = p_.b.dot(it.y);
    ms.pobj = 0.0;
    ms.gap = it.xl.dot(it.zl);
    for (std::size_t r = 0; r < p_.lp.size(); ++r) {
      ms.pobj += p_.lp[r].c * it.xl[static_cast<Eigen::Index>(r)];
    }
    double rd2 = res.rd_l.squaredNorm();
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
      ms.pobj += p_.blocks[k].C.cwiseProduct(it.X[k]).sum();
      ms.gap += it.X[k].cwiseProduct(it.Z[k]).sum();
      rd2 += res.rd[k].squaredNorm();
    }
    ms.relgap = std::max(ms.gap, 0.0) / (1.0 + std::abs(ms.pobj) + std::abs(ms.dobj));
    ms.pinf = res.rp.norm() / (1.0 + norm_b_);
    ms.dinf = std::sqrt(rd2) / (1.0 + norm_c_);
    return ms;
  }

  Eigen::LDLT<Matrix> factor_schur(const Iterate& it, const Vector& zinv_l,
                                   const std::vector<Matrix>& Zinv) const {
    Matrix M = Matrix::Zero(p_.m, p_.m);
    for (std::size_t r = 0; r < p_.lp.size(); ++r) {
      const auto idx = static_cast<Eigen::Index>(r);
      const double d = it.xl[idx] * zinv_l[idx];
      const auto& a = p_.lp[r].a;
      for (const auto& [i, ai] : a) {
        for (const auto& [j, aj] : a) M(i, j) += d * ai * aj;
      }
    }
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto& blk = p_.blocks[k];
      for (std::size_t t = 0; t < blk.vars.size(); ++t) {
        const Matrix G = it.X[k] * blk.A[t] * Zinv[k];
        for (std::size_t s = 0; s < blk.vars.size(); ++s) {
          M(blk.vars[s], blk.vars[t]) += blk.A[s].cwiseProduct(G).sum();
        }
      }
    }
    M = sym(M);
    // A tiny diagonal shift keeps LDLT stable once iterates approach a face.
    const double shift = 1e-14 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
    M.diagonal().array() += shift;
    return Eigen::LDLT<Matrix>(M);
  }

  Direction direction(const Iterate& it, const Residuals& res, const Vector& zinv_l,
                      const std::vector<Matrix>& Zinv, const Eigen::LDLT<Matrix>& schur,
                      double sigma, double mu, const Direction* pred) const {
    const std::size_t nb = p_.blocks.size();
    // Targets T = (sigma mu I - XZ - dXa dZa) Z^-1 and H = X Rd Z^-1.
    Vector tl = (sigma * mu - it.xl.cwiseProduct(it.zl).array()).matrix().cwiseProduct(zinv_l);
    if (pred) tl -= pred->dxl.cwiseProduct(pred->dzl).cwiseProduct(zinv_l);
    Vector hl = it.xl.cwiseProduct(res.rd_l).cwiseProduct(zinv_l);
    std::vector<Matrix> T(nb), H(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      T[k] = sigma * mu * Zinv[k] - it.X[k];
      if (pred) T[k] -= pred->dX[k] * pred->dZ[k] * Zinv[k];
      T[k] = sym(T[k]);
      H[k] = sym(it.X[k] * res.rd[k] * Zinv[k]);
    }
    const Vector rhs = res.rp - apply_A(tl, T) + apply_A(hl, H);

    Direction d;
    d.dy = schur.solve(rhs);
    Vector atl;
    std::vector<Matrix> at;
    apply_AT(d.dy, atl, at);
    d.dzl = res.rd_l - atl;
    d.dxl = tl - it.xl.cwiseProduct(d.dzl).cwiseProduct(zinv_l);
    d.dZ.resize(nb);
    d.dX.resize(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      d.dZ[k] = sym(res.rd[k] - at[k]);
      d.dX[k] = sym(T[k] - it.X[k] * d.dZ[k] * Zinv[k]);
    }
    return d;
  }

  double step_primal(const Iterate& it, const Direction& d) const {
    double a = max_step(it.xl, d.dxl);
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) a = std::min(a, max_step(it.X[k], d.dX[k]));
    return a;
  }
  double step_dual(const Iterate& it, const Direction& d) const {
    double a = max_step(it.zl, d.dzl);
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) a = std::min(a, max_step(it.Z[k], d.dZ[k]));
    return a;
  }

  const BlockSdp& p_;
  const BackendOptions& opt_;
  double order_ = 0.0;
  double norm_b_ = 0.0;
  double norm_c_ = 0.0;
};

}  // namespace

IpmResult solve_block_sdp(const BlockSdp& problem, const BackendOptions& options) {
  return Solver(problem, options).run();
}

}  // namespace boxqp::detail
