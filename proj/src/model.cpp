#include "boxqp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace boxqp {

SymIndex SymIndex::from_offset(std::size_t offset) {
  int j = 0;
  while (static_cast<std::size_t>(j + 1) * (j + 2) / 2 <= offset) ++j;
  const int i = static_cast<int>(offset - static_cast<std::size_t>(j) * (j + 1) / 2);
  return SymIndex(i, j);
}

BoxQpInstance::BoxQpInstance(Matrix Q, Vector q, std::string label)
    : Q_(std::move(Q)), q_(std::move(q)), label_(std::move(label)) {
  if (q_.size() < 1) throw std::invalid_argument("instance dimension must be >= 1");
  if (Q_.rows() != q_.size() || Q_.cols() != q_.size()) {
    std::ostringstream msg;
    msg << "Q is " << Q_.rows() << "x" << Q_.cols() << " but q has length " << q_.size();
    throw std::invalid_argument(msg.str());
  }
  for (int i = 0; i < n(); ++i) {
    for (int j = i + 1; j < n(); ++j) {
      if (Q_(i, j) != Q_(j, i)) {
        std::ostringstream msg;
        msg << "Q is not symmetric: Q[" << i + 1 << "][" << j + 1 << "] = " << Q_(i, j)
            << " but Q[" << j + 1 << "][" << i + 1 << "] = " << Q_(j, i);
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

MomentPoint MomentPoint::lift(const Vector& x) {
  MomentPoint p;
  p.x = x;
  p.X = x * x.transpose();
  return p;
}

MomentPoint MomentPoint::from_Y(const Matrix& Y) {
  const Eigen::Index n = Y.rows() - 1;
  MomentPoint p;
  p.x = Y.block(1, 0, n, 1);
  p.X = 0.5 * (Y.block(1, 1, n, n) + Y.block(1, 1, n, n).transpose());
  return p;
}

Matrix assemble_Y(const MomentPoint& p) {
  const Eigen::Index n = p.x.size();
  Matrix Y(n + 1, n + 1);
  Y(0, 0) = 1.0;
  Y.block(1, 0, n, 1) = p.x;
  Y.block(0, 1, 1, n) = p.x.transpose();
  Y.block(1, 1, n, n) = p.X;
  return Y;
}

double objective_value(const BoxQpInstance& inst, const MomentPoint& p) {
  if (p.x.size() != inst.n() || p.X.rows() != inst.n() || p.X.cols() != inst.n()) {
    throw std::invalid_argument("moment point dimension does not match instance");
  }
  return inst.Q().cwiseProduct(p.X).sum() + inst.q().dot(p.x);
}

Vector clamp_to_box(const Vector& x) {
  Vector out = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < -kBoxTolerance || x[i] > 1.0 + kBoxTolerance || !std::isfinite(x[i])) {
      std::ostringstream msg;
      msg << "x[" << i + 1 << "] = " << x[i] << " lies outside the unit box";
      throw std::domain_error(msg.str());
    }
    out[i] = std::clamp(x[i], 0.0, 1.0);
  }
  return out;
}

double feasible_value(const BoxQpInstance& inst, const Vector& x) {
  if (x.size() != inst.n()) throw std::invalid_argument("x dimension does not match instance");
  const Vector xc = clamp_to_box(x);
  return xc.dot(inst.Q() * xc) + inst.q().dot(xc);
}

double rank_ratio(const Matrix& Y) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Y, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  const Eigen::Index m = ev.size();
  if (m < 2) return 0.0;
  const double top = ev[m - 1];
  if (top <= 0.0) return 0.0;
  return std::max(0.0, ev[m - 2]) / top;
}

}  // namespace boxqp
