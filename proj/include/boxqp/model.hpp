#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace boxqp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Box feasibility slack accepted by feasible_value before clamping.
inline constexpr double kBoxTolerance = 1e-8;

/// Index triple i < j < k into the problem variables.
struct Triple {
  int i = 0;
  int j = 1;
  int k = 2;

  std::array<int, 3> as_array() const { return {i, j, k}; }
  bool valid(int n) const { return 0 <= i && i < j && j < k && k < n; }
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Position of the unordered pair {i, j} in packed symmetric storage.
///
/// Pairs are canonicalized to i <= j and laid out column by column of the
/// upper triangle, so offset(i, j) = j (j + 1) / 2 + i. The packed layout is
/// the variable ordering used everywhere a symmetric matrix is flattened.
class SymIndex {
 public:
  SymIndex(int i, int j) : i_(i < j ? i : j), j_(i < j ? j : i) {}

  int row() const { return i_; }
  int col() const { return j_; }
  std::size_t offset() const {
    return static_cast<std::size_t>(j_) * (j_ + 1) / 2 + i_;
  }
  static std::size_t packed_size(int n) {
    return static_cast<std::size_t>(n) * (n + 1) / 2;
  }
  static SymIndex from_offset(std::size_t offset);

  friend bool operator==(const SymIndex&, const SymIndex&) = default;

 private:
  int i_;
  int j_;
};

/// Data of max x'Qx + q'x over the unit box.
class BoxQpInstance {
 public:
  /// Throws std::invalid_argument unless Q is square, exactly symmetric and
  /// matches q.
  BoxQpInstance(Matrix Q, Vector q, std::string label = {});

  int n() const { return static_cast<int>(q_.size()); }
  const Matrix& Q() const { return Q_; }
  const Vector& q() const { return q_; }
  const std::string& label() const { return label_; }

  friend bool operator==(const BoxQpInstance& a, const BoxQpInstance& b) {
    return a.Q_ == b.Q_ && a.q_ == b.q_ && a.label_ == b.label_;
  }

 private:
  Matrix Q_;
  Vector q_;
  std::string label_;
};

/// A point (x, X) of the lifted space, with optional trilinear values z.
struct MomentPoint {
  Vector x;
  Matrix X;
  std::map<Triple, double> z;

  int n() const { return static_cast<int>(x.size()); }

  /// Rank-one lift (x, x x').
  static MomentPoint lift(const Vector& x);
  /// Builds the point from the (n+1)x(n+1) matrix [1 x'; x X].
  static MomentPoint from_Y(const Matrix& Y);
};

/// Y(x, X) = [1 x'; x X].
Matrix assemble_Y(const MomentPoint& p);

/// trace(Q X) + q'x. Throws std::invalid_argument on dimension mismatch.
double objective_value(const BoxQpInstance& inst, const MomentPoint& p);

/// x'Qx + q'x after clamping x into [0, 1]^n. Components more than
/// kBoxTolerance outside the box raise std::domain_error.
double feasible_value(const BoxQpInstance& inst, const Vector& x);

/// Clamps into [0,1]^n, throwing std::domain_error beyond kBoxTolerance.
Vector clamp_to_box(const Vector& x);

/// Ratio of the second largest to the largest eigenvalue of a symmetric
/// matrix (0 when the matrix vanishes).
double rank_ratio(const Matrix& Y);

}  // namespace boxqp
