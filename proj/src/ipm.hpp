#pragma once

#include <string>
#include <utility>
#include <vector>

#include "boxqp/conic.hpp"

namespace boxqp::detail {

/// One semidefinite block of C - sum_i y_i A_i >= 0; only variables with a
/// nonzero A_i are listed.
struct SdpBlock {
  Matrix C;
  std::vector<int> vars;
  std::vector<Matrix> A;
};

/// Scalar row c - sum_i a_i y_i >= 0.
struct LpRow {
  double c = 0.0;
  std::vector<std::pair<int, double>> a;
};

/// Dual standard form:  max b'y  s.t.  C - A^T(y) = Z >= 0, with primal
///                      min <C, X>  s.t.  A(X) = b,  X >= 0.
struct BlockSdp {
  int m = 0;
  Vector b;
  std::vector<LpRow> lp;
  std::vector<SdpBlock> blocks;
};

struct IpmResult {
  bool converged = false;
  Vector y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::string message;
};

IpmResult solve_block_sdp(const BlockSdp& problem, const BackendOptions& options);

}  // namespace boxqp::detail
