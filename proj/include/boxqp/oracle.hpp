#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "boxqp/model.hpp"

namespace boxqp {

enum class BoundState : std::uint8_t { kAtZero = 0, kAtOne = 1, kFree = 2 };

/// Assignment of every index to a bound or to the free set. Patterns compare
/// lexicographically with index 0 most significant.
using ActivePattern = std::vector<BoundState>;

struct GlobalSolution {
  double value = 0.0;
  Vector x;  // components on a bound are exactly 0 or 1
  ActivePattern pattern;
  std::size_t candidates = 0;  // stationary points inside the box examined
};

inline constexpr int kOracleMaxDimension = 12;

/// Global maximum of x'Qx + q'x over [0,1]^n by enumerating the 3^n faces
/// and their stationary points. Throws std::invalid_argument for n > max_n.
GlobalSolution solve_global(const BoxQpInstance& inst, int max_n = kOracleMaxDimension);

struct GapReport {
  double relaxation = 0.0;
  double optimum = 0.0;
  double feasible = 0.0;
  double optimality_gap = 0.0;  // relaxation - optimum
  double feasible_gap = 0.0;    // relaxation - feasible
};

/// Gaps of a relaxation bound against the oracle optimum and against a
/// feasible value (the optimum when none is given).
GapReport certify_bound(const BoxQpInstance& inst, double relax_value,
                        std::optional<double> feasible = std::nullopt);

}  // namespace boxqp
