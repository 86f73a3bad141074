#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boxqp/conic.hpp"
#include "boxqp/cuts.hpp"
#include "boxqp/model.hpp"

namespace boxqp {

struct DriverConfig {
  int max_rounds = 20;        // per phase
  int cuts_per_round = 10;    // cuts, and separately new SOC blocks, per round
  double threshold = 1e-5;    // normalized violation; also the z-interval emptiness margin
  double absolute_threshold = 1e-7;
  SocSelection soc;
  double rank_tolerance = 1e-5;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on non-positive thresholds or limits.
  void validate() const;
};

/// Constraints of a relaxation beyond its static level.
struct ModelState {
  RelaxationLevel base;  // enforced on every pair/triple
  std::vector<LinearCut> cuts;
  std::vector<TrilinearBlock> blocks;

  ConicProgram program(const BoxQpInstance& inst) const;
};

struct RoundLog {
  int round = 0;  // 0 is the static base solve
  std::string phase;
  SolveStatus status = SolveStatus::kOptimal;
  double value = 0.0;
  std::map<CutFamily, int> cuts_added;
  int blocks_added = 0;
  int caps_added = 0;

  friend bool operator==(const RoundLog&, const RoundLog&) = default;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kNumericalTrouble;
  std::string diagnostics;
  std::vector<RoundLog> rounds;
  std::vector<MomentPoint> round_points;  // solution of each solved round
  double value = 0.0;           // final relaxation bound
  double feasible_value = 0.0;  // x'Qx + q'x at the final x (clamped)
  double rank_ratio = 1.0;      // second / first eigenvalue of the final Y
  MomentPoint point;
  ModelState model;
  std::map<CutFamily, int> cut_counts;
  int soc_blocks = 0;
  int soc_caps = 0;
  std::optional<Vector> rank_one_x;  // set when the final Y is rank one

  bool ok() const { return status == SolveStatus::kOptimal; }
  int etri_cuts() const;
};

/// Violated cuts of the families over all triples of the point, at most
/// `cap`, by normalized violation descending; ties by triple, family, tag.
/// Cuts already in `active` are skipped.
std::vector<LinearCut> separate(const MomentPoint& p, std::span<const CutFamily> families, int cap,
                                double threshold, std::span<const LinearCut> active = {},
                                double absolute_threshold = 0.0);

/// SOC additions at a solved point. Triples without a block whose z-range
/// under the hull rows and all selected caps is empty by more than `margin`
/// get a new block (most empty first, at most `cap`), holding caps chosen
/// greedily by largest shrink until the range is empty. Triples with a block
/// get an entry listing the caps the point's z violates by more than `margin`.
std::vector<TrilinearBlock> separate_soc(const MomentPoint& p, const SocSelection& selection,
                                         int cap, double margin,
                                         std::span<const TrilinearBlock> existing = {});

/// Solve, separate, add, repeat: ETRI1 first, then ETRI2/3, then SOC blocks,
/// each phase until nothing is violated or max_rounds is reached.
SolveReport run(const BoxQpInstance& inst, const RelaxationLevel& level, const DriverConfig& config,
                const ConicBackend& backend);

/// Pins Q.X + q'x to pinned_value on the model, maximizes a seeded random
/// linear objective over (x, X), and returns x when the new Y is rank one
/// and its feasible value is within 1e-4 of the pin. When the equality
/// leaves the IPM without an interior, the pin is retried as
/// Q.X + q'x >= pinned_value - s(1 + |pinned_value|) for s = 1e-7, 1e-6, and
/// coordinates within 1e-3 of a bound may be snapped to it.
std::optional<Vector> extract_rank_one(const BoxQpInstance& inst, double pinned_value,
                                       const ModelState& model, const ConicBackend& backend,
                                       std::uint64_t seed, double rank_tolerance = 1e-5);

}  // namespace boxqp
