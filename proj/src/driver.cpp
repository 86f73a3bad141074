#include "boxqp/driver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace boxqp {

namespace {

constexpr double kPinTolerance = 1e-4;
constexpr double kSnapTolerance = 1e-3;

std::vector<Triple> all_triples(int n) {
  std::vector<Triple> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) out.push_back({i, j, k});
    }
  }
  return out;
}

struct Candidate {
  LinearCut cut;
  Triple triple;
  double normalized = 0.0;
};

auto tie_key(const Candidate& c) {
  return std::make_tuple(c.triple, c.cut.family, c.cut.tag.base, c.cut.tag.pattern.switched,
                         c.cut.tag.pattern.perm);
}

using CutKey = std::pair<std::array<int, 3>, std::array<long long, 10>>;

CutKey key_of(const LinearCut& c) { return {c.index, canonical_key(c)}; }

}  // namespace

void DriverConfig::validate() const {
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  if (cuts_per_round < 1) throw std::invalid_argument("cuts_per_round must be at least 1");
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (!(absolute_threshold > 0.0)) throw std::invalid_argument("absolute threshold must be positive");
  if (!(rank_tolerance > 0.0)) throw std::invalid_argument("rank tolerance must be positive");
}

ConicProgram ModelState::program(const BoxQpInstance& inst) const {
  return build_relaxation(inst, base, cuts, blocks);
}

int SolveReport::etri_cuts() const {
  int total = 0;
  for (const auto& [f, c] : cut_counts) {
    if (f == CutFamily::kEtri1 || f == CutFamily::kEtri2 || f == CutFamily::kEtri3) total += c;
  }
  return total;
}

std::vector<LinearCut> separate(const MomentPoint& p, std::span<const CutFamily> families, int cap,
                                double threshold, std::span<const LinearCut> active,
                                double absolute_threshold) {
  const std::vector<Triple> triples = all_triples(p.n());
  std::set<CutKey> present;
  for (const LinearCut& c : active) {
    if (c.arity == 3) present.insert(key_of(c));
  }
  // Orbits on the canonical triple, moved to each triple below.
  std::vector<std::vector<LinearCut>> orbits;
  for (CutFamily f : families) orbits.push_back(generate_family(f));

  auto scan = [&](std::size_t first, std::size_t last) {
    std::vector<Candidate> found;
    for (std::size_t t = first; t < last; ++t) {
      for (const auto& orbit : orbits) {
        for (const LinearCut& base : orbit) {
          LinearCut c = base.on(triples[t]);
          const double lhs = evaluate_cut(c, p);
          if (-lhs <= absolute_threshold) continue;
          const double nv = -lhs / coefficient_norm(c);
          if (nv <= threshold) continue;
          if (present.contains(key_of(c))) continue;
          found.push_back({std::move(c), triples[t], nv});
        }
      }
    }
    return found;
  };
  std::vector<Candidate> all;
  const std::size_t chunk = 64;
  if (triples.size() <= chunk) {
    all = scan(0, triples.size());
  } else {
    std::vector<std::future<std::vector<Candidate>>> jobs;
    for (std::size_t first = 0; first < triples.size(); first += chunk) {
      jobs.push_back(std::async(std::launch::async, scan, first, std::min(triples.size(), first + chunk)));
    }
    for (auto& j : jobs) {
      auto part = j.get();
      all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  }
  std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
    if (a.normalized != b.normalized) return a.normalized > b.normalized;
    return tie_key(a) < tie_key(b);
  });
  std::vector<LinearCut> out;
  for (auto& c : all) {
    if (static_cast<int>(out.size()) >= cap) break;
    out.push_back(std::move(c.cut));
  }
  return out;
}

std::vector<TrilinearBlock> separate_soc(const MomentPoint& p, const SocSelection& selection,
                                         int cap, double margin,
                                         std::span<const TrilinearBlock> existing) {
  const std::vector<SocCap> caps = enumerate_soc_caps(selection);
  std::map<Triple, const TrilinearBlock*> have;
  for (const auto& b : existing) have[b.triple] = &b;

  std::vector<TrilinearBlock> out;
  std::vector<std::pair<double, TrilinearBlock>> fresh;
  for (const Triple& t : all_triples(p.n())) {
    const auto it = have.find(t);
    if (it != have.end()) {
      const auto zt = p.z.find(t);
      if (zt == p.z.end()) continue;
      TrilinearBlock extra{t, {}};
      for (const SocCap& cap_i : caps) {
        if (std::find(it->second->caps.begin(), it->second->caps.end(), cap_i) != it->second->caps.end()) continue;
        const ZInterval r = cap_z_interval(p, t, cap_i);
        if (zt->second < r.lower - margin || zt->second > r.upper + margin) extra.caps.push_back(cap_i);
      }
      if (!extra.caps.empty()) out.push_back(std::move(extra));
      continue;
    }
    const ZInterval full = soc_z_interval(p, t, caps);
    if (!full.empty(margin)) continue;
    // Greedy cover: keep adding the cap that shrinks the range most.
    ZInterval cur = hull_z_interval(p, t);
    TrilinearBlock blk{t, {}};
    std::vector<bool> used(caps.size(), false);
    while (!cur.empty(margin)) {
      double best_gain = -1.0;
      std::size_t best = caps.size();
      ZInterval best_range = cur;
      for (std::size_t c = 0; c < caps.size(); ++c) {
        if (used[c]) continue;
        const ZInterval r = cap_z_interval(p, t, caps[c]);
        const ZInterval next{std::max(cur.lower, r.lower), std::min(cur.upper, r.upper)};
        double gain = (next.lower - cur.lower) + (cur.upper - next.upper);
        if (std::isinf(gain) || std::isnan(gain)) gain = std::numeric_limits<double>::max();
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
          best_range = next;
        }
      }
      if (best == caps.size()) break;
      used[best] = true;
      blk.caps.push_back(caps[best]);
      cur = best_range;
    }
    fresh.emplace_back(full.lower - full.upper, std::move(blk));
  }
  std::stable_sort(fresh.begin(), fresh.end(), [](const auto& a, const auto& b) {
    const double ga = std::isnan(a.first) ? std::numeric_limits<double>::infinity() : a.first;
    const double gb = std::isnan(b.first) ? std::numeric_limits<double>::infinity() : b.first;
    return ga > gb;
  });
  const std::size_t keep = std::min(fresh.size(), static_cast<std::size_t>(cap));
  for (std::size_t i = 0; i < keep; ++i) out.push_back(std::move(fresh[i].second));
  return out;
}

SolveReport run(const BoxQpInstance& inst, const RelaxationLevel& level, const DriverConfig& config,
                const ConicBackend& backend) {
  config.validate();
  SolveReport report;
  report.model.base = level.without_etri();

  struct Phase {
    std::string name;
    std::vector<CutFamily> families;
    bool soc = false;
  };
  std::vector<Phase> phases;
  std::vector<CutFamily> families;
  if (level.etri1) {
    families.push_back(CutFamily::kEtri1);
    phases.push_back({"ETRI1", families, false});
  }
  if (level.etri2 || level.etri3) {
    if (level.etri2) families.push_back(CutFamily::kEtri2);
    if (level.etri3) families.push_back(CutFamily::kEtri3);
    phases.push_back({"ETRI2/3", families, false});
  }
  if (level.soc && inst.n() >= 3) phases.push_back({"SOC", families, true});

  BackendSolution sol;
  ConicProgram prog;
  auto solve_model = [&](RoundLog& log) {
    prog = report.model.program(inst);
    sol = solve(prog, backend);
    log.status = sol.status;
    log.value = sol.objective;
    report.rounds.push_back(log);
    if (!sol.ok()) {
      report.status = sol.status;
      report.diagnostics = "round " + std::to_string(log.round) + ": " + sol.diagnostics;
      return false;
    }
    report.point = prog.point(sol.values);
    report.round_points.push_back(report.point);
    return true;
  };

  int round = 0;
  RoundLog base_log;
  base_log.phase = "base";
  if (!solve_model(base_log)) return report;

  for (const Phase& phase : phases) {
    for (int r = 0; r < config.max_rounds; ++r) {
      const std::vector<LinearCut> cuts =
          separate(report.point, phase.families, config.cuts_per_round, config.threshold,
                   report.model.cuts, config.absolute_threshold);
      std::vector<TrilinearBlock> soc;
      if (phase.soc) {
        soc = separate_soc(report.point, config.soc, config.cuts_per_round, config.threshold,
                           report.model.blocks);
      }
      if (cuts.empty() && soc.empty()) break;

      RoundLog log;
      log.round = ++round;
      log.phase = phase.name;
      for (const LinearCut& c : cuts) {
        ++log.cuts_added[c.family];
        report.model.cuts.push_back(c);
      }
      for (TrilinearBlock& b : soc) {
        auto it = std::find_if(report.model.blocks.begin(), report.model.blocks.end(),
                               [&](const TrilinearBlock& x) { return x.triple == b.triple; });
        log.caps_added += static_cast<int>(b.caps.size());
        if (it == report.model.blocks.end()) {
          ++log.blocks_added;
          report.model.blocks.push_back(std::move(b));
        } else {
          it->caps.insert(it->caps.end(), b.caps.begin(), b.caps.end());
        }
      }
      if (!solve_model(log)) return report;
    }
  }

  report.status = SolveStatus::kOptimal;
  report.diagnostics = sol.diagnostics;
  report.value = sol.objective;
  const Vector x = report.point.x.cwiseMax(0.0).cwiseMin(1.0);
  report.feasible_value = feasible_value(inst, x);
  report.rank_ratio = rank_ratio(assemble_Y(report.point));
  if (report.rank_ratio <= config.rank_tolerance) report.rank_one_x = x;
  for (const LinearCut& c : report.model.cuts) ++report.cut_counts[c.family];
  report.soc_blocks = static_cast<int>(report.model.blocks.size());
  for (const auto& b : report.model.blocks) report.soc_caps += static_cast<int>(b.caps.size());
  return report;
}

std::optional<Vector> extract_rank_one(const BoxQpInstance& inst, double pinned_value,
                                       const ModelState& model, const ConicBackend& backend,
                                       std::uint64_t seed, double rank_tolerance) {
  ConicProgram base = model.program(inst);
  AffineExpr value = base.objective;
  value.constant -= pinned_value;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = inst.n();
  AffineExpr random;
  for (int i = 0; i < n; ++i) random.add(base.layout.x(i), normal(rng));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) random.add(base.layout.X(i, j), normal(rng));
  }

  // slack < 0 pins with an equality; otherwise objective >= pin - slack.
  auto attempt = [&](double slack) -> std::optional<Vector> {
    ConicProgram prog = base;
    if (slack < 0.0) {
      prog.equalities.push_back(value);
    } else {
      AffineExpr row = value;
      row.constant += slack * (1.0 + std::abs(pinned_value));
      prog.rows.push_back({row, CutFamily::kSimplex});
    }
    prog.objective = random;
    prog.sense = Sense::kMaximize;
    const BackendSolution sol = solve(prog, backend);
    if (!sol.ok()) return std::nullopt;
    const MomentPoint p = prog.point(sol.values);
    if (rank_ratio(assemble_Y(p)) > rank_tolerance) return std::nullopt;
    const Vector x = p.x.cwiseMax(0.0).cwiseMin(1.0);
    // The slack lets coordinates drift off a bound by about its size.
    Vector snapped = x;
    for (Eigen::Index i = 0; i < snapped.size(); ++i) {
      if (snapped[i] < kSnapTolerance) snapped[i] = 0.0;
      if (snapped[i] > 1.0 - kSnapTolerance) snapped[i] = 1.0;
    }
    for (const Vector& cand : {snapped, x}) {
      if (std::abs(feasible_value(inst, cand) - pinned_value) <= kPinTolerance) return cand;
    }
    return std::nullopt;
  };
  for (double slack : {-1.0, 1e-7, 1e-6}) {
    if (auto x = attempt(slack)) return x;
  }
  return std::nullopt;
}

}  // namespace boxqp
