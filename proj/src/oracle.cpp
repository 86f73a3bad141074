#include "boxqp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <stdexcept>
#include <thread>

namespace boxqp {

namespace {

constexpr double kBoxSlack = 1e-9;

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  Vector x;
  std::uint64_t code = 0;
  std::size_t candidates = 0;
  bool found = false;

  void offer(double v, const Vector& cand, std::uint64_t c) {
    if (!found || v > value + 1e-12 * (1.0 + std::abs(value))) {
      value = v;
      x = cand;
      code = c;
      found = true;
    }
  }
};

ActivePattern decode(std::uint64_t code, int n) {
  ActivePattern p(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    p[static_cast<std::size_t>(i)] = static_cast<BoundState>(code % 3);
    code /= 3;
  }
  return p;
}

bool inside(const Vector& v) {
  return (v.array() >= -kBoxSlack).all() && (v.array() <= 1.0 + kBoxSlack).all();
}

void scan(const BoxQpInstance& inst, std::uint64_t first, std::uint64_t last, Best& best) {
  const int n = inst.n();
  const Matrix& Q = inst.Q();
  const Vector& q = inst.q();
  std::vector<int> F, B;
  for (std::uint64_t code = first; code < last; ++code) {
    const ActivePattern p = decode(code, n);
    F.clear();
    B.clear();
    Vector x = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
      switch (p[static_cast<std::size_t>(i)]) {
        case BoundState::kAtZero: B.push_back(i); break;
        case BoundState::kAtOne: B.push_back(i); x[i] = 1.0; break;
        case BoundState::kFree: F.push_back(i); break;
      }
    }
    auto consider = [&](Vector cand) {
      if (!inside(cand)) return;
      cand = cand.cwiseMax(0.0).cwiseMin(1.0);
      ++best.candidates;
      best.offer(feasible_value(inst, cand), cand, code);
    };
    if (F.empty()) {
      consider(x);
      continue;
    }
    const auto f = static_cast<Eigen::Index>(F.size());
    Matrix H(f, f);
    Vector rhs(f);
    for (Eigen::Index a = 0; a < f; ++a) {
      double r = -q[F[a]];
      for (int b : B) r -= 2.0 * Q(F[a], b) * x[b];
      rhs[a] = r;
      for (Eigen::Index c = 0; c < f; ++c) H(a, c) = 2.0 * Q(F[a], F[c]);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
    const Vector& lam = eig.eigenvalues();
    const Matrix& V = eig.eigenvectors();
    const double cutoff = 1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff());
    Vector coord = V.transpose() * rhs;
    std::vector<Eigen::Index> null_dirs;
    for (Eigen::Index a = 0; a < f; ++a) {
      if (std::abs(lam[a]) > cutoff) {
        coord[a] /= lam[a];
      } else {
        coord[a] = 0.0;
        null_dirs.push_back(a);
      }
    }
    const Vector xf = V * coord;
    if ((H * xf - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm())) continue;  // no stationary point
    auto with_free = [&](const Vector& values) {
      Vector full = x;
      for (Eigen::Index a = 0; a < f; ++a) full[F[a]] = values[a];
      return full;
    };
    consider(with_free(xf));
    for (Eigen::Index a : null_dirs) {
      const Vector d = V.col(a);
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < f; ++c) {
        if (std::abs(d[c]) < 1e-14) {
          if (xf[c] < -kBoxSlack || xf[c] > 1.0 + kBoxSlack) lo = hi = std::nan("");
          continue;
        }
        const double t0 = (0.0 - xf[c]) / d[c], t1 = (1.0 - xf[c]) / d[c];
        lo = std::max(lo, std::min(t0, t1));
        hi = std::min(hi, std::max(t0, t1));
      }
      if (!(lo <= hi)) continue;
      consider(with_free(xf + lo * d));
      consider(with_free(xf + hi * d));
    }
  }
}

}  // namespace

GlobalSolution solve_global(const BoxQpInstance& inst, int max_n) {
  const int n = inst.n();
  if (n > max_n) {
    throw std::invalid_argument("oracle dimension " + std::to_string(n) + " exceeds budget " +
                                std::to_string(max_n));
  }
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;

  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const std::uint64_t chunks = total < 729 ? 1 : std::min<std::uint64_t>(hw, 16);
  std::vector<Best> parts(chunks);
  std::vector<std::future<void>> jobs;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t first = total * c / chunks, last = total * (c + 1) / chunks;
    jobs.push_back(std::async(std::launch::async, [&, c, first, last] { scan(inst, first, last, parts[c]); }));
  }
  for (auto& j : jobs) j.get();

  // Chunks are merged in pattern order, so ties resolve to the smallest code
  // whatever the schedule.
  Best best;
  std::size_t candidates = 0;
  for (const Best& part : parts) {
    candidates += part.candidates;
    if (part.found) best.offer(part.value, part.x, part.code);
  }
  GlobalSolution out;
  out.value = best.value;
  out.x = best.x;
  out.pattern = decode(best.code, n);
  out.candidates = candidates;
  return out;
}

GapReport certify_bound(const BoxQpInstance& inst, double relax_value, std::optional<double> feasible) {
  GapReport r;
  r.relaxation = relax_value;
  r.optimum = solve_global(inst).value;
  r.feasible = feasible.value_or(r.optimum);
  r.optimality_gap = relax_value - r.optimum;
  r.feasible_gap = relax_value - r.feasible;
  return r;
}

}  // namespace boxqp
