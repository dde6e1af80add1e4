#include "icx/partition.hpp"

#include <cmath>
#include <sstream>

#include "icx/errors.hpp"

namespace icx {

namespace {

constexpr int kMaxBisectIters = 200;
constexpr int kMaxCells = 100000;

struct D0Stats {
  double mass = 0.0;
  double mean = 0.0;
  IntervalSet set;
};

D0Stats d0_stats(const PiecewiseDistribution& va, double mu_b) {
  // Equality is allowed: it yields the degenerate single-cell partition.
  if (va.mean() < mu_b)
    throw PriorOrderViolation("mean of V_a must not be below mu_b");
  D0Stats out;
  out.set = IntervalSet::single(va.support_lo(), mu_b);
  out.mass = va.prob(out.set);
  if (out.mass <= 0.0)
    throw NoExplorationNeeded("P(V_a < mu_b) = 0: no exploration partition needed");
  out.mean = va.cond_expect(out.set);
  return out;
}

// Tiles [mu_b, R] with cells D_1..D_K so that the (mass0, mean0) event union
// each interior cell has conditional mean mu_b; the last cell's mean may fall
// short. mass0/mean0 stand for D_0 or one of its replicas.
std::vector<IntervalSet> tile_cells(const PiecewiseDistribution& va,
                                    double mu_b, double mass0, double mean0,
                                    double tol) {
  const double r = va.support_hi();
  std::vector<IntervalSet> cells;
  double x_prev = mu_b;

  // conditional mean of the virtual union (mass0, mean0) u [x_prev, t)
  auto union_mean = [&](double t, bool closed) {
    const IntervalSet seg = IntervalSet::single(x_prev, t, closed);
    const double mass = mass0 + va.prob(seg);
    return (mass0 * mean0 + va.partial_mean(seg)) / mass;
  };

  while (true) {
    if (static_cast<int>(cells.size()) >= kMaxCells)
      throw InfeasibleParams("exploration partition did not halt");
    const double tail_mean = union_mean(r, true);
    if (tail_mean <= mu_b + 1e-12) {
      cells.push_back(IntervalSet::single(x_prev, r, true));
      break;
    }
    // f(t) = union_mean(t) - mu_b is continuous and monotone nondecreasing
    // with f(x_prev) < 0 and f(r) > 0: bisect for the indifference point.
    double lo = x_prev, hi = r;
    for (int i = 0; i < kMaxBisectIters && hi - lo > tol; ++i) {
      const double mid = (lo + hi) / 2.0;
      if (union_mean(mid, false) < mu_b) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double x_next = (lo + hi) / 2.0;
    // Snap to R when the residue beyond the root is bisection round-off:
    // absorbing it moves the union mean by at most sliver * (R - mu_b) /
    // mass0 <= 1e-8, far below any genuine cell's delta contribution.
    const double sliver = va.prob(IntervalSet::single(x_next, r, true));
    if (r - x_next <= tol || sliver * (r - mu_b) <= 1e-8 * mass0) {
      cells.push_back(IntervalSet::single(x_prev, r, true));
      break;
    }
    cells.push_back(IntervalSet::single(x_prev, x_next));
    x_prev = x_next;
  }
  return cells;
}

}  // namespace

ExplorationPartition build_partition(const PiecewiseDistribution& va,
                                     double mu_b, double tol) {
  const D0Stats d0 = d0_stats(va, mu_b);
  ExplorationPartition p;
  p.d0 = d0.set;
  p.mu_b = mu_b;
  p.cells = tile_cells(va, mu_b, d0.mass, d0.mean, tol);
  p.k_count = static_cast<int>(p.cells.size());
  return p;
}

KBounds k_bounds(const PiecewiseDistribution& va, double mu_b) {
  const D0Stats d0 = d0_stats(va, mu_b);
  const double mu_a = va.mean();
  const double delta = d0.mass * (mu_b - d0.mean);
  const double lower = (mu_a - mu_b) / delta + 1.0;
  const double upper = (mu_a - mu_b / 2.0) / delta + 2.0;
  return {static_cast<long>(std::ceil(lower - 1e-9)),
          static_cast<long>(std::floor(upper + 1e-9))};
}

ReplicatedPartition build_replicated_partition(const PiecewiseDistribution& va,
                                               double mu_b, int replica_count,
                                               ReplicaMode mode, double tol) {
  if (replica_count < 1)
    throw InfeasibleParams("replica_count must be at least 1");
  const D0Stats d0 = d0_stats(va, mu_b);

  ReplicatedPartition p;
  p.mode = mode;
  p.d0 = d0.set;
  p.mu_b = mu_b;
  p.replica_count = replica_count;
  p.replica_mass = d0.mass / replica_count;
  p.replica_mean = d0.mean;
  if (mode == ReplicaMode::Comb) {
    constexpr int kCombGranularity = 512;
    p.d0_replicas = va.quantile_split(d0.set, replica_count, kCombGranularity);
    // Replica means agree up to the average value span of one comb cycle:
    // the cycles are ordered and disjoint, so the span sums to at most the
    // width of D_0.
    p.comb_mean_tol = (mu_b - va.support_lo()) / kCombGranularity;
  }
  // All replicas share (mass, mean), so one cell family serves every replica.
  p.cells = tile_cells(va, mu_b, p.replica_mass, p.replica_mean, tol);
  p.k_prime = static_cast<int>(p.cells.size());
  return p;
}

void VerifyReport::add(std::string name, double residual, double tol) {
  const bool ok = residual <= tol;
  checks.push_back({std::move(name), residual, ok});
  pass = pass && ok;
}

void VerifyReport::add_flag(std::string name, bool ok) {
  checks.push_back({std::move(name), ok ? 0.0 : 1.0, ok});
  pass = pass && ok;
}

std::string VerifyReport::to_string() const {
  std::ostringstream os;
  for (const VerifyCheck& c : checks)
    os << (c.pass ? "pass" : "FAIL") << "  " << c.name
       << "  residual=" << c.residual << '\n';
  os << (pass ? "overall: pass" : "overall: FAIL") << '\n';
  return os.str();
}

namespace {

void verify_cells(VerifyReport& rep, const PiecewiseDistribution& va,
                  const std::vector<IntervalSet>& cells, const IntervalSet& d0,
                  double mu_b, double mass0, double mean0, double tol) {
  const double l = va.support_lo();
  const double r = va.support_hi();

  IntervalSet covered = d0;
  for (const IntervalSet& c : cells) covered = covered.unite(c);
  rep.add_flag("coverage [L,R]", covered == IntervalSet::single(l, r, true));

  double mass_sum = va.prob(d0);
  for (const IntervalSet& c : cells) mass_sum += va.prob(c);
  rep.add("masses sum to 1", std::abs(mass_sum - 1.0), 1e-9);

  const double delta = mass0 * (mu_b - mean0);
  const double mass_floor = mu_b >= 0.0 && r > 0.0 ? delta / r : delta / (r - mu_b);
  for (size_t i = 0; i < cells.size(); ++i) {
    const double mass = va.prob(cells[i]);
    const double cm = (mass0 * mean0 + va.partial_mean(cells[i])) / (mass0 + mass);
    const std::string tag = "cell " + std::to_string(i + 1);
    if (i + 1 < cells.size()) {
      rep.add(tag + " indifference", std::abs(cm - mu_b), tol);
      // interior cells satisfy mass = delta / (E(V_a|D_k) - mu_b) >= floor;
      // the final residual cell carries whatever mass is left over
      rep.add(tag + " mass floor", std::max(0.0, mass_floor - mass), 1e-9);
    } else {
      rep.add(tag + " (last) slack", std::max(0.0, cm - mu_b), tol);
    }
  }
}

}  // namespace

VerifyReport verify_partition(const ExplorationPartition& p,
                              const PiecewiseDistribution& va, double tol) {
  VerifyReport rep;
  const double mass0 = va.prob(p.d0);
  const double mean0 = va.cond_expect(p.d0);
  rep.add_flag("D_0 = [L, mu_b)",
               p.d0 == IntervalSet::single(va.support_lo(), p.mu_b));
  verify_cells(rep, va, p.cells, p.d0, p.mu_b, mass0, mean0, tol);
  const KBounds kb = k_bounds(va, p.mu_b);
  rep.add_flag("K within the a-priori bracket",
               p.k_count >= kb.lower && p.k_count <= kb.upper);
  return rep;
}

VerifyReport verify_partition(const ReplicatedPartition& p,
                              const PiecewiseDistribution& va, double tol) {
  VerifyReport rep;
  if (p.mode == ReplicaMode::Comb) {
    double worst_mass = 0.0, worst_mean = 0.0;
    for (const IntervalSet& rep_set : p.d0_replicas) {
      worst_mass = std::max(worst_mass,
                            std::abs(va.prob(rep_set) - p.replica_mass));
      worst_mean = std::max(worst_mean,
                            std::abs(va.cond_expect(rep_set) - p.replica_mean));
    }
    rep.add("replica mass deviation", worst_mass, 1e-9);
    rep.add("replica mean deviation", worst_mean,
            std::max(tol, p.comb_mean_tol));
    IntervalSet merged;
    for (const IntervalSet& rep_set : p.d0_replicas) merged = merged.unite(rep_set);
    rep.add_flag("replicas partition D_0", merged == p.d0);
  } else {
    rep.add("replica mass deviation", 0.0, 1e-9);
    rep.add("replica mean deviation", 0.0, tol);
  }
  verify_cells(rep, va, p.cells, p.d0, p.mu_b, p.replica_mass, p.replica_mean,
               tol);
  // K' bound: the replica-stats form always applies; the measured-K form
  // needs mu_a > mu_b strictly.
  const double mu_a = va.mean();
  const double direct_bound =
      (mu_a - p.mu_b / 2.0) / (p.replica_mass * (p.mu_b - p.replica_mean)) + 2.0;
  rep.add("K' direct bound slack", std::max(0.0, p.k_prime - direct_bound), 1e-9);
  if (mu_a > p.mu_b) {
    const int k_plain = build_partition(va, p.mu_b, tol).k_count;
    const double bound = (mu_a - p.mu_b / 2.0) / (mu_a - p.mu_b) *
                             p.replica_count * (k_plain - 1) +
                         2.0;
    rep.add("K' replicated bound slack", std::max(0.0, p.k_prime - bound), 1e-9);
  }
  return rep;
}

}  // namespace icx
