#pragma once

#include <string>
#include <vector>

#include "icx/distribution.hpp"
#include "icx/interval.hpp"

namespace icx {

/// Exploration partition {D_0, D_1, ..., D_K} of the support of V_a:
/// D_0 = [L, mu_b) and each interior cell leaves an agent told
/// "V_a is in D_0 u D_k" exactly indifferent between the two actions.
struct ExplorationPartition {
  IntervalSet d0;
  std::vector<IntervalSet> cells;  // D_1..D_K, tiling [mu_b, R]
  double mu_b = 0.0;
  int k_count = 0;  // K

  const IntervalSet& cell(int k) const { return cells.at(k - 1); }
};

enum class ReplicaMode { RandomTag, Comb };

/// D_0 split into replica_count sub-events of equal mass and equal
/// conditional mean, with a common cell family D_1..D_K'. Under RandomTag the
/// replicas are realized by a uniform label drawn once per run; under Comb
/// they are concrete interval sets from quantile_split.
struct ReplicatedPartition {
  ReplicaMode mode = ReplicaMode::RandomTag;
  IntervalSet d0;
  std::vector<IntervalSet> d0_replicas;  // Comb mode only
  std::vector<IntervalSet> cells;        // D_1..D_K'
  double mu_b = 0.0;
  int k_prime = 0;
  int replica_count = 0;
  double replica_mass = 0.0;
  double replica_mean = 0.0;
  /// Comb mode: the quantile comb equalizes replica means only up to its
  /// granularity; deviations up to this bound are inherent to the
  /// construction, not an error.
  double comb_mean_tol = 0.0;

  const IntervalSet& cell(int k) const { return cells.at(k - 1); }
};

struct KBounds {
  long lower = 0;
  long upper = 0;
};

ExplorationPartition build_partition(const PiecewiseDistribution& va,
                                     double mu_b, double tol = 1e-10);

KBounds k_bounds(const PiecewiseDistribution& va, double mu_b);

ReplicatedPartition build_replicated_partition(const PiecewiseDistribution& va,
                                               double mu_b, int replica_count,
                                               ReplicaMode mode,
                                               double tol = 1e-10);

struct VerifyCheck {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool pass = true;

  void add(std::string name, double residual, double tol);
  void add_flag(std::string name, bool ok);
  std::string to_string() const;
};

VerifyReport verify_partition(const ExplorationPartition& p,
                              const PiecewiseDistribution& va, double tol);
VerifyReport verify_partition(const ReplicatedPartition& p,
                              const PiecewiseDistribution& va, double tol);

}  // namespace icx
