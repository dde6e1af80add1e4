#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "icx/interval.hpp"

namespace icx {

using RandomStream = std::mt19937_64;

/// One uniform mixture component with the given total weight.
struct UniformPiece {
  double lo = 0.0;
  double hi = 0.0;
  double weight = 0.0;
};

/// Non-atomic reward law on [L, R] represented as a finite mixture of uniform
/// pieces. All probability and conditional-expectation queries over interval
/// sets are closed form.
class PiecewiseDistribution {
 public:
  PiecewiseDistribution() = default;  // empty placeholder, fill before use
  explicit PiecewiseDistribution(std::vector<UniformPiece> pieces);
  static PiecewiseDistribution uniform(double lo, double hi);

  const std::vector<UniformPiece>& pieces() const { return pieces_; }
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }

  double mean() const;
  double prob(const IntervalSet& s) const;
  /// E[V | V in s]; throws ZeroMassEvent when prob(s) == 0.
  double cond_expect(const IntervalSet& s) const;
  /// E[V * 1{V in s}]
  double partial_mean(const IntervalSet& s) const;
  double ess_sup() const { return support_hi_; }
  double variance() const;

  double sample(RandomStream& stream) const;

  /// Splits s into `m` interval sets of equal conditional mass by cutting s
  /// into m*granularity equal-mass micro-cells and dealing them round robin,
  /// so the outputs' conditional means converge to cond_expect(s) as the
  /// granularity grows.
  std::vector<IntervalSet> quantile_split(const IntervalSet& s, int m,
                                          int granularity = 512) const;

 private:
  std::vector<UniformPiece> pieces_;
  std::vector<double> cum_weights_;
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
};

/// Exact comparison statistics for independent piecewise-uniform va, vb:
/// p        = P(va > vb)
/// ea_win   = E[va * 1{va > vb}]
/// eb_win   = E[vb * 1{va > vb}]
struct ComparisonStats {
  double p = 0.0;
  double ea_win = 0.0;
  double eb_win = 0.0;
};
ComparisonStats compare_joint(const PiecewiseDistribution& va,
                              const PiecewiseDistribution& vb);

}  // namespace icx
