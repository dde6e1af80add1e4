#include "icx/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icx/errors.hpp"

namespace icx {

namespace {

constexpr double kWeightTol = 1e-12;

// Overlap of [lo, hi) with piece [p.lo, p.hi): returns (mass, first moment).
struct Moments {
  double mass = 0.0;
  double first = 0.0;
};

Moments overlap_moments(const UniformPiece& p, double lo, double hi) {
  const double a = std::max(lo, p.lo);
  const double b = std::min(hi, p.hi);
  if (a >= b) return {};
  const double density = p.weight / (p.hi - p.lo);
  return {density * (b - a), density * (b * b - a * a) / 2.0};
}

}  // namespace

PiecewiseDistribution::PiecewiseDistribution(std::vector<UniformPiece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw InfeasibleParams("distribution needs at least one piece");
  double total = 0.0;
  support_lo_ = pieces_.front().lo;
  support_hi_ = pieces_.front().hi;
  for (const UniformPiece& p : pieces_) {
    if (!(p.lo < p.hi)) throw InfeasibleParams("piece with lo >= hi");
    if (!(p.weight > 0.0)) throw InfeasibleParams("piece with nonpositive weight");
    total += p.weight;
    support_lo_ = std::min(support_lo_, p.lo);
    support_hi_ = std::max(support_hi_, p.hi);
  }
  if (std::abs(total - 1.0) > kWeightTol)
    throw InfeasibleParams("piece weights must sum to 1");
  cum_weights_.reserve(pieces_.size());
  double cum = 0.0;
  for (const UniformPiece& p : pieces_) cum_weights_.push_back(cum += p.weight);
  cum_weights_.back() = 1.0;
}

PiecewiseDistribution PiecewiseDistribution::uniform(double lo, double hi) {
  return PiecewiseDistribution({UniformPiece{lo, hi, 1.0}});
}

double PiecewiseDistribution::mean() const {
  double m = 0.0;
  for (const UniformPiece& p : pieces_) m += p.weight * (p.lo + p.hi) / 2.0;
  return m;
}

double PiecewiseDistribution::variance() const {
  const double mu = mean();
  double ex2 = 0.0;
  for (const UniformPiece& p : pieces_)
    ex2 += p.weight * (p.lo * p.lo + p.lo * p.hi + p.hi * p.hi) / 3.0;
  return ex2 - mu * mu;
}

double PiecewiseDistribution::prob(const IntervalSet& s) const {
  double mass = 0.0;
  for (const Interval& part : s.parts())
    for (const UniformPiece& p : pieces_)
      mass += overlap_moments(p, part.lo, part.hi).mass;
  return std::clamp(mass, 0.0, 1.0);
}

double PiecewiseDistribution::partial_mean(const IntervalSet& s) const {
  double first = 0.0;
  for (const Interval& part : s.parts())
    for (const UniformPiece& p : pieces_)
      first += overlap_moments(p, part.lo, part.hi).first;
  return first;
}

double PiecewiseDistribution::cond_expect(const IntervalSet& s) const {
  const double mass = prob(s);
  if (mass <= 0.0)
    throw ZeroMassEvent("conditional expectation over zero-mass event " + s.to_string());
  return partial_mean(s) / mass;
}

double PiecewiseDistribution::sample(RandomStream& stream) const {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double u = u01(stream);
  const auto it = std::lower_bound(cum_weights_.begin(), cum_weights_.end(), u);
  const size_t idx = std::min<size_t>(it - cum_weights_.begin(), pieces_.size() - 1);
  const UniformPiece& p = pieces_[idx];
  return p.lo + u01(stream) * (p.hi - p.lo);
}

std::vector<IntervalSet> PiecewiseDistribution::quantile_split(
    const IntervalSet& s, int m, int granularity) const {
  if (m < 1) throw InfeasibleParams("quantile_split needs m >= 1");
  if (granularity < 1) throw InfeasibleParams("quantile_split needs granularity >= 1");
  const double total = prob(s);
  if (total <= 0.0) throw ZeroMassEvent("quantile_split over zero-mass event");
  if (m == 1) return {s};

  // Constant-density segments of s (intersection with the mixture pieces).
  struct Segment {
    double lo, hi, density;
    bool right_closed;
  };
  std::vector<Segment> segments;
  for (const Interval& part : s.parts()) {
    for (const UniformPiece& p : pieces_) {
      const double a = std::max(part.lo, p.lo);
      const double b = std::min(part.hi, p.hi);
      if (a < b)
        segments.push_back({a, b, p.weight / (p.hi - p.lo),
                            part.right_closed && b == part.hi});
    }
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return x.lo < y.lo; });

  const long micro_count = static_cast<long>(m) * granularity;
  const double micro_mass = total / static_cast<double>(micro_count);
  std::vector<std::vector<Interval>> buckets(m);

  size_t seg = 0;
  double cursor = segments.front().lo;
  for (long i = 0; i < micro_count; ++i) {
    std::vector<Interval>& bucket = buckets[i % m];
    if (i == micro_count - 1) {
      // Absorb rounding residue: the last micro-cell takes the remainder of s.
      while (seg < segments.size()) {
        const Segment& sg = segments[seg];
        cursor = std::max(cursor, sg.lo);
        if (cursor < sg.hi)
          bucket.push_back(Interval{cursor, sg.hi, sg.right_closed});
        ++seg;
        if (seg < segments.size()) cursor = segments[seg].lo;
      }
      break;
    }
    double need = micro_mass;
    while (need > 0.0 && seg < segments.size()) {
      const Segment& sg = segments[seg];
      cursor = std::max(cursor, sg.lo);
      const double avail = (sg.hi - cursor) * sg.density;
      if (avail > need) {
        const double cut = cursor + need / sg.density;
        bucket.push_back(Interval{cursor, cut, false});
        cursor = cut;
        need = 0.0;
      } else {
        bucket.push_back(Interval{cursor, sg.hi, sg.right_closed});
        need -= avail;
        ++seg;
        if (seg < segments.size()) cursor = segments[seg].lo;
      }
    }
  }
  std::vector<IntervalSet> out;
  out.reserve(m);
  for (auto& b : buckets) out.emplace_back(std::move(b));
  return out;
}

ComparisonStats compare_joint(const PiecewiseDistribution& va,
                              const PiecewiseDistribution& vb) {
  ComparisonStats out;
  for (const UniformPiece& a : va.pieces()) {
    const double da = a.weight / (a.hi - a.lo);
    for (const UniformPiece& b : vb.pieces()) {
      const double db = b.weight / (b.hi - b.lo);
      const double mu_b = (b.lo + b.hi) / 2.0;
      // Region where the B-CDF ramps: a-range clipped to [b.lo, b.hi].
      const double r1 = std::clamp(b.lo, a.lo, a.hi);
      const double r2 = std::clamp(b.hi, a.lo, a.hi);
      if (r2 > r1) {
        const double c = da * db;
        // integral of (x - b.lo) and x(x - b.lo) over [r1, r2]
        const double i1 = (r2 * r2 - r1 * r1) / 2.0 - b.lo * (r2 - r1);
        const double i2 = (r2 * r2 * r2 - r1 * r1 * r1) / 3.0 -
                          b.lo * (r2 * r2 - r1 * r1) / 2.0;
        out.p += c * i1;
        out.ea_win += c * i2;
        // E[B 1{B < x}] = db (x^2 - b.lo^2) / 2 on the ramp
        const double i3 = (r2 * r2 * r2 - r1 * r1 * r1) / 3.0 -
                          b.lo * b.lo * (r2 - r1);
        out.eb_win += da * db / 2.0 * i3;
      }
      // Region x >= b.hi: A surely exceeds this B component.
      const double t1 = std::max(a.lo, b.hi);
      if (a.hi > t1) {
        out.p += da * b.weight * (a.hi - t1);
        out.ea_win += da * b.weight * (a.hi * a.hi - t1 * t1) / 2.0;
        out.eb_win += da * b.weight * (a.hi - t1) * mu_b;
      }
    }
  }
  return out;
}

}  // namespace icx
