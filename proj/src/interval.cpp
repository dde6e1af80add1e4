#include "icx/interval.hpp"

#include <algorithm>
#include <sstream>

#include "icx/errors.hpp"

namespace icx {

IntervalSet::IntervalSet(std::initializer_list<Interval> parts)
    : parts_(parts) {
  normalize();
}

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {
  normalize();
}

IntervalSet IntervalSet::single(double lo, double hi, bool right_closed) {
  return IntervalSet({Interval{lo, hi, right_closed}});
}

void IntervalSet::normalize() {
  std::erase_if(parts_, [](const Interval& p) { return p.lo >= p.hi; });
  std::sort(parts_.begin(), parts_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const Interval& p : parts_) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      Interval& last = merged.back();
      if (p.hi > last.hi) {
        last.hi = p.hi;
        last.right_closed = p.right_closed;
      }
    } else {
      merged.push_back(p);
    }
  }
  parts_ = std::move(merged);
}

bool IntervalSet::contains(double x) const {
  // parts are sorted; find the first part with hi >= x
  auto it = std::lower_bound(
      parts_.begin(), parts_.end(), x,
      [](const Interval& p, double v) { return p.hi < v; });
  return it != parts_.end() && it->contains(x);
}

double IntervalSet::total_length() const {
  double len = 0.0;
  for (const Interval& p : parts_) len += p.length();
  return len;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  auto a = parts_.begin();
  auto b = other.parts_.begin();
  while (a != parts_.end() && b != other.parts_.end()) {
    const double lo = std::max(a->lo, b->lo);
    const double hi = std::min(a->hi, b->hi);
    if (lo < hi) {
      const bool inc_a = a->hi > hi || a->right_closed;
      const bool inc_b = b->hi > hi || b->right_closed;
      out.push_back(Interval{lo, hi, inc_a && inc_b});
    }
    if (a->hi < b->hi) {
      ++a;
    } else {
      ++b;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement(double lo, double hi) const {
  std::vector<Interval> out;
  double cursor = lo;
  for (const Interval& p : parts_) {
    const double gap_hi = std::min(p.lo, hi);
    if (cursor < gap_hi) out.push_back(Interval{cursor, gap_hi, false});
    cursor = std::max(cursor, p.hi);
    if (cursor >= hi) break;
  }
  if (cursor < hi) out.push_back(Interval{cursor, hi, true});
  if (!out.empty() && out.back().hi == hi) out.back().right_closed = true;
  return IntervalSet(std::move(out));
}

std::string IntervalSet::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (i) os << " u ";
    os << '[' << parts_[i].lo << ',' << parts_[i].hi
       << (parts_[i].right_closed ? ']' : ')');
  }
  if (parts_.empty()) os << "{}";
  return os.str();
}

}  // namespace icx
