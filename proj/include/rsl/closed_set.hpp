#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsl {

struct Interval {
  double lo;
  double hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of disjoint closed intervals in [0, horizon]. Points are
// degenerate intervals. Intervals are kept strictly sorted with
// hi_i < lo_{i+1}; endpoints are exact binary doubles and seam handling
// uses exact equality.
class ClosedSet {
 public:
  explicit ClosedSet(double horizon, std::vector<Interval> intervals = {})
      : horizon_(horizon), iv_(std::move(intervals)) {
    if (!(horizon_ > 0.0)) throw std::invalid_argument("ClosedSet: horizon must be > 0");
    double prev_hi = -1.0;
    for (const auto& [lo, hi] : iv_) {
      if (!(0.0 <= lo && lo <= hi && hi <= horizon_))
        throw std::invalid_argument("ClosedSet: interval outside [0, horizon]");
      if (!(prev_hi < lo) && prev_hi >= 0.0)
        throw std::invalid_argument("ClosedSet: intervals must be sorted and disjoint");
      prev_hi = hi;
    }
  }

  double horizon() const { return horizon_; }
  const std::vector<Interval>& intervals() const { return iv_; }
  bool empty() const { return iv_.empty(); }

  double anchor() const { return iv_.empty() ? 0.0 : iv_.front().lo; }
  double sup() const { return iv_.empty() ? 0.0 : iv_.back().hi; }
  double diam() const { return iv_.empty() ? 0.0 : iv_.back().hi - iv_.front().lo; }

  friend bool operator==(const ClosedSet& a, const ClosedSet& b) {
    return a.horizon_ == b.horizon_ && a.iv_ == b.iv_;
  }

 private:
  double horizon_;
  std::vector<Interval> iv_;
};

inline double anchor(const ClosedSet& z) { return z.anchor(); }
inline double diam(const ClosedSet& z) { return z.diam(); }

// z1 union (s + z2) on horizon s + t. Touching intervals are merged only at
// the seam, and only on exact endpoint coincidence.
inline ClosedSet concat(const ClosedSet& z1, const ClosedSet& z2) {
  const double s = z1.horizon();
  std::vector<Interval> iv = z1.intervals();
  for (const auto& [lo, hi] : z2.intervals()) {
    const Interval shifted{s + lo, s + hi};
    if (!iv.empty() && lo == 0.0 && iv.back().hi == s)
      iv.back().hi = shifted.hi;
    else
      iv.push_back(shifted);
  }
  return ClosedSet(s + z2.horizon(), std::move(iv));
}

// (Z intersect [a,b]) - a on horizon b - a; intervals clipped exactly.
// Degenerate windows (a == b) are rejected.
inline ClosedSet restrict(const ClosedSet& z, double a, double b) {
  if (!(0.0 <= a && a < b && b <= z.horizon()))
    throw std::invalid_argument("restrict: need 0 <= a < b <= horizon");
  std::vector<Interval> iv;
  for (const auto& [lo, hi] : z.intervals()) {
    const double nl = lo < a ? a : lo;
    const double nh = hi > b ? b : hi;
    if (nl <= nh) iv.push_back({nl - a, nh - a});
  }
  return ClosedSet(b - a, std::move(iv));
}

// Scaling homeomorphism: endpoints multiplied by new_horizon / horizon.
// Rounding can make previously separated intervals touch; those are merged.
inline ClosedSet scale(const ClosedSet& z, double new_horizon) {
  if (!(new_horizon > 0.0)) throw std::invalid_argument("scale: horizon must be > 0");
  const double f = new_horizon / z.horizon();
  std::vector<Interval> iv;
  for (const auto& [lo, hi] : z.intervals()) {
    double nl = lo * f, nh = hi * f;
    if (nh > new_horizon) nh = new_horizon;
    if (nl > nh) nl = nh;
    if (!iv.empty() && iv.back().hi >= nl)
      iv.back().hi = nh > iv.back().hi ? nh : iv.back().hi;
    else
      iv.push_back({nl, nh});
  }
  return ClosedSet(new_horizon, std::move(iv));
}

// Text form: "t=<horizon>;[lo,hi];..." or "t=<horizon>;EMPTY",
// 17 significant digits.
inline std::string toText(const ClosedSet& z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "t=%.17g", z.horizon());
  std::string out = buf;
  if (z.empty()) return out + ";EMPTY";
  for (const auto& [lo, hi] : z.intervals()) {
    std::snprintf(buf, sizeof buf, ";[%.17g,%.17g]", lo, hi);
    out += buf;
  }
  return out;
}

inline ClosedSet parseClosedSet(const std::string& text) {
  const char* p = text.c_str();
  if (text.rfind("t=", 0) != 0) throw std::invalid_argument("ClosedSet: expected t=");
  char* end = nullptr;
  const double horizon = std::strtod(p + 2, &end);
  std::vector<Interval> iv;
  p = end;
  while (*p == ';') {
    ++p;
    if (std::string(p) == "EMPTY") return ClosedSet(horizon);
    if (*p != '[') throw std::invalid_argument("ClosedSet: expected [");
    const double lo = std::strtod(p + 1, &end);
    if (*end != ',') throw std::invalid_argument("ClosedSet: expected ,");
    const double hi = std::strtod(end + 1, &end);
    if (*end != ']') throw std::invalid_argument("ClosedSet: expected ]");
    iv.push_back({lo, hi});
    p = end + 1;
  }
  return ClosedSet(horizon, std::move(iv));
}

// Atoms of a marked point sample on (0, horizon) x L; times strictly
// increasing and never on the boundary slices.
struct MarkedPointSet {
  struct Atom {
    double time;
    int mark;
  };

  double horizon = 1.0;
  std::vector<Atom> atoms;

  void validate() const {
    double prev = 0.0;
    for (const auto& a : atoms) {
      if (!(a.time > prev && a.time < horizon))
        throw std::invalid_argument("MarkedPointSet: times must be strictly increasing in (0, horizon)");
      prev = a.time;
    }
  }
};

// Concatenation on marked samples: atoms of z2 shifted by z1.horizon.
inline MarkedPointSet concat(const MarkedPointSet& z1, const MarkedPointSet& z2) {
  MarkedPointSet out;
  out.horizon = z1.horizon + z2.horizon;
  out.atoms = z1.atoms;
  out.atoms.reserve(z1.atoms.size() + z2.atoms.size());
  for (const auto& a : z2.atoms) out.atoms.push_back({z1.horizon + a.time, a.mark});
  return out;
}

}  // namespace rsl
