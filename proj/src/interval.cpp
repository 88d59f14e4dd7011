#include "stlta/interval.hpp"

#include <cmath>
#include <sstream>

namespace stlta {

TimeInterval intersection(const TimeInterval& a, const TimeInterval& b) {
  TimeInterval r;
  if (a.lo > b.lo) {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed;
  } else if (b.lo > a.lo) {
    r.lo = b.lo;
    r.lo_closed = b.lo_closed;
  } else {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed && b.lo_closed;
  }
  if (a.hi < b.hi) {
    r.hi = a.hi;
    r.hi_closed = a.hi_closed;
  } else if (b.hi < a.hi) {
    r.hi = b.hi;
    r.hi_closed = b.hi_closed;
  } else {
    r.hi = a.hi;
    r.hi_closed = a.hi_closed && b.hi_closed;
  }
  return r;
}

bool TimeInterval::intersects(const TimeInterval& o) const {
  if (empty() || o.empty()) return false;
  return !intersection(*this, o).empty();
}

bool TimeInterval::includes(const TimeInterval& o) const {
  if (o.empty()) return true;
  if (empty()) return false;
  return intersection(*this, o) == o;
}

std::string format_time(double t) {
  if (std::isinf(t)) return t > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << t;
  return os.str();
}

std::string TimeInterval::to_string() const {
  std::string s;
  s += lo_closed ? '[' : '(';
  s += format_time(lo);
  s += ',';
  s += format_time(hi);
  s += (hi_closed && bounded()) ? ']' : ')';
  return s;
}

}  // namespace stlta
