#include "stlta/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace stlta {

namespace {

using Point = std::array<double, 2>;
using Polygon = std::vector<Point>;

double polygon_area(const Polygon& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point& u = p[i];
    const Point& v = p[(i + 1) % p.size()];
    a += u[0] * v[1] - v[0] * u[1];
  }
  return 0.5 * a;
}

Point polygon_centroid(const Polygon& p) {
  const double a = polygon_area(p);
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point& u = p[i];
    const Point& v = p[(i + 1) % p.size()];
    const double c = u[0] * v[1] - v[0] * u[1];
    cx += (u[0] + v[0]) * c;
    cy += (u[1] + v[1]) * c;
  }
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

void dedupe(Polygon& p, double eps) {
  Polygon out;
  for (const Point& q : p) {
    if (out.empty() || std::hypot(q[0] - out.back()[0], q[1] - out.back()[1]) > eps) out.push_back(q);
  }
  while (out.size() > 1 && std::hypot(out[0][0] - out.back()[0], out[0][1] - out.back()[1]) <= eps) out.pop_back();
  p = std::move(out);
}

// Line a*x + b*y + c = 0 in the abstraction's two coordinates.
struct Line {
  double a, b, c;
  double operator()(const Point& p) const { return a * p[0] + b * p[1] + c; }
};

// Splits a convex polygon by a line; returns false if the line misses its
// interior.
bool split_polygon(const Polygon& p, const Line& l, double eps, Polygon& pos, Polygon& neg) {
  std::vector<double> f(p.size());
  bool above = false, below = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    f[i] = l(p[i]);
    if (std::abs(f[i]) < eps) f[i] = 0.0;
    above |= f[i] > 0;
    below |= f[i] < 0;
  }
  if (!above || !below) return false;
  pos.clear();
  neg.clear();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::size_t j = (i + 1) % p.size();
    if (f[i] >= 0) pos.push_back(p[i]);
    if (f[i] <= 0) neg.push_back(p[i]);
    if ((f[i] > 0 && f[j] < 0) || (f[i] < 0 && f[j] > 0)) {
      const double s = f[i] / (f[i] - f[j]);
      const Point r{p[i][0] + s * (p[j][0] - p[i][0]), p[i][1] + s * (p[j][1] - p[i][1])};
      pos.push_back(r);
      neg.push_back(r);
    }
  }
  dedupe(pos, eps);
  dedupe(neg, eps);
  return pos.size() >= 3 && neg.size() >= 3;
}

bool polygons_share_edge(const Polygon& p, const Polygon& q, double eps) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point& a = p[i];
    const Point& b = p[(i + 1) % p.size()];
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len = std::hypot(dx, dy);
    if (len <= eps) continue;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const Point& c = q[j];
      const Point& d = q[(j + 1) % q.size()];
      // Both ends of cd on the line through ab.
      const double dc = (dx * (c[1] - a[1]) - dy * (c[0] - a[0])) / len;
      const double dd = (dx * (d[1] - a[1]) - dy * (d[0] - a[0])) / len;
      if (std::abs(dc) > eps || std::abs(dd) > eps) continue;
      const double tc = ((c[0] - a[0]) * dx + (c[1] - a[1]) * dy) / len;
      const double td = ((d[0] - a[0]) * dx + (d[1] - a[1]) * dy) / len;
      const double overlap = std::min(len, std::max(tc, td)) - std::max(0.0, std::min(tc, td));
      if (overlap > eps) return true;
    }
  }
  return false;
}

bool boxes_adjacent(const Region& a, const Region& b, double eps) {
  int touching = 0;
  for (std::size_t k = 0; k < a.lo.size(); ++k) {
    const double overlap = std::min(a.hi[k], b.hi[k]) - std::max(a.lo[k], b.lo[k]);
    if (overlap > eps) continue;
    if (std::abs(overlap) <= eps) {
      ++touching;
    } else {
      return false;
    }
  }
  return touching == 1;
}

class Builder {
 public:
  Builder(std::span<const double> lo, std::span<const double> hi, std::vector<PredicateFn> preds,
          const AbstractionOptions& opts)
      : full_lo_(lo.begin(), lo.end()), full_hi_(hi.begin(), hi.end()), opts_(opts) {
    g_.predicates = std::move(preds);
    std::set<std::size_t> dims;
    for (const auto& p : g_.predicates) {
      if (p.h.arity() != lo.size()) throw AbstractionError("predicate " + p.name + " has the wrong arity");
      for (std::size_t d : p.h.support()) dims.insert(d);
    }
    if (dims.empty()) dims.insert(0);
    g_.dims.assign(dims.begin(), dims.end());
    for (std::size_t d : g_.dims) {
      if (!(full_lo_[d] < full_hi_[d])) throw AbstractionError("empty state bounds");
      g_.lo.push_back(full_lo_[d]);
      g_.hi.push_back(full_hi_[d]);
    }
    double scale = 0.0;
    for (std::size_t k = 0; k < g_.dims.size(); ++k) scale = std::max(scale, g_.hi[k] - g_.lo[k]);
    eps_ = 1e-9 * scale;
  }

  AbstractionGraph run() {
    const bool linear = std::all_of(g_.predicates.begin(), g_.predicates.end(),
                                    [](const PredicateFn& p) { return p.h.is_linear(); });
    if (linear && g_.dims.size() == 2) {
      arrangement();
    } else {
      boxes();
    }
    for (std::size_t i = 0; i < g_.regions.size(); ++i) g_.regions[i].id = i;
    g_.build_index();
    adjacency();
    if (g_.impure_fraction() > opts_.max_impure_fraction) {
      throw AbstractionError("abstraction refinement left " + std::to_string(100.0 * g_.impure_fraction()) +
                             "% of the workspace impure");
    }
    return std::move(g_);
  }

 private:
  std::vector<double> full_state(std::span<const double> p) const {
    std::vector<double> x(full_lo_.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = free_value(i);
    for (std::size_t k = 0; k < g_.dims.size(); ++k) x[g_.dims[k]] = p[k];
    return x;
  }

  // Value used for state components no predicate depends on (their bounds
  // may be infinite, e.g. headings).
  double free_value(std::size_t i) const {
    const double m = 0.5 * (full_lo_[i] + full_hi_[i]);
    return std::isfinite(m) ? m : 0.0;
  }

  Label label_at(std::span<const double> p) const { return label_of(g_.predicates, full_state(p)); }

  void arrangement() {
    std::vector<Polygon> cells{
        {{g_.lo[0], g_.lo[1]}, {g_.hi[0], g_.lo[1]}, {g_.hi[0], g_.hi[1]}, {g_.lo[0], g_.hi[1]}}};
    for (const auto& p : g_.predicates) {
      const Line l{h_along(p, 0), h_along(p, 1), h_at_origin(p)};
      if (l.a == 0.0 && l.b == 0.0) continue;
      const double norm = std::hypot(l.a, l.b);
      const Line unit{l.a / norm, l.b / norm, l.c / norm};
      std::vector<Polygon> next;
      for (const Polygon& cell : cells) {
        Polygon pos, neg;
        if (split_polygon(cell, unit, eps_, pos, neg)) {
          next.push_back(std::move(pos));
          next.push_back(std::move(neg));
        } else {
          next.push_back(cell);
        }
      }
      cells = std::move(next);
    }
    for (Polygon& cell : cells) {
      Region r;
      r.volume = polygon_area(cell);
      if (r.volume <= eps_ * eps_) continue;
      const Point c = polygon_centroid(cell);
      r.centroid = {c[0], c[1]};
      r.label = label_at(r.centroid);
      r.lo = {cell[0][0], cell[0][1]};
      r.hi = r.lo;
      for (const Point& q : cell) {
        for (int k = 0; k < 2; ++k) {
          r.lo[k] = std::min(r.lo[k], q[k]);
          r.hi[k] = std::max(r.hi[k], q[k]);
        }
      }
      r.polygon = std::move(cell);
      g_.regions.push_back(std::move(r));
    }
  }

  // Coefficients of a linear predicate in the abstraction coordinates (the
  // remaining state components do not occur in it).
  double h_at_origin(const PredicateFn& p) const {
    const std::vector<double> x(full_lo_.size(), 0.0);
    return p.h(x);
  }
  double h_along(const PredicateFn& p, std::size_t k) const {
    std::vector<double> x(full_lo_.size(), 0.0);
    x[g_.dims[k]] = 1.0;
    return p.h(x) - h_at_origin(p);
  }

  void boxes() {
    const std::size_t n = g_.dims.size();
    // Thresholds of single-variable linear predicates become grid lines so
    // that axis-aligned boxes are represented exactly.
    std::vector<std::vector<double>> cuts(n);
    for (std::size_t k = 0; k < n; ++k) cuts[k] = {g_.lo[k], g_.hi[k]};
    for (const auto& p : g_.predicates) {
      const auto sup = p.h.support();
      if (sup.size() != 1 || !p.h.is_linear()) continue;
      const std::size_t k = static_cast<std::size_t>(std::find(g_.dims.begin(), g_.dims.end(), sup[0]) - g_.dims.begin());
      const double a = h_along(p, k);
      const double t = -h_at_origin(p) / a;
      if (t > g_.lo[k] && t < g_.hi[k]) cuts[k].push_back(t);
    }
    for (auto& c : cuts) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end(), [&](double x, double y) { return y - x <= eps_; }), c.end());
    }
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      std::vector<double> lo(n), hi(n);
      for (std::size_t k = 0; k < n; ++k) {
        lo[k] = cuts[k][idx[k]];
        hi[k] = cuts[k][idx[k] + 1];
      }
      refine(lo, hi, 0);
      std::size_t k = 0;
      while (k < n && ++idx[k] + 1 == cuts[k].size()) idx[k++] = 0;
      if (k == n) break;
    }
  }

  void refine(const std::vector<double>& lo, const std::vector<double>& hi, int depth) {
    std::vector<Range> box(full_lo_.size());
    for (std::size_t i = 0; i < box.size(); ++i) box[i] = {free_value(i), free_value(i)};
    for (std::size_t k = 0; k < lo.size(); ++k) box[g_.dims[k]] = {lo[k], hi[k]};
    bool straddles = false;
    for (const auto& p : g_.predicates) {
      const Range r = p.h.range(box);
      // Certified: true everywhere, or false except on a null set.
      if (r.lo >= 0.0 || (r.hi <= 0.0 && r.lo < 0.0)) continue;
      straddles = true;
      break;
    }
    if (straddles && depth < opts_.max_depth) {
      const std::size_t n = lo.size();
      for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
        std::vector<double> clo(n), chi(n);
        for (std::size_t k = 0; k < n; ++k) {
          const double mid = 0.5 * (lo[k] + hi[k]);
          clo[k] = (m >> k) & 1u ? mid : lo[k];
          chi[k] = (m >> k) & 1u ? hi[k] : mid;
        }
        refine(clo, chi, depth + 1);
      }
      return;
    }
    Region r;
    r.lo = lo;
    r.hi = hi;
    r.volume = 1.0;
    r.centroid.resize(lo.size());
    for (std::size_t k = 0; k < lo.size(); ++k) {
      r.volume *= hi[k] - lo[k];
      r.centroid[k] = 0.5 * (lo[k] + hi[k]);
    }
    r.label = label_at(r.centroid);
    r.pure = !straddles;
    g_.regions.push_back(std::move(r));
  }

  void adjacency() {
    const std::size_t n = g_.regions.size();
    g_.adjacency.assign(n, {});
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      const Region& a = g_.regions[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        const Region& b = g_.regions[j];
        bool near = true;
        for (std::size_t k = 0; k < a.lo.size() && near; ++k) {
          near = a.lo[k] <= b.hi[k] + eps_ && b.lo[k] <= a.hi[k] + eps_;
        }
        if (!near) continue;
        const bool adj = a.is_polygon() ? polygons_share_edge(a.polygon, b.polygon, 1e3 * eps_)
                                        : boxes_adjacent(a, b, eps_);
        if (adj) {
          g_.adjacency[i].push_back(j);
          g_.adjacency[j].push_back(i);
        }
      }
    }
    for (auto& v : g_.adjacency) std::sort(v.begin(), v.end());
  }

  std::vector<double> full_lo_, full_hi_;
  AbstractionOptions opts_;
  AbstractionGraph g_;
  double eps_ = 1e-9;
};

}  // namespace

AbstractionGraph decompose(std::span<const double> lo, std::span<const double> hi,
                           std::vector<PredicateFn> predicates, const AbstractionOptions& opts) {
  if (lo.size() != hi.size() || lo.empty()) throw AbstractionError("state bounds have mismatched sizes");
  return Builder(lo, hi, std::move(predicates), opts).run();
}

std::vector<double> AbstractionGraph::project(std::span<const double> x) const {
  std::vector<double> p(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) p[k] = x[dims[k]];
  return p;
}

bool AbstractionGraph::in_bounds(std::span<const double> x) const {
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const double v = x[dims[k]];
    if (!(v >= lo[k] && v <= hi[k])) return false;
  }
  return true;
}

bool AbstractionGraph::region_contains(std::size_t r, std::span<const double> x) const {
  const Region& reg = regions[r];
  const std::vector<double> p = project(x);
  double scale = 0.0;
  for (std::size_t k = 0; k < dims.size(); ++k) scale = std::max(scale, hi[k] - lo[k]);
  const double eps = 1e-9 * scale;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] < reg.lo[k] - eps || p[k] > reg.hi[k] + eps) return false;
  }
  if (!reg.is_polygon()) return true;
  const auto& poly = reg.polygon;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    const double cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    if (cross < -eps * len) return false;
  }
  return true;
}

void AbstractionGraph::build_index() {
  const std::size_t n = dims.size();
  cells_per_dim_ = n <= 2 ? 64 : n == 3 ? 16 : 4;
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) total *= cells_per_dim_;
  buckets_.assign(total, {});
  for (const Region& r : regions) {
    std::vector<std::size_t> a(n), b(n);
    for (std::size_t k = 0; k < n; ++k) {
      auto cell = [&](double v) {
        const double f = (v - lo[k]) / (hi[k] - lo[k]) * static_cast<double>(cells_per_dim_);
        return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(cells_per_dim_ - 1)));
      };
      const double pad = 1e-9 * (hi[k] - lo[k]);
      a[k] = cell(r.lo[k] - pad);
      b[k] = cell(r.hi[k] + pad);
    }
    std::vector<std::size_t> i = a;
    while (true) {
      std::size_t flat = 0;
      for (std::size_t k = n; k-- > 0;) flat = flat * cells_per_dim_ + i[k];
      buckets_[flat].push_back(r.id);
      std::size_t k = 0;
      while (k < n && i[k] == b[k]) {
        i[k] = a[k];
        ++k;
      }
      if (k == n) break;
      ++i[k];
    }
  }
}

std::size_t AbstractionGraph::bucket_of(std::span<const double> p) const {
  std::size_t flat = 0;
  for (std::size_t k = dims.size(); k-- > 0;) {
    const double f = (p[k] - lo[k]) / (hi[k] - lo[k]) * static_cast<double>(cells_per_dim_);
    flat = flat * cells_per_dim_ +
           static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(cells_per_dim_ - 1)));
  }
  return flat;
}

std::size_t AbstractionGraph::region_of(std::span<const double> x) const {
  if (!in_bounds(x)) throw std::out_of_range("state outside the abstraction bounds");
  const Label want = label_of(predicates, x);
  std::size_t best = regions.size();
  bool best_match = false;
  for (std::size_t r : buckets_[bucket_of(project(x))]) {
    if (!region_contains(r, x)) continue;
    const bool match = regions[r].label == want;
    if (best == regions.size() || (match && !best_match) || (match == best_match && r < best)) {
      best = r;
      best_match = match;
    }
  }
  if (best == regions.size()) throw std::out_of_range("no region contains the state");
  return best;
}

std::size_t AbstractionGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& a : adjacency) n += a.size();
  return n / 2;
}

double AbstractionGraph::total_volume() const {
  double v = 0.0;
  for (const auto& r : regions) v += r.volume;
  return v;
}

double AbstractionGraph::impure_fraction() const {
  double v = 0.0;
  for (const auto& r : regions) {
    if (!r.pure) v += r.volume;
  }
  const double total = total_volume();
  return total > 0.0 ? v / total : 0.0;
}

std::string dump_abstraction(const AbstractionGraph& g, std::span<const std::string> state_names) {
  std::ostringstream os;
  os.precision(10);
  os << "# dims";
  for (std::size_t d : g.dims) os << ' ' << (d < state_names.size() ? state_names[d] : "x" + std::to_string(d));
  os << "\n# regions " << g.regions.size() << " edges " << g.edge_count() << " impure_fraction "
     << g.impure_fraction() << '\n';
  for (const Region& r : g.regions) {
    os << "region " << r.id << " label {";
    bool first = true;
    for (std::size_t i = 0; i < g.predicates.size(); ++i) {
      if (!((r.label >> i) & 1u)) continue;
      os << (first ? "" : ",") << g.predicates[i].name;
      first = false;
    }
    os << "} volume " << r.volume << " pure " << (r.pure ? 1 : 0);
    if (r.is_polygon()) {
      os << " polygon";
      for (const auto& p : r.polygon) os << ' ' << p[0] << ',' << p[1];
    } else {
      os << " box";
      for (std::size_t k = 0; k < r.lo.size(); ++k) os << " [" << r.lo[k] << ',' << r.hi[k] << ']';
    }
    os << '\n';
  }
  for (std::size_t i = 0; i < g.adjacency.size(); ++i) {
    for (std::size_t j : g.adjacency[i]) {
      if (i < j) os << "edge " << i << ' ' << j << '\n';
    }
  }
  return os.str();
}

}  // namespace stlta
