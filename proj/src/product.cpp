#include "stlta/product.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <tuple>

namespace stlta {

namespace {

// Punctual and nearly punctual windows would otherwise get zero weight and
// never be routed through.
constexpr double kMinDuration = 0.1;

}  // namespace

std::vector<std::size_t> dist_from_acc(const TimedNfa& ta) {
  std::vector<std::vector<std::size_t>> pred(ta.size());
  for (const TimedEdge& e : ta.edges) {
    if (!e.guard.is_false()) pred[e.to].push_back(e.from);
  }
  std::vector<std::size_t> dist(ta.size(), kUnreachable);
  std::deque<std::size_t> work;
  for (std::size_t q = 0; q < ta.size(); ++q) {
    if (ta.accepting(q)) {
      dist[q] = 1;
      work.push_back(q);
    }
  }
  while (!work.empty()) {
    const std::size_t q = work.front();
    work.pop_front();
    for (std::size_t p : pred[q]) {
      if (dist[p] != kUnreachable) continue;
      dist[p] = dist[q] + 1;
      work.push_back(p);
    }
  }
  return dist;
}

double state_weight(double cov, double numsel, double volume, double duration, double dist) {
  return (cov + 1.0) * volume * duration / (dist * (numsel + 1.0) * (numsel + 1.0));
}

ProductAutomaton::ProductAutomaton(const TimedNfa& ta, const AbstractionGraph& m, double t_max)
    : ta_(ta), m_(m), nq_(ta.size()), nd_(m.regions.size()), ta_out_(ta.out_edges()), dist_(dist_from_acc(ta)) {
  duration_.resize(nq_);
  for (std::size_t q = 0; q < nq_; ++q) {
    const TimeInterval& inv = ta.states[q].inv;
    const double len = inv.bounded() ? inv.length() : t_max - inv.lo;
    duration_[q] = std::max(len, kMinDuration);
  }
  cov_.assign(size(), 0.0);
  numsel_.assign(size(), 0.0);
  succ_.resize(size());
  expanded_.assign(size(), false);
}

const std::vector<std::size_t>& ProductAutomaton::successors(std::size_t zid) const {
  if (expanded_[zid]) return succ_[zid];
  expanded_[zid] = true;
  const ProductState z = state(zid);
  std::vector<std::size_t> targets{z.d};
  targets.insert(targets.end(), m_.adjacency[z.d].begin(), m_.adjacency[z.d].end());
  auto& out = succ_[zid];
  const Label l = m_.regions[z.d].label;
  for (std::size_t ei : ta_out_[z.q]) {
    const TimedEdge& e = ta_.edges[ei];
    if (!e.guard(l)) continue;
    for (std::size_t d2 : targets) out.push_back(id({e.to, d2}));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ProductState> ProductAutomaton::initial(std::span<const double> x0) const {
  const std::size_t d0 = m_.region_of(x0);
  const Label l = label_of(m_.predicates, x0);
  std::vector<ProductState> out;
  for (std::size_t q0 : ta_.initial) {
    for (std::size_t q : ta_.successors(q0, l, TimeInterval::point(0.0))) out.push_back({q, d0});
  }
  std::sort(out.begin(), out.end(), [&](auto a, auto b) { return id(a) < id(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double ProductAutomaton::weight(ProductState z) const {
  if (dist_[z.q] == kUnreachable) return 0.0;
  return state_weight(cov_[id(z)], numsel_[id(z)], m_.regions[z.d].volume, duration_[z.q],
                      static_cast<double>(dist_[z.q]));
}

std::optional<Lead> ProductAutomaton::compute_lead(const std::vector<ProductState>& sources) const {
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::vector<double> dist(size(), std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(size(), kUnreachable);
  std::vector<bool> settled(size(), false);
  // A source is entered as if over a self-edge, so sources whose weight
  // has collapsed (selected often, little progress) give way to others.
  for (ProductState s : sources) {
    const double w = weight(s);
    if (!(w > 0.0)) continue;
    const std::size_t i = id(s);
    const double c = 1.0 / (w * w);
    if (c < dist[i]) {
      dist[i] = c;
      open.push({c, i});
    }
  }
  while (!open.empty()) {
    const auto [c, i] = open.top();
    open.pop();
    if (settled[i] || c > dist[i]) continue;
    settled[i] = true;
    if (accepting(state(i))) {
      Lead lead;
      lead.cost = c;
      for (std::size_t k = i; k != kUnreachable; k = parent[k]) lead.states.push_back(state(k));
      std::reverse(lead.states.begin(), lead.states.end());
      return lead;
    }
    const double w1 = weight(state(i));
    for (std::size_t j : successors(i)) {
      if (settled[j]) continue;
      const double w = w1 * weight(state(j));
      if (!(w > 0.0)) continue;
      const double nc = c + 1.0 / w;
      if (nc < dist[j] || (nc == dist[j] && parent[j] != kUnreachable && i < parent[j])) {
        dist[j] = nc;
        parent[j] = i;
        open.push({nc, j});
      }
    }
  }
  return std::nullopt;
}

}  // namespace stlta
