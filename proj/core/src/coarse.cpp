#include "dadim/coarse.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <random>

#include "dadim/union_find.hpp"

namespace dadim {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long floor_mod(long a, long b) { return a - floor_div(a, b) * b; }

}  // namespace

// ---------------------------------------------------------------------------
// FiniteMetricSpace defaults

std::vector<Point> FiniteMetricSpace::ball(Point p, long r) const {
  std::vector<Point> out;
  for (Point q = 0; q < size(); ++q) {
    if (dist(p, q) <= r) out.push_back(q);
  }
  return out;
}

long FiniteMetricSpace::set_diameter(const std::vector<Point>& points) const {
  long d = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) d = std::max(d, dist(points[i], points[j]));
  return d;
}

long FiniteMetricSpace::diameter() const {
  std::vector<Point> all(size());
  for (Point p = 0; p < size(); ++p) all[p] = p;
  return set_diameter(all);
}

std::vector<std::size_t> FiniteMetricSpace::ball_profile(long max_radius) const {
  std::vector<std::size_t> out(static_cast<std::size_t>(max_radius + 1), 0);
  for (Point p = 0; p < size(); ++p) {
    std::vector<std::size_t> counts(out.size(), 0);
    for (Point q = 0; q < size(); ++q) {
      const long d = dist(p, q);
      if (d <= max_radius) ++counts[static_cast<std::size_t>(d)];
    }
    std::size_t running = 0;
    for (std::size_t r = 0; r < out.size(); ++r) {
      running += counts[r];
      out[r] = std::max(out[r], running);
    }
  }
  return out;
}

std::optional<std::string> FiniteMetricSpace::metric_violation() const {
  const std::size_t n = size();
  auto pair_check = [&](Point a, Point b) -> std::optional<std::string> {
    const long ab = dist(a, b);
    if (ab != dist(b, a)) return "asymmetric at (" + std::to_string(a) + "," + std::to_string(b) + ")";
    if (a == b && ab != 0) return "nonzero diagonal at " + std::to_string(a);
    if (a != b && ab <= 0) return "distinct points " + std::to_string(a) + "," + std::to_string(b) + " at distance <= 0";
    return std::nullopt;
  };
  auto triangle = [&](Point a, Point b, Point c) -> std::optional<std::string> {
    if (dist(a, c) > dist(a, b) + dist(b, c)) {
      return "triangle inequality fails for (" + std::to_string(a) + "," + std::to_string(b) + "," +
             std::to_string(c) + ")";
    }
    return std::nullopt;
  };
  if (n <= 500) {
    for (Point a = 0; a < n; ++a)
      for (Point b = 0; b < n; ++b)
        if (auto v = pair_check(a, b)) return v;
    for (Point a = 0; a < n; ++a)
      for (Point b = 0; b < n; ++b)
        for (Point c = 0; c < n; ++c)
          if (auto v = triangle(a, b, c)) return v;
    return std::nullopt;
  }
  std::mt19937_64 rng(0x5eed);
  for (int t = 0; t < 200'000; ++t) {
    const Point a = rng() % n, b = rng() % n, c = rng() % n;
    if (auto v = pair_check(a, b)) return v;
    if (auto v = pair_check(a, a)) return v;
    if (auto v = triangle(a, b, c)) return v;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// GridSpace

GridSpace::GridSpace(std::vector<long> lo, std::vector<long> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty() || lo_.size() != hi_.size()) fail(ErrorCode::kUsage, "grid box needs matching lo/hi of dimension >= 1");
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (hi_[i] < lo_[i]) fail(ErrorCode::kUsage, "grid box is empty");
    extent_.push_back(hi_[i] - lo_[i] + 1);
    size_ *= static_cast<std::size_t>(extent_.back());
  }
}

std::vector<long> GridSpace::coords(Point p) const {
  std::vector<long> c(lo_.size());
  for (std::size_t i = lo_.size(); i-- > 0;) {
    c[i] = lo_[i] + static_cast<long>(p % static_cast<std::size_t>(extent_[i]));
    p /= static_cast<std::size_t>(extent_[i]);
  }
  return c;
}

Point GridSpace::index(const std::vector<long>& c) const {
  Point p = 0;
  for (std::size_t i = 0; i < lo_.size(); ++i) p = p * static_cast<std::size_t>(extent_[i]) + static_cast<std::size_t>(c[i] - lo_[i]);
  return p;
}

long GridSpace::dist(Point a, Point b) const {
  long d = 0;
  for (std::size_t i = lo_.size(); i-- > 0;) {
    const auto e = static_cast<std::size_t>(extent_[i]);
    d += std::labs(static_cast<long>(a % e) - static_cast<long>(b % e));
    a /= e;
    b /= e;
  }
  return d;
}

std::vector<Point> GridSpace::ball(Point p, long r) const {
  const auto c = coords(p);
  std::vector<Point> out;
  std::vector<long> cur(c.size());
  // Recursive walk over coordinates with the remaining l1 budget.
  auto walk = [&](auto&& self, std::size_t dim, long budget) -> void {
    if (dim == c.size()) {
      out.push_back(index(cur));
      return;
    }
    const long from = std::max(lo_[dim], c[dim] - budget);
    const long to = std::min(hi_[dim], c[dim] + budget);
    for (long v = from; v <= to; ++v) {
      cur[dim] = v;
      self(self, dim + 1, budget - std::labs(v - c[dim]));
    }
  };
  walk(walk, 0, r);
  return out;  // row-major order is increasing index order
}

long GridSpace::set_diameter(const std::vector<Point>& points) const {
  if (points.size() < 2) return 0;
  // l1 diameter = max over sign vectors s of (max s.x - min s.x); fixing the
  // first sign halves the work.
  const std::size_t n = lo_.size();
  long best = 0;
  std::vector<std::vector<long>> cs;
  cs.reserve(points.size());
  for (Point p : points) cs.push_back(coords(p));
  for (std::size_t mask = 0; mask < (std::size_t{1} << (n - 1)); ++mask) {
    long hi = std::numeric_limits<long>::min();
    long lo = std::numeric_limits<long>::max();
    for (const auto& c : cs) {
      long v = c[0];
      for (std::size_t i = 1; i < n; ++i) v += (mask >> (i - 1) & 1) ? -c[i] : c[i];
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

std::string GridSpace::describe() const {
  std::string s = "grid";
  for (std::size_t i = 0; i < lo_.size(); ++i) s += (i ? "x" : " ") + std::string("[") + std::to_string(lo_[i]) + "," + std::to_string(hi_[i]) + "]";
  return s;
}

// ---------------------------------------------------------------------------
// TableSpace

TableSpace::TableSpace(std::vector<std::vector<long>> matrix, std::string label)
    : d_(std::move(matrix)), label_(std::move(label)) {
  for (const auto& row : d_) {
    if (row.size() != d_.size()) fail(ErrorCode::kParse, "distance matrix is not square");
  }
}

TableSpace TableSpace::from_edges(std::size_t n, const std::vector<std::tuple<Point, Point, long>>& edges) {
  std::vector<std::vector<std::pair<Point, long>>> adj(n);
  for (const auto& [a, b, w] : edges) {
    if (a >= n || b >= n) fail(ErrorCode::kParse, "edge endpoint out of range");
    if (w <= 0) fail(ErrorCode::kParse, "edge weights must be positive");
    adj[a].emplace_back(b, w);
    adj[b].emplace_back(a, w);
  }
  constexpr long kInf = std::numeric_limits<long>::max();
  std::vector<std::vector<long>> d(n, std::vector<long>(n, kInf));
  for (Point src = 0; src < n; ++src) {
    auto& dist = d[src];
    using Item = std::pair<long, Point>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0;
    pq.emplace(0, src);
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != dist[u]) continue;
      for (auto [v, w] : adj[u]) {
        if (du + w < dist[v]) {
          dist[v] = du + w;
          pq.emplace(dist[v], v);
        }
      }
    }
    for (Point v = 0; v < n; ++v) {
      if (dist[v] == kInf) fail(ErrorCode::kParse, "graph is not connected");
    }
  }
  return TableSpace(std::move(d), "graph on " + std::to_string(n) + " points");
}

TableSpace TableSpace::path(std::size_t n) {
  std::vector<std::vector<long>> d(n, std::vector<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = std::labs(static_cast<long>(i) - static_cast<long>(j));
  return TableSpace(std::move(d), "path on " + std::to_string(n) + " points");
}

// ---------------------------------------------------------------------------
// GroupBallSpace

GroupBallSpace::GroupBallSpace(Kind kind, std::vector<std::vector<long>> generators, long radius)
    : kind_(kind), generators_(std::move(generators)), radius_(radius) {
  if (generators_.empty()) fail(ErrorCode::kUsage, "group ball needs at least one generator");
  if (radius_ < 0) fail(ErrorCode::kUsage, "radius must be nonnegative");
  const std::size_t width = generators_[0].size();
  for (const auto& g : generators_) {
    if (g.size() != width || width == 0) fail(ErrorCode::kParse, "generators must have a common nonzero length");
    if (kind_ == Kind::kPermutation) {
      std::vector<char> hit(width, 0);
      for (long v : g) {
        if (v < 0 || static_cast<std::size_t>(v) >= width || hit[static_cast<std::size_t>(v)]) {
          fail(ErrorCode::kParse, "generator is not a permutation");
        }
        hit[static_cast<std::size_t>(v)] = 1;
      }
    }
  }
  std::vector<std::vector<long>> moves = generators_;
  for (const auto& g : generators_) moves.push_back(invert(g));

  std::vector<long> identity(width, 0);
  if (kind_ == Kind::kPermutation) {
    for (std::size_t i = 0; i < width; ++i) identity[i] = static_cast<long>(i);
  }
  std::map<std::vector<long>, long> length;
  std::deque<std::vector<long>> queue{identity};
  length[identity] = 0;
  while (!queue.empty()) {
    auto g = queue.front();
    queue.pop_front();
    const long lg = length[g];
    if (lg <= radius_) elements_.push_back(g);
    if (lg == 2 * radius_) continue;
    for (const auto& m : moves) {
      auto h = multiply(g, m);
      if (length.emplace(h, lg + 1).second) queue.push_back(std::move(h));
    }
  }
  for (auto& [k, v] : length) {
    length_keys_.push_back(k);
    length_values_.push_back(v);
  }
}

std::vector<long> GroupBallSpace::multiply(const std::vector<long>& a, const std::vector<long>& b) const {
  std::vector<long> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = kind_ == Kind::kFreeAbelian ? a[i] + b[i] : a[static_cast<std::size_t>(b[i])];
  }
  return out;
}

std::vector<long> GroupBallSpace::invert(const std::vector<long>& a) const {
  std::vector<long> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (kind_ == Kind::kFreeAbelian) {
      out[i] = -a[i];
    } else {
      out[static_cast<std::size_t>(a[i])] = static_cast<long>(i);
    }
  }
  return out;
}

long GroupBallSpace::word_length(const std::vector<long>& element) const {
  auto it = std::lower_bound(length_keys_.begin(), length_keys_.end(), element);
  if (it == length_keys_.end() || *it != element) return -1;
  return length_values_[static_cast<std::size_t>(it - length_keys_.begin())];
}

long GroupBallSpace::dist(Point a, Point b) const {
  // |s^-1 t| <= 2r for s, t in the ball, so the table always has the answer.
  return word_length(multiply(invert(elements_[a]), elements_[b]));
}

std::string GroupBallSpace::describe() const {
  return std::string(kind_ == Kind::kFreeAbelian ? "Z^n" : "permutation group") + " ball of radius " +
         std::to_string(radius_) + " (" + std::to_string(elements_.size()) + " elements)";
}

// ---------------------------------------------------------------------------
// Witness verification

std::vector<std::vector<Point>> scale_components(const FiniteMetricSpace& X, const std::vector<Point>& points,
                                                 long R) {
  std::vector<Point> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  UnionFind uf(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (Point q : X.ball(pts[i], R)) {
      auto it = std::lower_bound(pts.begin(), pts.end(), q);
      if (it != pts.end() && *it == q) uf.unite(i, static_cast<std::size_t>(it - pts.begin()));
    }
  }
  std::map<std::size_t, std::vector<Point>> groups;
  for (std::size_t i = 0; i < pts.size(); ++i) groups[uf.find(i)].push_back(pts[i]);
  std::vector<std::vector<Point>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

AsdimVerification verify_asdim_witness(const FiniteMetricSpace& X, const AsdimWitness& w) {
  AsdimVerification rep;
  const std::size_t n = X.size();
  if (w.scale_R <= 0) fail(ErrorCode::kUsage, "scale R must be positive");
  // class_of[f][x] = class index + 1 within family f, 0 when absent.
  std::vector<std::vector<std::uint32_t>> class_of(w.families.size(), std::vector<std::uint32_t>(n, 0));
  std::vector<char> covered(n, 0);
  for (std::size_t f = 0; f < w.families.size(); ++f) {
    for (std::size_t c = 0; c < w.families[f].size(); ++c) {
      for (Point p : w.families[f][c]) {
        if (p >= n) fail(ErrorCode::kUsage, "witness names point " + std::to_string(p) + " outside the space");
        if (class_of[f][p] != 0 && rep.code == ErrorCode::kOk) {
          rep.code = ErrorCode::kSeparationViolation;
          rep.violating_pair = {p, p};
          rep.family = f;
          rep.message = "point " + std::to_string(p) + " lies in two classes of family " + std::to_string(f);
        }
        class_of[f][p] = static_cast<std::uint32_t>(c + 1);
        covered[p] = 1;
      }
    }
  }
  for (Point p = 0; p < n; ++p) {
    if (!covered[p]) {
      rep.code = ErrorCode::kCoverGap;
      rep.message = "point " + std::to_string(p) + " is in no class";
      rep.violating_pair.reset();
      rep.family.reset();
      return rep;
    }
  }
  if (rep.code != ErrorCode::kOk) return rep;
  for (std::size_t f = 0; f < w.families.size(); ++f) {
    for (const auto& cls : w.families[f]) {
      for (Point p : cls) {
        for (Point q : X.ball(p, w.scale_R)) {
          const auto cq = class_of[f][q];
          if (cq != 0 && cq != class_of[f][p]) {
            rep.code = ErrorCode::kSeparationViolation;
            rep.violating_pair = {p, q};
            rep.family = f;
            rep.message = "points " + std::to_string(p) + " and " + std::to_string(q) + " of family " +
                          std::to_string(f) + " lie in different classes at distance " +
                          std::to_string(X.dist(p, q)) + " <= R = " + std::to_string(w.scale_R);
            return rep;
          }
        }
      }
    }
  }
  for (std::size_t f = 0; f < w.families.size(); ++f) {
    for (const auto& cls : w.families[f]) {
      const long d = X.set_diameter(cls);
      rep.max_class_diameter = std::max(rep.max_class_diameter, d);
      if (d > w.bound_S) {
        rep.code = ErrorCode::kDiameterViolation;
        rep.family = f;
        rep.message = "a class of family " + std::to_string(f) + " has diameter " + std::to_string(d) + " > S = " +
                      std::to_string(w.bound_S);
        return rep;
      }
    }
  }
  rep.accepted = true;
  rep.message = "accepted";
  return rep;
}

AsdimWitness construct_grid_witness(const GridSpace& X, long R) {
  if (R <= 0) fail(ErrorCode::kUsage, "scale R must be positive");
  AsdimWitness w;
  w.scale_R = R;
  if (X.dims() == 1) {
    const long L = 5 * R;
    w.bound_S = L - 1;
    w.families.assign(2, {});
    std::map<long, std::vector<Point>> blocks;
    for (Point p = 0; p < X.size(); ++p) blocks[floor_div(X.coords(p)[0] - X.lo()[0], L)].push_back(p);
    for (auto& [k, pts] : blocks) w.families[static_cast<std::size_t>(floor_mod(k, 2))].push_back(std::move(pts));
    return w;
  }
  if (X.dims() == 2) {
    long L = 10 * R;
    if (L % 2) ++L;
    w.bound_S = 2 * (L - 1);
    w.families.assign(3, {});
    // Brick (row j, column k): rows of height L, odd rows shifted by L/2.
    std::map<std::pair<long, long>, std::vector<Point>> bricks;
    for (Point p = 0; p < X.size(); ++p) {
      const auto c = X.coords(p);
      const long j = floor_div(c[1] - X.lo()[1], L);
      const long k = floor_div(c[0] - X.lo()[0] - floor_mod(j, 2) * (L / 2), L);
      bricks[{j, k}].push_back(p);
    }
    for (auto& [jk, pts] : bricks) {
      const long color = floor_mod(jk.second + 2 * floor_mod(jk.first, 2), 3);
      w.families[static_cast<std::size_t>(color)].push_back(std::move(pts));
    }
    return w;
  }
  fail(ErrorCode::kUsage, "grid witnesses are constructed for dimension 1 or 2 only");
}

MinColors exhaustive_min_colors(const FiniteMetricSpace& X, long R, long S, std::size_t max_points) {
  const std::size_t n = X.size();
  max_points = std::min<std::size_t>(max_points, 18);
  if (n > max_points) {
    fail(ErrorCode::kTooLarge, "exhaustive search over " + std::to_string(n) + " points exceeds the cap of " +
                                   std::to_string(max_points));
  }
  MinColors out;
  out.witness.scale_R = R;
  out.witness.bound_S = S;
  if (n == 0) return out;
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<std::uint32_t> near(n, 0);  // near[i] = points within R of i
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (X.dist(i, j) <= R) near[i] |= std::uint32_t{1} << j;

  // A set of points can be one family iff every R-component has diameter <= S.
  std::vector<char> valid(full + 1, 0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    // Downward closed: a mask is valid only if removing its top point leaves a valid set.
    const std::uint32_t top = std::uint32_t{1} << (31 - __builtin_clz(mask));
    if ((mask & ~top) && !valid[mask & ~top]) continue;
    bool ok = true;
    std::uint32_t left = mask;
    while (left && ok) {
      std::uint32_t comp = left & (~left + 1);
      std::uint32_t frontier = comp;
      while (frontier) {
        const int i = __builtin_ctz(frontier);
        frontier &= frontier - 1;
        const std::uint32_t add = near[static_cast<std::size_t>(i)] & mask & ~comp;
        comp |= add;
        frontier |= add;
      }
      left &= ~comp;
      for (std::uint32_t a = comp; a && ok; a &= a - 1) {
        for (std::uint32_t b = a & (a - 1); b; b &= b - 1) {
          if (X.dist(static_cast<Point>(__builtin_ctz(a)), static_cast<Point>(__builtin_ctz(b))) > S) {
            ok = false;
            break;
          }
        }
      }
    }
    valid[mask] = ok;
  }
  constexpr std::uint8_t kInf = 0xff;
  std::vector<std::uint8_t> best(full + 1, kInf);
  std::vector<std::uint32_t> choice(full + 1, 0);
  best[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t low = mask & (~mask + 1);
    const std::uint32_t rest = mask & ~low;
    // Enumerate sub = low | t for t a submask of rest.
    for (std::uint32_t t = rest;; t = (t - 1) & rest) {
      const std::uint32_t sub = low | t;
      if (valid[sub] && best[mask ^ sub] != kInf && best[mask ^ sub] + 1 < best[mask]) {
        best[mask] = static_cast<std::uint8_t>(best[mask ^ sub] + 1);
        choice[mask] = sub;
      }
      if (t == 0) break;
    }
  }
  out.colors = best[full];
  for (std::uint32_t mask = full; mask; mask ^= choice[mask]) {
    std::vector<Point> pts;
    for (std::uint32_t a = choice[mask]; a; a &= a - 1) pts.push_back(static_cast<Point>(__builtin_ctz(a)));
    out.witness.families.push_back(scale_components(X, pts, R));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bridge to the pair groupoid

BridgeResult bridge_to_groupoid(const FiniteMetricSpace& X, const AsdimWitness& w) {
  BridgeResult out;
  out.asdim = verify_asdim_witness(X, w);
  const std::size_t n = X.size();
  out.groupoid = FiniteGroupoid::pair(n);
  const auto N = static_cast<Arrow>(n);
  for (Point r = 0; r < n; ++r) {
    for (Point s : X.ball(r, w.scale_R)) out.witness.K.push_back(static_cast<Arrow>(r) * N + static_cast<Arrow>(s));
  }
  out.K_size = out.witness.K.size();
  for (const auto& family : w.families) {
    std::vector<Unit> color;
    Subgroupoid declared;
    declared.by_classes = true;
    for (const auto& cls : family) {
      for (Point p : cls) color.push_back(static_cast<Unit>(p));
      for (auto& comp : scale_components(X, cls, w.scale_R)) {
        declared.classes.emplace_back(comp.begin(), comp.end());
      }
    }
    std::sort(color.begin(), color.end());
    color.erase(std::unique(color.begin(), color.end()), color.end());
    std::sort(declared.classes.begin(), declared.classes.end());
    out.witness.colors.push_back(std::move(color));
    out.witness.generated.push_back(std::move(declared));
  }
  long max_diam = 0;
  auto small = [&](std::size_t, const Subgroupoid& H) -> std::optional<std::string> {
    for (const auto& c : H.orbit_classes(out.groupoid)) {
      const long d = X.set_diameter(std::vector<Point>(c.begin(), c.end()));
      max_diam = std::max(max_diam, d);
      if (d > w.bound_S) {
        return "generated subgroupoid has an orbit of diameter " + std::to_string(d) + ", outside the S-tube (S = " +
               std::to_string(w.bound_S) + ")";
      }
    }
    return std::nullopt;
  };
  out.groupoid_report = verify_groupoid_dad(out.groupoid, out.witness, small);
  out.generated_max_diameter = max_diam;
  out.within_S_tube = max_diam <= w.bound_S && out.groupoid_report.code != ErrorCode::kSizeExceeded;

  out.round_trip = out.groupoid_report.generated.size() == w.families.size();
  for (std::size_t f = 0; out.round_trip && f < w.families.size(); ++f) {
    std::vector<std::vector<Unit>> expect;
    for (const auto& cls : w.families[f]) {
      if (cls.empty()) continue;
      expect.emplace_back(cls.begin(), cls.end());
      std::sort(expect.back().begin(), expect.back().end());
    }
    std::sort(expect.begin(), expect.end());
    out.round_trip = out.groupoid_report.generated[f].orbit_classes(out.groupoid) == expect;
  }

  if (!out.asdim.accepted) {
    out.code = out.asdim.code;
    out.message = "metric witness rejected: " + out.asdim.message + "; groupoid check: " + out.groupoid_report.message;
  } else if (!out.groupoid_report.accepted) {
    out.code = out.groupoid_report.code;
    out.message = "groupoid witness rejected: " + out.groupoid_report.message;
  } else {
    out.accepted = true;
    out.message = "accepted";
  }
  return out;
}

}  // namespace dadim
