#include "dadim/groupoid.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "dadim/union_find.hpp"

namespace dadim {

namespace {

constexpr std::uint64_t kExhaustiveTriples = 10'000'000;

void sort_classes(std::vector<std::vector<Unit>>& classes) {
  for (auto& c : classes) std::sort(c.begin(), c.end());
  std::sort(classes.begin(), classes.end());
}

std::vector<char> membership(std::size_t n, const std::vector<Unit>& units) {
  std::vector<char> in(n, 0);
  for (Unit u : units) {
    if (u < 0 || static_cast<std::size_t>(u) >= n) fail(ErrorCode::kUsage, "unit out of range");
    in[static_cast<std::size_t>(u)] = 1;
  }
  return in;
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteAction

FiniteAction FiniteAction::make(std::vector<std::vector<int>> mult, std::vector<std::vector<int>> act) {
  const std::size_t n = mult.size();
  if (n == 0) fail(ErrorCode::kNotAnAction, "empty group");
  for (const auto& row : mult) {
    if (row.size() != n) fail(ErrorCode::kNotAnAction, "group table is not square");
    for (int v : row) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) fail(ErrorCode::kNotAnAction, "group table entry out of range");
    }
  }
  for (std::size_t g = 0; g < n; ++g) {
    if (mult[0][g] != static_cast<int>(g) || mult[g][0] != static_cast<int>(g)) {
      fail(ErrorCode::kNotAnAction, "element 0 is not the identity");
    }
  }
  FiniteAction a;
  a.inverse.assign(n, -1);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      if (mult[g][h] == 0 && mult[h][g] == 0) {
        a.inverse[g] = static_cast<int>(h);
        break;
      }
    }
    if (a.inverse[g] < 0) fail(ErrorCode::kNotAnAction, "element without inverse");
  }
  std::mt19937_64 rng(0x5eed);
  const bool exhaustive = static_cast<std::uint64_t>(n) * n * n <= kExhaustiveTriples;
  const std::uint64_t samples = exhaustive ? static_cast<std::uint64_t>(n) * n * n : 200'000;
  for (std::uint64_t t = 0; t < samples; ++t) {
    std::size_t g, h, k;
    if (exhaustive) {
      g = t / (n * n);
      h = (t / n) % n;
      k = t % n;
    } else {
      g = rng() % n;
      h = rng() % n;
      k = rng() % n;
    }
    const auto gh = static_cast<std::size_t>(mult[g][h]);
    const auto hk = static_cast<std::size_t>(mult[h][k]);
    if (mult[gh][k] != mult[g][hk]) fail(ErrorCode::kNotAnAction, "group table is not associative");
  }
  if (act.size() != n) fail(ErrorCode::kNotAnAction, "action table needs one row per group element");
  const std::size_t m = act[0].size();
  for (const auto& row : act) {
    if (row.size() != m) fail(ErrorCode::kNotAnAction, "ragged action table");
    std::vector<char> hit(m, 0);
    for (int v : row) {
      if (v < 0 || static_cast<std::size_t>(v) >= m) fail(ErrorCode::kNotAnAction, "action entry out of range");
      hit[static_cast<std::size_t>(v)] = 1;
    }
    if (std::count(hit.begin(), hit.end(), 1) != static_cast<long>(m)) {
      fail(ErrorCode::kNotAnAction, "group element does not act bijectively");
    }
  }
  for (std::size_t x = 0; x < m; ++x) {
    if (act[0][x] != static_cast<int>(x)) fail(ErrorCode::kNotAnAction, "identity does not act trivially");
  }
  const bool exhaustive_act = static_cast<std::uint64_t>(n) * n * m <= kExhaustiveTriples;
  const std::uint64_t act_samples = exhaustive_act ? static_cast<std::uint64_t>(n) * n * m : 200'000;
  for (std::uint64_t t = 0; t < act_samples; ++t) {
    std::size_t g, h, x;
    if (exhaustive_act) {
      g = t / (n * m);
      h = (t / m) % n;
      x = t % m;
    } else {
      g = rng() % n;
      h = rng() % n;
      x = rng() % m;
    }
    const auto hx = static_cast<std::size_t>(act[h][x]);
    const auto gh = static_cast<std::size_t>(mult[g][h]);
    if (act[g][hx] != act[gh][x]) fail(ErrorCode::kNotAnAction, "(gh).x differs from g.(h.x)");
  }
  a.mult = std::move(mult);
  a.act = std::move(act);
  return a;
}

FiniteAction FiniteAction::cyclic(int n, std::vector<std::vector<int>> act) {
  if (n <= 0) fail(ErrorCode::kNotAnAction, "group order must be positive");
  std::vector<std::vector<int>> mult(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) mult[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] = (g + h) % n;
  return make(std::move(mult), std::move(act));
}

FiniteAction FiniteAction::rotation(int n) {
  std::vector<std::vector<int>> act(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < n; ++x) act[static_cast<std::size_t>(g)][static_cast<std::size_t>(x)] = (g + x) % n;
  return cyclic(n, std::move(act));
}

FiniteAction FiniteAction::trivial(int m) {
  std::vector<int> row(static_cast<std::size_t>(m));
  for (int x = 0; x < m; ++x) row[static_cast<std::size_t>(x)] = x;
  return make({{0}}, {row});
}

// ---------------------------------------------------------------------------
// FiniteGroupoid construction

FiniteGroupoid FiniteGroupoid::pair(std::size_t n_units) {
  FiniteGroupoid G;
  G.form_ = Form::kPair;
  G.n_units_ = n_units;
  G.free_ = true;
  return G;
}

FiniteGroupoid FiniteGroupoid::transformation(FiniteAction action) {
  FiniteGroupoid G;
  G.form_ = Form::kTransformation;
  G.n_units_ = action.space_size();
  G.action_ = std::move(action);
  G.free_ = true;
  for (std::size_t g = 1; g < G.action_.group_order() && G.free_; ++g) {
    for (std::size_t x = 0; x < G.n_units_; ++x) {
      if (G.action_.act[g][x] == static_cast<int>(x)) {
        G.free_ = false;
        break;
      }
    }
  }
  return G;
}

FiniteGroupoid FiniteGroupoid::block_pairs(const std::vector<std::size_t>& block_sizes) {
  std::size_t n = 0;
  for (auto b : block_sizes) n += b;
  std::vector<ArrowSpec> arrows;
  std::map<std::pair<Unit, Unit>, Arrow> id;  // (range, source) -> arrow
  // Unit arrows first so that arrow x is the identity at x.
  for (std::size_t x = 0; x < n; ++x) {
    id[{static_cast<Unit>(x), static_cast<Unit>(x)}] = static_cast<Arrow>(arrows.size());
    arrows.push_back({static_cast<Unit>(x), static_cast<Unit>(x)});
  }
  std::size_t start = 0;
  for (auto b : block_sizes) {
    for (std::size_t r = start; r < start + b; ++r) {
      for (std::size_t s = start; s < start + b; ++s) {
        if (r == s) continue;
        id[{static_cast<Unit>(r), static_cast<Unit>(s)}] = static_cast<Arrow>(arrows.size());
        arrows.push_back({static_cast<Unit>(s), static_cast<Unit>(r)});
      }
    }
    start += b;
  }
  std::vector<Composition> comp;
  for (std::size_t g = 0; g < arrows.size(); ++g) {
    for (std::size_t h = 0; h < arrows.size(); ++h) {
      if (arrows[g].source != arrows[h].range) continue;
      comp.push_back({static_cast<Arrow>(g), static_cast<Arrow>(h), id.at({arrows[g].range, arrows[h].source})});
    }
  }
  return from_table(n, std::move(arrows), comp);
}

FiniteGroupoid FiniteGroupoid::from_table(std::size_t n_units, std::vector<ArrowSpec> arrows,
                                          const std::vector<Composition>& compose) {
  FiniteGroupoid G;
  G.form_ = Form::kTable;
  G.n_units_ = n_units;
  G.arrows_ = std::move(arrows);
  const auto A = static_cast<std::uint64_t>(G.arrows_.size());
  for (const auto& a : G.arrows_) {
    if (a.source < 0 || a.range < 0 || static_cast<std::size_t>(a.source) >= n_units ||
        static_cast<std::size_t>(a.range) >= n_units) {
      fail(ErrorCode::kGroupoidAxiom, "arrow endpoint is not a unit");
    }
  }
  for (const auto& c : compose) {
    for (Arrow g : {c.first, c.second, c.result}) {
      if (g < 0 || static_cast<std::uint64_t>(g) >= A) fail(ErrorCode::kGroupoidAxiom, "composition names an unknown arrow");
    }
    const auto& g = G.arrows_[static_cast<std::size_t>(c.first)];
    const auto& h = G.arrows_[static_cast<std::size_t>(c.second)];
    const auto& gh = G.arrows_[static_cast<std::size_t>(c.result)];
    if (g.source != h.range) fail(ErrorCode::kGroupoidAxiom, "composition of non-composable arrows");
    if (gh.source != h.source || gh.range != g.range) fail(ErrorCode::kGroupoidAxiom, "composite has wrong endpoints");
    auto [it, inserted] = G.compose_.emplace(static_cast<std::uint64_t>(c.first) * A + static_cast<std::uint64_t>(c.second), c.result);
    if (!inserted && it->second != c.result) fail(ErrorCode::kGroupoidAxiom, "composition defined twice");
  }
  G.by_source_.assign(n_units, {});
  G.by_range_.assign(n_units, {});
  for (std::size_t g = 0; g < G.arrows_.size(); ++g) {
    G.by_source_[static_cast<std::size_t>(G.arrows_[g].source)].push_back(static_cast<Arrow>(g));
    G.by_range_[static_cast<std::size_t>(G.arrows_[g].range)].push_back(static_cast<Arrow>(g));
  }
  G.check_table_axioms();
  return G;
}

void FiniteGroupoid::check_table_axioms() {
  const auto A = static_cast<std::uint64_t>(arrows_.size());
  auto comp = [&](Arrow g, Arrow h) -> Arrow {
    auto it = compose_.find(static_cast<std::uint64_t>(g) * A + static_cast<std::uint64_t>(h));
    if (it == compose_.end()) {
      fail(ErrorCode::kGroupoidAxiom, "composition of " + std::to_string(g) + " and " + std::to_string(h) + " is missing");
    }
    return it->second;
  };
  // Every composable pair must be in the table.
  std::uint64_t pairs = 0;
  for (std::size_t x = 0; x < n_units_; ++x) pairs += by_source_[x].size() * by_range_[x].size();
  if (pairs != compose_.size()) fail(ErrorCode::kGroupoidAxiom, "composition table does not cover all composable pairs");

  units_.assign(n_units_, -1);
  for (std::size_t x = 0; x < n_units_; ++x) {
    for (Arrow e : by_source_[x]) {
      if (arrows_[static_cast<std::size_t>(e)].range != static_cast<Unit>(x)) continue;
      bool identity = true;
      for (Arrow h : by_range_[x]) identity = identity && comp(e, h) == h;
      for (Arrow g : by_source_[x]) identity = identity && comp(g, e) == g;
      if (identity) {
        units_[x] = e;
        break;
      }
    }
    if (units_[x] < 0) fail(ErrorCode::kGroupoidAxiom, "unit " + std::to_string(x) + " has no identity arrow");
  }
  inverse_.assign(arrows_.size(), -1);
  free_ = true;
  for (std::size_t g = 0; g < arrows_.size(); ++g) {
    const auto& a = arrows_[g];
    for (Arrow h : by_source_[static_cast<std::size_t>(a.range)]) {
      if (arrows_[static_cast<std::size_t>(h)].range != a.source) continue;
      if (comp(static_cast<Arrow>(g), h) == units_[static_cast<std::size_t>(a.range)] &&
          comp(h, static_cast<Arrow>(g)) == units_[static_cast<std::size_t>(a.source)]) {
        inverse_[g] = h;
        break;
      }
    }
    if (inverse_[g] < 0) fail(ErrorCode::kGroupoidAxiom, "arrow " + std::to_string(g) + " has no inverse");
    if (a.source == a.range && units_[static_cast<std::size_t>(a.source)] != static_cast<Arrow>(g)) free_ = false;
  }
  // Associativity over composable triples (f g h with s(f)=r(g), s(g)=r(h)).
  std::uint64_t triples = 0;
  for (std::size_t g = 0; g < arrows_.size(); ++g) {
    triples += by_source_[static_cast<std::size_t>(arrows_[g].range)].size() *
               by_range_[static_cast<std::size_t>(arrows_[g].source)].size();
  }
  auto check = [&](Arrow f, Arrow g, Arrow h) {
    if (comp(comp(f, g), h) != comp(f, comp(g, h))) fail(ErrorCode::kGroupoidAxiom, "composition is not associative");
  };
  if (triples <= kExhaustiveTriples) {
    for (std::size_t g = 0; g < arrows_.size(); ++g) {
      for (Arrow f : by_source_[static_cast<std::size_t>(arrows_[g].range)]) {
        for (Arrow h : by_range_[static_cast<std::size_t>(arrows_[g].source)]) check(f, static_cast<Arrow>(g), h);
      }
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    for (int t = 0; t < 200'000; ++t) {
      const auto g = static_cast<std::size_t>(rng() % arrows_.size());
      const auto& fs = by_source_[static_cast<std::size_t>(arrows_[g].range)];
      const auto& hs = by_range_[static_cast<std::size_t>(arrows_[g].source)];
      check(fs[rng() % fs.size()], static_cast<Arrow>(g), hs[rng() % hs.size()]);
    }
  }
}

// ---------------------------------------------------------------------------
// FiniteGroupoid queries

std::uint64_t FiniteGroupoid::num_arrows() const {
  switch (form_) {
    case Form::kPair:
      return static_cast<std::uint64_t>(n_units_) * n_units_;
    case Form::kTransformation:
      return static_cast<std::uint64_t>(action_.group_order()) * n_units_;
    case Form::kTable:
      break;
  }
  return arrows_.size();
}

bool FiniteGroupoid::valid_arrow(Arrow g) const {
  return g >= 0 && static_cast<std::uint64_t>(g) < num_arrows();
}

Unit FiniteGroupoid::source(Arrow g) const {
  switch (form_) {
    case Form::kPair:
      return g % static_cast<Arrow>(n_units_);
    case Form::kTransformation:
      return g % static_cast<Arrow>(n_units_);
    case Form::kTable:
      break;
  }
  return arrows_[static_cast<std::size_t>(g)].source;
}

Unit FiniteGroupoid::range(Arrow g) const {
  const auto n = static_cast<Arrow>(n_units_);
  switch (form_) {
    case Form::kPair:
      return g / n;
    case Form::kTransformation:
      return action_.act[static_cast<std::size_t>(g / n)][static_cast<std::size_t>(g % n)];
    case Form::kTable:
      break;
  }
  return arrows_[static_cast<std::size_t>(g)].range;
}

Arrow FiniteGroupoid::inverse(Arrow g) const {
  const auto n = static_cast<Arrow>(n_units_);
  switch (form_) {
    case Form::kPair:
      return (g % n) * n + g / n;
    case Form::kTransformation: {
      const auto grp = static_cast<std::size_t>(g / n);
      return static_cast<Arrow>(action_.inverse[grp]) * n + range(g);
    }
    case Form::kTable:
      break;
  }
  return inverse_[static_cast<std::size_t>(g)];
}

std::optional<Arrow> FiniteGroupoid::compose(Arrow g, Arrow h) const {
  if (source(g) != range(h)) return std::nullopt;
  const auto n = static_cast<Arrow>(n_units_);
  switch (form_) {
    case Form::kPair:
      return range(g) * n + source(h);
    case Form::kTransformation: {
      const int gh = action_.mult[static_cast<std::size_t>(g / n)][static_cast<std::size_t>(h / n)];
      return static_cast<Arrow>(gh) * n + source(h);
    }
    case Form::kTable:
      break;
  }
  const auto A = static_cast<std::uint64_t>(arrows_.size());
  return compose_.at(static_cast<std::uint64_t>(g) * A + static_cast<std::uint64_t>(h));
}

Arrow FiniteGroupoid::unit_arrow(Unit x) const {
  switch (form_) {
    case Form::kPair:
      return x * static_cast<Arrow>(n_units_) + x;
    case Form::kTransformation:
      return x;
    case Form::kTable:
      break;
  }
  return units_[static_cast<std::size_t>(x)];
}

std::vector<Arrow> FiniteGroupoid::arrows_from(Unit x) const {
  std::vector<Arrow> out;
  const auto n = static_cast<Arrow>(n_units_);
  switch (form_) {
    case Form::kPair:
      for (Arrow r = 0; r < n; ++r) out.push_back(r * n + x);
      return out;
    case Form::kTransformation:
      for (std::size_t g = 0; g < action_.group_order(); ++g) out.push_back(static_cast<Arrow>(g) * n + x);
      return out;
    case Form::kTable:
      break;
  }
  return by_source_[static_cast<std::size_t>(x)];
}

std::vector<Arrow> FiniteGroupoid::arrows_to(Unit x) const {
  std::vector<Arrow> out;
  const auto n = static_cast<Arrow>(n_units_);
  switch (form_) {
    case Form::kPair:
      for (Arrow s = 0; s < n; ++s) out.push_back(x * n + s);
      return out;
    case Form::kTransformation:
      for (std::size_t g = 0; g < action_.group_order(); ++g) {
        const int from = action_.act[static_cast<std::size_t>(action_.inverse[g])][static_cast<std::size_t>(x)];
        out.push_back(static_cast<Arrow>(g) * n + from);
      }
      return out;
    case Form::kTable:
      break;
  }
  return by_range_[static_cast<std::size_t>(x)];
}

std::optional<Arrow> FiniteGroupoid::arrow_between(Unit from, Unit to) const {
  const auto n = static_cast<Arrow>(n_units_);
  switch (form_) {
    case Form::kPair:
      return to * n + from;
    case Form::kTransformation:
      for (std::size_t g = 0; g < action_.group_order(); ++g) {
        if (action_.act[g][static_cast<std::size_t>(from)] == to) return static_cast<Arrow>(g) * n + from;
      }
      return std::nullopt;
    case Form::kTable:
      break;
  }
  for (Arrow g : by_source_[static_cast<std::size_t>(from)]) {
    if (arrows_[static_cast<std::size_t>(g)].range == to) return g;
  }
  return std::nullopt;
}

std::optional<Arrow> FiniteGroupoid::isotropy_witness() const {
  if (free_) return std::nullopt;
  const auto n = static_cast<Arrow>(n_units_);
  if (form_ == Form::kTransformation) {
    for (std::size_t g = 1; g < action_.group_order(); ++g) {
      for (std::size_t x = 0; x < n_units_; ++x) {
        if (action_.act[g][x] == static_cast<int>(x)) return static_cast<Arrow>(g) * n + static_cast<Arrow>(x);
      }
    }
  }
  for (std::size_t g = 0; g < arrows_.size(); ++g) {
    const auto& a = arrows_[g];
    if (a.source == a.range && units_[static_cast<std::size_t>(a.source)] != static_cast<Arrow>(g)) {
      return static_cast<Arrow>(g);
    }
  }
  return std::nullopt;
}

std::vector<Unit> FiniteGroupoid::orbit_representatives() const {
  if (n_units_ == 0) return {};
  if (form_ == Form::kPair) return {0};
  UnionFind uf(n_units_);
  if (form_ == Form::kTransformation) {
    for (std::size_t g = 0; g < action_.group_order(); ++g)
      for (std::size_t x = 0; x < n_units_; ++x) uf.unite(x, static_cast<std::size_t>(action_.act[g][x]));
  } else {
    for (const auto& a : arrows_) uf.unite(static_cast<std::size_t>(a.source), static_cast<std::size_t>(a.range));
  }
  std::vector<Unit> reps;
  std::vector<char> seen(n_units_, 0);
  for (std::size_t x = 0; x < n_units_; ++x) {
    const auto root = uf.find(x);
    if (!seen[root]) {
      seen[root] = 1;
      reps.push_back(static_cast<Unit>(x));
    }
  }
  return reps;
}

int FiniteGroupoid::group_part(Arrow g) const {
  if (form_ != Form::kTransformation) fail(ErrorCode::kUsage, "group part of a non-transformation groupoid");
  return static_cast<int>(g / static_cast<Arrow>(n_units_));
}

Arrow FiniteGroupoid::transformation_arrow(int group_element, Unit x) const {
  if (form_ != Form::kTransformation) fail(ErrorCode::kUsage, "not a transformation groupoid");
  return static_cast<Arrow>(group_element) * static_cast<Arrow>(n_units_) + x;
}

std::string FiniteGroupoid::describe() const {
  switch (form_) {
    case Form::kPair:
      return "pair groupoid on " + std::to_string(n_units_) + " units";
    case Form::kTransformation:
      return "transformation groupoid of a group of order " + std::to_string(action_.group_order()) + " on " +
             std::to_string(n_units_) + " points";
    case Form::kTable:
      break;
  }
  return "groupoid with " + std::to_string(n_units_) + " units and " + std::to_string(arrows_.size()) + " arrows";
}

// ---------------------------------------------------------------------------
// Subgroupoids

std::uint64_t Subgroupoid::size() const {
  if (!by_classes) return arrows.size();
  std::uint64_t total = 0;
  for (const auto& c : classes) total += static_cast<std::uint64_t>(c.size()) * c.size();
  return total;
}

bool Subgroupoid::contains(const FiniteGroupoid& G, Arrow g) const {
  if (!by_classes) return std::binary_search(arrows.begin(), arrows.end(), g);
  const Unit s = G.source(g);
  const Unit r = G.range(g);
  for (const auto& c : classes) {
    if (std::binary_search(c.begin(), c.end(), s)) return std::binary_search(c.begin(), c.end(), r);
  }
  return false;
}

std::vector<Arrow> Subgroupoid::materialize(const FiniteGroupoid& G) const {
  if (!by_classes) return arrows;
  std::vector<Arrow> out;
  for (const auto& c : classes) {
    for (Unit x : c) {
      for (Unit y : c) {
        auto a = G.arrow_between(x, y);
        if (!a) fail(ErrorCode::kNotClosed, "class contains units with no arrow between them");
        out.push_back(*a);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Unit> Subgroupoid::units(const FiniteGroupoid& G) const {
  std::vector<Unit> out;
  if (by_classes) {
    for (const auto& c : classes) out.insert(out.end(), c.begin(), c.end());
  } else {
    out = endpoints(G, arrows);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<Unit>> Subgroupoid::orbit_classes(const FiniteGroupoid& G) const {
  if (by_classes) {
    auto c = classes;
    sort_classes(c);
    return c;
  }
  std::map<Unit, Unit> parent;
  auto find = [&](Unit x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Arrow g : arrows) {
    for (Unit u : {G.source(g), G.range(g)}) parent.emplace(u, u);
  }
  for (Arrow g : arrows) {
    const Unit a = find(G.source(g));
    const Unit b = find(G.range(g));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<Unit, std::vector<Unit>> groups;
  for (auto& [u, p] : parent) groups[find(u)].push_back(u);
  std::vector<std::vector<Unit>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  sort_classes(out);
  return out;
}

bool same_subgroupoid(const FiniteGroupoid& G, const Subgroupoid& a, const Subgroupoid& b) {
  if (a.by_classes && b.by_classes) {
    auto ca = a.classes;
    auto cb = b.classes;
    sort_classes(ca);
    sort_classes(cb);
    return ca == cb;
  }
  return a.materialize(G) == b.materialize(G);
}

Subgroupoid generate_subgroupoid(const FiniteGroupoid& G, const std::vector<Arrow>& seed) {
  Subgroupoid H;
  for (Arrow g : seed) {
    if (!G.valid_arrow(g)) fail(ErrorCode::kUsage, "seed arrow " + std::to_string(g) + " is not an arrow");
  }
  if (G.is_free()) {
    H.by_classes = true;
    UnionFind uf(G.num_units());
    std::vector<char> touched(G.num_units(), 0);
    for (Arrow g : seed) {
      const auto s = static_cast<std::size_t>(G.source(g));
      const auto r = static_cast<std::size_t>(G.range(g));
      touched[s] = touched[r] = 1;
      uf.unite(s, r);
    }
    std::map<std::size_t, std::vector<Unit>> groups;
    for (std::size_t x = 0; x < G.num_units(); ++x) {
      if (touched[x]) groups[uf.find(x)].push_back(static_cast<Unit>(x));
    }
    for (auto& [root, members] : groups) H.classes.push_back(std::move(members));
    sort_classes(H.classes);
    return H;
  }

  H.by_classes = false;
  std::set<Arrow> in;
  std::map<Unit, std::vector<Arrow>> by_source;
  std::map<Unit, std::vector<Arrow>> by_range;
  std::deque<Arrow> queue;
  auto add = [&](Arrow g) {
    if (!in.insert(g).second) return;
    by_source[G.source(g)].push_back(g);
    by_range[G.range(g)].push_back(g);
    queue.push_back(g);
  };
  for (Arrow g : seed) {
    add(g);
    add(G.inverse(g));
    add(G.unit_arrow(G.source(g)));
    add(G.unit_arrow(G.range(g)));
  }
  while (!queue.empty()) {
    const Arrow a = queue.front();
    queue.pop_front();
    // a . b for b ending at s(a); b . a for b starting at r(a).
    const auto right = by_range[G.source(a)];
    for (Arrow b : right) add(*G.compose(a, b));
    const auto left = by_source[G.range(a)];
    for (Arrow b : left) add(*G.compose(b, a));
  }
  H.arrows.assign(in.begin(), in.end());
  return H;
}

ErrorCode check_closed(const FiniteGroupoid& G, const Subgroupoid& H, std::string* detail) {
  auto report = [&](const std::string& why) {
    if (detail) *detail = why;
    return ErrorCode::kNotClosed;
  };
  if (H.by_classes) {
    if (!G.is_free()) return report("class form requires a free groupoid");
    std::set<Unit> seen;
    for (const auto& c : H.classes) {
      if (c.empty()) continue;
      for (Unit y : c) {
        if (y < 0 || static_cast<std::size_t>(y) >= G.num_units()) return report("unit out of range");
        if (!seen.insert(y).second) return report("unit " + std::to_string(y) + " lies in two classes");
        if (!G.arrow_between(c.front(), y)) {
          return report("no arrow from " + std::to_string(c.front()) + " to " + std::to_string(y));
        }
      }
    }
    return ErrorCode::kOk;
  }
  const auto& A = H.arrows;
  auto has = [&](Arrow g) { return std::binary_search(A.begin(), A.end(), g); };
  std::map<Unit, std::vector<Arrow>> by_range;
  for (Arrow g : A) {
    if (!G.valid_arrow(g)) return report("arrow " + std::to_string(g) + " is not in the groupoid");
    by_range[G.range(g)].push_back(g);
  }
  for (Arrow g : A) {
    if (!has(G.inverse(g))) return report("inverse of arrow " + std::to_string(g) + " missing");
    if (!has(G.unit_arrow(G.source(g)))) return report("unit at the source of " + std::to_string(g) + " missing");
    auto it = by_range.find(G.source(g));
    if (it == by_range.end()) continue;
    for (Arrow h : it->second) {
      if (!has(*G.compose(g, h))) {
        return report("composite of " + std::to_string(g) + " and " + std::to_string(h) + " missing");
      }
    }
  }
  return ErrorCode::kOk;
}

// ---------------------------------------------------------------------------
// Witness verification

std::vector<Unit> endpoints(const FiniteGroupoid& G, const std::vector<Arrow>& K) {
  std::vector<char> in(G.num_units(), 0);
  for (Arrow g : K) {
    in[static_cast<std::size_t>(G.source(g))] = 1;
    in[static_cast<std::size_t>(G.range(g))] = 1;
  }
  std::vector<Unit> out;
  for (std::size_t x = 0; x < in.size(); ++x) {
    if (in[x]) out.push_back(static_cast<Unit>(x));
  }
  return out;
}

std::vector<Arrow> restrict_to(const FiniteGroupoid& G, const std::vector<Arrow>& K, const std::vector<Unit>& U) {
  const auto in = membership(G.num_units(), U);
  std::vector<Arrow> out;
  for (Arrow g : K) {
    if (in[static_cast<std::size_t>(G.source(g))] && in[static_cast<std::size_t>(G.range(g))]) out.push_back(g);
  }
  return out;
}

GroupoidVerification verify_groupoid_dad(const FiniteGroupoid& G, const GroupoidDadWitness& w,
                                         std::uint64_t size_bound) {
  return verify_groupoid_dad(G, w, [size_bound](std::size_t, const Subgroupoid& H) -> std::optional<std::string> {
    if (H.size() <= size_bound) return std::nullopt;
    return "generated subgroupoid has " + std::to_string(H.size()) + " arrows, bound " + std::to_string(size_bound);
  });
}

GroupoidVerification verify_groupoid_dad(const FiniteGroupoid& G, const GroupoidDadWitness& w,
                                         const SmallnessCheck& small) {
  GroupoidVerification rep;
  for (Arrow g : w.K) {
    if (!G.valid_arrow(g)) fail(ErrorCode::kUsage, "K contains a non-arrow " + std::to_string(g));
  }
  std::vector<char> covered(G.num_units(), 0);
  for (const auto& c : w.colors) {
    for (Unit u : c) {
      if (u < 0 || static_cast<std::size_t>(u) >= G.num_units()) fail(ErrorCode::kUsage, "color names a non-unit");
      covered[static_cast<std::size_t>(u)] = 1;
    }
  }
  for (Unit x : endpoints(G, w.K)) {
    if (!covered[static_cast<std::size_t>(x)]) {
      rep.code = ErrorCode::kCoverGap;
      rep.message = "unit " + std::to_string(x) + " of r(K) u s(K) is not covered";
      return rep;
    }
  }
  for (std::size_t i = 0; i < w.colors.size(); ++i) {
    Subgroupoid gen = generate_subgroupoid(G, restrict_to(G, w.K, w.colors[i]));
    rep.generated_sizes.push_back(gen.size());
    const std::string tag = "color " + std::to_string(i) + ": ";
    if (rep.code == ErrorCode::kOk && i < w.generated.size()) {
      std::string why;
      if (check_closed(G, w.generated[i], &why) != ErrorCode::kOk) {
        rep.code = ErrorCode::kNotClosed;
        rep.message = tag + "declared set is not a subgroupoid (" + why + ")";
      }
    }
    if (rep.code == ErrorCode::kOk) {
      if (auto why = small(i, gen)) {
        rep.code = ErrorCode::kSizeExceeded;
        rep.message = tag + *why;
      }
    }
    if (rep.code == ErrorCode::kOk && i < w.generated.size() && !same_subgroupoid(G, gen, w.generated[i])) {
      rep.code = ErrorCode::kWitnessMismatch;
      rep.message = tag + "declared subgroupoid differs from the generated one";
    }
    rep.generated.push_back(std::move(gen));
  }
  rep.accepted = rep.code == ErrorCode::kOk;
  if (rep.accepted) rep.message = "accepted";
  return rep;
}

std::vector<Arrow> arrows_with_group_parts(const FiniteGroupoid& G, const std::vector<int>& group_parts) {
  const FiniteAction* a = G.action();
  if (!a) fail(ErrorCode::kUsage, "not a transformation groupoid");
  std::vector<Arrow> out;
  for (int g : group_parts) {
    if (g < 0 || static_cast<std::size_t>(g) >= a->group_order()) fail(ErrorCode::kUsage, "group element out of range");
    for (std::size_t x = 0; x < G.num_units(); ++x) out.push_back(G.transformation_arrow(g, static_cast<Unit>(x)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> action_broken_orbit_elements(const FiniteAction& action, const std::vector<int>& generators,
                                              const std::vector<Unit>& color) {
  const auto in = membership(action.space_size(), color);
  std::vector<char> found(action.group_order(), 0);
  for (Unit x : color) {
    std::vector<char> seen(action.group_order(), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
      const int g = queue.front();
      queue.pop_front();
      found[static_cast<std::size_t>(g)] = 1;
      for (int e : generators) {
        const int h = action.mult[static_cast<std::size_t>(e)][static_cast<std::size_t>(g)];
        if (seen[static_cast<std::size_t>(h)]) continue;
        if (!in[static_cast<std::size_t>(action.act[static_cast<std::size_t>(h)][static_cast<std::size_t>(x)])]) continue;
        seen[static_cast<std::size_t>(h)] = 1;
        queue.push_back(h);
      }
    }
  }
  std::vector<int> out;
  for (std::size_t g = 0; g < found.size(); ++g) {
    if (found[g]) out.push_back(static_cast<int>(g));
  }
  return out;
}

}  // namespace dadim
