#include "dadim/pou.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dadim/surd.hpp"

namespace dadim {

namespace {

bool contains_sorted(const std::vector<Unit>& v, Unit x) { return std::binary_search(v.begin(), v.end(), x); }

std::vector<Unit> sorted_unique(std::vector<Unit> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Builds x = a/sqrt(p) - b/sqrt(q) together with the bounds that involve
// sqrt 2, sqrt(d+1) and sqrt N over one shared list of radicands.
struct OscillationSurds {
  SurdSum diff;
  SurdSum depth_bound;  // sqrt2 (1 + sqrt(d+1)) / sqrt N
  SurdSum chain_bound;  // 2/N + 2 sqrt(d+1) / sqrt N
};

OscillationSurds oscillation_surds(const Rational& a, const Rational& p, const Rational& b, const Rational& q, int d,
                                   int N) {
  std::vector<Rational> values{p, q, Rational(2), Rational(d + 1), Rational(N)};
  std::vector<Rational> unique;
  std::vector<std::size_t> slot;
  for (const auto& v : values) {
    auto it = std::find(unique.begin(), unique.end(), v);
    if (it == unique.end()) {
      slot.push_back(unique.size());
      unique.push_back(v);
    } else {
      slot.push_back(static_cast<std::size_t>(it - unique.begin()));
    }
  }
  auto R = make_radicands(std::move(unique));
  auto root = [&](std::size_t which) { return SurdSum::root(R, slot[which]); };
  // a/sqrt(p) = (a/p) sqrt(p)
  SurdSum diff = root(0) * Rational(a / p) - root(1) * Rational(b / q);
  const Rational invN = make_rational(1, N);
  SurdSum depth = (root(2) * root(4) + root(2) * root(3) * root(4)) * invN;
  SurdSum chain = SurdSum::constant(R, make_rational(2, N)) + root(3) * root(4) * Rational(2 * invN);
  return {diff, depth, chain};
}

}  // namespace

std::vector<Arrow> symmetric_hull(const FiniteGroupoid& G, const std::vector<Arrow>& K) {
  std::vector<Arrow> out;
  out.reserve(3 * K.size());
  for (Arrow g : K) {
    if (!G.valid_arrow(g)) fail(ErrorCode::kUsage, "K contains a non-arrow " + std::to_string(g));
    out.push_back(g);
    out.push_back(G.inverse(g));
    out.push_back(G.unit_arrow(G.source(g)));
    out.push_back(G.unit_arrow(G.range(g)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Arrow> compose_sets(const FiniteGroupoid& G, const std::vector<Arrow>& A, const std::vector<Arrow>& B) {
  std::map<Unit, std::vector<Arrow>> by_range;
  for (Arrow b : B) by_range[G.range(b)].push_back(b);
  std::vector<Arrow> out;
  for (Arrow a : A) {
    auto it = by_range.find(G.source(a));
    if (it == by_range.end()) continue;
    for (Arrow b : it->second) out.push_back(*G.compose(a, b));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Arrow> arrow_power(const FiniteGroupoid& G, const std::vector<Arrow>& K, int n) {
  if (n < 1) fail(ErrorCode::kUsage, "arrow power needs n >= 1");
  std::vector<Arrow> P = K;
  std::sort(P.begin(), P.end());
  P.erase(std::unique(P.begin(), P.end()), P.end());
  for (int i = 1; i < n; ++i) P = compose_sets(G, P, K);
  return P;
}

std::vector<Unit> partial_orbit_image(const FiniteGroupoid& G, const std::vector<Arrow>& K, const std::vector<Unit>& U) {
  const auto u = sorted_unique(U);
  std::vector<Unit> out;
  for (Arrow g : K) {
    if (contains_sorted(u, G.range(g))) out.push_back(G.source(g));
  }
  return sorted_unique(std::move(out));
}

// ---------------------------------------------------------------------------

EnlargedCover enlarge_cover(const FiniteGroupoid& G, const std::vector<Arrow>& K,
                            const std::vector<std::vector<Unit>>& V, std::uint64_t size_bound) {
  EnlargedCover out;
  out.K = symmetric_hull(G, K);
  out.K3 = arrow_power(G, out.K, 3);
  for (const auto& v : V) out.input.push_back(sorted_unique(v));
  GroupoidDadWitness w3{out.K3, out.input, {}};
  out.k3_report = verify_groupoid_dad(G, w3, size_bound);
  if (!out.k3_report.accepted) {
    fail(ErrorCode::kWitnessInsufficient, "colors are not a witness for K^3: " + out.k3_report.message);
  }
  const auto ends = endpoints(G, out.K);
  for (const auto& v : out.input) {
    auto img = partial_orbit_image(G, out.K, v);
    std::vector<Unit> u;
    std::set_intersection(img.begin(), img.end(), ends.begin(), ends.end(), std::back_inserter(u));
    out.colors.push_back(std::move(u));
  }
  // Every partial orbit s(r^-1(x) n K) sits inside one enlarged color.
  std::map<Unit, std::vector<Unit>> orbit;
  for (Arrow g : out.K) orbit[G.range(g)].push_back(G.source(g));
  for (Unit x : ends) {
    auto p = sorted_unique(orbit[x]);
    bool inside = false;
    for (const auto& u : out.colors) {
      inside = inside || std::includes(u.begin(), u.end(), p.begin(), p.end());
    }
    if (!inside) {
      fail(ErrorCode::kWitnessInsufficient, "partial orbit of unit " + std::to_string(x) + " is split across colors");
    }
  }
  for (std::size_t i = 0; i < out.colors.size(); ++i) {
    Subgroupoid H = generate_subgroupoid(G, restrict_to(G, out.K, out.colors[i]));
    const auto Gi = out.k3_report.generated[i].materialize(G);
    const auto sandwich = compose_sets(G, compose_sets(G, out.K, Gi), out.K);
    out.generated_sizes.push_back(H.size());
    out.sandwich_sizes.push_back(sandwich.size());
    for (Arrow h : H.materialize(G)) {
      if (!std::binary_search(sandwich.begin(), sandwich.end(), h)) {
        fail(ErrorCode::kWitnessInsufficient, "color " + std::to_string(i) + " generates arrow " + std::to_string(h) +
                                                  " outside K G_i K");
      }
    }
  }
  return out;
}

TowerSet build_tower(const FiniteGroupoid& G, const std::vector<Arrow>& K, const std::vector<std::vector<Unit>>& colors,
                     int N, std::uint64_t size_bound) {
  if (N < 0) fail(ErrorCode::kUsage, "tower depth must be nonnegative");
  TowerSet out;
  out.K = symmetric_hull(G, K);
  out.N = N;
  const auto ends = endpoints(G, out.K);
  {
    std::vector<Unit> bottom;
    for (const auto& c : colors) bottom.insert(bottom.end(), c.begin(), c.end());
    bottom = sorted_unique(std::move(bottom));
    for (Unit x : ends) {
      if (!contains_sorted(bottom, x)) {
        fail(ErrorCode::kTowerInvalid, "bottom levels miss unit " + std::to_string(x) + " of r(K) u s(K)");
      }
    }
  }
  for (std::size_t i = 0; i < colors.size(); ++i) {
    NestedColorTower t;
    t.color = i;
    t.levels.push_back(sorted_unique(colors[i]));
    for (int n = 0; n <= N; ++n) {
      const auto& cur = t.levels.back();
      auto grown = partial_orbit_image(G, out.K, cur);
      grown.insert(grown.end(), cur.begin(), cur.end());
      t.levels.push_back(sorted_unique(std::move(grown)));
    }
    for (std::size_t n = 0; n + 1 < t.levels.size(); ++n) {
      const auto& a = t.levels[n];
      const auto& b = t.levels[n + 1];
      const auto pushed = partial_orbit_image(G, out.K, a);
      if (!std::includes(b.begin(), b.end(), a.begin(), a.end()) ||
          !std::includes(b.begin(), b.end(), pushed.begin(), pushed.end())) {
        fail(ErrorCode::kTowerInvalid, "tower of color " + std::to_string(i) + " fails nesting at level " + std::to_string(n));
      }
    }
    Subgroupoid H = generate_subgroupoid(G, restrict_to(G, out.K, t.levels.back()));
    t.generated_size = H.size();
    if (t.generated_size > size_bound) {
      fail(ErrorCode::kPropagationEscapesColor, "top level of color " + std::to_string(i) + " generates " +
                                                    std::to_string(t.generated_size) + " arrows, bound " +
                                                    std::to_string(size_bound));
    }
    out.towers.push_back(std::move(t));
  }
  return out;
}

PartitionOfUnity build_pou(const TowerSet& towers, std::size_t num_units) {
  const int N = towers.N;
  if (N < 1) fail(ErrorCode::kTowerInvalid, "partition of unity needs N >= 1");
  PartitionOfUnity pou;
  pou.N = N;
  pou.num_units = num_units;
  for (const auto& t : towers.towers) {
    if (t.levels.size() != static_cast<std::size_t>(N + 2)) fail(ErrorCode::kTowerInvalid, "tower has the wrong number of levels");
    std::vector<int> count(num_units, 0);
    for (int n = 1; n <= N; ++n) {
      for (Unit x : t.levels[static_cast<std::size_t>(n - 1)]) {
        if (x < 0 || static_cast<std::size_t>(x) >= num_units) fail(ErrorCode::kTowerInvalid, "tower names a non-unit");
        ++count[static_cast<std::size_t>(x)];
      }
    }
    std::vector<Rational> psi(num_units);
    for (std::size_t x = 0; x < num_units; ++x) psi[x] = make_rational(count[x], N);
    pou.psi.push_back(std::move(psi));
    pou.supports.push_back(t.levels.back());
  }
  pou.norm_sq.assign(num_units, Rational(0));
  for (std::size_t x = 0; x < num_units; ++x) {
    Rational s = 0;
    for (const auto& psi : pou.psi) s += psi[x] * psi[x];
    pou.norm_sq[x] = std::max(s, Rational(1));
  }
  return pou;
}

double PartitionOfUnity::phi_approx(std::size_t i, Unit x) const {
  const auto u = static_cast<std::size_t>(x);
  return psi[i][u].get_d() / std::sqrt(norm_sq[u].get_d());
}

int default_depth(int d, const Rational& epsilon) {
  if (epsilon <= 0) fail(ErrorCode::kUsage, "epsilon must be positive");
  auto R = make_radicands({Rational(d + 1)});
  // N eps^2 - 2(d+2) - 4 sqrt(d+1) > 0
  auto ok = [&](long N) {
    SurdSum s = SurdSum::constant(R, Rational(N * epsilon * epsilon - 2 * (d + 2))) - SurdSum::root(R, 0) * Rational(4);
    return s.sign() > 0;
  };
  const double c = 2.0 * std::pow(1.0 + std::sqrt(d + 1.0), 2) / (epsilon.get_d() * epsilon.get_d());
  long N = std::max(3L, static_cast<long>(std::floor(c)) - 2);
  while (N > 3 && ok(N - 1)) --N;
  while (!ok(N)) ++N;
  return static_cast<int>(N);
}

PouReport verify_pou(const FiniteGroupoid& G, const std::vector<Arrow>& K, const PartitionOfUnity& pou,
                     const Rational& epsilon) {
  PouReport rep;
  const auto Ks = symmetric_hull(G, K);
  const auto ends = endpoints(G, Ks);
  const int d = static_cast<int>(pou.colors()) - 1;
  const int N = pou.N;
  if (pou.num_units != G.num_units()) fail(ErrorCode::kUsage, "partition of unity was built for another groupoid");

  for (std::size_t i = 0; i < pou.colors(); ++i) {
    for (std::size_t x = 0; x < pou.num_units; ++x) {
      if (pou.psi[i][x] != 0 && !contains_sorted(pou.supports[i], static_cast<Unit>(x))) ++rep.support_violations;
    }
  }
  rep.normalization_defect = 0;
  rep.psi_sum_ok = true;
  for (Unit x : ends) {
    const auto u = static_cast<std::size_t>(x);
    Rational sq = 0, sum = 0;
    for (const auto& psi : pou.psi) {
      sq += psi[u] * psi[u];
      sum += psi[u];
    }
    rep.normalization_defect = std::max(rep.normalization_defect, abs(Rational(sq / pou.norm_sq[u] - 1)));
    rep.psi_sum_ok = rep.psi_sum_ok && sum >= 1;
  }

  rep.below_epsilon = rep.below_depth_bound = rep.below_chain_bound = rep.psi_steps_ok = true;
  rep.max_psi_step = 0;
  const Rational step_bound = make_rational(2, N);
  for (Arrow g : Ks) {
    const auto s = static_cast<std::size_t>(G.source(g));
    const auto r = static_cast<std::size_t>(G.range(g));
    for (std::size_t i = 0; i < pou.colors(); ++i) {
      const Rational step = abs(Rational(pou.psi[i][r] - pou.psi[i][s]));
      rep.max_psi_step = std::max(rep.max_psi_step, step);
      rep.psi_steps_ok = rep.psi_steps_ok && step <= step_bound;

      const double osc = std::fabs(pou.phi_approx(i, static_cast<Unit>(s)) - pou.phi_approx(i, static_cast<Unit>(r)));
      if (rep.worst_arrow < 0 || osc > rep.max_oscillation) {
        rep.max_oscillation = osc;
        rep.worst_arrow = g;
        rep.worst_color = i;
      }
      if (pou.psi[i][s] == pou.psi[i][r] && pou.norm_sq[s] == pou.norm_sq[r]) continue;  // exactly zero
      const auto o = oscillation_surds(pou.psi[i][s], pou.norm_sq[s], pou.psi[i][r], pou.norm_sq[r], d, N);
      auto R = o.diff.radicands();
      const SurdSum eps = SurdSum::constant(R, epsilon);
      rep.below_epsilon = rep.below_epsilon && (eps - o.diff).sign() > 0 && (eps + o.diff).sign() > 0;
      rep.below_depth_bound =
          rep.below_depth_bound && (o.depth_bound - o.diff).sign() > 0 && (o.depth_bound + o.diff).sign() > 0;
      rep.below_chain_bound =
          rep.below_chain_bound && (o.chain_bound - o.diff).sign() >= 0 && (o.chain_bound + o.diff).sign() >= 0;
    }
  }
  if (rep.support_violations > 0) {
    rep.code = ErrorCode::kSupportViolation;
    rep.message = std::to_string(rep.support_violations) + " values are nonzero outside their color";
  } else if (rep.normalization_defect != 0) {
    rep.code = ErrorCode::kBoundViolated;
    rep.message = "sum of squares differs from 1 by " + to_string(rep.normalization_defect);
  } else if (!rep.below_epsilon) {
    rep.code = ErrorCode::kBoundViolated;
    rep.message = "oscillation reaches epsilon = " + to_string(epsilon);
  } else {
    rep.accepted = true;
    rep.message = "accepted";
  }
  return rep;
}

}  // namespace dadim
