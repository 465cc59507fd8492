#include "dadim/nerve.hpp"

#include <algorithm>
#include <set>

namespace dadim {

namespace {

// Weights of mu on `face`, heaviest first, ties by vertex id; zero-weight
// vertices of the face follow in id order.
std::vector<std::pair<Vertex, Rational>> ranked_on(const SimplicialPoint& mu, const std::vector<Vertex>& face) {
  std::vector<std::pair<Vertex, Rational>> out;
  out.reserve(face.size());
  for (Vertex v : face) out.emplace_back(v, mu.weight(v));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

struct BestFace {
  Rational mass = -1;
  std::vector<Vertex> face;  // sorted
};

// Heaviest face with exactly k vertices (faces = subsets of maximal faces).
BestFace best_face(const SimplicialPoint& mu, const SimplicialComplex& C, std::size_t k) {
  BestFace best;
  for (const auto& F : C.maximal_faces()) {
    if (F.size() < k) continue;
    auto ranked = ranked_on(mu, F);
    Rational mass = 0;
    std::vector<Vertex> face;
    for (std::size_t j = 0; j < k; ++j) {
      mass += ranked[j].second;
      face.push_back(ranked[j].first);
    }
    std::sort(face.begin(), face.end());
    if (mass > best.mass || (mass == best.mass && face < best.face)) {
      best.mass = mass;
      best.face = std::move(face);
    }
  }
  return best;
}

std::vector<int> symmetrize(const FiniteAction& a, const std::vector<int>& E) {
  std::set<int> s{0};
  for (int g : E) {
    if (g < 0 || static_cast<std::size_t>(g) >= a.group_order()) fail(ErrorCode::kUsage, "group element out of range");
    s.insert(g);
    s.insert(a.inverse[static_cast<std::size_t>(g)]);
  }
  return {s.begin(), s.end()};
}

// Index of (h.x, h.g) for the pair (x, g) stored as g*|X| + x.
std::size_t act_on_pair(const FiniteAction& a, int h, std::size_t p) {
  const std::size_t m = a.space_size();
  const std::size_t x = p % m, g = p / m;
  const auto hu = static_cast<std::size_t>(h);
  return static_cast<std::size_t>(a.mult[hu][g]) * m + static_cast<std::size_t>(a.act[hu][x]);
}

std::size_t right_mult(const FiniteAction& a, std::size_t p, int h) {
  const std::size_t m = a.space_size();
  const std::size_t x = p % m, g = p / m;
  return static_cast<std::size_t>(a.mult[g][static_cast<std::size_t>(h)]) * m + x;
}

std::vector<char> image_of(const FiniteAction& a, int h, const std::vector<char>& set) {
  std::vector<char> out(set.size(), 0);
  for (std::size_t p = 0; p < set.size(); ++p) {
    if (set[p]) out[act_on_pair(a, h, p)] = 1;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Points and complexes

SimplicialPoint::SimplicialPoint(std::map<Vertex, Rational> weights) {
  Rational total = 0;
  for (auto& [v, t] : weights) {
    if (t < 0) fail(ErrorCode::kUsage, "negative simplicial weight on vertex " + std::to_string(v));
    total += t;
    if (t != 0) weights_.emplace(v, t);
  }
  if (total != 1) fail(ErrorCode::kUsage, "simplicial weights sum to " + to_string(total) + ", not 1");
}

SimplicialPoint SimplicialPoint::vertex(Vertex v) { return SimplicialPoint({{v, Rational(1)}}); }

Rational SimplicialPoint::weight(Vertex v) const {
  auto it = weights_.find(v);
  return it == weights_.end() ? Rational(0) : it->second;
}

std::vector<Vertex> SimplicialPoint::support() const {
  std::vector<Vertex> out;
  for (const auto& [v, t] : weights_) out.push_back(v);
  return out;
}

Rational l1_distance(const SimplicialPoint& a, const SimplicialPoint& b) {
  Rational d = 0;
  auto i = a.weights().begin();
  auto j = b.weights().begin();
  while (i != a.weights().end() || j != b.weights().end()) {
    if (j == b.weights().end() || (i != a.weights().end() && i->first < j->first)) {
      d += i->second;
      ++i;
    } else if (i == a.weights().end() || j->first < i->first) {
      d += j->second;
      ++j;
    } else {
      d += abs(Rational(i->second - j->second));
      ++i;
      ++j;
    }
  }
  return d;
}

SimplicialComplex::SimplicialComplex(std::vector<std::vector<Vertex>> faces) {
  for (auto& f : faces) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
  }
  std::sort(faces.begin(), faces.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  for (auto& f : faces) {
    if (f.empty()) continue;
    const bool covered = std::any_of(faces_.begin(), faces_.end(), [&](const auto& g) {
      return std::includes(g.begin(), g.end(), f.begin(), f.end());
    });
    if (!covered) faces_.push_back(std::move(f));
  }
  std::sort(faces_.begin(), faces_.end());
  std::set<Vertex> vs;
  for (const auto& f : faces_) vs.insert(f.begin(), f.end());
  vertices_.assign(vs.begin(), vs.end());
}

SimplicialComplex SimplicialComplex::simplex(std::size_t n) {
  std::vector<Vertex> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<Vertex>(i);
  return SimplicialComplex({f});
}

int SimplicialComplex::dimension() const {
  std::size_t m = 0;
  for (const auto& f : faces_) m = std::max(m, f.size());
  return static_cast<int>(m) - 1;
}

bool SimplicialComplex::is_face(const std::vector<Vertex>& sorted_vertices) const {
  return std::any_of(faces_.begin(), faces_.end(), [&](const auto& f) {
    return std::includes(f.begin(), f.end(), sorted_vertices.begin(), sorted_vertices.end());
  });
}

bool SimplicialComplex::contains(const SimplicialPoint& mu) const { return is_face(mu.support()); }

std::vector<std::vector<Vertex>> SimplicialComplex::faces_of_dimension(int i) const {
  std::set<std::vector<Vertex>> out;
  if (i < 0) return {};
  const auto k = static_cast<std::size_t>(i + 1);
  for (const auto& f : faces_) {
    if (f.size() < k) continue;
    std::vector<char> pick(f.size(), 0);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k), 1);
    do {
      std::vector<Vertex> face;
      for (std::size_t j = 0; j < f.size(); ++j)
        if (pick[j]) face.push_back(f[j]);
      out.insert(std::move(face));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Skeleton distances and the skeleton cover

Rational distance_to_face(const SimplicialPoint& mu, const std::vector<Vertex>& face) {
  Rational mass = 0;
  for (Vertex v : face) mass += mu.weight(v);
  return 2 * (1 - mass);
}

Rational distance_to_skeleton(const SimplicialPoint& mu, const SimplicialComplex& C, int i) {
  if (i < 0 || C.maximal_faces().empty()) fail(ErrorCode::kEmptySkeleton, "skeleton of level " + std::to_string(i) + " is empty");
  Rational best = 0;
  for (const auto& F : C.maximal_faces()) {
    auto ranked = ranked_on(mu, F);
    Rational mass = 0;
    for (std::size_t j = 0; j < ranked.size() && j < static_cast<std::size_t>(i + 1); ++j) mass += ranked[j].second;
    best = std::max(best, mass);
  }
  return 2 * (1 - best);
}

Rational nice_inner_radius(int i) { return Rational(1, 3) * pow10_neg(i); }
Rational nice_outer_radius(int i) { return Rational(5, 2) * pow10_neg(i); }

bool nice_cover_membership(const SimplicialPoint& mu, const SimplicialComplex& C, int i,
                           const std::vector<Vertex>& face) {
  std::vector<Vertex> f = face;
  std::sort(f.begin(), f.end());
  if (i < 0 || f.size() != static_cast<std::size_t>(i + 1) || !C.is_face(f)) return false;
  if (!(distance_to_face(mu, f) < nice_inner_radius(i))) return false;
  return i == 0 || distance_to_skeleton(mu, C, i - 1) > nice_outer_radius(i);
}

std::optional<std::vector<Vertex>> nice_cover_piece(const SimplicialPoint& mu, const SimplicialComplex& C, int i,
                                                    const Rational& relax) {
  if (i < 0 || i > C.dimension()) return std::nullopt;
  // Pieces at one level are disjoint, so only the heaviest i-face can qualify.
  BestFace best = best_face(mu, C, static_cast<std::size_t>(i + 1));
  if (best.mass < 0) return std::nullopt;
  if (!(2 * (1 - best.mass) < nice_inner_radius(i) + relax)) return std::nullopt;
  if (i > 0 && !(distance_to_skeleton(mu, C, i - 1) > nice_outer_radius(i) - relax)) return std::nullopt;
  return best.face;
}

NiceAssignment nice_cover_assign(const SimplicialPoint& mu, const SimplicialComplex& C) {
  if (!C.contains(mu)) fail(ErrorCode::kNotInComplex, "point is not supported on a face of the complex");
  for (int i = 0; i <= C.dimension(); ++i) {
    if (auto face = nice_cover_piece(mu, C, i)) return {i, *face};
  }
  fail(ErrorCode::kNotInComplex, "point lies in no piece of the skeleton cover");
}

// ---------------------------------------------------------------------------
// Finite support

Perturbation perturb_to_finite_support(const SampledMap& f, const Rational& delta,
                                       const std::optional<std::vector<Vertex>>& allowed) {
  if (delta <= 0) fail(ErrorCode::kUsage, "perturbation budget must be positive");
  const Rational half = delta / 2;
  std::set<Vertex> allowed_set;
  if (allowed) allowed_set.insert(allowed->begin(), allowed->end());
  std::set<Vertex> S;
  for (const auto& [x, mu] : f) {
    std::vector<std::pair<Vertex, Rational>> ranked;
    Rational outside = 0;
    for (const auto& [v, t] : mu.weights()) {
      if (allowed && !allowed_set.count(v)) {
        outside += t;
      } else {
        ranked.emplace_back(v, t);
      }
    }
    if (outside >= half) {
      fail(ErrorCode::kNoFiniteS, "point " + std::to_string(x) + " has mass " + to_string(outside) +
                                      " >= delta/2 outside the allowed vertices");
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    Rational tail = 1;
    for (const auto& [v, t] : ranked) {
      if (tail < half) break;
      S.insert(v);
      tail -= t;
    }
  }
  Perturbation out;
  out.S.assign(S.begin(), S.end());
  out.max_perturbation = 0;
  for (const auto& [x, mu] : f) {
    Rational T = 0;
    for (const auto& [v, t] : mu.weights())
      if (S.count(v)) T += t;
    std::map<Vertex, Rational> w;
    for (const auto& [v, t] : mu.weights())
      if (S.count(v)) w.emplace(v, t / T);
    out.map.emplace(x, SimplicialPoint(std::move(w)));
    out.max_perturbation = std::max(out.max_perturbation, Rational(2 * (1 - T)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equivariance

SimplicialPoint ComplexAction::act(int g, const SimplicialPoint& mu) const {
  const auto& row = vertex_act.at(static_cast<std::size_t>(g));
  std::map<Vertex, Rational> w;
  for (const auto& [v, t] : mu.weights()) {
    if (v < 0 || static_cast<std::size_t>(v) >= row.size()) fail(ErrorCode::kUsage, "vertex " + std::to_string(v) + " has no action");
    w[row[static_cast<std::size_t>(v)]] += t;
  }
  return SimplicialPoint(std::move(w));
}

EquivarianceReport check_equivariance(const SampledMap& f, const ComplexAction& action, const std::vector<int>& E,
                                      const Rational& epsilon) {
  EquivarianceReport rep;
  rep.max_defect = 0;
  for (int g : E) {
    if (g < 0 || static_cast<std::size_t>(g) >= action.space.group_order()) fail(ErrorCode::kUsage, "group element out of range");
    Rational worst = 0;
    for (const auto& [x, mu] : f) {
      if (x < 0 || static_cast<std::size_t>(x) >= action.space.space_size()) fail(ErrorCode::kUsage, "sample point outside the space");
      const long gx = action.space.act[static_cast<std::size_t>(g)][static_cast<std::size_t>(x)];
      auto it = f.find(gx);
      if (it == f.end()) fail(ErrorCode::kMissingSample, "f is not sampled at " + std::to_string(gx));
      const Rational d = l1_distance(it->second, action.act(g, mu));
      if (d > worst) worst = d;
      if (rep.worst_point < 0 || d > rep.max_defect) {
        rep.max_defect = d;
        rep.worst_point = x;
        rep.worst_generator = g;
      }
    }
    rep.per_generator.push_back(worst);
  }
  rep.accepted = rep.max_defect < epsilon;
  return rep;
}

Rational equivariance_slack(const EquivarianceReport& report, const Rational& epsilon) {
  Rational slack = 1;
  for (const auto& d : report.per_generator) slack = std::min(slack, Rational((epsilon - d) / 2));
  return slack;
}

// ---------------------------------------------------------------------------
// Covers of X x Gamma

EquivariantCover invariant_cover(const FiniteAction& action, const std::vector<std::vector<long>>& subsets) {
  EquivariantCover U;
  U.space_size = action.space_size();
  U.group_order = action.group_order();
  const std::size_t m = U.space_size;
  for (const auto& A : subsets) {
    std::vector<char> in(m, 0);
    std::string label = "{";
    for (long a : A) {
      if (a < 0 || static_cast<std::size_t>(a) >= m) fail(ErrorCode::kUsage, "subset point outside the space");
      in[static_cast<std::size_t>(a)] = 1;
    }
    std::vector<char> set(m * U.group_order, 0);
    for (std::size_t g = 0; g < U.group_order; ++g) {
      const auto& inv = action.act[static_cast<std::size_t>(action.inverse[g])];
      for (std::size_t x = 0; x < m; ++x) set[g * m + x] = in[static_cast<std::size_t>(inv[x])];
    }
    U.sets.push_back(std::move(set));
    U.labels.push_back("invariant set of " + std::to_string(A.size()) + " points");
  }
  return U;
}

CoverConditions check_cover_conditions(const EquivariantCover& U, const FiniteAction& action,
                                       const std::vector<int>& E, int d) {
  CoverConditions c;
  const std::size_t N = U.space_size * U.group_order;
  if (U.space_size != action.space_size() || U.group_order != action.group_order()) {
    fail(ErrorCode::kUsage, "cover and action disagree on sizes");
  }
  for (const auto& s : U.sets) {
    if (s.size() != N) fail(ErrorCode::kUsage, "cover set has the wrong size");
  }
  auto note = [&](const std::string& why) {
    if (c.failure.empty()) c.failure = why;
  };
  std::map<std::vector<char>, std::size_t> index;
  for (std::size_t k = 0; k < U.sets.size(); ++k) index.emplace(U.sets[k], k);

  c.equivariant = c.A = c.B = true;
  std::vector<std::vector<std::size_t>> image(U.sets.size(), std::vector<std::size_t>(U.group_order, 0));
  for (std::size_t k = 0; k < U.sets.size(); ++k) {
    std::vector<int> stab;
    for (std::size_t h = 0; h < U.group_order; ++h) {
      auto img = image_of(action, static_cast<int>(h), U.sets[k]);
      auto it = index.find(img);
      if (it == index.end()) {
        if (c.equivariant) note("equivariance: the translate of set " + std::to_string(k) + " by " + std::to_string(h) + " is not in the cover");
        c.equivariant = false;
      } else {
        image[k][h] = it->second;
      }
      if (img == U.sets[k]) {
        stab.push_back(static_cast<int>(h));
        continue;
      }
      for (std::size_t p = 0; p < N; ++p) {
        if (img[p] && U.sets[k][p]) {
          if (c.A) note("A: set " + std::to_string(k) + " meets its translate by " + std::to_string(h) + " without being fixed");
          c.A = false;
          break;
        }
      }
    }
    // Stabilizers of a finite group are finite; check they are subgroups.
    std::set<int> st(stab.begin(), stab.end());
    for (int a : stab)
      for (int b : stab)
        if (!st.count(action.mult[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])) {
          if (c.B) note("B: stabilizer of set " + std::to_string(k) + " is not a subgroup");
          c.B = false;
        }
    c.stabilizer_orders.push_back(stab.size());
  }
  c.multiplicity = 0;
  for (std::size_t p = 0; p < N; ++p) {
    std::size_t count = 0;
    for (const auto& s : U.sets) count += s[p] ? 1 : 0;
    c.multiplicity = std::max(c.multiplicity, count);
  }
  c.C = c.multiplicity <= static_cast<std::size_t>(d + 1);
  if (!c.C) note("C: multiplicity " + std::to_string(c.multiplicity) + " exceeds d + 1 = " + std::to_string(d + 1));
  {
    std::vector<char> seen(U.sets.size(), 0);
    for (std::size_t k = 0; k < U.sets.size(); ++k) {
      if (seen[k]) continue;
      ++c.orbit_count;
      for (std::size_t h = 0; h < U.group_order && c.equivariant; ++h) seen[image[k][h]] = 1;
      seen[k] = 1;
    }
    c.D = true;
  }
  c.E = true;
  for (std::size_t p = 0; p < N && c.E; ++p) {
    bool found = false;
    for (const auto& s : U.sets) {
      bool all = true;
      for (int h : E) all = all && s[right_mult(action, p, h)];
      if (all) {
        found = true;
        break;
      }
    }
    if (!found) {
      c.E = false;
      note("E: no set contains {x} x gE for x = " + std::to_string(p % U.space_size) + ", g = " +
           std::to_string(p / U.space_size));
    }
  }
  return c;
}

PulledBackCover cover_from_map(const SampledMap& f, const SimplicialComplex& C, const ComplexAction& action,
                               const std::vector<int>& E) {
  const FiniteAction& a = action.space;
  const std::size_t m = a.space_size(), G = a.group_order();
  const int d = C.dimension();
  if (d < 0) fail(ErrorCode::kEmptySkeleton, "empty complex");
  PulledBackCover out;
  out.relax = Rational(1, 6) * pow10_neg(d);
  std::map<std::pair<int, std::vector<Vertex>>, std::vector<char>> pieces;
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t x = 0; x < m; ++x) {
      const long y = a.act[static_cast<std::size_t>(a.inverse[g])][x];
      auto it = f.find(y);
      if (it == f.end()) fail(ErrorCode::kMissingSample, "f is not sampled at " + std::to_string(y));
      const SimplicialPoint phi = action.act(static_cast<int>(g), it->second);
      if (!C.contains(phi)) fail(ErrorCode::kNotInComplex, "translate of f leaves the complex");
      for (int i = 0; i <= d; ++i) {
        if (auto face = nice_cover_piece(phi, C, i, out.relax)) {
          auto& set = pieces[{i, *face}];
          if (set.empty()) set.assign(m * G, 0);
          set[g * m + x] = 1;
        }
      }
    }
  }
  out.cover.space_size = m;
  out.cover.group_order = G;
  for (auto& [key, set] : pieces) {
    std::string label = "level " + std::to_string(key.first) + " simplex {";
    for (std::size_t j = 0; j < key.second.size(); ++j) label += (j ? "," : "") + std::to_string(key.second[j]);
    out.cover.labels.push_back(label + "}");
    out.cover.sets.push_back(std::move(set));
    out.pieces.push_back(key);
  }
  out.conditions = check_cover_conditions(out.cover, a, E, d);
  if (!out.conditions.ok()) fail(ErrorCode::kConditionViolated, out.conditions.failure);
  return out;
}

NerveMap map_from_cover(const EquivariantCover& U, const FiniteAction& action, const std::vector<int>& E, int n) {
  if (n < 1) fail(ErrorCode::kUsage, "telescoping depth must be at least 1");
  const std::size_t m = U.space_size, G = U.group_order, N = m * G;
  if (m != action.space_size() || G != action.group_order()) fail(ErrorCode::kUsage, "cover and action disagree on sizes");
  const auto Es = symmetrize(action, E);
  const std::size_t k = U.sets.size();

  NerveMap out;
  out.depth = n;
  // Permutation of the cover sets induced by the group.
  std::map<std::vector<char>, std::size_t> index;
  for (std::size_t j = 0; j < k; ++j) index.emplace(U.sets[j], j);
  out.action.space = action;
  out.action.vertex_act.assign(G, std::vector<Vertex>(k, 0));
  for (std::size_t h = 0; h < G; ++h) {
    for (std::size_t j = 0; j < k; ++j) {
      auto it = index.find(image_of(action, static_cast<int>(h), U.sets[j]));
      if (it == index.end()) fail(ErrorCode::kConditionViolated, "cover is not equivariant");
      out.action.vertex_act[h][j] = static_cast<Vertex>(it->second);
    }
  }

  std::vector<std::vector<int>> psi(k, std::vector<int>(N, 0));
  for (std::size_t j = 0; j < k; ++j) {
    // interiors[t] = U^(t)
    std::vector<std::vector<char>> interior{U.sets[j]};
    for (int t = 1; t <= n; ++t) {
      const auto& prev = interior.back();
      std::vector<char> next(N, 0);
      for (std::size_t p = 0; p < N; ++p) {
        bool all = prev[p];
        for (std::size_t q = 0; all && q < Es.size(); ++q) all = prev[right_mult(action, p, Es[q])];
        next[p] = all;
      }
      interior.push_back(std::move(next));
    }
    // V^(n) = U^(n), V^(t-1) = V^(t) E.
    std::vector<char> V = interior[static_cast<std::size_t>(n)];
    for (int t = n; t >= 1; --t) {
      for (std::size_t p = 0; p < N; ++p) psi[j][p] += V[p];
      std::vector<char> grown(N, 0);
      for (std::size_t p = 0; p < N; ++p) {
        if (!V[p]) continue;
        for (int h : Es) grown[right_mult(action, p, h)] = 1;
      }
      for (std::size_t p = 0; p < N; ++p) {
        if (grown[p] && !interior[static_cast<std::size_t>(t - 1)][p]) {
          fail(ErrorCode::kConditionViolated, "interior nesting failed; cover sets are inconsistent");
        }
      }
      V = std::move(grown);
    }
  }
  for (std::size_t p = 0; p < N; ++p) {
    bool covered = false;
    for (std::size_t j = 0; j < k && !covered; ++j) covered = psi[j][p] == n;
    if (!covered) {
      fail(ErrorCode::kDepthInsufficient, "E^" + std::to_string(n) + "-interiors miss x = " + std::to_string(p % m) +
                                              ", g = " + std::to_string(p / m));
    }
  }
  out.phi.assign(k, std::vector<Rational>(N));
  std::set<std::vector<Vertex>> faces;
  for (std::size_t p = 0; p < N; ++p) {
    long total = 0;
    std::vector<Vertex> face;
    for (std::size_t j = 0; j < k; ++j) {
      total += psi[j][p];
      if (U.sets[j][p]) face.push_back(static_cast<Vertex>(j));
    }
    out.multiplicity = std::max(out.multiplicity, face.size());
    faces.insert(face);
    for (std::size_t j = 0; j < k; ++j) out.phi[j][p] = make_rational(psi[j][p], total);
  }
  out.nerve = SimplicialComplex({faces.begin(), faces.end()});
  for (std::size_t x = 0; x < m; ++x) {
    std::map<Vertex, Rational> w;
    for (std::size_t j = 0; j < k; ++j) w.emplace(static_cast<Vertex>(j), out.phi[j][x]);  // g = e
    out.f.emplace(static_cast<long>(x), SimplicialPoint(std::move(w)));
  }
  out.defect = check_equivariance(out.f, out.action, E, Rational(1)).max_defect;
  const long dd = static_cast<long>(out.multiplicity) - 1;
  out.bound = make_rational((2 * dd + 2) * (4 * dd + 6), n);
  return out;
}

BlrWitness dad_witness_from_blr(const SampledMap& f, const SimplicialComplex& C, const ComplexAction& action,
                                const std::vector<int>& E) {
  const FiniteAction& a = action.space;
  const int d = C.dimension();
  if (d < 0) fail(ErrorCode::kEmptySkeleton, "empty complex");
  for (std::size_t x = 0; x < a.space_size(); ++x) {
    if (!f.count(static_cast<long>(x))) fail(ErrorCode::kMissingSample, "f is not sampled at " + std::to_string(x));
  }
  BlrWitness out;
  out.epsilon = Rational(1, 3) * pow10_neg(d);
  const auto Es = symmetrize(a, E);
  auto eq = check_equivariance(f, action, Es, out.epsilon);
  out.defect = eq.max_defect;
  if (!eq.accepted) {
    fail(ErrorCode::kEquivarianceTooWeak, "equivariance defect " + to_string(eq.max_defect) + " is not below " +
                                              to_string(out.epsilon));
  }
  std::set<Vertex> S;
  for (const auto& [x, mu] : f)
    for (const auto& [v, t] : mu.weights()) S.insert(v);
  out.S.assign(S.begin(), S.end());
  for (std::size_t g = 0; g < a.group_order(); ++g) {
    for (Vertex v : out.S) {
      if (S.count(action.vertex_act.at(g).at(static_cast<std::size_t>(v)))) {
        out.F.push_back(static_cast<int>(g));
        break;
      }
    }
  }
  out.colors.assign(static_cast<std::size_t>(d + 1), {});
  for (const auto& [x, mu] : f) {
    for (int i = 0; i <= d; ++i) {
      if (nice_cover_piece(mu, C, i)) out.colors[static_cast<std::size_t>(i)].push_back(x);
    }
  }
  out.finite_sets_in_F = true;
  for (const auto& color : out.colors) {
    out.finite_sets.push_back(action_broken_orbit_elements(a, Es, color));
    for (int g : out.finite_sets.back()) {
      out.finite_sets_in_F = out.finite_sets_in_F && std::binary_search(out.F.begin(), out.F.end(), g);
    }
  }
  out.groupoid = FiniteGroupoid::transformation(a);
  out.groupoid_witness.K = arrows_with_group_parts(out.groupoid, Es);
  out.groupoid_witness.colors = out.colors;
  const auto& Gd = out.groupoid;
  const auto& F = out.F;
  out.report = verify_groupoid_dad(Gd, out.groupoid_witness, [&](std::size_t, const Subgroupoid& H) -> std::optional<std::string> {
    for (Arrow g : H.materialize(Gd)) {
      if (!std::binary_search(F.begin(), F.end(), Gd.group_part(g))) {
        return "generated subgroupoid uses group element " + std::to_string(Gd.group_part(g)) + " outside F";
      }
    }
    return std::nullopt;
  });
  return out;
}

}  // namespace dadim
