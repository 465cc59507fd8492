#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "dadim/nerve.hpp"
#include "oracles.hpp"

using namespace dadim;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

SimplicialPoint pt(std::map<Vertex, Rational> w) { return SimplicialPoint(std::move(w)); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

// Random point on a face with weights of denominator D.
SimplicialPoint random_point(const std::vector<Vertex>& face, long D, std::mt19937& rng) {
  std::vector<long> parts(face.size(), 0);
  for (long k = 0; k < D; ++k) ++parts[rng() % face.size()];
  std::map<Vertex, Rational> w;
  for (std::size_t i = 0; i < face.size(); ++i)
    if (parts[i]) w[face[i]] = q(parts[i], D);
  return pt(w);
}

// min over all nu on `face` with weights of denominator D of |mu - nu|_1.
Rational lattice_distance(const SimplicialPoint& mu, const std::vector<Vertex>& face, long D) {
  Rational best = 3;
  std::vector<long> parts(face.size(), 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
    if (i + 1 == face.size()) {
      parts[i] = left;
      std::map<Vertex, Rational> w;
      for (std::size_t j = 0; j < face.size(); ++j)
        if (parts[j]) w[face[j]] = q(parts[j], D);
      const Rational d = l1_distance(mu, pt(w));
      if (d < best) best = d;
      return;
    }
    for (long a = 0; a <= left; ++a) {
      parts[i] = a;
      rec(i + 1, left - a);
    }
  };
  rec(0, D);
  return best;
}

// l1 computed straight from the weight maps.
Rational raw_l1(const SimplicialPoint& a, const SimplicialPoint& b) {
  Rational s = 0;
  std::set<Vertex> keys;
  for (const auto& [v, t] : a.weights()) keys.insert(v);
  for (const auto& [v, t] : b.weights()) keys.insert(v);
  for (Vertex v : keys) s += abs(a.weight(v) - b.weight(v));
  return s;
}

// Z/N acting trivially on the vertices {0,1} of an edge, and a tent map
// x -> (1 - t(x)) a + t(x) b with t(x) = |x - N/2| * 2/N.
struct TentModel {
  ComplexAction action;
  SampledMap f;
  SimplicialComplex C{{{0, 1}}};
};

TentModel tent(int N) {
  TentModel m;
  m.action.space = FiniteAction::rotation(N);
  m.action.vertex_act.assign(static_cast<std::size_t>(N), {0, 1});
  for (int x = 0; x < N; ++x) {
    const Rational t = q(std::labs(2L * x - N), N);
    std::map<Vertex, Rational> w;
    if (t != 1) w[0] = 1 - t;
    if (t != 0) w[1] = t;
    m.f.emplace(x, pt(w));
  }
  return m;
}

}  // namespace

TEST(L1, Examples) {
  const auto a = SimplicialPoint::vertex(0), b = SimplicialPoint::vertex(1);
  EXPECT_EQ(l1_distance(a, a), 0);
  EXPECT_EQ(l1_distance(a, b), 2);
  EXPECT_EQ(l1_distance(pt({{0, q(1, 2)}, {1, q(1, 2)}}), a), 1);
  EXPECT_EQ(code_of([] { pt({{0, q(1, 2)}}); }), ErrorCode::kUsage);
  EXPECT_EQ(code_of([] { pt({{0, q(3, 2)}, {1, q(-1, 2)}}); }), ErrorCode::kUsage);
  // Zero weights are dropped.
  EXPECT_EQ(pt({{0, 1}, {1, 0}}).weights().size(), 1u);
}

TEST(L1, MetricAxioms) {
  std::mt19937 rng(1);
  const std::vector<Vertex> face = {0, 1, 2, 3, 4};
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_point(face, 12, rng), b = random_point(face, 12, rng), c = random_point(face, 7, rng);
    EXPECT_EQ(l1_distance(a, b), raw_l1(a, b));
    EXPECT_EQ(l1_distance(a, b), l1_distance(b, a));
    EXPECT_LE(l1_distance(a, c), l1_distance(a, b) + l1_distance(b, c));
    EXPECT_EQ(l1_distance(a, b) == 0, a == b);
    EXPECT_LE(l1_distance(a, b), 2);
  }
}

TEST(Skeleton, Examples) {
  const auto C = SimplicialComplex::simplex(3);
  EXPECT_EQ(C.dimension(), 2);
  const auto bary = pt({{0, q(1, 3)}, {1, q(1, 3)}, {2, q(1, 3)}});
  EXPECT_EQ(distance_to_skeleton(bary, C, 1), q(2, 3));
  EXPECT_EQ(distance_to_skeleton(SimplicialPoint::vertex(1), C, 0), 0);
  EXPECT_EQ(distance_to_skeleton(pt({{0, q(1, 2)}, {1, q(1, 2)}}), C, 0), 1);
  EXPECT_EQ(code_of([&] { distance_to_skeleton(bary, C, -1); }), ErrorCode::kEmptySkeleton);
}

TEST(Skeleton, ClosedFormMatchesLatticeSearch) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    // Random complex on up to 6 vertices with a few maximal faces.
    std::vector<std::vector<Vertex>> faces;
    const int nf = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < nf; ++k) {
      std::vector<Vertex> f;
      for (Vertex v = 0; v < 6; ++v)
        if (rng() % 2) f.push_back(v);
      if (f.empty()) f.push_back(static_cast<Vertex>(rng() % 6));
      if (f.size() > 4) f.resize(4);
      faces.push_back(f);
    }
    const SimplicialComplex C(faces);
    const auto& top = C.maximal_faces()[rng() % C.maximal_faces().size()];
    const long D = 6;
    const auto mu = random_point(top, D, rng);
    for (int i = 0; i <= C.dimension(); ++i) {
      // The i-skeleton holds every face of dimension at most i.
      Rational best = 3;
      for (int j = 0; j <= i; ++j)
        for (const auto& face : C.faces_of_dimension(j)) {
          const Rational d = lattice_distance(mu, face, D);
          if (d < best) best = d;
          EXPECT_EQ(distance_to_face(mu, face), d);
        }
      EXPECT_EQ(distance_to_skeleton(mu, C, i), best) << "level " << i;
    }
  }
}

TEST(NiceCover, AssignExamples) {
  const auto C = SimplicialComplex::simplex(3);
  const auto bary = nice_cover_assign(pt({{0, q(1, 3)}, {1, q(1, 3)}, {2, q(1, 3)}}), C);
  EXPECT_EQ(bary.level, 2);
  EXPECT_EQ(bary.simplex, (std::vector<Vertex>{0, 1, 2}));
  const auto v = nice_cover_assign(SimplicialPoint::vertex(2), C);
  EXPECT_EQ(v.level, 0);
  EXPECT_EQ(v.simplex, std::vector<Vertex>{2});
  const auto near = nice_cover_assign(pt({{0, 1 - q(1, 1000)}, {1, q(1, 1000)}}), C);
  EXPECT_EQ(near.level, 0);
  EXPECT_EQ(near.simplex, std::vector<Vertex>{0});
  const SimplicialComplex edge({{0, 1}});
  EXPECT_EQ(code_of([&] { nice_cover_assign(pt({{0, q(1, 2)}, {2, q(1, 2)}}), edge); }), ErrorCode::kNotInComplex);
  EXPECT_EQ(nice_inner_radius(2), q(1, 300));
  EXPECT_EQ(nice_outer_radius(1), q(1, 4));
}

TEST(NiceCover, MembershipMatchesDefiningInequalities) {
  const auto C = SimplicialComplex::simplex(4);
  std::mt19937 rng(3);
  const std::vector<Vertex> all = {0, 1, 2, 3};
  for (int trial = 0; trial < 400; ++trial) {
    const auto mu = random_point(all, trial % 2 ? 1000 : 40, rng);
    for (int i = 0; i <= 3; ++i)
      for (const auto& face : C.faces_of_dimension(i)) {
        // Distance to a face is 2(1 - mass on it); to a skeleton, the least of those.
        Rational mass = 0;
        for (Vertex v : face) mass += mu.weight(v);
        bool expected = 2 * (1 - mass) < nice_inner_radius(i);
        if (i > 0) {
          Rational best = 2;
          for (const auto& low : C.faces_of_dimension(i - 1)) {
            Rational m2 = 0;
            for (Vertex v : low) m2 += mu.weight(v);
            if (2 * (1 - m2) < best) best = 2 * (1 - m2);
          }
          expected = expected && best > nice_outer_radius(i);
        }
        EXPECT_EQ(nice_cover_membership(mu, C, i, face), expected);
      }
  }
}

TEST(NiceCover, SeparationAndCoverOnGrid) {
  // Denominator 30 grid on the 2-simplex (smaller than the acceptance run).
  const auto C = SimplicialComplex::simplex(3);
  const long D = 30;
  std::vector<SimplicialPoint> pts;
  for (long a = 0; a <= D; ++a)
    for (long b = 0; a + b <= D; ++b) {
      std::map<Vertex, Rational> w;
      if (a) w[0] = q(a, D);
      if (b) w[1] = q(b, D);
      if (D - a - b) w[2] = q(D - a - b, D);
      pts.push_back(pt(w));
    }
  EXPECT_EQ(pts.size(), 496u);
  std::vector<std::vector<std::pair<std::vector<Vertex>, std::size_t>>> by_level(3);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    bool covered = false;
    for (int i = 0; i <= 2; ++i)
      for (const auto& face : C.faces_of_dimension(i))
        if (nice_cover_membership(pts[p], C, i, face)) {
          by_level[static_cast<std::size_t>(i)].push_back({face, p});
          covered = true;
        }
    EXPECT_TRUE(covered) << p;
  }
  for (int i = 0; i <= 2; ++i) {
    const auto& L = by_level[static_cast<std::size_t>(i)];
    for (std::size_t a = 0; a < L.size(); ++a)
      for (std::size_t b = a + 1; b < L.size(); ++b)
        if (L[a].first != L[b].first) {
          EXPECT_GE(raw_l1(pts[L[a].second], pts[L[b].second]), nice_inner_radius(i));
        }
  }
}

TEST(Perturb, Examples) {
  SampledMap f;
  f.emplace(0, pt({{0, q(1, 2)}, {1, q(1, 2)}}));
  f.emplace(1, SimplicialPoint::vertex(1));
  const auto same = perturb_to_finite_support(f, q(1, 100));
  EXPECT_EQ(same.map, f);
  EXPECT_EQ(same.max_perturbation, 0);
  EXPECT_EQ(same.S, (std::vector<Vertex>{0, 1}));

  SampledMap g;
  g.emplace(0, pt({{0, 1 - q(1, 1000)}, {7, q(1, 1000)}}));
  const auto p = perturb_to_finite_support(g, q(1, 100));
  EXPECT_EQ(p.S, std::vector<Vertex>{0});
  EXPECT_EQ(p.max_perturbation, q(2, 1000));
  EXPECT_LT(p.max_perturbation, q(1, 100));
  EXPECT_EQ(l1_distance(p.map.at(0), g.at(0)), q(2, 1000));

  EXPECT_EQ(code_of([&] { perturb_to_finite_support(f, q(1, 100), std::vector<Vertex>{0}); }), ErrorCode::kNoFiniteS);
}

TEST(Perturb, BoundHoldsPointwise) {
  std::mt19937 rng(4);
  const std::vector<Vertex> face = {0, 1, 2, 3, 4, 5};
  for (int trial = 0; trial < 50; ++trial) {
    SampledMap f;
    for (long x = 0; x < 8; ++x) f.emplace(x, random_point(face, 200, rng));
    const Rational delta = q(1 + static_cast<long>(rng() % 40), 20);
    const auto p = perturb_to_finite_support(f, delta);
    EXPECT_LT(p.max_perturbation, delta);
    for (const auto& [x, mu] : f) {
      Rational T = 0;
      for (Vertex v : p.S) T += mu.weight(v);
      EXPECT_EQ(l1_distance(mu, p.map.at(x)), 2 * (1 - T));
      for (const auto& [v, t] : p.map.at(x).weights()) EXPECT_TRUE(std::binary_search(p.S.begin(), p.S.end(), v));
    }
  }
}

TEST(Equivariance, ExactConstantAndMissing) {
  ComplexAction act;
  act.space = FiniteAction::rotation(2);
  act.vertex_act = {{0, 1}, {1, 0}};
  SampledMap exact{{0, SimplicialPoint::vertex(0)}, {1, SimplicialPoint::vertex(1)}};
  const auto r0 = check_equivariance(exact, act, {0, 1}, q(1, 10));
  EXPECT_EQ(r0.max_defect, 0);
  EXPECT_TRUE(r0.accepted);
  SampledMap constant{{0, SimplicialPoint::vertex(0)}, {1, SimplicialPoint::vertex(0)}};
  const auto r1 = check_equivariance(constant, act, {1}, q(2));
  EXPECT_EQ(r1.max_defect, 2);
  EXPECT_FALSE(r1.accepted);
  SampledMap partial{{0, SimplicialPoint::vertex(0)}};
  EXPECT_EQ(code_of([&] { check_equivariance(partial, act, {1}, q(1)); }), ErrorCode::kMissingSample);
}

TEST(Equivariance, TentDefectMatchesDirectComputation) {
  const auto m = tent(240);
  const auto rep = check_equivariance(m.f, m.action, {239, 0, 1}, q(1, 30));
  Rational worst = 0;
  for (int x = 0; x < 240; ++x)
    for (int g : {239, 1}) {
      const Rational d = raw_l1(m.f.at((x + g) % 240), m.f.at(x));  // trivial vertex action
      if (d > worst) worst = d;
    }
  EXPECT_EQ(rep.max_defect, worst);
  EXPECT_EQ(worst, q(4, 240));
  EXPECT_TRUE(rep.accepted);
}

TEST(MapFromCover, SingleFixedPoint) {
  const auto action = FiniteAction::trivial(1);
  const auto U = invariant_cover(action, {{0}});
  const auto m = map_from_cover(U, action, {0}, 3);
  EXPECT_EQ(m.defect, 0);
  EXPECT_EQ(m.f.at(0), SimplicialPoint::vertex(0));
  EXPECT_EQ(m.multiplicity, 1u);
}

TEST(MapFromCover, SevenArcsTooThinForDepthSix) {
  // E^6-interiors of 7-point arcs are empty.
  const auto action = FiniteAction::rotation(12);
  std::vector<long> a, b;
  for (long i = 0; i < 7; ++i) {
    a.push_back(i);
    b.push_back((6 + i) % 12);
  }
  const auto U = invariant_cover(action, {a, b});
  EXPECT_EQ(code_of([&] { map_from_cover(U, action, {11, 0, 1}, 6); }), ErrorCode::kDepthInsufficient);
}

TEST(MapFromCover, ArcCoverPartitionAndBound) {
  const int N = 60;
  const auto action = FiniteAction::rotation(N);
  std::vector<long> a, b;
  for (long i = 0; i < 40; ++i) a.push_back(i);
  for (long i = 30; i < 70; ++i) b.push_back(i % N);
  const auto U = invariant_cover(action, {a, b});
  const auto cond = check_cover_conditions(U, action, {N - 1, 0, 1}, 1);
  EXPECT_TRUE(cond.ok()) << cond.failure;
  for (int n : {1, 2, 5}) {
    const auto m = map_from_cover(U, action, {N - 1, 0, 1}, n);
    EXPECT_EQ(m.multiplicity, 2u);
    EXPECT_EQ(m.bound, q(40, n));
    EXPECT_LE(m.defect, m.bound);
    const std::size_t pts = static_cast<std::size_t>(N) * static_cast<std::size_t>(N);
    for (std::size_t p = 0; p < pts; ++p) {
      Rational s = 0;
      std::size_t nonzero = 0;
      for (std::size_t j = 0; j < m.phi.size(); ++j) {
        s += m.phi[j][p];
        if (m.phi[j][p] != 0) {
          ++nonzero;
          EXPECT_TRUE(U.sets[j][p]);
        }
      }
      EXPECT_EQ(s, 1);
      EXPECT_LE(nonzero, 2u);
    }
    // Direct defect: the group permutes invariant sets trivially.
    Rational worst = 0;
    for (int x = 0; x < N; ++x)
      for (int g : {N - 1, 1}) {
        const Rational d = raw_l1(m.f.at((x + g) % N), m.f.at(x));
        if (d > worst) worst = d;
      }
    EXPECT_EQ(m.defect, worst);
  }
  EXPECT_EQ(code_of([&] { map_from_cover(U, action, {N - 1, 0, 1}, 6); }), ErrorCode::kDepthInsufficient);
}

TEST(CoverFromMap, ExactMapToCycle) {
  const int n = 6;
  ComplexAction act;
  act.space = FiniteAction::rotation(n);
  act.vertex_act.assign(n, std::vector<Vertex>(n));
  for (int g = 0; g < n; ++g)
    for (int v = 0; v < n; ++v) act.vertex_act[g][v] = (v + g) % n;
  std::vector<std::vector<Vertex>> edges;
  for (Vertex v = 0; v < n; ++v) edges.push_back({v, (v + 1) % n});
  const SimplicialComplex C(edges);
  for (bool midpoints : {false, true}) {
    SampledMap f;
    for (long x = 0; x < n; ++x)
      f.emplace(x, midpoints ? pt({{x, q(1, 2)}, {(x + 1) % n, q(1, 2)}}) : SimplicialPoint::vertex(x));
    EXPECT_EQ(check_equivariance(f, act, {n - 1, 0, 1}, q(1)).max_defect, 0);
    const auto pc = cover_from_map(f, C, act, {n - 1, 0, 1});
    EXPECT_TRUE(pc.conditions.ok()) << pc.conditions.failure;
    EXPECT_LE(pc.conditions.multiplicity, 2u);
    EXPECT_EQ(pc.relax, q(1, 60));
  }
}

TEST(Blr, ExactFreeZeroComplex) {
  ComplexAction act;
  act.space = FiniteAction::rotation(3);
  act.vertex_act = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  const SimplicialComplex C({{0}, {1}, {2}});
  SampledMap f{{0, SimplicialPoint::vertex(0)}, {1, SimplicialPoint::vertex(1)}, {2, SimplicialPoint::vertex(2)}};
  const auto w = dad_witness_from_blr(f, C, act, {0, 1, 2});
  EXPECT_EQ(w.defect, 0);
  EXPECT_EQ(w.epsilon, q(1, 3));
  ASSERT_EQ(w.colors.size(), 1u);
  EXPECT_TRUE(w.finite_sets_in_F);
  EXPECT_TRUE(w.report.accepted) << w.report.message;
}

TEST(Blr, TooWeak) {
  const auto m = tent(24);  // defect 1/6, far above 1/30
  EXPECT_EQ(code_of([&] { dad_witness_from_blr(m.f, m.C, m.action, {23, 0, 1}); }), ErrorCode::kEquivarianceTooWeak);
}

TEST(Blr, TentMapTwoColors) {
  const int N = 240;
  const auto m = tent(N);
  const auto w = dad_witness_from_blr(m.f, m.C, m.action, {N - 1, 0, 1});
  EXPECT_LT(w.defect, w.epsilon);
  ASSERT_EQ(w.colors.size(), 2u);
  EXPECT_TRUE(w.finite_sets_in_F);
  EXPECT_TRUE(w.report.accepted) << w.report.message;
  // Each color is a union of arcs; F_i from offsets that stay in the color.
  for (std::size_t i = 0; i < 2; ++i) {
    std::set<long> U(w.colors[i].begin(), w.colors[i].end());
    std::set<long> offsets;
    oracle::broken_orbit_offsets(U, N, {-1, 0, 1}, 10L * N, offsets);
    std::set<int> mod;
    for (long o : offsets) mod.insert(static_cast<int>(((o % N) + N) % N));
    EXPECT_EQ(std::vector<int>(mod.begin(), mod.end()), w.finite_sets[i]);
  }
}
