#include <gtest/gtest.h>

#include <cmath>

#include "dadim/pou.hpp"

using namespace dadim;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

std::vector<Unit> arc(long from, long len, long n) {
  std::vector<Unit> out;
  if (len >= n) len = n;
  for (long i = 0; i < len; ++i) out.push_back((((from + i) % n) + n) % n);
  std::sort(out.begin(), out.end());
  return out;
}

struct RotationModel {
  int n;
  FiniteGroupoid G;
  std::vector<Arrow> K;
};

RotationModel rotation_model(int n) {
  RotationModel m{n, FiniteGroupoid::transformation(FiniteAction::rotation(n)), {}};
  m.K = arrows_with_group_parts(m.G, {n - 1, 0, 1});
  std::sort(m.K.begin(), m.K.end());
  return m;
}

// Two half arcs of Z/n, enlarged, towers of depth N, partition of unity.
struct Built {
  EnlargedCover cover;
  TowerSet towers;
  PartitionOfUnity pou;
};

Built build_halves(const RotationModel& m, int N, std::uint64_t bound) {
  Built b;
  const int h = m.n / 2;
  b.cover = enlarge_cover(m.G, m.K, {arc(0, h, m.n), arc(h, m.n - h, m.n)}, bound);
  b.towers = build_tower(m.G, m.K, b.cover.colors, N, bound);
  b.pou = build_pou(b.towers, m.G.num_units());
  return b;
}

}  // namespace

TEST(Enlarge, UnitsOnlyLeavesColors) {
  const auto m = rotation_model(12);
  const auto K = arrows_with_group_parts(m.G, {0});
  const auto c = enlarge_cover(m.G, K, {arc(0, 5, 12), arc(5, 7, 12)}, 144);
  EXPECT_EQ(c.colors[0], arc(0, 5, 12));
  EXPECT_EQ(c.colors[1], arc(5, 7, 12));
}

TEST(Enlarge, ArcsGrowByOneEachSide) {
  const auto m = rotation_model(12);
  const auto c = enlarge_cover(m.G, m.K, {arc(0, 6, 12), arc(6, 6, 12)}, 144);
  EXPECT_EQ(c.colors[0], arc(-1, 8, 12));
  EXPECT_EQ(c.colors[1], arc(5, 8, 12));
  EXPECT_EQ(c.K3.size(), 7u * 12u);
  // Each unit's partial orbit {x-1, x, x+1} sits inside some enlarged arc.
  for (long x = 0; x < 12; ++x) {
    const auto orbit = arc(x - 1, 3, 12);
    bool inside = false;
    for (const auto& u : c.colors) inside = inside || std::includes(u.begin(), u.end(), orbit.begin(), orbit.end());
    EXPECT_TRUE(inside) << x;
  }
}

TEST(Enlarge, EvensAndOddsInsufficient) {
  const auto m = rotation_model(12);
  std::vector<Unit> evens, odds;
  for (Unit x = 0; x < 12; ++x) (x % 2 ? odds : evens).push_back(x);
  EXPECT_EQ(code_of([&] { enlarge_cover(m.G, m.K, {evens, odds}, 12); }), ErrorCode::kWitnessInsufficient);
}

TEST(Arrows, PowersAndOrbitImages) {
  const auto m = rotation_model(12);
  const auto K2 = arrow_power(m.G, m.K, 2);
  std::set<int> parts;
  for (Arrow g : K2) parts.insert(m.G.group_part(g));
  EXPECT_EQ(parts, (std::set<int>{10, 11, 0, 1, 2}));
  EXPECT_EQ(partial_orbit_image(m.G, m.K, {3}), (std::vector<Unit>{2, 3, 4}));
  EXPECT_EQ(symmetric_hull(m.G, {m.G.transformation_arrow(1, 0)}).size(), 4u);
}

TEST(Tower, UnitsGiveConstantTower) {
  const auto m = rotation_model(12);
  const auto K = arrows_with_group_parts(m.G, {0});
  const auto t = build_tower(m.G, K, {arc(0, 12, 12)}, 3, 144);
  for (const auto& level : t.towers[0].levels) EXPECT_EQ(level, arc(0, 12, 12));
}

TEST(Tower, ArcsGrowOnePerSidePerLevel) {
  const auto m = rotation_model(36);
  const auto b = build_halves(m, 4, 1000);
  for (std::size_t i = 0; i < 2; ++i) {
    const long start = i == 0 ? -1 : 17;
    const auto& levels = b.towers.towers[i].levels;
    ASSERT_EQ(levels.size(), 6u);
    for (long n = 0; n < 6; ++n) EXPECT_EQ(levels[static_cast<std::size_t>(n)], arc(start - n, 20 + 2 * n, 36));
    // Propagation: s(K n r^-1(U^(n))) inside U^(n+1).
    for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
      const auto pushed = partial_orbit_image(m.G, m.K, levels[n]);
      EXPECT_TRUE(std::includes(levels[n + 1].begin(), levels[n + 1].end(), pushed.begin(), pushed.end()));
    }
    EXPECT_EQ(b.towers.towers[i].generated_size, 30u * 30u);
  }
}

TEST(Tower, TooDeepEscapes) {
  const auto m = rotation_model(36);
  EXPECT_EQ(code_of([&] { build_halves(m, 8, 1000); }), ErrorCode::kPropagationEscapesColor);
  const auto z12 = rotation_model(12);
  EXPECT_EQ(code_of([&] { build_halves(z12, 4, 143); }), ErrorCode::kPropagationEscapesColor);
}

TEST(Tower, BottomMustCover) {
  const auto m = rotation_model(12);
  EXPECT_EQ(code_of([&] { build_tower(m.G, m.K, {arc(0, 6, 12), arc(6, 5, 12)}, 2, 144); }), ErrorCode::kTowerInvalid);
}

TEST(Pou, SingleColorIsOne) {
  const auto m = rotation_model(12);
  const auto t = build_tower(m.G, m.K, {arc(0, 12, 12)}, 3, 144);
  const auto pou = build_pou(t, 12);
  for (Unit x = 0; x < 12; ++x) {
    EXPECT_EQ(pou.psi[0][static_cast<std::size_t>(x)], 1);
    EXPECT_EQ(pou.norm_sq[static_cast<std::size_t>(x)], 1);
  }
  const auto rep = verify_pou(m.G, m.K, pou, Rational(1, 100));
  EXPECT_TRUE(rep.accepted) << rep.message;
  EXPECT_EQ(rep.max_oscillation, 0);
}

TEST(Pou, PsiMatchesLevelCounts) {
  const auto m = rotation_model(36);
  const int N = 4;
  const auto b = build_halves(m, N, 1000);
  for (std::size_t i = 0; i < 2; ++i) {
    const long start = i == 0 ? -1 : 17;
    for (long x = 0; x < 36; ++x) {
      long count = 0;
      for (long n = 1; n <= N; ++n) {
        const auto level = arc(start - (n - 1), 20 + 2 * (n - 1), 36);
        if (std::binary_search(level.begin(), level.end(), x)) ++count;
      }
      EXPECT_EQ(b.pou.psi[i][static_cast<std::size_t>(x)], make_rational(count, N));
    }
  }
  for (std::size_t x = 0; x < 36; ++x) {
    const Rational s = b.pou.psi[0][x] * b.pou.psi[0][x] + b.pou.psi[1][x] * b.pou.psi[1][x];
    EXPECT_EQ(b.pou.norm_sq[x], std::max(s, Rational(1)));
  }
}

TEST(Pou, Z12ConstantsHold) {
  const auto m = rotation_model(12);
  for (int N : {4, 16, 64}) {
    const auto b = build_halves(m, N, 144);
    const auto rep = verify_pou(m.G, m.K, b.pou, Rational(1));
    EXPECT_EQ(rep.support_violations, 0u);
    EXPECT_EQ(rep.normalization_defect, 0);
    EXPECT_TRUE(rep.below_depth_bound) << N;
    EXPECT_TRUE(rep.below_chain_bound) << N;
    EXPECT_TRUE(rep.psi_steps_ok);
    EXPECT_TRUE(rep.psi_sum_ok);
    EXPECT_LE(rep.max_psi_step, make_rational(2, N));
    // Floating cross-check of the oscillation against the closed-form constant.
    double worst = 0;
    for (Arrow g : m.K)
      for (std::size_t i = 0; i < 2; ++i) {
        const auto s = static_cast<std::size_t>(m.G.source(g)), r = static_cast<std::size_t>(m.G.range(g));
        const double a = b.pou.psi[i][s].get_d() / std::sqrt(b.pou.norm_sq[s].get_d());
        const double c = b.pou.psi[i][r].get_d() / std::sqrt(b.pou.norm_sq[r].get_d());
        worst = std::max(worst, std::fabs(a - c));
      }
    EXPECT_NEAR(rep.max_oscillation, worst, 1e-12);
    EXPECT_LT(worst, std::sqrt(2.0) * (1 + std::sqrt(2.0)) / std::sqrt(static_cast<double>(N)));
  }
}

TEST(Pou, SupportViolationDetected) {
  const auto m = rotation_model(12);
  auto b = build_halves(m, 4, 144);
  b.pou.supports[0] = arc(0, 3, 12);
  const auto rep = verify_pou(m.G, m.K, b.pou, Rational(1));
  EXPECT_FALSE(rep.accepted);
  EXPECT_EQ(rep.code, ErrorCode::kSupportViolation);
  EXPECT_GT(rep.support_violations, 0u);
}

TEST(Pou, ConstantSplitNormalizes) {
  const auto m = rotation_model(12);
  PartitionOfUnity pou;
  pou.N = 3;
  pou.num_units = 12;
  pou.psi.assign(2, std::vector<Rational>(12, Rational(1)));
  pou.norm_sq.assign(12, Rational(2));
  pou.supports = {arc(0, 12, 12), arc(0, 12, 12)};
  const auto rep = verify_pou(m.G, m.K, pou, Rational(1, 10));
  EXPECT_TRUE(rep.accepted) << rep.message;
  EXPECT_EQ(rep.normalization_defect, 0);
  EXPECT_EQ(rep.max_oscillation, 0);
  EXPECT_NEAR(pou.phi_approx(0, 5), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Pou, DefaultDepthIsLeast) {
  for (int d = 0; d <= 3; ++d)
    for (const Rational& eps : {Rational(1), make_rational(1, 2), make_rational(3, 2), make_rational(1, 5)}) {
      const int N = default_depth(d, eps);
      const double e = eps.get_d();
      auto ok = [&](long n) { return 2 * std::pow(1 + std::sqrt(d + 1.0), 2) / static_cast<double>(n) < e * e; };
      EXPECT_GE(N, 3);
      EXPECT_TRUE(ok(N)) << d << " " << e;
      if (N > 3) {
        EXPECT_FALSE(ok(N - 1)) << d << " " << e;
      }
    }
  EXPECT_EQ(default_depth(1, Rational(1)), 12);
}
