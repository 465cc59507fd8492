#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dadim/dad_witness.hpp"
#include "dadim/errors.hpp"
#include "oracles.hpp"

using namespace dadim;

namespace {

SystemPtr dyadic() { return SymbolicSystem::odometer({2}); }

std::vector<long> interval(long a, long b) {
  std::vector<long> out;
  for (long n = a; n <= b; ++n) out.push_back(n);
  return out;
}

std::set<long> residues_at(const ClopenSet& s, int depth) { return oracle::dyadic_residues(s, depth); }

// Largest cyclic gap between consecutive residues.
long residue_max_gap(const std::set<long>& res, long P) {
  long gap = 0;
  std::vector<long> v(res.begin(), res.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long next = i + 1 < v.size() ? v[i + 1] : v[0] + P;
    gap = std::max(gap, next - v[i]);
  }
  return gap;
}

// Offsets reachable inside a color along a long stretch of the subshift's
// fixed point.
std::set<long> subshift_offsets(const ClopenSet& color, const std::string& text, const std::vector<long>& E) {
  auto member = [&](long p) {
    const long start = p + color.offset();
    if (start < 0 || start + color.length() > static_cast<long>(text.size())) return false;
    const std::string w = text.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(color.length()));
    return std::binary_search(color.cells().begin(), color.cells().end(), w);
  };
  std::set<long> out;
  const long margin = 2000;
  for (long p = margin; p + margin < static_cast<long>(text.size()); ++p) {
    if (!member(p)) continue;
    std::set<long> seen{0};
    std::vector<long> stack{0};
    while (!stack.empty()) {
      const long n = stack.back();
      stack.pop_back();
      for (long e : E) {
        const long m = n + e;
        if (seen.count(m) || std::labs(m) >= margin || !member(p + m)) continue;
        seen.insert(m);
        stack.push_back(m);
      }
    }
    out.insert(seen.begin(), seen.end());
  }
  return out;
}

}  // namespace

TEST(Construct, DyadicNEqualsOne) {
  auto sys = dyadic();
  const auto c = construct_minimal_z_witness(sys, 1);
  EXPECT_EQ(residues_at(c.base, 3), std::set<long>{0});
  EXPECT_EQ(residues_at(c.refined, 4), std::set<long>{0});
  EXPECT_EQ(c.return_bound, 16);
  ASSERT_EQ(c.witness.colors.size(), 2u);
  ASSERT_EQ(c.witness.finite_sets.size(), 2u);
  for (long n : c.witness.finite_sets[0]) EXPECT_LE(std::labs(n), 3);
  for (long n : c.witness.finite_sets[1]) EXPECT_LE(std::labs(n), 17);
}

TEST(Construct, DyadicNEqualsThree) {
  auto sys = dyadic();
  const auto c = construct_minimal_z_witness(sys, 3);
  EXPECT_EQ(c.base.canonical().length(), 4);
  EXPECT_EQ(c.return_bound, 32);
}

TEST(Construct, BaseSeparationAndReturnBound) {
  auto sys = dyadic();
  for (long N = 1; N <= 6; ++N) {
    const auto c = construct_minimal_z_witness(sys, N);
    const int depth = std::max(c.base.length(), c.refined.length());
    const long P = 1L << depth;
    const auto U = residues_at(c.base, depth);
    // Translates of U by 0 < |n| <= 5N miss U.
    for (long n = 1; n <= 5 * N; ++n)
      for (long r : U) EXPECT_FALSE(U.count((r + n) % P)) << "N=" << N << " n=" << n;
    const auto V = residues_at(c.refined, depth);
    EXPECT_TRUE(std::includes(U.begin(), U.end(), V.begin(), V.end()));
    EXPECT_EQ(c.return_bound, residue_max_gap(V, P)) << N;
  }
}

TEST(Construct, ReachedSetsMatchOffsetSearch) {
  auto sys = dyadic();
  for (long N = 1; N <= 4; ++N) {
    const auto c = construct_minimal_z_witness(sys, N);
    const auto rep = verify_dad_witness(sys, c.witness, default_blowup_bound(c.witness));
    ASSERT_TRUE(rep.accepted) << rep.message;
    EXPECT_TRUE(rep.covers);
    int depth = 0;
    for (const auto& col : c.witness.colors) depth = std::max(depth, col.length());
    const long P = 1L << depth;
    const auto E = interval(-N, N);
    for (std::size_t i = 0; i < c.witness.colors.size(); ++i) {
      std::set<long> offsets;
      ASSERT_TRUE(oracle::broken_orbit_offsets(residues_at(c.witness.colors[i], depth), P, E, P, offsets));
      EXPECT_EQ(std::vector<long>(offsets.begin(), offsets.end()), rep.reached[i]) << "N=" << N << " color " << i;
      EXPECT_TRUE(rep.matches_declared[i]);
    }
    // Bounds on the two colors.
    for (long n : rep.reached[0]) EXPECT_LE(std::labs(n), 3 * N);
    for (long n : rep.reached[1]) EXPECT_LE(std::labs(n), c.return_bound + N);
  }
}

TEST(Construct, ExplicitDepths) {
  auto sys = dyadic();
  struct Case {
    long N;
    int base, refine;
    long expected_gap;
  };
  for (const Case k : {Case{1, 3, 1, 16}, Case{2, 4, 0, 16}, Case{3, 4, 1, 32}}) {
    const auto c = construct_minimal_z_witness(sys, k.N, ZWitnessDepths{k.base, k.refine});
    EXPECT_EQ(c.base.length(), k.base);
    EXPECT_EQ(c.refined.length(), k.base + k.refine);
    const int depth = c.refined.length();
    const long P = 1L << depth;
    const auto U = residues_at(c.base, depth);
    for (long n = 1; n <= 5 * k.N; ++n)
      for (long r : U) EXPECT_FALSE(U.count((r + n) % P)) << "N=" << k.N << " n=" << n;
    const auto V = residues_at(c.refined, depth);
    EXPECT_TRUE(std::includes(U.begin(), U.end(), V.begin(), V.end()));
    EXPECT_EQ(c.return_bound, residue_max_gap(V, P));
    EXPECT_EQ(c.return_bound, k.expected_gap);
    const auto rep = verify_dad_witness(sys, c.witness, default_blowup_bound(c.witness));
    EXPECT_TRUE(rep.accepted) << rep.message;
  }
}

TEST(Construct, ExplicitDepthMustSeparate) {
  auto sys = dyadic();
  // Period-4 cylinder meets its own translate by 4 <= 5.
  try {
    construct_minimal_z_witness(sys, 1, ZWitnessDepths{2, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUsage);
  }
  EXPECT_THROW(construct_minimal_z_witness(sys, 1, ZWitnessDepths{3, -1}), Error);
}

TEST(Construct, FibonacciAgreesWithFixedPoint) {
  auto sys = SymbolicSystem::substitution({"a", "b"}, {{"a", "ab"}, {"b", "a"}});
  const std::string text = oracle::fixed_point_prefix(sys->images(), 40000);
  for (long N = 1; N <= 2; ++N) {
    const auto c = construct_minimal_z_witness(sys, N);
    const auto rep = verify_dad_witness(sys, c.witness, default_blowup_bound(c.witness));
    ASSERT_TRUE(rep.accepted) << rep.message;
    const auto E = interval(-N, N);
    for (std::size_t i = 0; i < c.witness.colors.size(); ++i) {
      const auto offsets = subshift_offsets(c.witness.colors[i], text, E);
      EXPECT_EQ(std::vector<long>(offsets.begin(), offsets.end()), rep.reached[i]) << "N=" << N << " color " << i;
    }
  }
}

TEST(Construct, ReachedSetsSymmetricAndMonotone) {
  auto sys = dyadic();
  std::vector<std::set<long>> previous;
  for (long N = 1; N <= 3; ++N) {
    const auto c = construct_minimal_z_witness(sys, N);
    const auto rep = verify_dad_witness(sys, c.witness, default_blowup_bound(c.witness));
    ASSERT_TRUE(rep.accepted);
    for (const auto& F : rep.reached) {
      EXPECT_TRUE(std::binary_search(F.begin(), F.end(), 0L));
      for (long n : F) EXPECT_TRUE(std::binary_search(F.begin(), F.end(), -n));
    }
    // Shrinking E on a fixed cover shrinks each F.
    for (std::size_t i = 0; i < c.witness.colors.size(); ++i) {
      const auto big = broken_orbit_elements(c.witness.colors[i], interval(-N, N), 1000000);
      const auto small = broken_orbit_elements(c.witness.colors[i], {-1, 0, 1}, 1000000);
      ASSERT_TRUE(big && small);
      EXPECT_TRUE(std::includes(big->begin(), big->end(), small->begin(), small->end()));
    }
  }
}

TEST(Verify, SingleWholeColorBlowsUp) {
  auto sys = dyadic();
  DadWitness w;
  w.generators = {-1, 0, 1};
  w.colors = {ClopenSet::whole(sys)};
  const auto rep = verify_dad_witness(sys, w, 1000);
  EXPECT_FALSE(rep.accepted);
  EXPECT_EQ(rep.code, ErrorCode::kBlowupExceeded);
  ASSERT_TRUE(rep.failing_color.has_value());
  EXPECT_EQ(*rep.failing_color, 0u);
}

TEST(Verify, TrivialGeneratorGivesZero) {
  auto sys = dyadic();
  DadWitness w;
  w.generators = {0};
  w.colors = {ClopenSet::whole(sys)};
  const auto rep = verify_dad_witness(sys, w, 10);
  ASSERT_TRUE(rep.accepted) << rep.message;
  EXPECT_EQ(rep.reached[0], std::vector<long>{0});
}

TEST(Verify, CoverGapDetected) {
  auto sys = dyadic();
  auto c = construct_minimal_z_witness(sys, 1);
  c.witness.colors.pop_back();
  c.witness.finite_sets.pop_back();
  const auto rep = verify_dad_witness(sys, c.witness, 1000);
  EXPECT_FALSE(rep.accepted);
  EXPECT_EQ(rep.code, ErrorCode::kCoverGap);
  EXPECT_FALSE(rep.covers);
}

TEST(Verify, WrongDeclaredSetMismatch) {
  auto sys = dyadic();
  auto c = construct_minimal_z_witness(sys, 1);
  c.witness.finite_sets[0] = {0};
  const auto rep = verify_dad_witness(sys, c.witness, default_blowup_bound(c.witness));
  EXPECT_FALSE(rep.accepted);
  EXPECT_EQ(rep.code, ErrorCode::kWitnessMismatch);
  EXPECT_FALSE(rep.matches_declared[0]);
}

TEST(Verify, RandomCoversMatchOracle) {
  auto sys = dyadic();
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int depth = 3 + static_cast<int>(rng() % 3);
    const long P = 1L << depth;
    std::vector<std::string> a, b;
    for (long r = 0; r < P; ++r) {
      std::string w;
      for (int i = 0; i < depth; ++i) w += static_cast<char>((r >> i) & 1);
      (rng() % 2 ? a : b).push_back(w);
    }
    DadWitness w;
    w.generators = {-1, 0, 1};
    w.colors = {ClopenSet::from_cells(sys, 0, depth, a), ClopenSet::from_cells(sys, 0, depth, b)};
    const auto rep = verify_dad_witness(sys, w, 100000);
    for (std::size_t i = 0; i < 2; ++i) {
      std::set<long> offsets;
      const bool bounded = oracle::broken_orbit_offsets(residues_at(w.colors[i], depth), P, {-1, 0, 1}, 4 * P, offsets);
      if (!bounded) {
        // An entire orbit in one color: infinite reach.
        EXPECT_FALSE(rep.accepted);
        EXPECT_EQ(rep.code, ErrorCode::kBlowupExceeded);
        break;
      }
      if (w.colors[i].is_empty()) continue;
      ASSERT_LT(i, rep.reached.size());
      EXPECT_EQ(std::vector<long>(offsets.begin(), offsets.end()), rep.reached[i]);
    }
  }
}

TEST(Blowup, DefaultBoundSaturates) {
  EXPECT_EQ(default_blowup_bound(3, 2, 1), 49);
  EXPECT_EQ(default_blowup_bound(3, 2, 2), 7 * 7 * 7 * 7);
  EXPECT_EQ(default_blowup_bound(1, 1, 1), 3);
  EXPECT_EQ(default_blowup_bound(3, 2, 1000), 1000000);
}
