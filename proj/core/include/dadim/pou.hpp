#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dadim/errors.hpp"
#include "dadim/groupoid.hpp"
#include "dadim/rational.hpp"

namespace dadim {

// K u K^-1 u units at r(K) u s(K), sorted.
std::vector<Arrow> symmetric_hull(const FiniteGroupoid& G, const std::vector<Arrow>& K);
// {ab : a in A, b in B, s(a) = r(b)}, sorted.
std::vector<Arrow> compose_sets(const FiniteGroupoid& G, const std::vector<Arrow>& A, const std::vector<Arrow>& B);
// Composable products of n elements of K (n >= 1).
std::vector<Arrow> arrow_power(const FiniteGroupoid& G, const std::vector<Arrow>& K, int n);
// s(K n r^-1(U)), sorted.
std::vector<Unit> partial_orbit_image(const FiniteGroupoid& G, const std::vector<Arrow>& K, const std::vector<Unit>& U);

struct EnlargedCover {
  std::vector<Arrow> K;                     // symmetric hull of the input K
  std::vector<Arrow> K3;
  std::vector<std::vector<Unit>> input;     // V_i
  std::vector<std::vector<Unit>> colors;    // U_i = s(K n r^-1(V_i)) n (r(K) u s(K))
  GroupoidVerification k3_report;           // V checked as a witness for K^3
  std::vector<std::uint64_t> generated_sizes;  // subgroupoid generated by K|U_i
  std::vector<std::uint64_t> sandwich_sizes;   // |K G_i K|
};

// WitnessInsufficient when V is not a witness for K^3 with the given bound
// (cover gap or an oversized generated subgroupoid). Also checks that every
// partial orbit s(r^-1(x) n K) lies in one U_i and that K|U_i generates a
// subgroupoid inside K G_i K.
EnlargedCover enlarge_cover(const FiniteGroupoid& G, const std::vector<Arrow>& K,
                            const std::vector<std::vector<Unit>>& V, std::uint64_t size_bound);

struct NestedColorTower {
  std::size_t color = 0;
  std::vector<std::vector<Unit>> levels;  // U^(0) .. U^(N+1), sorted
  std::uint64_t generated_size = 0;       // subgroupoid generated by K|U^(N+1)
};

struct TowerSet {
  std::vector<Arrow> K;  // symmetric hull
  int N = 0;
  std::vector<NestedColorTower> towers;
};

// U^(n+1) = U^(n) u s(K n r^-1(U^(n))). TowerInvalid when the bottom levels
// miss r(K) u s(K); PropagationEscapesColor when K|U^(N+1) generates more
// than size_bound arrows.
TowerSet build_tower(const FiniteGroupoid& G, const std::vector<Arrow>& K, const std::vector<std::vector<Unit>>& colors,
                     int N, std::uint64_t size_bound);

// phi_i = psi_i / sqrt(norm_sq) with psi_i(x) = #{1 <= n <= N : x in U_i^(n-1)} / N
// and norm_sq = max(sum_j psi_j^2, 1). Stored exactly as this pair.
struct PartitionOfUnity {
  int N = 0;
  std::size_t num_units = 0;
  std::vector<std::vector<Rational>> psi;  // [color][unit]
  std::vector<Rational> norm_sq;           // [unit]
  std::vector<std::vector<Unit>> supports; // U_i = top tower level

  std::size_t colors() const { return psi.size(); }
  double phi_approx(std::size_t i, Unit x) const;
};

PartitionOfUnity build_pou(const TowerSet& towers, std::size_t num_units);

// Least N >= 3 with 2(1 + sqrt(d+1))^2 / N < epsilon^2.
int default_depth(int d, const Rational& epsilon);

struct PouReport {
  bool accepted = false;
  ErrorCode code = ErrorCode::kOk;
  std::string message;
  std::size_t support_violations = 0;
  Rational normalization_defect;  // max |sum phi_i^2 - 1| over r(K) u s(K), exact
  double max_oscillation = 0;     // max |phi_i(s(g)) - phi_i(r(g))|, for display
  Arrow worst_arrow = -1;
  std::size_t worst_color = 0;
  bool below_epsilon = false;     // every oscillation < epsilon, exact
  bool below_depth_bound = false; // every oscillation < sqrt2 (1 + sqrt(d+1)) / sqrt N, exact
  bool below_chain_bound = false; // every oscillation <= 2/N + 2 sqrt((d+1)/N), exact
  bool psi_steps_ok = false;      // |psi_j(r(g)) - psi_j(s(g))| <= 2/N
  bool psi_sum_ok = false;        // sum_j psi_j >= 1 on r(K) u s(K)
  Rational max_psi_step;
};

// Exhaustive over arrows of K and units of r(K) u s(K). All inequalities with
// square roots are decided exactly.
PouReport verify_pou(const FiniteGroupoid& G, const std::vector<Arrow>& K, const PartitionOfUnity& pou,
                     const Rational& epsilon);


}  // namespace dadim
