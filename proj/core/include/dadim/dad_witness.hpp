#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dadim/errors.hpp"
#include "dadim/symbolic.hpp"

namespace dadim {

// A cover U_0..U_d of a Z-system together with a symmetric generator set E
// and, per color, the finite set of group elements reachable by E-paths that
// stay inside the color.
struct DadWitness {
  std::vector<long> generators;
  std::vector<ClopenSet> colors;
  std::vector<std::vector<long>> finite_sets;
};

struct DadConstruction {
  DadWitness witness;
  ClopenSet base;     // U, with disjoint translates up to 5N
  ClopenSet refined;  // V, a cylinder inside U
  long N = 0;
  long return_bound = 0;  // M = max gap of V
};

struct DadVerification {
  bool accepted = false;
  ErrorCode code = ErrorCode::kOk;
  std::string message;
  bool covers = false;
  long blowup_bound = 0;
  std::optional<std::size_t> failing_color;
  std::vector<std::vector<long>> reached;  // per color, sorted
  std::vector<bool> matches_declared;
};

// Depth choices for the construction. By default U is the least cylinder
// length with disjoint translates up to 5N and V sits one level below it.
struct ZWitnessDepths {
  std::optional<int> base_length;  // cylinder length of U (must still separate)
  int refine_levels = 1;           // V = first extension of U by this many symbols; 0 gives V = U
};

// Two-color witness for E = [-N, N] on a minimal infinite system.
DadConstruction construct_minimal_z_witness(const SystemPtr& sys, long N, const ZWitnessDepths& depths = {});

// Saturating (2|E|+1)^(gap*(d+1)), capped at 10^6.
long default_blowup_bound(std::size_t generator_count, std::size_t colors, long gap);

// Picks the default bound from the witness itself, using the largest max gap
// among the colors (falls back to the cap when a gap is not computable).
long default_blowup_bound(const DadWitness& w);

// Least fixed point of R(0) = U, R(m) >= R(n) & (-m).U for m - n in E.
// Returns the sorted set of n with R(n) nonempty, or nullopt when more than
// `bound` elements were reached.
std::optional<std::vector<long>> broken_orbit_elements(const ClopenSet& color,
                                                       const std::vector<long>& generators,
                                                       long bound);

// Checks cover, runs the breadth-first exploration per color and compares with
// the declared finite sets (an empty declared list is treated as "not given").
DadVerification verify_dad_witness(const SystemPtr& sys, const DadWitness& w, long blowup_bound);

}  // namespace dadim
