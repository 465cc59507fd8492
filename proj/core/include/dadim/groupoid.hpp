#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dadim/errors.hpp"

namespace dadim {

using Unit = std::int64_t;
using Arrow = std::int64_t;

// A finite group (multiplication table, identity 0) acting on {0..n-1}.
struct FiniteAction {
  std::vector<std::vector<int>> mult;  // mult[g][h] = gh
  std::vector<int> inverse;
  std::vector<std::vector<int>> act;   // act[g][x] = g.x

  std::size_t group_order() const { return mult.size(); }
  std::size_t space_size() const { return act.empty() ? 0 : act[0].size(); }

  // Validates the group table and the action; NotAnAction on failure.
  static FiniteAction make(std::vector<std::vector<int>> mult, std::vector<std::vector<int>> act);
  // Z/n acting on {0..m-1} by the given table act[g][x] (g in Z/n).
  static FiniteAction cyclic(int n, std::vector<std::vector<int>> act);
  // Z/n acting on itself by rotation.
  static FiniteAction rotation(int n);
  // Trivial group on m points.
  static FiniteAction trivial(int m);
};

// Finite discrete groupoid. Three storage forms share one interface:
//  - explicit arrow table with a composition table,
//  - the pair groupoid on n units (arrow id = r*n + s),
//  - a transformation groupoid (arrow id = g*|X| + x, s = x, r = g.x).
class FiniteGroupoid {
 public:
  enum class Form { kTable, kPair, kTransformation };

  struct ArrowSpec {
    Unit source;
    Unit range;
  };
  struct Composition {
    Arrow first;   // g
    Arrow second;  // h, with s(g) = r(h)
    Arrow result;  // gh
  };

  FiniteGroupoid() = default;

  // Units are 0..n_units-1 and must appear as identity arrows in the table.
  // Axioms are checked exhaustively while the triple count stays below 10^7,
  // by seeded sampling above that.
  static FiniteGroupoid from_table(std::size_t n_units, std::vector<ArrowSpec> arrows,
                                   const std::vector<Composition>& compose);
  static FiniteGroupoid pair(std::size_t n_units);
  static FiniteGroupoid transformation(FiniteAction action);
  // Disjoint union of full pair groupoids on consecutive blocks.
  static FiniteGroupoid block_pairs(const std::vector<std::size_t>& block_sizes);

  Form form() const { return form_; }
  std::size_t num_units() const { return n_units_; }
  std::uint64_t num_arrows() const;
  bool valid_arrow(Arrow g) const;

  Unit source(Arrow g) const;
  Unit range(Arrow g) const;
  Arrow inverse(Arrow g) const;
  // gh when s(g) = r(h), otherwise nullopt.
  std::optional<Arrow> compose(Arrow g, Arrow h) const;
  Arrow unit_arrow(Unit x) const;
  bool is_unit_arrow(Arrow g) const { return unit_arrow(source(g)) == g; }

  // Arrows with the given source / range, in increasing id order.
  std::vector<Arrow> arrows_from(Unit x) const;
  std::vector<Arrow> arrows_to(Unit x) const;
  // Some arrow from `from` to `to` (the unique one when free).
  std::optional<Arrow> arrow_between(Unit from, Unit to) const;

  bool is_free() const { return free_; }
  std::optional<Arrow> isotropy_witness() const;
  // Least unit of each orbit.
  std::vector<Unit> orbit_representatives() const;

  const FiniteAction* action() const { return form_ == Form::kTransformation ? &action_ : nullptr; }
  // Transformation form only: group part and space point of an arrow.
  int group_part(Arrow g) const;
  Arrow transformation_arrow(int group_element, Unit x) const;

  std::string describe() const;

 private:
  Form form_ = Form::kTable;
  std::size_t n_units_ = 0;
  bool free_ = true;

  // table form
  std::vector<ArrowSpec> arrows_;
  std::unordered_map<std::uint64_t, Arrow> compose_;
  std::vector<Arrow> inverse_;
  std::vector<Arrow> units_;
  std::vector<std::vector<Arrow>> by_source_;
  std::vector<std::vector<Arrow>> by_range_;

  // transformation form
  FiniteAction action_;

  void check_table_axioms();
};

// A subgroupoid of a finite groupoid. For free groupoids it is stored by its
// orbit classes (the subgroupoid is then the disjoint union of class x class);
// otherwise as an explicit sorted arrow list.
struct Subgroupoid {
  bool by_classes = true;
  std::vector<std::vector<Unit>> classes;
  std::vector<Arrow> arrows;

  std::uint64_t size() const;
  bool contains(const FiniteGroupoid& G, Arrow g) const;
  std::vector<Arrow> materialize(const FiniteGroupoid& G) const;
  // Units of the subgroupoid, sorted.
  std::vector<Unit> units(const FiniteGroupoid& G) const;
  // Orbit classes, sorted (derived from the arrows for the explicit form).
  std::vector<std::vector<Unit>> orbit_classes(const FiniteGroupoid& G) const;
};

bool same_subgroupoid(const FiniteGroupoid& G, const Subgroupoid& a, const Subgroupoid& b);

// Least subgroupoid containing the seed arrows.
Subgroupoid generate_subgroupoid(const FiniteGroupoid& G, const std::vector<Arrow>& seed);

// ErrorCode::kOk when the declared set is closed under inverse, units and
// composition, kNotClosed otherwise.
ErrorCode check_closed(const FiniteGroupoid& G, const Subgroupoid& H, std::string* detail = nullptr);

struct GroupoidDadWitness {
  std::vector<Arrow> K;                    // sorted
  std::vector<std::vector<Unit>> colors;   // sorted unit lists
  std::vector<Subgroupoid> generated;      // per color; may be empty to skip comparison
};

struct GroupoidVerification {
  bool accepted = false;
  ErrorCode code = ErrorCode::kOk;
  std::string message;
  std::vector<std::uint64_t> generated_sizes;
  std::vector<Subgroupoid> generated;
};

// Units touched by K: r(K) u s(K), sorted.
std::vector<Unit> endpoints(const FiniteGroupoid& G, const std::vector<Arrow>& K);
// {g in K : s(g), r(g) in U}.
std::vector<Arrow> restrict_to(const FiniteGroupoid& G, const std::vector<Arrow>& K,
                               const std::vector<Unit>& U);

// Smallness test for a generated subgroupoid: nullopt when acceptable,
// otherwise the reason it is too large.
using SmallnessCheck = std::function<std::optional<std::string>(std::size_t color, const Subgroupoid&)>;

// Order of checks: CoverGap, then per color NotClosed (declared set),
// SizeExceeded, WitnessMismatch.
GroupoidVerification verify_groupoid_dad(const FiniteGroupoid& G, const GroupoidDadWitness& w,
                                         const SmallnessCheck& small);
// Smallness = at most size_bound arrows.
GroupoidVerification verify_groupoid_dad(const FiniteGroupoid& G, const GroupoidDadWitness& w,
                                         std::uint64_t size_bound);

// Arrows of a transformation groupoid whose group part lies in `group_parts`.
std::vector<Arrow> arrows_with_group_parts(const FiniteGroupoid& G, const std::vector<int>& group_parts);

// For a finite action: per color, the set of group elements g = g_n...g_1 with
// g_k in E such that some x in the color has every partial product applied to
// x inside the color.
std::vector<int> action_broken_orbit_elements(const FiniteAction& action, const std::vector<int>& generators,
                                              const std::vector<Unit>& color);

}  // namespace dadim
