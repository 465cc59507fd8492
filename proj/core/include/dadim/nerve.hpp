#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dadim/errors.hpp"
#include "dadim/groupoid.hpp"
#include "dadim/rational.hpp"

namespace dadim {

using Vertex = long;

// A point of a simplex: nonnegative rational weights summing to exactly one.
// Zero weights are never stored.
class SimplicialPoint {
 public:
  SimplicialPoint() = default;
  // Validates nonnegativity and total mass 1 (kUsage otherwise).
  explicit SimplicialPoint(std::map<Vertex, Rational> weights);
  static SimplicialPoint vertex(Vertex v);

  const std::map<Vertex, Rational>& weights() const { return weights_; }
  Rational weight(Vertex v) const;
  std::vector<Vertex> support() const;
  bool operator==(const SimplicialPoint& other) const { return weights_ == other.weights_; }

 private:
  std::map<Vertex, Rational> weights_;
};

Rational l1_distance(const SimplicialPoint& a, const SimplicialPoint& b);

// Simplicial complex given by its maximal faces (faces = all subsets).
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  // Sorts faces and drops duplicates and non-maximal ones.
  explicit SimplicialComplex(std::vector<std::vector<Vertex>> faces);
  // The full simplex on vertices 0..n-1.
  static SimplicialComplex simplex(std::size_t n);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<std::vector<Vertex>>& maximal_faces() const { return faces_; }
  int dimension() const;
  bool is_face(const std::vector<Vertex>& sorted_vertices) const;
  bool contains(const SimplicialPoint& mu) const;
  // All faces with exactly i+1 vertices, sorted.
  std::vector<std::vector<Vertex>> faces_of_dimension(int i) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::vector<Vertex>> faces_;
};

// Distance from mu to the closed simplex spanned by `face`: 2(1 - mass on face).
Rational distance_to_face(const SimplicialPoint& mu, const std::vector<Vertex>& face);

// Distance from mu to the i-skeleton. EmptySkeleton for i < 0 or an empty complex.
Rational distance_to_skeleton(const SimplicialPoint& mu, const SimplicialComplex& C, int i);

// Radii of the skeleton cover at level i: (1/3)10^-i and (5/2)10^-i.
Rational nice_inner_radius(int i);
Rational nice_outer_radius(int i);

// mu lies in the level-i piece around the i-simplex `face`:
// d(mu, face) < (1/3)10^-i and, for i > 0, d(mu, C_{i-1}) > (5/2)10^-i.
bool nice_cover_membership(const SimplicialPoint& mu, const SimplicialComplex& C, int i,
                           const std::vector<Vertex>& face);

// The i-simplex whose level-i piece, thickened by `relax` on both defining
// inequalities, contains mu; nullopt when there is none. Pieces at one level
// stay disjoint for relax <= (1/6)10^-i.
std::optional<std::vector<Vertex>> nice_cover_piece(const SimplicialPoint& mu, const SimplicialComplex& C, int i,
                                                    const Rational& relax = Rational(0));

struct NiceAssignment {
  int level = 0;
  std::vector<Vertex> simplex;
};

// Least level whose piece contains mu. NotInComplex when mu is not in C.
NiceAssignment nice_cover_assign(const SimplicialPoint& mu, const SimplicialComplex& C);

// A map f: X -> C known on a finite table of points.
using SampledMap = std::map<long, SimplicialPoint>;

struct Perturbation {
  SampledMap map;
  std::vector<Vertex> S;       // sorted finite support set
  Rational max_perturbation;   // max_x 2(1 - T(x))
};

// For each x keep the heaviest vertices until the remaining mass is < delta/2
// (ties broken by vertex id), S = union, then renormalize f onto S.
// With `allowed`, S must lie inside it: NoFiniteS when some point carries mass
// >= delta/2 outside `allowed`.
Perturbation perturb_to_finite_support(const SampledMap& f, const Rational& delta,
                                       const std::optional<std::vector<Vertex>>& allowed = std::nullopt);

// A finite group acting on the points {0..m-1} and on the vertex ids {0..V-1}.
struct ComplexAction {
  FiniteAction space;
  std::vector<std::vector<Vertex>> vertex_act;  // [g][v] = g.v

  SimplicialPoint act(int g, const SimplicialPoint& mu) const;
};

struct EquivarianceReport {
  Rational max_defect;                 // max over x, g in E of d(f(gx), g f(x))
  std::vector<Rational> per_generator; // aligned with E
  long worst_point = -1;
  int worst_generator = -1;
  bool accepted = false;               // max_defect < epsilon
};

// MissingSample when f lacks some x or gx.
EquivarianceReport check_equivariance(const SampledMap& f, const ComplexAction& action, const std::vector<int>& E,
                                      const Rational& epsilon);

// min{1, (1/2) min_g (epsilon - defect_g)}; the perturbation budget that keeps
// the map (E, epsilon)-equivariant.
Rational equivariance_slack(const EquivarianceReport& report, const Rational& epsilon);

// A cover of X x Gamma by subsets; (x, g) is stored as g*|X| + x, and Gamma
// acts by h.(x, g) = (hx, hg).
struct EquivariantCover {
  std::size_t space_size = 0;
  std::size_t group_order = 0;
  std::vector<std::vector<char>> sets;  // membership, indexed g*|X| + x
  std::vector<std::string> labels;
};

// The cover made of the invariant sets {(x, g) : g^-1 x in A} for each A.
EquivariantCover invariant_cover(const FiniteAction& action, const std::vector<std::vector<long>>& subsets);

struct CoverConditions {
  bool equivariant = false;
  bool A = false;  // gU = U or gU disjoint from U
  bool B = false;  // stabilizers are (finite) subgroups
  bool C = false;  // multiplicity <= d + 1
  bool D = false;  // finitely many orbits of sets
  bool E = false;  // every {x} x gE lies in one set
  std::size_t multiplicity = 0;
  std::size_t orbit_count = 0;
  std::vector<std::size_t> stabilizer_orders;
  std::string failure;  // first failing condition with a witness, empty if none
  bool ok() const { return equivariant && A && B && C && D && E; }
};

CoverConditions check_cover_conditions(const EquivariantCover& U, const FiniteAction& action,
                                       const std::vector<int>& E, int d);

struct PulledBackCover {
  EquivariantCover cover;
  std::vector<std::pair<int, std::vector<Vertex>>> pieces;  // (level, simplex) per set
  CoverConditions conditions;
  Rational relax;  // (1/6)10^-d
};

// phi(x, g) = g f(g^-1 x), cover = nonempty preimages of the thickened pieces.
// ConditionViolated (with the failing label) unless (A)-(E) all hold.
PulledBackCover cover_from_map(const SampledMap& f, const SimplicialComplex& C, const ComplexAction& action,
                               const std::vector<int>& E);

struct NerveMap {
  SampledMap f;                  // x -> sum_U phi_U(x, e) U
  SimplicialComplex nerve;       // vertex = index of the cover set
  ComplexAction action;          // Gamma permuting the cover sets
  std::vector<std::vector<Rational>> phi;  // [U][(x,g)]
  std::size_t multiplicity = 0;  // d + 1
  int depth = 0;                 // n
  Rational defect;               // measured max d(f(gx), g f(x)), g in E
  Rational bound;                // (2d+2)(4d+6)/n
};

// Telescoped partition of unity of a cover of X x Gamma valid for E^n.
// DepthInsufficient when the E^n-interiors do not cover X x Gamma;
// ConditionViolated when the cover is not equivariant.
NerveMap map_from_cover(const EquivariantCover& U, const FiniteAction& action, const std::vector<int>& E, int n);

struct BlrWitness {
  Rational defect;
  Rational epsilon;                              // (1/3)10^-d
  std::vector<Vertex> S;
  std::vector<int> F;                            // {g : gS meets S}
  std::vector<std::vector<Unit>> colors;         // U_i = f^-1(V_i)
  std::vector<std::vector<int>> finite_sets;     // per color, from the action
  bool finite_sets_in_F = false;
  FiniteGroupoid groupoid;                       // Gamma x| X
  GroupoidDadWitness groupoid_witness;
  GroupoidVerification report;                   // smallness: group parts in F
};

// EquivarianceTooWeak when the defect of f is not below (1/3)10^-d.
BlrWitness dad_witness_from_blr(const SampledMap& f, const SimplicialComplex& C, const ComplexAction& action,
                                const std::vector<int>& E);

}  // namespace dadim
