#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dadim/errors.hpp"
#include "dadim/groupoid.hpp"

namespace dadim {

using Point = std::size_t;

// A finite set {0..n-1} with an integer-valued metric.
class FiniteMetricSpace {
 public:
  virtual ~FiniteMetricSpace() = default;

  virtual std::size_t size() const = 0;
  virtual long dist(Point a, Point b) const = 0;
  // Points within distance r of p (closed ball), sorted.
  virtual std::vector<Point> ball(Point p, long r) const;
  virtual long set_diameter(const std::vector<Point>& points) const;
  virtual std::string describe() const = 0;

  long diameter() const;
  // Largest ball size for each radius 0..max_radius.
  std::vector<std::size_t> ball_profile(long max_radius) const;
  // Exhaustive for at most 500 points, seeded sampling of triples above.
  // Returns a description of the first violation, or nullopt.
  std::optional<std::string> metric_violation() const;
};

// Box in Z^n (n = 1 or 2 in practice, any n supported) with the l1 metric.
// Points are indexed row-major with the last coordinate fastest.
class GridSpace : public FiniteMetricSpace {
 public:
  GridSpace(std::vector<long> lo, std::vector<long> hi);

  std::size_t size() const override { return size_; }
  long dist(Point a, Point b) const override;
  std::vector<Point> ball(Point p, long r) const override;
  long set_diameter(const std::vector<Point>& points) const override;
  std::string describe() const override;

  std::size_t dims() const { return lo_.size(); }
  const std::vector<long>& lo() const { return lo_; }
  const std::vector<long>& hi() const { return hi_; }
  std::vector<long> coords(Point p) const;
  Point index(const std::vector<long>& c) const;

 private:
  std::vector<long> lo_, hi_, extent_;
  std::size_t size_ = 1;
};

// Explicit distance matrix.
class TableSpace : public FiniteMetricSpace {
 public:
  explicit TableSpace(std::vector<std::vector<long>> matrix, std::string label = "table");
  // Shortest-path metric of a connected graph with positive integer weights.
  static TableSpace from_edges(std::size_t n, const std::vector<std::tuple<Point, Point, long>>& edges);
  // Path graph 0 - 1 - ... - n-1 with unit edges.
  static TableSpace path(std::size_t n);

  std::size_t size() const override { return d_.size(); }
  long dist(Point a, Point b) const override { return d_[a][b]; }
  std::string describe() const override { return label_; }

 private:
  std::vector<std::vector<long>> d_;
  std::string label_;
};

// The ball of radius r around the identity in a finitely generated group with
// its word metric: d(s,t) = word length of s^-1 t, measured in the whole group.
// Elements are either integer vectors (Z^n with the given generators) or
// permutations of {0..k-1}.
class GroupBallSpace : public FiniteMetricSpace {
 public:
  enum class Kind { kFreeAbelian, kPermutation };

  GroupBallSpace(Kind kind, std::vector<std::vector<long>> generators, long radius);

  std::size_t size() const override { return elements_.size(); }
  long dist(Point a, Point b) const override;
  std::string describe() const override;

  const std::vector<std::vector<long>>& elements() const { return elements_; }
  long word_length(const std::vector<long>& element) const;
  long radius() const { return radius_; }

 private:
  std::vector<long> multiply(const std::vector<long>& a, const std::vector<long>& b) const;
  std::vector<long> invert(const std::vector<long>& a) const;

  Kind kind_;
  std::vector<std::vector<long>> generators_;
  long radius_;
  std::vector<std::vector<long>> elements_;        // word length <= radius, BFS order
  std::vector<std::vector<long>> length_keys_;     // word length <= 2 radius, sorted
  std::vector<long> length_values_;
};

struct AsdimWitness {
  long scale_R = 1;
  long bound_S = 0;
  std::vector<std::vector<std::vector<Point>>> families;  // family -> classes -> points
};

struct AsdimVerification {
  bool accepted = false;
  ErrorCode code = ErrorCode::kOk;
  std::string message;
  std::optional<std::pair<Point, Point>> violating_pair;
  std::optional<std::size_t> family;
  long max_class_diameter = 0;
};

AsdimVerification verify_asdim_witness(const FiniteMetricSpace& X, const AsdimWitness& w);

// Interval witness (n = 1, L = 5R) or brick-wall witness (n = 2, L = 10R).
AsdimWitness construct_grid_witness(const GridSpace& X, long R);

struct MinColors {
  std::size_t colors = 0;
  AsdimWitness witness;  // an accepted witness using exactly `colors` families
};

// Least number of R-separated families of S-bounded classes covering X.
// TooLarge above max_points (at most 18; the search is 3^n).
MinColors exhaustive_min_colors(const FiniteMetricSpace& X, long R, long S, std::size_t max_points = 16);

// Components of `points` under the relation d <= R.
std::vector<std::vector<Point>> scale_components(const FiniteMetricSpace& X, const std::vector<Point>& points,
                                                 long R);

struct BridgeResult {
  AsdimVerification asdim;
  FiniteGroupoid groupoid;  // full pair groupoid on the points
  GroupoidDadWitness witness;
  GroupoidVerification groupoid_report;
  std::uint64_t K_size = 0;
  long generated_max_diameter = 0;  // largest orbit class of a generated subgroupoid
  bool within_S_tube = false;
  bool round_trip = false;  // generated orbit classes == witness classes
  bool accepted = false;
  ErrorCode code = ErrorCode::kOk;
  std::string message;
};

// K = {(x,y) : d(x,y) <= R}, colors = unions of the families; the generated
// subgroupoid of each color must lie in the S-tube.
BridgeResult bridge_to_groupoid(const FiniteMetricSpace& X, const AsdimWitness& w);

}  // namespace dadim
