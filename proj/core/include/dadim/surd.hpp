#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "dadim/rational.hpp"

namespace dadim {

// Exact element of Q(sqrt(p_0), ..., sqrt(p_{k-1})) for positive rationals p_i,
// stored as a sum of rational multiples of products of the square roots.
// Used to decide inequalities involving square roots without floating point.
class SurdSum {
 public:
  using Radicands = std::shared_ptr<const std::vector<Rational>>;

  explicit SurdSum(Radicands radicands) : radicands_(std::move(radicands)) {}

  static SurdSum constant(Radicands radicands, const Rational& value);
  // sqrt(p_index)
  static SurdSum root(Radicands radicands, std::size_t index);

  SurdSum operator+(const SurdSum& other) const;
  SurdSum operator-(const SurdSum& other) const;
  SurdSum operator*(const SurdSum& other) const;
  SurdSum operator*(const Rational& scale) const;
  SurdSum operator-() const { return *this * Rational(-1); }

  // -1, 0 or +1, decided exactly.
  int sign() const;
  double approx() const;

  const Radicands& radicands() const { return radicands_; }

 private:
  void add_term(std::uint32_t mask, const Rational& coeff);

  Radicands radicands_;
  std::map<std::uint32_t, Rational> terms_;  // mask of radicals -> coefficient
};

SurdSum::Radicands make_radicands(std::vector<Rational> values);

}  // namespace dadim
