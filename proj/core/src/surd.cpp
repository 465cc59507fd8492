#include "dadim/surd.hpp"

#include <bit>
#include <cmath>

#include "dadim/errors.hpp"

namespace dadim {

SurdSum::Radicands make_radicands(std::vector<Rational> values) {
  for (const auto& v : values) {
    if (v <= 0) fail(ErrorCode::kParse, "radicand must be positive");
  }
  if (values.size() > 31) fail(ErrorCode::kTooLarge, "too many radicands");
  return std::make_shared<const std::vector<Rational>>(std::move(values));
}

SurdSum SurdSum::constant(Radicands radicands, const Rational& value) {
  SurdSum s(std::move(radicands));
  s.add_term(0, value);
  return s;
}

SurdSum SurdSum::root(Radicands radicands, std::size_t index) {
  SurdSum s(std::move(radicands));
  s.add_term(std::uint32_t{1} << index, Rational(1));
  return s;
}

void SurdSum::add_term(std::uint32_t mask, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(mask, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

SurdSum SurdSum::operator+(const SurdSum& other) const {
  SurdSum out = *this;
  for (const auto& [mask, c] : other.terms_) out.add_term(mask, c);
  return out;
}

SurdSum SurdSum::operator-(const SurdSum& other) const {
  SurdSum out = *this;
  for (const auto& [mask, c] : other.terms_) out.add_term(mask, -c);
  return out;
}

SurdSum SurdSum::operator*(const Rational& scale) const {
  SurdSum out(radicands_);
  if (scale == 0) return out;
  for (const auto& [mask, c] : terms_) out.terms_.emplace(mask, c * scale);
  return out;
}

SurdSum SurdSum::operator*(const SurdSum& other) const {
  SurdSum out(radicands_);
  const auto& p = *radicands_;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      Rational c = ca * cb;
      std::uint32_t shared = ma & mb;
      while (shared != 0) {
        int i = std::countr_zero(shared);
        c *= p[static_cast<std::size_t>(i)];
        shared &= shared - 1;
      }
      out.add_term(ma ^ mb, c);
    }
  }
  return out;
}

int SurdSum::sign() const {
  if (terms_.empty()) return 0;
  std::uint32_t all = 0;
  for (const auto& [mask, c] : terms_) all |= mask;
  if (all == 0) return sgn(terms_.begin()->second);

  // Split as u + v*sqrt(p_k) with k the highest radical present.
  int k = 31 - std::countl_zero(all);
  std::uint32_t bit = std::uint32_t{1} << k;
  SurdSum u(radicands_), v(radicands_);
  for (const auto& [mask, c] : terms_) {
    if (mask & bit) {
      v.add_term(mask ^ bit, c);
    } else {
      u.add_term(mask, c);
    }
  }
  int su = u.sign();
  int sv = v.sign();
  if (su >= 0 && sv >= 0) return (su > 0 || sv > 0) ? 1 : 0;
  if (su <= 0 && sv <= 0) return -1;
  SurdSum w = u * u - v * v * (*radicands_)[static_cast<std::size_t>(k)];
  int sw = w.sign();
  return su > 0 ? sw : -sw;
}

double SurdSum::approx() const {
  const auto& p = *radicands_;
  double total = 0.0;
  for (const auto& [mask, c] : terms_) {
    double term = c.get_d();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (mask & (std::uint32_t{1} << i)) term *= std::sqrt(p[i].get_d());
    }
    total += term;
  }
  return total;
}

}  // namespace dadim
