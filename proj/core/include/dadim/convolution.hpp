#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dadim/errors.hpp"
#include "dadim/groupoid.hpp"
#include "dadim/linalg.hpp"
#include "dadim/pou.hpp"
#include "dadim/rational.hpp"

namespace dadim {

// a + bi with rational parts; exact coefficients for algebra checks.
struct GaussianRational {
  Rational re, im;

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(int r) : re(r), im(0) {}

  GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
  GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
  GaussianRational operator*(const GaussianRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussianRational& o) const { return !(*this == o); }
};

inline Complex conj_of(const Complex& z) { return std::conj(z); }
inline GaussianRational conj_of(const GaussianRational& z) { return {z.re, -z.im}; }
inline bool is_zero(const Complex& z) { return z == Complex(0.0); }
inline bool is_zero(const GaussianRational& z) { return sgn(z.re) == 0 && sgn(z.im) == 0; }
inline Complex to_complex(const Complex& z) { return z; }
inline Complex to_complex(const GaussianRational& z) { return {to_double(z.re), to_double(z.im)}; }

// Finitely supported function on the arrows of a groupoid. Zero coefficients
// are never stored. The groupoid must outlive the element.
template <class S>
class ConvElement {
 public:
  ConvElement() = default;
  explicit ConvElement(const FiniteGroupoid& G) : G_(&G) {}

  static ConvElement delta(const FiniteGroupoid& G, Arrow g, S value = S(1)) {
    ConvElement f(G);
    f.set(g, value);
    return f;
  }

  const FiniteGroupoid& groupoid() const { return *G_; }
  const FiniteGroupoid* groupoid_ptr() const { return G_; }
  const std::map<Arrow, S>& coefficients() const { return coeffs_; }

  S at(Arrow g) const {
    auto it = coeffs_.find(g);
    return it == coeffs_.end() ? S(0) : it->second;
  }
  void set(Arrow g, const S& value) {
    if (!G_->valid_arrow(g)) fail(ErrorCode::kUsage, "arrow " + std::to_string(g) + " is not in the groupoid");
    if (is_zero(value))
      coeffs_.erase(g);
    else
      coeffs_[g] = value;
  }
  void add(Arrow g, const S& value) { set(g, at(g) + value); }

  std::vector<Arrow> support() const {
    std::vector<Arrow> out;
    out.reserve(coeffs_.size());
    for (const auto& [g, v] : coeffs_) out.push_back(g);
    return out;
  }
  bool operator==(const ConvElement& o) const { return G_ == o.G_ && coeffs_ == o.coeffs_; }

 private:
  const FiniteGroupoid* G_ = nullptr;
  std::map<Arrow, S> coeffs_;
};

template <class S>
void require_same_groupoid(const ConvElement<S>& a, const ConvElement<S>& b) {
  if (a.groupoid_ptr() != b.groupoid_ptr())
    fail(ErrorCode::kGroupoidMismatch, "elements live on different groupoids");
}

// (f1 f2)(g) = sum over g1 g2 = g of f1(g1) f2(g2).
template <class S>
ConvElement<S> convolve(const ConvElement<S>& f1, const ConvElement<S>& f2) {
  require_same_groupoid(f1, f2);
  const FiniteGroupoid& G = f1.groupoid();
  std::unordered_map<Unit, std::vector<std::pair<Arrow, S>>> by_range;
  for (const auto& [h, v] : f2.coefficients()) by_range[G.range(h)].emplace_back(h, v);
  std::map<Arrow, S> acc;
  for (const auto& [g, a] : f1.coefficients()) {
    auto it = by_range.find(G.source(g));
    if (it == by_range.end()) continue;
    for (const auto& [h, b] : it->second) {
      const Arrow gh = *G.compose(g, h);
      auto [pos, inserted] = acc.emplace(gh, a * b);
      if (!inserted) pos->second += a * b;
    }
  }
  ConvElement<S> out(G);
  for (const auto& [g, v] : acc) out.set(g, v);
  return out;
}

template <class S>
ConvElement<S> adjoint(const ConvElement<S>& f) {
  ConvElement<S> out(f.groupoid());
  for (const auto& [g, v] : f.coefficients()) out.set(f.groupoid().inverse(g), conj_of(v));
  return out;
}

template <class S>
ConvElement<S> operator+(const ConvElement<S>& a, const ConvElement<S>& b) {
  require_same_groupoid(a, b);
  ConvElement<S> out = a;
  for (const auto& [g, v] : b.coefficients()) out.add(g, v);
  return out;
}

template <class S>
ConvElement<S> operator-(const ConvElement<S>& a, const ConvElement<S>& b) {
  require_same_groupoid(a, b);
  ConvElement<S> out = a;
  for (const auto& [g, v] : b.coefficients()) out.add(g, S(0) - v);
  return out;
}

ConvElement<Complex> to_complex(const ConvElement<GaussianRational>& f);

// pi_x(f) on the basis s^-1(x) in increasing arrow order:
// entry [i][j] = f(b_i b_j^-1).
template <class S>
std::vector<std::vector<S>> regular_rep_entries(const ConvElement<S>& f, Unit x, std::vector<Arrow>* basis_out = nullptr) {
  const FiniteGroupoid& G = f.groupoid();
  const std::vector<Arrow> basis = G.arrows_from(x);
  std::unordered_map<Arrow, std::size_t> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], i);
  std::unordered_map<Unit, std::vector<std::pair<Arrow, S>>> by_source;
  for (const auto& [g, v] : f.coefficients()) by_source[G.source(g)].emplace_back(g, v);
  std::vector<std::vector<S>> m(basis.size(), std::vector<S>(basis.size(), S(0)));
  // Column j is pi_x(f) applied to the basis vector at b_j.
  for (std::size_t j = 0; j < basis.size(); ++j) {
    auto it = by_source.find(G.range(basis[j]));
    if (it == by_source.end()) continue;
    for (const auto& [g, v] : it->second) m[pos.at(*G.compose(g, basis[j]))][j] += v;
  }
  if (basis_out) *basis_out = basis;
  return m;
}

struct RegularRep {
  Unit base = 0;
  std::vector<Arrow> basis;
  Matrix matrix;
};

RegularRep regular_rep(const ConvElement<Complex>& f, Unit x);

// max over one unit per orbit of the spectral norm of pi_x(f).
double reduced_norm(const ConvElement<Complex>& f);

// Least number of bisections (r and s both injective) covering the arrows.
// Equals the largest number of arrows sharing a source or a range: the
// arrows are the edges of a bipartite multigraph, edge-colorable with that
// many colors.
std::size_t bisection_count(const FiniteGroupoid& G, const std::vector<Arrow>& arrows);

// phi is indexed by unit.
ConvElement<Complex> cutdown(const ConvElement<Complex>& f, const std::vector<double>& phi);
// [f, phi](g) = f(g) (phi(s(g)) - phi(r(g))).
ConvElement<Complex> commutator(const ConvElement<Complex>& f, const std::vector<double>& phi);

struct CommutatorReport {
  double commutator_norm = 0;
  double oscillation = 0;   // max over supp f of |phi(s(g)) - phi(r(g))|
  std::size_t M = 0;        // bisection_count(supp f)
  double f_norm = 0;
  double bound = 0;         // M * oscillation * f_norm
  bool within_bound = false;
};

CommutatorReport commutator_report(const ConvElement<Complex>& f, const std::vector<double>& phi);

struct ColorTerm {
  double phi_sup = 0;            // ||phi_i|| = sup |phi_i|
  CommutatorReport commutator;
  std::size_t cutdown_support = 0;
  std::vector<std::size_t> block_sizes;  // classes of the declared subgroupoid
  double block_norm_gap = 0;     // |reduced_norm(cutdown) - max block norm|
};

struct DecompositionReport {
  bool accepted = false;
  ErrorCode code = ErrorCode::kOk;
  std::string message;
  double f_norm = 0;
  double defect = 0;             // ||sum phi_i f phi_i - f||
  double triangle_bound = 0;     // sum ||phi_i|| ||[f, phi_i]||
  double oscillation_bound = 0;        // sum ||phi_i|| M osc_i ||f||
  double depth_constant = 0;     // sqrt2 (1 + sqrt(d+1)) / sqrt N
  double constant_bound = 0;     // sum ||phi_i|| M depth_constant ||f||
  bool defect_within_triangle = false;
  bool triangle_within_oscillation_bound = false;
  bool osc_below_constant = false;
  std::vector<ColorTerm> terms;
};

// Relative slack used for the floating comparisons in the report.
inline constexpr double kNormTolerance = 1e-9;

// SupportViolation when supp f is not inside K; SupportLeak when a cutdown has
// an arrow outside the declared subgroupoid of its color.
DecompositionReport decompose_via_pou(const ConvElement<Complex>& f, const std::vector<Arrow>& K,
                                      const PartitionOfUnity& pou, const std::vector<Subgroupoid>& declared);
// Declared subgroupoid of color i: generated by K restricted to the support of phi_i.
DecompositionReport decompose_via_pou(const ConvElement<Complex>& f, const std::vector<Arrow>& K,
                                      const PartitionOfUnity& pou);

struct BlockDecomposition {
  struct Block {
    std::vector<Unit> units;   // sorted; matrix index = position here
    Unit base = 0;             // least unit
    std::vector<Arrow> basis;  // s^-1(base), ordered by range position
  };
  std::vector<Block> blocks;
  std::map<std::size_t, std::size_t> size_histogram;  // m -> number of classes
  std::size_t max_size = 0;
  std::size_t pairs_checked = 0;
  double max_error = 0;
  bool verified = false;
};

// NotFree (with the isotropy arrow in the message) when H has isotropy.
BlockDecomposition block_decompose(const FiniteGroupoid& H);
// pi_base(f) for every block, rows and columns ordered by unit position.
std::vector<Matrix> block_matrices(const BlockDecomposition& B, const ConvElement<Complex>& f);

// Random sparse element: `terms` arrows with Gaussian-integer coefficients in
// [-range, range]; seeded.
ConvElement<GaussianRational> random_element(const FiniteGroupoid& G, std::size_t terms, int range, std::uint64_t seed);

}  // namespace dadim
