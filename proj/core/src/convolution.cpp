#include "dadim/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "dadim/union_find.hpp"

namespace dadim {

ConvElement<Complex> to_complex(const ConvElement<GaussianRational>& f) {
  ConvElement<Complex> out(f.groupoid());
  for (const auto& [g, v] : f.coefficients()) out.set(g, to_complex(v));
  return out;
}

RegularRep regular_rep(const ConvElement<Complex>& f, Unit x) {
  RegularRep rep;
  rep.base = x;
  const auto entries = regular_rep_entries(f, x, &rep.basis);
  rep.matrix = Matrix(rep.basis.size(), rep.basis.size());
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = 0; j < entries.size(); ++j) rep.matrix(i, j) = entries[i][j];
  return rep;
}

double reduced_norm(const ConvElement<Complex>& f) {
  if (f.coefficients().empty()) return 0.0;
  const FiniteGroupoid& G = f.groupoid();
  // Orbits that miss supp f contribute zero.
  std::set<Unit> touched;
  for (const auto& [g, v] : f.coefficients()) touched.insert(G.source(g));
  double best = 0.0;
  for (Unit x : G.orbit_representatives()) {
    bool hit = false;
    for (Arrow a : G.arrows_from(x)) {
      if (touched.count(G.range(a))) {
        hit = true;
        break;
      }
    }
    if (hit) best = std::max(best, spectral_norm(regular_rep(f, x).matrix));
  }
  return best;
}

std::size_t bisection_count(const FiniteGroupoid& G, const std::vector<Arrow>& arrows) {
  std::unordered_map<Unit, std::size_t> out_deg, in_deg;
  std::size_t best = 0;
  for (Arrow g : arrows) {
    best = std::max(best, ++out_deg[G.source(g)]);
    best = std::max(best, ++in_deg[G.range(g)]);
  }
  return best;
}

namespace {

void check_unit_function(const FiniteGroupoid& G, const std::vector<double>& phi) {
  if (phi.size() != G.num_units())
    fail(ErrorCode::kUsage, "unit function has " + std::to_string(phi.size()) + " values for " +
                                std::to_string(G.num_units()) + " units");
}

}  // namespace

ConvElement<Complex> cutdown(const ConvElement<Complex>& f, const std::vector<double>& phi) {
  const FiniteGroupoid& G = f.groupoid();
  check_unit_function(G, phi);
  ConvElement<Complex> out(G);
  for (const auto& [g, v] : f.coefficients()) out.set(g, v * phi[G.range(g)] * phi[G.source(g)]);
  return out;
}

ConvElement<Complex> commutator(const ConvElement<Complex>& f, const std::vector<double>& phi) {
  const FiniteGroupoid& G = f.groupoid();
  check_unit_function(G, phi);
  ConvElement<Complex> out(G);
  for (const auto& [g, v] : f.coefficients()) out.set(g, v * (phi[G.source(g)] - phi[G.range(g)]));
  return out;
}

CommutatorReport commutator_report(const ConvElement<Complex>& f, const std::vector<double>& phi) {
  const FiniteGroupoid& G = f.groupoid();
  CommutatorReport r;
  r.commutator_norm = reduced_norm(commutator(f, phi));
  for (const auto& [g, v] : f.coefficients())
    r.oscillation = std::max(r.oscillation, std::fabs(phi[G.source(g)] - phi[G.range(g)]));
  r.M = bisection_count(G, f.support());
  r.f_norm = reduced_norm(f);
  r.bound = static_cast<double>(r.M) * r.oscillation * r.f_norm;
  r.within_bound = r.commutator_norm <= r.bound * (1 + kNormTolerance) + kNormTolerance;
  return r;
}

namespace {

// Per class of a class-stored subgroupoid: the matrix g -> e_{r(g), s(g)}.
std::vector<Matrix> class_blocks(const FiniteGroupoid& G, const Subgroupoid& H, const ConvElement<Complex>& f,
                                 std::vector<std::size_t>* sizes) {
  std::vector<Matrix> out;
  const auto classes = H.orbit_classes(G);
  std::unordered_map<Unit, std::pair<std::size_t, std::size_t>> where;  // unit -> (class, position)
  for (std::size_t c = 0; c < classes.size(); ++c) {
    out.emplace_back(classes[c].size(), classes[c].size());
    if (sizes) sizes->push_back(classes[c].size());
    for (std::size_t i = 0; i < classes[c].size(); ++i) where[classes[c][i]] = {c, i};
  }
  for (const auto& [g, v] : f.coefficients()) {
    const auto [cr, ir] = where.at(G.range(g));
    const auto [cs, is] = where.at(G.source(g));
    if (cr != cs) fail(ErrorCode::kSupportLeak, "arrow joins two classes of the declared subgroupoid");
    out[cr](ir, is) += v;
  }
  return out;
}

}  // namespace

DecompositionReport decompose_via_pou(const ConvElement<Complex>& f, const std::vector<Arrow>& K,
                                      const PartitionOfUnity& pou, const std::vector<Subgroupoid>& declared) {
  const FiniteGroupoid& G = f.groupoid();
  DecompositionReport rep;
  const std::size_t colors = pou.colors();
  if (declared.size() != colors)
    fail(ErrorCode::kUsage, "expected one declared subgroupoid per color");
  if (pou.num_units != G.num_units()) fail(ErrorCode::kUsage, "partition of unity is for a different unit space");

  const std::set<Arrow> Kset(K.begin(), K.end());
  for (const auto& [g, v] : f.coefficients()) {
    if (!Kset.count(g)) {
      rep.code = ErrorCode::kSupportViolation;
      rep.message = "arrow " + std::to_string(g) + " of supp f is outside K";
      return rep;
    }
  }

  rep.f_norm = reduced_norm(f);
  const std::size_t M = bisection_count(G, f.support());
  const int d = static_cast<int>(colors) - 1;
  rep.depth_constant = std::sqrt(2.0) * (1 + std::sqrt(d + 1.0)) / std::sqrt(static_cast<double>(pou.N));

  ConvElement<Complex> total(G);
  rep.osc_below_constant = true;
  for (std::size_t i = 0; i < colors; ++i) {
    std::vector<double> phi(G.num_units());
    ColorTerm term;
    for (std::size_t x = 0; x < phi.size(); ++x) {
      phi[x] = pou.phi_approx(i, static_cast<Unit>(x));
      term.phi_sup = std::max(term.phi_sup, std::fabs(phi[x]));
    }
    const ConvElement<Complex> cut = cutdown(f, phi);
    term.cutdown_support = cut.coefficients().size();
    for (const auto& [g, v] : cut.coefficients()) {
      if (!declared[i].contains(G, g)) {
        rep.code = ErrorCode::kSupportLeak;
        rep.message = "cutdown of color " + std::to_string(i) + " has arrow " + std::to_string(g) +
                      " outside the declared subgroupoid";
        return rep;
      }
    }
    term.commutator = commutator_report(f, phi);
    if (declared[i].by_classes) {
      double block_max = 0;
      for (const Matrix& m : class_blocks(G, declared[i], cut, &term.block_sizes))
        block_max = std::max(block_max, spectral_norm(m));
      term.block_norm_gap = std::fabs(block_max - reduced_norm(cut));
    }
    rep.triangle_bound += term.phi_sup * term.commutator.commutator_norm;
    rep.oscillation_bound += term.phi_sup * term.commutator.bound;
    rep.constant_bound += term.phi_sup * static_cast<double>(M) * rep.depth_constant * rep.f_norm;
    if (!(term.commutator.oscillation < rep.depth_constant)) rep.osc_below_constant = false;
    total = total + cut;
    rep.terms.push_back(std::move(term));
  }
  rep.defect = reduced_norm(total - f);
  auto le = [](double a, double b) { return a <= b * (1 + kNormTolerance) + kNormTolerance; };
  rep.defect_within_triangle = le(rep.defect, rep.triangle_bound);
  rep.triangle_within_oscillation_bound = le(rep.triangle_bound, rep.oscillation_bound);
  bool blocks_ok = true;
  for (const auto& t : rep.terms) blocks_ok = blocks_ok && t.block_norm_gap <= kNormTolerance * (1 + rep.f_norm);
  bool commutators_ok = true;
  for (const auto& t : rep.terms) commutators_ok = commutators_ok && t.commutator.within_bound;

  std::ostringstream msg;
  if (!rep.defect_within_triangle) {
    rep.code = ErrorCode::kBoundViolated;
    msg << "defect " << rep.defect << " exceeds the triangle bound " << rep.triangle_bound;
  } else if (!commutators_ok || !rep.triangle_within_oscillation_bound) {
    rep.code = ErrorCode::kBoundViolated;
    msg << "a commutator norm exceeds M * oscillation * ||f||";
  } else if (!blocks_ok) {
    rep.code = ErrorCode::kBoundViolated;
    msg << "block norms of a cutdown disagree with its reduced norm";
  } else {
    rep.accepted = true;
    msg << "defect " << rep.defect << " <= " << rep.triangle_bound << " <= " << rep.oscillation_bound;
  }
  rep.message = msg.str();
  return rep;
}

DecompositionReport decompose_via_pou(const ConvElement<Complex>& f, const std::vector<Arrow>& K,
                                      const PartitionOfUnity& pou) {
  std::vector<Subgroupoid> declared;
  for (std::size_t i = 0; i < pou.colors(); ++i)
    declared.push_back(generate_subgroupoid(f.groupoid(), restrict_to(f.groupoid(), K, pou.supports[i])));
  return decompose_via_pou(f, K, pou, declared);
}

namespace {

// pi_base(f) with the basis reordered from arrow order to range order.
Matrix block_matrix(const BlockDecomposition::Block& b, const ConvElement<Complex>& f) {
  const RegularRep rep = regular_rep(f, b.base);
  std::unordered_map<Arrow, std::size_t> rep_pos;
  for (std::size_t i = 0; i < rep.basis.size(); ++i) rep_pos[rep.basis[i]] = i;
  const std::size_t m = b.basis.size();
  Matrix mat(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) mat(i, j) = rep.matrix(rep_pos.at(b.basis[i]), rep_pos.at(b.basis[j]));
  return mat;
}

}  // namespace

BlockDecomposition block_decompose(const FiniteGroupoid& H) {
  if (auto loop = H.isotropy_witness())
    fail(ErrorCode::kNotFree, "arrow " + std::to_string(*loop) + " is isotropy at unit " +
                                  std::to_string(H.source(*loop)));
  UnionFind uf(H.num_units());
  for (Unit x = 0; x < static_cast<Unit>(H.num_units()); ++x)
    for (Arrow a : H.arrows_from(x)) uf.unite(static_cast<std::size_t>(H.source(a)), static_cast<std::size_t>(H.range(a)));
  std::map<std::size_t, std::vector<Unit>> classes;
  for (Unit x = 0; x < static_cast<Unit>(H.num_units()); ++x) classes[uf.find(static_cast<std::size_t>(x))].push_back(x);

  BlockDecomposition B;
  for (auto& [root, units] : classes) {
    BlockDecomposition::Block b;
    b.units = std::move(units);
    b.base = b.units.front();
    std::unordered_map<Unit, std::size_t> pos;
    for (std::size_t i = 0; i < b.units.size(); ++i) pos[b.units[i]] = i;
    b.basis.assign(b.units.size(), -1);
    for (Arrow a : H.arrows_from(b.base)) b.basis[pos.at(H.range(a))] = a;
    B.size_histogram[b.units.size()]++;
    B.max_size = std::max(B.max_size, b.units.size());
    B.blocks.push_back(std::move(b));
  }
  std::sort(B.blocks.begin(), B.blocks.end(),
            [](const auto& a, const auto& b) { return a.base < b.base; });

  // Generators: the arrows out of and into each base point. Check that each
  // maps to its matrix unit, that adjoints match, and that products agree on
  // pairs of generators (all pairs for small classes, a seeded sample above).
  std::mt19937_64 rng(0x5eed);
  for (std::size_t bi = 0; bi < B.blocks.size(); ++bi) {
    const auto& b = B.blocks[bi];
    const std::size_t m = b.units.size();
    std::vector<Arrow> gens;
    for (Arrow a : b.basis) {
      gens.push_back(a);
      if (!H.is_unit_arrow(a)) gens.push_back(H.inverse(a));
    }
    std::unordered_map<Unit, std::size_t> pos;
    for (std::size_t i = 0; i < m; ++i) pos[b.units[i]] = i;
    auto image = [&](const ConvElement<Complex>& f) { return block_matrix(b, f); };
    std::vector<Matrix> imgs;
    for (Arrow a : gens) {
      const auto f = ConvElement<Complex>::delta(H, a);
      Matrix img = image(f);
      Matrix expected(m, m);
      expected(pos.at(H.range(a)), pos.at(H.source(a))) = 1.0;
      B.max_error = std::max(B.max_error, (img - expected).max_abs());
      B.max_error = std::max(B.max_error, (image(adjoint(f)) - img.adjoint()).max_abs());
      imgs.push_back(std::move(img));
    }
    auto check_pair = [&](std::size_t i, std::size_t j) {
      const auto prod = convolve(ConvElement<Complex>::delta(H, gens[i]), ConvElement<Complex>::delta(H, gens[j]));
      B.max_error = std::max(B.max_error, (image(prod) - imgs[i] * imgs[j]).max_abs());
      ++B.pairs_checked;
    };
    if (gens.size() <= 32) {
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < gens.size(); ++j) check_pair(i, j);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
      for (int t = 0; t < 64; ++t) check_pair(pick(rng), pick(rng));
    }
  }
  B.verified = B.max_error <= 1e-12;
  return B;
}

std::vector<Matrix> block_matrices(const BlockDecomposition& B, const ConvElement<Complex>& f) {
  std::vector<Matrix> out;
  out.reserve(B.blocks.size());
  for (const auto& b : B.blocks) out.push_back(block_matrix(b, f));
  return out;
}

ConvElement<GaussianRational> random_element(const FiniteGroupoid& G, std::size_t terms, int range,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick_arrow(0, G.num_arrows() - 1);
  std::uniform_int_distribution<int> coef(-range, range);
  ConvElement<GaussianRational> f(G);
  for (std::size_t t = 0; t < terms; ++t) {
    const Arrow g = static_cast<Arrow>(pick_arrow(rng));
    const int re = coef(rng), im = coef(rng);
    f.add(g, GaussianRational(Rational(re), Rational(im)));
  }
  return f;
}

}  // namespace dadim
