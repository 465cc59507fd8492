#include "dadim/dad_witness.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace dadim {

namespace {

constexpr long kBlowupCap = 1'000'000;

std::vector<long> symmetric_generators(long N) {
  std::vector<long> e;
  for (long n = -N; n <= N; ++n) e.push_back(n);
  return e;
}

// The least cylinder (in symbol/digit order) of the given length whose
// translates up to `radius` are disjoint from it.
std::optional<std::string> least_separated_word(const SystemPtr& sys, int length, long radius) {
  if (sys->kind() == SymbolicSystem::Kind::kOdometer) {
    // Every depth-L cylinder is a translate of 0^L, so the property does not
    // depend on the word.
    std::string zero(static_cast<std::size_t>(length), '\0');
    if (disjoint_translates_radius(ClopenSet::cylinder(sys, zero), radius)) return zero;
    return std::nullopt;
  }
  for (const auto& w : sys->language(length)) {
    if (disjoint_translates_radius(ClopenSet::cylinder(sys, w), radius)) return w;
  }
  return std::nullopt;
}

}  // namespace

long default_blowup_bound(std::size_t generator_count, std::size_t colors, long gap) {
  const long base = 2 * static_cast<long>(generator_count) + 1;
  const long exponent = std::max(1L, gap) * static_cast<long>(std::max<std::size_t>(1, colors));
  long value = 1;
  for (long i = 0; i < exponent; ++i) {
    if (value > kBlowupCap / base) return kBlowupCap;
    value *= base;
  }
  return std::min(value, kBlowupCap);
}

long default_blowup_bound(const DadWitness& w) {
  long gap = 1;
  for (const auto& c : w.colors) {
    if (c.is_empty()) continue;
    try {
      auto rep = return_time_report(c, c.system()->depth_limit());
      gap = std::max(gap, *rep.max_gap);
    } catch (const Error&) {
      return kBlowupCap;
    }
  }
  return default_blowup_bound(w.generators.size(), w.colors.size(), gap);
}

DadConstruction construct_minimal_z_witness(const SystemPtr& sys, long N, const ZWitnessDepths& depths) {
  if (N <= 0) fail(ErrorCode::kUsage, "N must be positive");
  if (depths.refine_levels < 0) fail(ErrorCode::kUsage, "refine_levels must be nonnegative");
  if (!sys->minimal()) fail(ErrorCode::kNotMinimal, "system is not verifiably minimal");
  if (sys->looks_periodic()) fail(ErrorCode::kNotMinimal, "subshift is periodic, so the space is finite");

  const long radius = 5 * N;
  DadConstruction out;
  out.N = N;
  std::optional<std::string> word;
  int length = depths.base_length.value_or(1);
  if (depths.base_length) {
    if (length < 1 || length > sys->depth_limit() ||
        (sys->kind() == SymbolicSystem::Kind::kSubshift && length + radius > sys->depth_limit()))
      fail(ErrorCode::kDepthExceeded, "base length outside the depth limit");
    word = least_separated_word(sys, length, radius);
    if (!word) fail(ErrorCode::kUsage, "no cylinder of length " + std::to_string(length) + " has disjoint translates up to " +
                                           std::to_string(radius));
  } else {
    for (; length <= sys->depth_limit(); ++length) {
      if (sys->kind() == SymbolicSystem::Kind::kSubshift && length + radius > sys->depth_limit()) break;
      word = least_separated_word(sys, length, radius);
      if (word) break;
    }
  }
  if (!word) fail(ErrorCode::kDepthExceeded, "no cylinder with disjoint translates within the depth limit");

  out.base = ClopenSet::cylinder(sys, *word);
  const int finer_length = length + depths.refine_levels;
  if (finer_length > sys->depth_limit()) fail(ErrorCode::kDepthExceeded, "refined cylinder exceeds the depth limit");
  std::string finer;
  if (sys->kind() == SymbolicSystem::Kind::kOdometer) {
    finer = *word + std::string(static_cast<std::size_t>(depths.refine_levels), '\0');
  } else {
    for (const auto& w : sys->language(finer_length)) {
      if (w.compare(0, word->size(), *word) == 0) {
        finer = w;
        break;
      }
    }
  }
  out.refined = ClopenSet::cylinder(sys, finer);
  out.return_bound = *return_time_report(out.refined, sys->depth_limit()).max_gap;

  ClopenSet near_u = ClopenSet::empty(sys);
  ClopenSet near_v = ClopenSet::empty(sys);
  for (long n = -N; n <= N; ++n) {
    near_u = near_u.unite(translate(out.base, n));
    near_v = near_v.unite(translate(out.refined, n));
  }
  out.witness.generators = symmetric_generators(N);
  out.witness.colors = {near_u, near_v.complement()};

  const long bound = default_blowup_bound(out.witness.generators.size(), 2, out.return_bound);
  for (const auto& color : out.witness.colors) {
    auto reached = broken_orbit_elements(color, out.witness.generators, bound);
    if (!reached) fail(ErrorCode::kBlowupExceeded, "constructed color has unbounded broken orbits");
    out.witness.finite_sets.push_back(*reached);
  }
  return out;
}

std::optional<std::vector<long>> broken_orbit_elements(const ClopenSet& color,
                                                       const std::vector<long>& generators,
                                                       long bound) {
  if (color.is_empty()) return std::vector<long>{};
  std::map<long, ClopenSet> reach;
  std::map<long, ClopenSet> landing;  // (-m).U, cached
  auto landing_set = [&](long m) -> const ClopenSet& {
    auto it = landing.find(m);
    if (it == landing.end()) it = landing.emplace(m, translate(color, -m)).first;
    return it->second;
  };

  reach.emplace(0, color);
  std::deque<long> queue{0};
  std::set<long> queued{0};
  while (!queue.empty()) {
    const long n = queue.front();
    queue.pop_front();
    queued.erase(n);
    const ClopenSet current = reach.at(n);
    for (long e : generators) {
      if (e == 0) continue;
      const long m = n + e;
      ClopenSet cand = current.intersect(landing_set(m));
      if (cand.is_empty()) continue;
      auto it = reach.find(m);
      if (it == reach.end()) {
        reach.emplace(m, std::move(cand));
        if (static_cast<long>(reach.size()) > bound) return std::nullopt;
      } else if (!cand.subset_of(it->second)) {
        it->second = it->second.unite(cand);
      } else {
        continue;
      }
      if (queued.insert(m).second) queue.push_back(m);
    }
  }
  std::vector<long> out;
  out.reserve(reach.size());
  for (const auto& [n, set] : reach) out.push_back(n);
  return out;
}

DadVerification verify_dad_witness(const SystemPtr& sys, const DadWitness& w, long blowup_bound) {
  DadVerification rep;
  rep.blowup_bound = blowup_bound;
  for (const auto& c : w.colors) {
    if (c.system() != sys) fail(ErrorCode::kUsage, "witness color belongs to another system");
  }
  {
    std::set<long> e(w.generators.begin(), w.generators.end());
    for (long g : w.generators) {
      if (!e.count(-g)) {
        rep.code = ErrorCode::kUsage;
        rep.message = "generator set is not symmetric";
        return rep;
      }
    }
  }
  ClopenSet cover = ClopenSet::empty(sys);
  for (const auto& c : w.colors) cover = cover.unite(c);
  rep.covers = cover.is_whole();
  if (!rep.covers) {
    rep.code = ErrorCode::kCoverGap;
    rep.message = "colors do not cover the space";
    return rep;
  }
  for (std::size_t i = 0; i < w.colors.size(); ++i) {
    auto reached = broken_orbit_elements(w.colors[i], w.generators, blowup_bound);
    if (!reached) {
      rep.code = ErrorCode::kBlowupExceeded;
      rep.failing_color = i;
      rep.message = "color " + std::to_string(i) + " reaches more than " +
                    std::to_string(blowup_bound) +
                    " group elements (unbounded broken orbits, or the bound is too small)";
      rep.reached.push_back({});
      rep.matches_declared.push_back(false);
      return rep;
    }
    const bool declared = i < w.finite_sets.size() && !w.finite_sets[i].empty();
    bool match = true;
    if (declared) {
      auto d = w.finite_sets[i];
      std::sort(d.begin(), d.end());
      match = d == *reached;
    }
    rep.matches_declared.push_back(match);
    rep.reached.push_back(std::move(*reached));
    if (!match && rep.code == ErrorCode::kOk) {
      rep.code = ErrorCode::kWitnessMismatch;
      rep.failing_color = i;
      rep.message = "declared finite set of color " + std::to_string(i) + " differs from the exploration";
    }
  }
  rep.accepted = rep.code == ErrorCode::kOk;
  if (rep.accepted) rep.message = "accepted";
  return rep;
}

}  // namespace dadim
