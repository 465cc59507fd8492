#include "dadim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dadim::io {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::kParse, std::string("missing key \"") + key + "\"");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad ") + what + ": " + e.what());
  }
}

std::vector<std::vector<Unit>> unit_lists(const Json& j) {
  return get_as<std::vector<std::vector<Unit>>>(j, "unit lists");
}

Json code_json(ErrorCode c) { return std::string(error_name(c)); }

}  // namespace

Json read_json(const std::filesystem::path& path) { return parse_json(read_text(path)); }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParse, e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, dump(j)); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json rational_json(const Rational& q) { return to_string(q); }

Rational rational_from(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return make_rational(j.get<std::int64_t>());
  fail(ErrorCode::kParse, "expected a rational as \"p/q\"");
}

std::vector<long> long_list(const Json& j) { return get_as<std::vector<long>>(j, "integer list"); }
std::vector<Arrow> arrow_list(const Json& j) { return get_as<std::vector<Arrow>>(j, "arrow list"); }

// ---- symbolic systems and witnesses ----

SystemPtr system_from_json(const Json& j) {
  const std::string kind = get_as<std::string>(need(j, "kind"), "kind");
  const int depth_limit = j.contains("depth_limit") ? get_as<int>(j.at("depth_limit"), "depth_limit")
                                                    : SymbolicSystem::kDefaultDepthLimit;
  if (kind == "odometer") return SymbolicSystem::odometer(get_as<std::vector<int>>(need(j, "base"), "base"), depth_limit);
  if (kind != "subshift") fail(ErrorCode::kParse, "unknown system kind '" + kind + "'");
  auto alphabet = get_as<std::vector<std::string>>(need(j, "alphabet"), "alphabet");
  if (j.contains("substitution"))
    return SymbolicSystem::substitution(alphabet, get_as<std::map<std::string, std::string>>(j.at("substitution"), "substitution"),
                                        depth_limit);
  if (j.contains("forbidden"))
    return SymbolicSystem::forbidden_words(alphabet, get_as<std::vector<std::string>>(j.at("forbidden"), "forbidden"),
                                           depth_limit);
  fail(ErrorCode::kParse, "subshift needs \"substitution\" or \"forbidden\"");
}

Json system_to_json(const SymbolicSystem& s) {
  Json j;
  j["depth_limit"] = s.depth_limit();
  if (s.kind() == SymbolicSystem::Kind::kOdometer) {
    j["kind"] = "odometer";
    j["base"] = s.base_pattern();
    return j;
  }
  j["kind"] = "subshift";
  j["alphabet"] = s.alphabet();
  if (s.source() == SymbolicSystem::SubshiftSource::kSubstitution) {
    Json rules = Json::object();
    for (std::size_t a = 0; a < s.alphabet().size(); ++a) rules[s.alphabet()[a]] = s.format_word(s.images()[a]);
    j["substitution"] = rules;
  } else {
    Json words = Json::array();
    for (const auto& w : s.forbidden()) words.push_back(s.format_word(w));
    j["forbidden"] = words;
  }
  return j;
}

Json clopen_to_json(const ClopenSet& s) {
  Json cells = Json::array();
  for (const auto& c : s.cells()) cells.push_back(s.system()->format_word(c));
  return {{"offset", s.offset()}, {"length", s.length()}, {"cells", cells}};
}

ClopenSet clopen_from_json(const SystemPtr& sys, const Json& j) {
  const long offset = j.contains("offset") ? get_as<long>(j.at("offset"), "offset") : 0;
  const int length = get_as<int>(need(j, "length"), "length");
  std::vector<std::string> cells;
  for (const auto& c : get_as<std::vector<std::string>>(need(j, "cells"), "cells")) {
    if (static_cast<int>(c.size()) != length) fail(ErrorCode::kParse, "cell '" + c + "' does not have the window length");
    cells.push_back(sys->parse_word(c));
  }
  return ClopenSet::from_cells(sys, offset, length, std::move(cells));
}

Json witness_to_json(const DadWitness& w) {
  Json colors = Json::array();
  for (const auto& c : w.colors) colors.push_back(clopen_to_json(c));
  return {{"E", w.generators}, {"colors", colors}, {"finite_sets", w.finite_sets}};
}

DadWitness witness_from_json(const SystemPtr& sys, const Json& j) {
  DadWitness w;
  w.generators = long_list(need(j, "E"));
  for (const auto& c : need(j, "colors")) w.colors.push_back(clopen_from_json(sys, c));
  if (j.contains("finite_sets")) w.finite_sets = get_as<std::vector<std::vector<long>>>(j.at("finite_sets"), "finite_sets");
  return w;
}

Json report_to_json(const DadVerification& r) {
  Json j{{"accepted", r.accepted}, {"code", code_json(r.code)}, {"message", r.message},
         {"covers", r.covers}, {"blowup_bound", r.blowup_bound}, {"reached", r.reached},
         {"matches_declared", r.matches_declared}};
  if (r.failing_color) j["failing_color"] = *r.failing_color;
  return j;
}

// ---- groupoids ----

FiniteAction action_from_json(const Json& j) {
  if (j.contains("rotation")) return FiniteAction::rotation(get_as<int>(j.at("rotation"), "rotation"));
  if (j.contains("trivial")) return FiniteAction::trivial(get_as<int>(j.at("trivial"), "trivial"));
  auto act = get_as<std::vector<std::vector<int>>>(need(j, "act"), "act");
  if (j.contains("cyclic")) return FiniteAction::cyclic(get_as<int>(j.at("cyclic"), "cyclic"), std::move(act));
  return FiniteAction::make(get_as<std::vector<std::vector<int>>>(need(j, "mult"), "mult"), std::move(act));
}

Json action_to_json(const FiniteAction& a) { return {{"mult", a.mult}, {"act", a.act}}; }

FiniteGroupoid groupoid_from_json(const Json& j) {
  if (j.contains("pair")) return FiniteGroupoid::pair(get_as<std::size_t>(j.at("pair"), "pair"));
  if (j.contains("block_pairs"))
    return FiniteGroupoid::block_pairs(get_as<std::vector<std::size_t>>(j.at("block_pairs"), "block_pairs"));
  if (j.contains("action")) return FiniteGroupoid::transformation(action_from_json(j.at("action")));
  const Json& units = need(j, "units");
  const std::size_t n = units.is_array() ? units.size() : get_as<std::size_t>(units, "units");
  if (units.is_array()) {
    for (std::size_t i = 0; i < n; ++i)
      if (get_as<std::size_t>(units[i], "unit") != i) fail(ErrorCode::kParse, "units must be 0..n-1 in order");
  }
  std::vector<FiniteGroupoid::ArrowSpec> arrows;
  for (const auto& a : need(j, "arrows")) {
    const auto id = get_as<std::size_t>(need(a, "id"), "arrow id");
    if (id != arrows.size()) fail(ErrorCode::kParse, "arrow ids must be 0..m-1 in order");
    arrows.push_back({get_as<Unit>(need(a, "s"), "source"), get_as<Unit>(need(a, "r"), "range")});
  }
  std::vector<FiniteGroupoid::Composition> comp;
  for (const auto& c : need(j, "compose")) {
    const auto t = get_as<std::vector<Arrow>>(c, "composition triple");
    if (t.size() != 3) fail(ErrorCode::kParse, "composition entries are [g,h,gh]");
    comp.push_back({t[0], t[1], t[2]});
  }
  return FiniteGroupoid::from_table(n, std::move(arrows), comp);
}

Json groupoid_to_json(const FiniteGroupoid& G) {
  switch (G.form()) {
    case FiniteGroupoid::Form::kPair:
      return {{"pair", G.num_units()}};
    case FiniteGroupoid::Form::kTransformation:
      return {{"action", action_to_json(*G.action())}};
    case FiniteGroupoid::Form::kTable:
      break;
  }
  Json arrows = Json::array(), comp = Json::array();
  for (Arrow g = 0; g < static_cast<Arrow>(G.num_arrows()); ++g) {
    arrows.push_back({{"id", g}, {"s", G.source(g)}, {"r", G.range(g)}});
    for (Arrow h : G.arrows_to(G.source(g))) comp.push_back({g, h, *G.compose(g, h)});
  }
  return {{"units", G.num_units()}, {"arrows", arrows}, {"compose", comp}};
}

Json subgroupoid_to_json(const Subgroupoid& H) {
  if (H.by_classes) return {{"classes", H.classes}};
  return {{"arrows", H.arrows}};
}

Subgroupoid subgroupoid_from_json(const Json& j) {
  Subgroupoid H;
  if (j.contains("classes")) {
    H.by_classes = true;
    H.classes = unit_lists(j.at("classes"));
  } else {
    H.by_classes = false;
    H.arrows = arrow_list(need(j, "arrows"));
  }
  return H;
}

Json groupoid_witness_to_json(const GroupoidDadWitness& w) {
  Json gen = Json::array();
  for (const auto& H : w.generated) gen.push_back(subgroupoid_to_json(H));
  return {{"K", w.K}, {"colors", w.colors}, {"generated", gen}};
}

GroupoidDadWitness groupoid_witness_from_json(const Json& j) {
  GroupoidDadWitness w;
  w.K = arrow_list(need(j, "K"));
  w.colors = unit_lists(need(j, "colors"));
  if (j.contains("generated"))
    for (const auto& H : j.at("generated")) w.generated.push_back(subgroupoid_from_json(H));
  return w;
}

Json report_to_json(const GroupoidVerification& r) {
  return {{"accepted", r.accepted}, {"code", code_json(r.code)}, {"message", r.message},
          {"generated_sizes", r.generated_sizes}};
}

// ---- coarse geometry ----

std::unique_ptr<FiniteMetricSpace> space_from_json(const Json& j) {
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    if (g.contains("dims")) {
      auto dims = long_list(g.at("dims"));
      std::vector<long> lo(dims.size(), 0), hi;
      for (long d : dims) {
        if (d <= 0) fail(ErrorCode::kParse, "grid dims must be positive");
        hi.push_back(d - 1);
      }
      return std::make_unique<GridSpace>(lo, hi);
    }
    return std::make_unique<GridSpace>(long_list(need(g, "lo")), long_list(need(g, "hi")));
  }
  if (j.contains("matrix")) return std::make_unique<TableSpace>(get_as<std::vector<std::vector<long>>>(j.at("matrix"), "matrix"));
  if (j.contains("edges")) {
    std::vector<std::tuple<Point, Point, long>> edges;
    for (const auto& e : j.at("edges")) {
      const auto t = long_list(e);
      if (t.size() != 2 && t.size() != 3) fail(ErrorCode::kParse, "edges are [a,b] or [a,b,w]");
      edges.emplace_back(static_cast<Point>(t[0]), static_cast<Point>(t[1]), t.size() == 3 ? t[2] : 1);
    }
    return std::make_unique<TableSpace>(TableSpace::from_edges(get_as<std::size_t>(need(j, "points"), "points"), edges));
  }
  if (j.contains("path")) return std::make_unique<TableSpace>(TableSpace::path(get_as<std::size_t>(j.at("path"), "path")));
  if (j.contains("group_ball")) {
    const Json& b = j.at("group_ball");
    const std::string kind = b.contains("kind") ? get_as<std::string>(b.at("kind"), "kind") : "free_abelian";
    GroupBallSpace::Kind k;
    if (kind == "free_abelian")
      k = GroupBallSpace::Kind::kFreeAbelian;
    else if (kind == "permutation")
      k = GroupBallSpace::Kind::kPermutation;
    else
      fail(ErrorCode::kParse, "unknown group kind '" + kind + "'");
    return std::make_unique<GroupBallSpace>(k, get_as<std::vector<std::vector<long>>>(need(b, "generators"), "generators"),
                                            get_as<long>(need(b, "radius"), "radius"));
  }
  fail(ErrorCode::kParse, "unknown space description");
}

Json asdim_witness_to_json(const AsdimWitness& w) {
  return {{"R", w.scale_R}, {"S", w.bound_S}, {"families", w.families}};
}

AsdimWitness asdim_witness_from_json(const Json& j) {
  AsdimWitness w;
  w.scale_R = get_as<long>(need(j, "R"), "R");
  w.bound_S = get_as<long>(need(j, "S"), "S");
  w.families = get_as<std::vector<std::vector<std::vector<Point>>>>(need(j, "families"), "families");
  return w;
}

Json report_to_json(const AsdimVerification& r) {
  Json j{{"accepted", r.accepted}, {"code", code_json(r.code)}, {"message", r.message},
         {"max_class_diameter", r.max_class_diameter}};
  if (r.violating_pair) j["violating_pair"] = {r.violating_pair->first, r.violating_pair->second};
  if (r.family) j["family"] = *r.family;
  return j;
}

Json report_to_json(const BridgeResult& r) {
  return {{"accepted", r.accepted},
          {"code", code_json(r.code)},
          {"message", r.message},
          {"asdim", report_to_json(r.asdim)},
          {"groupoid", report_to_json(r.groupoid_report)},
          {"K_size", r.K_size},
          {"generated_max_diameter", r.generated_max_diameter},
          {"within_S_tube", r.within_S_tube},
          {"round_trip", r.round_trip}};
}

// ---- simplicial complexes ----

Json complex_to_json(const SimplicialComplex& C) {
  return {{"vertices", C.vertices()}, {"maximal_faces", C.maximal_faces()}};
}

SimplicialComplex complex_from_json(const Json& j) {
  auto faces = get_as<std::vector<std::vector<Vertex>>>(need(j, "maximal_faces"), "maximal_faces");
  SimplicialComplex C(faces);
  if (j.contains("vertices")) {
    auto listed = get_as<std::vector<Vertex>>(j.at("vertices"), "vertices");
    std::sort(listed.begin(), listed.end());
    if (listed != C.vertices()) fail(ErrorCode::kParse, "vertex list does not match the faces");
  }
  return C;
}

Json map_to_json(const SampledMap& f) {
  Json out = Json::array();
  for (const auto& [x, mu] : f) {
    Json w = Json::array();
    for (const auto& [v, q] : mu.weights()) w.push_back({v, to_string(q)});
    out.push_back({{"id", x}, {"weights", w}});
  }
  return out;
}

SampledMap map_from_json(const Json& j) {
  SampledMap f;
  const Json& points = j.is_object() ? need(j, "points") : j;
  for (const auto& p : points) {
    std::map<Vertex, Rational> w;
    for (const auto& e : need(p, "weights")) {
      if (!e.is_array() || e.size() != 2) fail(ErrorCode::kParse, "weights are [vertex,\"p/q\"] pairs");
      w[get_as<Vertex>(e[0], "vertex")] += rational_from(e[1]);
    }
    f.emplace(get_as<long>(need(p, "id"), "point id"), SimplicialPoint(std::move(w)));
  }
  return f;
}

ComplexAction complex_action_from_json(const Json& j) {
  ComplexAction a;
  a.space = action_from_json(need(j, "action"));
  a.vertex_act = get_as<std::vector<std::vector<Vertex>>>(need(j, "vertex_act"), "vertex_act");
  if (a.vertex_act.size() != a.space.group_order())
    fail(ErrorCode::kParse, "vertex_act needs one row per group element");
  return a;
}

Json complex_action_to_json(const ComplexAction& a) {
  return {{"action", action_to_json(a.space)}, {"vertex_act", a.vertex_act}};
}

Json cover_to_json(const EquivariantCover& U) {
  Json sets = Json::array();
  for (const auto& s : U.sets) {
    std::vector<std::size_t> members;
    for (std::size_t p = 0; p < s.size(); ++p)
      if (s[p]) members.push_back(p);
    sets.push_back(members);
  }
  return {{"space_size", U.space_size}, {"group_order", U.group_order}, {"sets", sets}, {"labels", U.labels}};
}

EquivariantCover cover_from_json(const Json& j) {
  EquivariantCover U;
  U.space_size = get_as<std::size_t>(need(j, "space_size"), "space_size");
  U.group_order = get_as<std::size_t>(need(j, "group_order"), "group_order");
  const std::size_t total = U.space_size * U.group_order;
  for (const auto& s : need(j, "sets")) {
    std::vector<char> bits(total, 0);
    for (auto p : get_as<std::vector<std::size_t>>(s, "set")) {
      if (p >= total) fail(ErrorCode::kParse, "cover element out of range");
      bits[p] = 1;
    }
    U.sets.push_back(std::move(bits));
  }
  if (j.contains("labels")) U.labels = get_as<std::vector<std::string>>(j.at("labels"), "labels");
  return U;
}

Json report_to_json(const CoverConditions& c) {
  return {{"ok", c.ok()},       {"equivariant", c.equivariant}, {"A", c.A}, {"B", c.B}, {"C", c.C},
          {"D", c.D},           {"E", c.E},   {"multiplicity", c.multiplicity}, {"orbit_count", c.orbit_count},
          {"stabilizer_orders", c.stabilizer_orders}, {"failure", c.failure}};
}

Json report_to_json(const EquivarianceReport& r) {
  Json per = Json::array();
  for (const auto& q : r.per_generator) per.push_back(to_string(q));
  return {{"accepted", r.accepted},        {"max_defect", to_string(r.max_defect)}, {"per_generator", per},
          {"worst_point", r.worst_point}, {"worst_generator", r.worst_generator}};
}

Json report_to_json(const NerveMap& m) {
  return {{"map", map_to_json(m.f)},           {"nerve", complex_to_json(m.nerve)},
          {"multiplicity", m.multiplicity},    {"depth", m.depth},
          {"defect", to_string(m.defect)},     {"bound", to_string(m.bound)},
          {"within_bound", m.defect <= m.bound}};
}

Json report_to_json(const BlrWitness& w) {
  return {{"defect", to_string(w.defect)},   {"epsilon", to_string(w.epsilon)}, {"S", w.S},
          {"F", w.F},                        {"colors", w.colors},             {"finite_sets", w.finite_sets},
          {"finite_sets_in_F", w.finite_sets_in_F}, {"groupoid_report", report_to_json(w.report)}};
}

// ---- partitions of unity ----

Json pou_to_json(const PartitionOfUnity& p, const TowerSet* towers) {
  Json psi = Json::array();
  for (const auto& col : p.psi) {
    Json entries = Json::array();
    for (std::size_t x = 0; x < col.size(); ++x)
      if (sgn(col[x]) != 0) entries.push_back({x, to_string(col[x])});
    psi.push_back(entries);
  }
  Json norm = Json::array();
  for (std::size_t x = 0; x < p.norm_sq.size(); ++x)
    if (p.norm_sq[x] != 1) norm.push_back({x, to_string(p.norm_sq[x])});
  Json j{{"N", p.N}, {"num_units", p.num_units}, {"psi", psi}, {"norm_sq", norm}, {"supports", p.supports}};
  if (towers) {
    Json t = Json::array();
    for (const auto& tw : towers->towers)
      t.push_back({{"color", tw.color}, {"levels", tw.levels}, {"generated_size", tw.generated_size}});
    j["towers"] = t;
    j["K"] = towers->K;
  }
  return j;
}

PartitionOfUnity pou_from_json(const Json& j) {
  PartitionOfUnity p;
  p.N = get_as<int>(need(j, "N"), "N");
  p.num_units = get_as<std::size_t>(need(j, "num_units"), "num_units");
  auto read_entry = [&](const Json& e, std::size_t& x, Rational& q) {
    if (!e.is_array() || e.size() != 2) fail(ErrorCode::kParse, "entries are [unit,\"p/q\"]");
    x = get_as<std::size_t>(e[0], "unit");
    if (x >= p.num_units) fail(ErrorCode::kParse, "unit out of range");
    q = rational_from(e[1]);
  };
  for (const auto& col : need(j, "psi")) {
    std::vector<Rational> v(p.num_units, Rational(0));
    for (const auto& e : col) {
      std::size_t x;
      Rational q;
      read_entry(e, x, q);
      v[x] = q;
    }
    p.psi.push_back(std::move(v));
  }
  p.norm_sq.assign(p.num_units, Rational(1));
  for (const auto& e : need(j, "norm_sq")) {
    std::size_t x;
    Rational q;
    read_entry(e, x, q);
    p.norm_sq[x] = q;
  }
  p.supports = unit_lists(need(j, "supports"));
  if (p.supports.size() != p.psi.size()) fail(ErrorCode::kParse, "one support per color expected");
  return p;
}

Json report_to_json(const PouReport& r) {
  return {{"accepted", r.accepted},
          {"code", code_json(r.code)},
          {"message", r.message},
          {"support_violations", r.support_violations},
          {"normalization_defect", to_string(r.normalization_defect)},
          {"max_oscillation", round12(r.max_oscillation)},
          {"worst_arrow", r.worst_arrow},
          {"worst_color", r.worst_color},
          {"below_epsilon", r.below_epsilon},
          {"below_depth_bound", r.below_depth_bound},
          {"below_chain_bound", r.below_chain_bound},
          {"psi_steps_ok", r.psi_steps_ok},
          {"psi_sum_ok", r.psi_sum_ok},
          {"max_psi_step", to_string(r.max_psi_step)}};
}

Json report_to_json(const EnlargedCover& e) {
  return {{"colors", e.colors},
          {"k3_report", report_to_json(e.k3_report)},
          {"generated_sizes", e.generated_sizes},
          {"sandwich_sizes", e.sandwich_sizes}};
}

// ---- convolution ----

Json element_to_json(const ConvElement<Complex>& f) {
  Json terms = Json::array();
  for (const auto& [g, v] : f.coefficients()) terms.push_back({g, round12(v.real()), round12(v.imag())});
  return {{"terms", terms}};
}

ConvElement<Complex> element_from_json(const FiniteGroupoid& G, const Json& j) {
  ConvElement<Complex> f(G);
  const Json& terms = j.is_object() ? need(j, "terms") : j;
  for (const auto& t : terms) {
    if (!t.is_array() || (t.size() != 2 && t.size() != 3)) fail(ErrorCode::kParse, "terms are [arrow,re] or [arrow,re,im]");
    const Arrow g = get_as<Arrow>(t[0], "arrow");
    if (!G.valid_arrow(g)) fail(ErrorCode::kParse, "arrow " + std::to_string(g) + " is not in the groupoid");
    f.add(g, Complex(get_as<double>(t[1], "real part"), t.size() == 3 ? get_as<double>(t[2], "imaginary part") : 0.0));
  }
  return f;
}

Json report_to_json(const CommutatorReport& r) {
  return {{"commutator_norm", round12(r.commutator_norm)},
          {"oscillation", round12(r.oscillation)},
          {"M", r.M},
          {"f_norm", round12(r.f_norm)},
          {"bound", round12(r.bound)},
          {"within_bound", r.within_bound}};
}

Json report_to_json(const DecompositionReport& r) {
  Json terms = Json::array();
  for (const auto& t : r.terms)
    terms.push_back({{"phi_sup", round12(t.phi_sup)},
                     {"commutator", report_to_json(t.commutator)},
                     {"cutdown_support", t.cutdown_support},
                     {"block_sizes", t.block_sizes},
                     {"block_norm_gap", round12(t.block_norm_gap)}});
  return {{"accepted", r.accepted},
          {"code", code_json(r.code)},
          {"message", r.message},
          {"f_norm", round12(r.f_norm)},
          {"defect", round12(r.defect)},
          {"triangle_bound", round12(r.triangle_bound)},
          {"oscillation_bound", round12(r.oscillation_bound)},
          {"depth_constant", round12(r.depth_constant)},
          {"constant_bound", round12(r.constant_bound)},
          {"defect_within_triangle", r.defect_within_triangle},
          {"triangle_within_oscillation_bound", r.triangle_within_oscillation_bound},
          {"osc_below_constant", r.osc_below_constant},
          {"terms", terms}};
}

Json report_to_json(const BlockDecomposition& b) {
  Json hist = Json::object();
  for (const auto& [m, c] : b.size_histogram) hist[std::to_string(m)] = c;
  Json blocks = Json::array();
  for (const auto& bl : b.blocks) blocks.push_back({{"base", bl.base}, {"units", bl.units}});
  return {{"blocks", blocks},       {"size_histogram", hist}, {"max_size", b.max_size},
          {"pairs_checked", b.pairs_checked}, {"max_error", round12(b.max_error)}, {"verified", b.verified}};
}

}  // namespace dadim::io
