// dadim: build and check finite-scale dynamic asymptotic dimension witnesses.
// Every report goes to stdout (or -o) as JSON; the exit code is the report's
// error code, listed by --help.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "dadim/coarse.hpp"
#include "dadim/convolution.hpp"
#include "dadim/dad_witness.hpp"
#include "dadim/io.hpp"
#include "dadim/nerve.hpp"
#include "dadim/pipeline.hpp"
#include "dadim/pou.hpp"

namespace {

using namespace dadim;
using io::Json;

std::string exit_code_table() {
  std::ostringstream out;
  out << "Exit codes:\n";
  for (int v = 0; v <= 100; ++v) {
    const auto name = error_name(static_cast<ErrorCode>(v));
    if (name != "Unknown") out << "  " << v << "  " << name << "\n";
  }
  return out.str();
}

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << io::dump(j);
  else
    io::write_json(out_path, j);
}

int code_of(ErrorCode c) { return static_cast<int>(c); }

std::vector<int> parse_E(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      fail(ErrorCode::kUsage, "bad generator list '" + text + "'");
    }
  }
  return out;
}

// {"K":[arrows]}, {"group_parts":[...]} for transformation groupoids, or "all".
std::vector<Arrow> load_K(const FiniteGroupoid& G, const Json& j) {
  if (j.is_string() && j.get<std::string>() == "all") {
    std::vector<Arrow> all(G.num_arrows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Arrow>(i);
    return all;
  }
  if (j.is_array()) return io::arrow_list(j);
  if (j.contains("group_parts")) {
    if (!G.action()) fail(ErrorCode::kUsage, "group_parts needs a transformation groupoid");
    const int n = static_cast<int>(G.action()->group_order());
    std::vector<int> parts;
    for (long p : io::long_list(j.at("group_parts"))) parts.push_back(static_cast<int>(((p % n) + n) % n));
    std::sort(parts.begin(), parts.end());
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    return arrows_with_group_parts(G, parts);
  }
  if (j.contains("K")) return io::arrow_list(j.at("K"));
  fail(ErrorCode::kParse, "K file needs \"K\", \"group_parts\" or \"all\"");
}

std::vector<std::vector<Unit>> load_colors(const Json& j) {
  const Json& c = j.is_object() ? j.at("colors") : j;
  return c.get<std::vector<std::vector<Unit>>>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dadim: finite witnesses for dynamic asymptotic dimension"};
  app.footer(exit_code_table());
  app.require_subcommand(1);
  std::string out_path;

  // construct / verify
  auto* construct = app.add_subcommand("construct", "two-color witness for E = [-N, N] on a minimal Z-system");
  std::string system_file, witness_file;
  long N = 1;
  construct->add_option("--system", system_file, "system description")->required();
  construct->add_option("--N", N, "generator radius")->required();
  int base_length = 0, refine_levels = 1;
  construct->add_option("--base-length", base_length, "cylinder length of U (default: least that separates)");
  construct->add_option("--refine-levels", refine_levels, "extra symbols from U down to V (0 gives V = U)");
  construct->add_option("-o,--out", out_path, "output file");

  auto* verify = app.add_subcommand("verify", "check a witness against a system");
  long blowup = 0;
  verify->add_option("--system", system_file)->required();
  verify->add_option("--witness", witness_file)->required();
  verify->add_option("--blowup", blowup, "exploration bound (default from the witness)");
  verify->add_option("-o,--out", out_path);

  // coarse geometry
  auto* asdim_construct = app.add_subcommand("asdim-construct", "grid witness, or exhaustive minimum with --S");
  std::string space_file;
  long R = 1, S = -1;
  std::size_t max_points = 16;
  asdim_construct->add_option("--space", space_file)->required();
  asdim_construct->add_option("--R", R)->required();
  asdim_construct->add_option("--S", S, "diameter bound; switches to the exhaustive search");
  asdim_construct->add_option("--max-points", max_points);
  asdim_construct->add_option("-o,--out", out_path);

  auto* asdim_verify = app.add_subcommand("asdim-verify", "check an asymptotic dimension witness");
  asdim_verify->add_option("--space", space_file)->required();
  asdim_verify->add_option("--witness", witness_file)->required();
  asdim_verify->add_option("-o,--out", out_path);

  auto* bridge = app.add_subcommand("bridge", "turn a coarse witness into a groupoid witness and check both");
  bridge->add_option("--space", space_file)->required();
  bridge->add_option("--witness", witness_file)->required();
  bridge->add_option("-o,--out", out_path);

  // nerve and BLR
  auto* nerve = app.add_subcommand("nerve", "map from a cover (--cover) or cover from a map (--map)");
  std::string cover_file, map_file, complex_file, action_file, E_text;
  int depth_n = 0;
  nerve->add_option("--cover", cover_file);
  nerve->add_option("--map", map_file);
  nerve->add_option("--complex", complex_file);
  nerve->add_option("--action", action_file)->required();
  nerve->add_option("--E", E_text, "comma separated group elements")->required();
  nerve->add_option("--n", depth_n, "interior depth for --cover");
  nerve->add_option("-o,--out", out_path);

  auto* blr = app.add_subcommand("blr-check", "witness from an almost equivariant map into a complex");
  blr->add_option("--map", map_file)->required();
  blr->add_option("--complex", complex_file)->required();
  blr->add_option("--action", action_file)->required();
  blr->add_option("--E", E_text)->required();
  blr->add_option("-o,--out", out_path);

  // partitions of unity
  auto* pou_build = app.add_subcommand("pou-build", "enlarge a witness, build towers and the partition of unity");
  std::string groupoid_file, K_file, colors_file, pou_file, epsilon_text = "1";
  int tower_N = 4;
  std::uint64_t size_bound = 0;
  pou_build->add_option("--groupoid", groupoid_file)->required();
  pou_build->add_option("--K", K_file)->required();
  pou_build->add_option("--colors", colors_file)->required();
  pou_build->add_option("--N", tower_N);
  pou_build->add_option("--size-bound", size_bound, "default: every subgroupoid is small");
  pou_build->add_option("-o,--out", out_path);

  auto* pou_verify = app.add_subcommand("pou-verify", "check a partition of unity certificate exactly");
  pou_verify->add_option("--groupoid", groupoid_file)->required();
  pou_verify->add_option("--K", K_file)->required();
  pou_verify->add_option("--pou", pou_file)->required();
  pou_verify->add_option("--epsilon", epsilon_text, "p/q");
  pou_verify->add_option("-o,--out", out_path);

  // convolution algebra
  auto* norm = app.add_subcommand("norm", "reduced norm of an element, with the block picture when free");
  std::string element_file;
  norm->add_option("--groupoid", groupoid_file)->required();
  norm->add_option("--element", element_file)->required();
  norm->add_option("-o,--out", out_path);

  auto* decompose = app.add_subcommand("decompose", "cut-down decomposition of an element by a partition of unity");
  decompose->add_option("--groupoid", groupoid_file)->required();
  decompose->add_option("--element", element_file)->required();
  decompose->add_option("--K", K_file)->required();
  decompose->add_option("--pou", pou_file)->required();
  decompose->add_option("-o,--out", out_path);

  // pipeline and corpus
  auto* pipeline = app.add_subcommand("pipeline", "run or re-check the certificate chain");
  std::string out_dir, check_dir;
  PipelineParams params;
  long witness_N = 0;
  pipeline->add_option("--system", system_file);
  pipeline->add_option("--out-dir", out_dir);
  pipeline->add_option("--check", check_dir, "re-check an existing chain directory");
  pipeline->add_option("--N", params.N);
  pipeline->add_option("--depth", params.depth);
  pipeline->add_option("--witness-N", witness_N, "default: largest that fits the depth");
  pipeline->add_option("--tower-depth", params.tower_depth);
  pipeline->add_option("--epsilon", epsilon_text);

  auto* corpus = app.add_subcommand("corpus", "compare bundled examples with golden files");
  std::string corpus_dir;
  bool regenerate = false;
  corpus->add_option("--dir", corpus_dir, "default: $DADIM_CORPUS");
  corpus->add_flag("--regenerate", regenerate, "rewrite the golden files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code_of(ErrorCode::kUsage);
  }

  try {
    if (construct->parsed()) {
      const SystemPtr sys = io::system_from_json(io::read_json(system_file));
      ZWitnessDepths depths;
      if (base_length > 0) depths.base_length = base_length;
      depths.refine_levels = refine_levels;
      const DadConstruction c = construct_minimal_z_witness(sys, N, depths);
      emit(io::witness_to_json(c.witness), out_path);
      return 0;
    }
    if (verify->parsed()) {
      const SystemPtr sys = io::system_from_json(io::read_json(system_file));
      const DadWitness w = io::witness_from_json(sys, io::read_json(witness_file));
      const DadVerification v = verify_dad_witness(sys, w, blowup > 0 ? blowup : default_blowup_bound(w));
      emit(io::report_to_json(v), out_path);
      return code_of(v.code);
    }
    if (asdim_construct->parsed()) {
      const auto X = io::space_from_json(io::read_json(space_file));
      if (S >= 0) {
        const MinColors m = exhaustive_min_colors(*X, R, S, max_points);
        emit({{"colors", m.colors}, {"witness", io::asdim_witness_to_json(m.witness)}}, out_path);
        return 0;
      }
      const auto* grid = dynamic_cast<const GridSpace*>(X.get());
      if (!grid) fail(ErrorCode::kUsage, "the explicit construction needs a grid; pass --S for the exhaustive search");
      emit(io::asdim_witness_to_json(construct_grid_witness(*grid, R)), out_path);
      return 0;
    }
    if (asdim_verify->parsed()) {
      const auto X = io::space_from_json(io::read_json(space_file));
      const auto v = verify_asdim_witness(*X, io::asdim_witness_from_json(io::read_json(witness_file)));
      emit(io::report_to_json(v), out_path);
      return code_of(v.code);
    }
    if (bridge->parsed()) {
      const auto X = io::space_from_json(io::read_json(space_file));
      const auto b = bridge_to_groupoid(*X, io::asdim_witness_from_json(io::read_json(witness_file)));
      emit(io::report_to_json(b), out_path);
      return code_of(b.code);
    }
    if (nerve->parsed()) {
      const ComplexAction action = io::complex_action_from_json(io::read_json(action_file));
      const std::vector<int> E = parse_E(E_text);
      if (!cover_file.empty()) {
        const NerveMap m = map_from_cover(io::cover_from_json(io::read_json(cover_file)), action.space, E, depth_n);
        emit(io::report_to_json(m), out_path);
        return 0;
      }
      if (map_file.empty() || complex_file.empty()) fail(ErrorCode::kUsage, "nerve needs --cover or --map with --complex");
      const PulledBackCover p = cover_from_map(io::map_from_json(io::read_json(map_file)),
                                               io::complex_from_json(io::read_json(complex_file)), action, E);
      emit({{"cover", io::cover_to_json(p.cover)}, {"conditions", io::report_to_json(p.conditions)},
            {"relax", to_string(p.relax)}},
           out_path);
      return 0;
    }
    if (blr->parsed()) {
      const BlrWitness w = dad_witness_from_blr(io::map_from_json(io::read_json(map_file)),
                                                io::complex_from_json(io::read_json(complex_file)),
                                                io::complex_action_from_json(io::read_json(action_file)), parse_E(E_text));
      emit(io::report_to_json(w), out_path);
      return code_of(w.report.code);
    }
    if (pou_build->parsed()) {
      const FiniteGroupoid G = io::groupoid_from_json(io::read_json(groupoid_file));
      const std::vector<Arrow> K = load_K(G, io::read_json(K_file));
      const std::uint64_t bound = size_bound > 0 ? size_bound : G.num_arrows();
      const EnlargedCover e = enlarge_cover(G, K, load_colors(io::read_json(colors_file)), bound);
      const TowerSet t = build_tower(G, K, e.colors, tower_N, bound);
      emit(io::pou_to_json(build_pou(t, G.num_units()), &t), out_path);
      return 0;
    }
    if (pou_verify->parsed()) {
      const FiniteGroupoid G = io::groupoid_from_json(io::read_json(groupoid_file));
      const PouReport r = verify_pou(G, load_K(G, io::read_json(K_file)), io::pou_from_json(io::read_json(pou_file)),
                                     parse_rational(epsilon_text));
      emit(io::report_to_json(r), out_path);
      return code_of(r.code);
    }
    if (norm->parsed()) {
      const FiniteGroupoid G = io::groupoid_from_json(io::read_json(groupoid_file));
      const ConvElement<Complex> f = io::element_from_json(G, io::read_json(element_file));
      Json j{{"reduced_norm", io::round12(reduced_norm(f))},
             {"bisection_count", bisection_count(G, f.support())},
             {"support", f.coefficients().size()}};
      if (G.is_free()) {
        const BlockDecomposition B = block_decompose(G);
        double block_max = 0;
        for (const auto& m : block_matrices(B, f)) block_max = std::max(block_max, spectral_norm(m));
        j["blocks"] = io::report_to_json(B);
        j["max_block_norm"] = io::round12(block_max);
      }
      emit(j, out_path);
      return 0;
    }
    if (decompose->parsed()) {
      const FiniteGroupoid G = io::groupoid_from_json(io::read_json(groupoid_file));
      const ConvElement<Complex> f = io::element_from_json(G, io::read_json(element_file));
      const auto K = symmetric_hull(G, load_K(G, io::read_json(K_file)));
      const DecompositionReport r = decompose_via_pou(f, K, io::pou_from_json(io::read_json(pou_file)));
      emit(io::report_to_json(r), out_path);
      return code_of(r.code);
    }
    if (pipeline->parsed()) {
      if (!check_dir.empty()) {
        const CertificateChain c = check_chain(check_dir);
        std::cout << io::dump(chain_to_json(c));
        return code_of(c.code);
      }
      if (system_file.empty() || out_dir.empty()) fail(ErrorCode::kUsage, "pipeline needs --system and --out-dir");
      if (witness_N > 0) params.witness_N = witness_N;
      params.epsilon = parse_rational(epsilon_text);
      const CertificateChain c = run_pipeline(io::read_json(system_file), params, out_dir);
      std::cout << io::dump(chain_to_json(c));
      return code_of(c.code);
    }
    if (corpus->parsed()) {
      if (corpus_dir.empty()) {
        const char* env = std::getenv("DADIM_CORPUS");
        if (!env || !*env) fail(ErrorCode::kConfiguration, "set DADIM_CORPUS or pass --dir");
        corpus_dir = env;
      }
      const CorpusSummary s = corpus_check(corpus_dir, regenerate);
      Json cases = Json::array();
      for (const auto& c : s.cases) cases.push_back({{"name", c.name}, {"status", c.status}, {"diffs", c.diffs}});
      std::cout << io::dump({{"green", s.green}, {"cases", cases}});
      return s.green ? 0 : code_of(ErrorCode::kGoldenDiff);
    }
  } catch (const Error& e) {
    std::cerr << "dadim: " << error_name(e.code()) << ": " << e.what() << "\n";
    return code_of(e.code());
  } catch (const std::exception& e) {
    std::cerr << "dadim: " << e.what() << "\n";
    return code_of(ErrorCode::kIo);
  }
  return 0;
}
