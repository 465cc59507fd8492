#include "dadim/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <future>
#include <random>
#include <set>

#include "dadim/coarse.hpp"

namespace dadim {

using io::Json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::kIo, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

FiniteGroupoid quotient_groupoid(const SymbolicSystem& sys, int depth) {
  if (sys.kind() != SymbolicSystem::Kind::kOdometer)
    fail(ErrorCode::kUsage, "the quotient model needs an odometer");
  const std::uint64_t P = sys.period(depth);
  if (P > 4096) fail(ErrorCode::kDepthExceeded, "quotient of order " + std::to_string(P) + " is too large");
  return FiniteGroupoid::transformation(FiniteAction::rotation(static_cast<int>(P)));
}

std::vector<Arrow> quotient_K(const FiniteGroupoid& G, long radius) {
  const long P = static_cast<long>(G.action()->group_order());
  std::set<int> parts;
  for (long n = -radius; n <= radius; ++n) parts.insert(static_cast<int>(((n % P) + P) % P));
  return arrows_with_group_parts(G, std::vector<int>(parts.begin(), parts.end()));
}

QuotientWitness quotient_groupoid_witness(const DadWitness& w, int depth, const FiniteGroupoid& G, long radius) {
  const long P = static_cast<long>(G.num_units());
  QuotientWitness q;
  q.witness.K = quotient_K(G, radius);
  for (const auto& c : w.colors) {
    if (c.length() > depth)
      fail(ErrorCode::kDepthExceeded, "a color needs " + std::to_string(c.length()) + " digits, quotient depth is " +
                                          std::to_string(depth));
    std::vector<Unit> units;
    for (auto r : odometer_residues(c, depth)) units.push_back(static_cast<Unit>(r));
    q.witness.colors.push_back(std::move(units));
  }
  const std::uint64_t bound = static_cast<std::uint64_t>(P) * static_cast<std::uint64_t>(P) - 1;
  q.report = verify_groupoid_dad(G, q.witness, bound);
  for (const auto& H : q.report.generated) {
    std::set<long> parts;
    for (Arrow a : H.materialize(G)) parts.insert(G.group_part(a));
    q.group_parts.emplace_back(parts.begin(), parts.end());
  }
  for (const auto& F : w.finite_sets) {
    std::set<long> parts;
    for (long n : F) parts.insert(((n % P) + P) % P);
    q.finite_sets_mod_P.emplace_back(parts.begin(), parts.end());
  }
  return q;
}

long fitting_witness_N(const SystemPtr& sys, int depth, long min_N) {
  const long P = static_cast<long>(sys->period(depth));
  long best = 0;
  for (long n = std::max(1L, min_N); n <= P; ++n) {
    const DadConstruction c = construct_minimal_z_witness(sys, n);
    int len = 0;
    for (const auto& col : c.witness.colors) len = std::max(len, col.length());
    if (len > depth) break;
    best = n;
  }
  if (best == 0)
    fail(ErrorCode::kDepthExceeded, "no witness with N >= " + std::to_string(min_N) + " fits quotient depth " +
                                        std::to_string(depth));
  return best;
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* kStageKinds[] = {"system", "witness", "groupoid", "tower", "pou", "decomposition"};

Json stage_to_json(const ChainStage& s) {
  return {{"index", s.index},       {"kind", s.kind},       {"file", s.file},
          {"sha256", s.sha256},     {"input_sha256", s.input_sha256},
          {"verified", s.verified}, {"code", std::string(error_name(s.code))},
          {"message", s.message},   {"created", s.created}};
}

ErrorCode code_from_name(const std::string& name) {
  for (int v = 0; v <= 100; ++v) {
    const auto c = static_cast<ErrorCode>(v);
    if (error_name(c) == name) return c;
  }
  fail(ErrorCode::kParse, "unknown error code '" + name + "'");
}

ChainStage stage_from_json(const Json& j) {
  ChainStage s;
  s.index = j.at("index").get<int>();
  s.kind = j.at("kind").get<std::string>();
  s.file = j.at("file").get<std::string>();
  s.sha256 = j.at("sha256").get<std::string>();
  s.input_sha256 = j.at("input_sha256").get<std::string>();
  s.verified = j.at("verified").get<bool>();
  s.code = code_from_name(j.at("code").get<std::string>());
  s.message = j.at("message").get<std::string>();
  s.created = j.value("created", "");
  return s;
}

// Writes one stage file and appends its chain entry.
void record(CertificateChain& chain, const std::filesystem::path& dir, int index, Json body, bool verified,
            ErrorCode code, const std::string& message) {
  ChainStage s;
  s.index = index;
  s.kind = kStageKinds[index];
  s.file = s.kind + ".json";
  s.input_sha256 = chain.stages.empty() ? "" : chain.stages.back().sha256;
  if (index > 0) body["input_sha256"] = s.input_sha256;
  const std::string text = io::dump(body);
  io::write_text(dir / s.file, text);
  s.sha256 = sha256_hex(text);
  s.verified = verified;
  s.code = code;
  s.message = message;
  s.created = utc_now();
  chain.stages.push_back(std::move(s));
}

void finish(CertificateChain& chain, const std::filesystem::path& dir) {
  chain.green = chain.failed_stage == 0 && chain.stages.size() == 6 &&
                std::all_of(chain.stages.begin(), chain.stages.end(), [](const auto& s) { return s.verified; });
  io::write_json(dir / "chain.json", chain_to_json(chain));
}

}  // namespace

Json chain_to_json(const CertificateChain& c) {
  Json stages = Json::array();
  for (const auto& s : c.stages) stages.push_back(stage_to_json(s));
  return {{"stages", stages},
          {"green", c.green},
          {"failed_stage", c.failed_stage},
          {"code", std::string(error_name(c.code))},
          {"message", c.message},
          {"params", c.params}};
}

CertificateChain run_pipeline(const Json& system, const PipelineParams& params, const std::filesystem::path& out_dir) {
  CertificateChain chain;
  chain.params = {{"N", params.N},
                  {"depth", params.depth},
                  {"tower_depth", params.tower_depth},
                  {"epsilon", to_string(params.epsilon)}};
  if (params.witness_N) chain.params["witness_N"] = *params.witness_N;
  std::filesystem::create_directories(out_dir);
  record(chain, out_dir, 0, system, true, ErrorCode::kOk, "input");

  int stage = 1;
  auto stop = [&](ErrorCode code, const std::string& msg) {
    chain.failed_stage = stage;
    chain.code = code;
    chain.message = "stage " + std::to_string(stage) + " (" + kStageKinds[stage] + "): " + msg;
    finish(chain, out_dir);
    return chain;
  };

  try {
    // 1: Z-witness for E = [-N_w, N_w], N_w >= 3N so that it also covers K^3.
    const SystemPtr sys = io::system_from_json(system);
    long Nw = 0;
    if (params.witness_N) {
      Nw = *params.witness_N;
    } else if (sys->kind() == SymbolicSystem::Kind::kOdometer) {
      Nw = fitting_witness_N(sys, params.depth, 3 * params.N);
    } else {
      Nw = 3 * params.N;
    }
    const DadConstruction built = construct_minimal_z_witness(sys, Nw);
    const DadVerification ver = verify_dad_witness(sys, built.witness, default_blowup_bound(built.witness));
    record(chain, out_dir, 1,
           {{"N", Nw},
            {"witness", io::witness_to_json(built.witness)},
            {"report", io::report_to_json(ver)},
            {"return_bound", built.return_bound}},
           ver.accepted, ver.code, ver.message);
    if (!ver.accepted) return stop(ver.code, ver.message);

    // 2: the same witness on the quotient transformation groupoid, K = E.
    stage = 2;
    const FiniteGroupoid G = quotient_groupoid(*sys, params.depth);
    const QuotientWitness qw = quotient_groupoid_witness(built.witness, params.depth, G, Nw);
    bool parts_match = qw.group_parts == qw.finite_sets_mod_P;
    std::string msg2 = qw.report.message;
    if (qw.report.accepted && !parts_match) msg2 = "group parts of a generated subgroupoid differ from the finite set";
    record(chain, out_dir, 2,
           {{"groupoid", io::groupoid_to_json(G)},
            {"witness", io::groupoid_witness_to_json(qw.witness)},
            {"report", io::report_to_json(qw.report)},
            {"group_parts", qw.group_parts},
            {"finite_sets_mod_P", qw.finite_sets_mod_P},
            {"group_parts_match", parts_match}},
           qw.report.accepted && parts_match, qw.report.accepted ? (parts_match ? ErrorCode::kOk : ErrorCode::kWitnessMismatch) : qw.report.code,
           msg2);
    if (!qw.report.accepted) return stop(qw.report.code, qw.report.message);
    if (!parts_match) return stop(ErrorCode::kWitnessMismatch, msg2);

    // 3: enlarge for K = [-N, N] and build the nested towers.
    stage = 3;
    const std::uint64_t P = G.num_units();
    const std::uint64_t bound = P * P - 1;
    const std::vector<Arrow> K = quotient_K(G, params.N);
    const EnlargedCover enlarged = enlarge_cover(G, K, qw.witness.colors, bound);
    const TowerSet towers = build_tower(G, K, enlarged.colors, params.tower_depth, bound);
    Json tower_levels = Json::array();
    for (const auto& t : towers.towers)
      tower_levels.push_back({{"color", t.color}, {"levels", t.levels}, {"generated_size", t.generated_size}});
    record(chain, out_dir, 3,
           {{"K", K}, {"size_bound", bound}, {"enlarged", io::report_to_json(enlarged)}, {"towers", tower_levels},
            {"N", towers.N}},
           true, ErrorCode::kOk, "towers built");

    // 4: partition of unity, checked exactly.
    stage = 4;
    const PartitionOfUnity pou = build_pou(towers, G.num_units());
    const PouReport pr = verify_pou(G, K, pou, params.epsilon);
    record(chain, out_dir, 4,
           {{"certificate", io::pou_to_json(pou, &towers)},
            {"epsilon", to_string(params.epsilon)},
            {"report", io::report_to_json(pr)}},
           pr.accepted, pr.code, pr.message);
    if (!pr.accepted) return stop(pr.code, pr.message);

    // 5: cut-down decomposition of f = sum of the K arrows.
    stage = 5;
    ConvElement<Complex> f(G);
    for (Arrow g : K) f.set(g, 1.0);
    const DecompositionReport dr = decompose_via_pou(f, towers.K, pou);
    record(chain, out_dir, 5, {{"element", io::element_to_json(f)}, {"report", io::report_to_json(dr)}}, dr.accepted,
           dr.code, dr.message);
    if (!dr.accepted) return stop(dr.code, dr.message);
  } catch (const Error& e) {
    return stop(e.code(), e.what());
  }
  chain.message = "all stages verified";
  finish(chain, out_dir);
  return chain;
}

CertificateChain check_chain(const std::filesystem::path& out_dir) {
  const Json cj = io::read_json(out_dir / "chain.json");
  CertificateChain chain;
  try {
    for (const auto& s : cj.at("stages")) chain.stages.push_back(stage_from_json(s));
    chain.params = cj.at("params");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad chain file: ") + e.what());
  }
  std::string prev;
  for (const auto& s : chain.stages) {
    const std::string text = io::read_text(out_dir / s.file);
    if (sha256_hex(text) != s.sha256)
      fail(ErrorCode::kHashMismatch, "stage " + std::to_string(s.index) + ": " + s.file + " does not match its hash");
    if (s.input_sha256 != prev)
      fail(ErrorCode::kHashMismatch, "stage " + std::to_string(s.index) + " is not linked to the previous stage");
    if (s.index > 0 && io::parse_json(text).value("input_sha256", "") != prev)
      fail(ErrorCode::kHashMismatch, s.file + " names a different input");
    if (!s.verified && chain.failed_stage == 0) {
      chain.failed_stage = s.index;
      chain.code = s.code;
      chain.message = s.message;
    }
    prev = s.sha256;
  }
  if (chain.stages.size() >= 2) {
    const SystemPtr sys = io::system_from_json(io::read_json(out_dir / "system.json"));
    const DadWitness w = io::witness_from_json(sys, io::read_json(out_dir / "witness.json").at("witness"));
    const DadVerification v = verify_dad_witness(sys, w, default_blowup_bound(w));
    if (!v.accepted && chain.failed_stage == 0) {
      chain.failed_stage = 1;
      chain.code = v.code;
      chain.message = "witness no longer verifies: " + v.message;
    }
  }
  chain.green = chain.failed_stage == 0 && chain.stages.size() == 6;
  if (chain.green) chain.message = "chain intact";
  return chain;
}

// ---- corpus ----

namespace {

Json odometer_case(long N) {
  const Json sys_json{{"kind", "odometer"}, {"base", {2}}};
  const SystemPtr sys = io::system_from_json(sys_json);
  const DadConstruction c = construct_minimal_z_witness(sys, N);
  const DadVerification v = verify_dad_witness(sys, c.witness, default_blowup_bound(c.witness));
  return {{"system", sys_json},
          {"N", N},
          {"witness", io::witness_to_json(c.witness)},
          {"base", io::clopen_to_json(c.base)},
          {"refined", io::clopen_to_json(c.refined)},
          {"return_bound", c.return_bound},
          {"report", io::report_to_json(v)}};
}

Json fibonacci_case() {
  const Json sys_json{{"kind", "subshift"}, {"alphabet", {"a", "b"}}, {"substitution", {{"a", "ab"}, {"b", "a"}}}};
  const SystemPtr sys = io::system_from_json(sys_json);
  const DadConstruction c = construct_minimal_z_witness(sys, 1);
  const DadVerification v = verify_dad_witness(sys, c.witness, default_blowup_bound(c.witness));
  return {{"system", sys_json},
          {"witness", io::witness_to_json(c.witness)},
          {"return_bound", c.return_bound},
          {"report", io::report_to_json(v)}};
}

Json grid_case(std::vector<long> hi, long R) {
  const GridSpace X(std::vector<long>(hi.size(), 0), hi);
  const AsdimWitness w = construct_grid_witness(X, R);
  return {{"space", X.describe()},
          {"witness", io::asdim_witness_to_json(w)},
          {"report", io::report_to_json(verify_asdim_witness(X, w))},
          {"bridge", io::report_to_json(bridge_to_groupoid(X, w))}};
}

Json z12_case(int N) {
  const FiniteGroupoid G = FiniteGroupoid::transformation(FiniteAction::rotation(12));
  const std::vector<Arrow> K = quotient_K(G, 1);
  const std::vector<std::vector<Unit>> V = {{0, 1, 2, 3, 4, 5}, {6, 7, 8, 9, 10, 11}};
  const EnlargedCover e = enlarge_cover(G, K, V, G.num_arrows());
  const TowerSet t = build_tower(G, K, e.colors, N, G.num_arrows());
  const PartitionOfUnity p = build_pou(t, G.num_units());
  return {{"N", N},
          {"certificate", io::pou_to_json(p, &t)},
          {"report", io::report_to_json(verify_pou(G, K, p, Rational(1)))}};
}

Json pair_case() {
  Json norms = Json::array();
  for (std::size_t n = 1; n <= 8; ++n) {
    const FiniteGroupoid G = FiniteGroupoid::pair(n);
    ConvElement<Complex> ones(G);
    for (Arrow g = 0; g < static_cast<Arrow>(G.num_arrows()); ++g) ones.set(g, 1.0);
    norms.push_back({{"n", n}, {"all_ones_norm", io::round12(reduced_norm(ones))}});
  }
  const FiniteGroupoid P3 = FiniteGroupoid::pair(3);
  const double e12 = reduced_norm(ConvElement<Complex>::delta(P3, 0 * 3 + 1));
  const FiniteGroupoid B = FiniteGroupoid::block_pairs({1, 2, 3});
  return {{"all_ones", norms}, {"e12_norm", io::round12(e12)}, {"blocks_123", io::report_to_json(block_decompose(B))}};
}

Json pipeline_case() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("dadim-corpus-" + std::to_string(std::random_device{}()));
  const CertificateChain c = run_pipeline({{"kind", "odometer"}, {"base", {2}}}, PipelineParams{}, dir);
  Json stages = Json::array();
  // Stage 5 carries floats, so its hash is left out of the golden file.
  for (const auto& s : c.stages) {
    Json e{{"kind", s.kind}, {"verified", s.verified}};
    if (s.kind != "decomposition") e["sha256"] = s.sha256;
    stages.push_back(e);
  }
  Json out{{"green", c.green}, {"stages", stages}};
  if (c.green) out["decomposition"] = io::read_json(dir / "decomposition.json").at("report");
  std::filesystem::remove_all(dir);
  return out;
}

bool has_float(const Json& j) {
  if (j.is_number_float()) return true;
  if (j.is_structured())
    for (const auto& v : j) if (has_float(v)) return true;
  return false;
}

void diff_into(const Json& a, const Json& b, const std::string& path, double tol, std::vector<std::string>& out) {
  if (out.size() >= 20) return;
  if (a.is_number() && b.is_number() && (a.is_number_float() || b.is_number_float())) {
    const double x = a.get<double>(), y = b.get<double>();
    if (std::fabs(x - y) > tol * std::max({1.0, std::fabs(x), std::fabs(y)}))
      out.push_back(path + ": " + a.dump() + " != " + b.dump());
    return;
  }
  if (a.type() != b.type()) {
    out.push_back(path + ": type differs");
    return;
  }
  if (a.is_object()) {
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k))
        out.push_back(path + "/" + k + ": missing");
      else
        diff_into(v, b.at(k), path + "/" + k, tol, out);
    }
    for (const auto& [k, v] : b.items())
      if (!a.contains(k)) out.push_back(path + "/" + k + ": unexpected");
    return;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      out.push_back(path + ": length " + std::to_string(a.size()) + " != " + std::to_string(b.size()));
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) diff_into(a[i], b[i], path + "/" + std::to_string(i), tol, out);
    return;
  }
  if (a != b) out.push_back(path + ": " + a.dump() + " != " + b.dump());
}

}  // namespace

std::vector<std::string> json_diff(const Json& golden, const Json& actual, double rel_tol) {
  std::vector<std::string> out;
  diff_into(golden, actual, "", rel_tol, out);
  return out;
}

std::vector<std::string> corpus_case_names() {
  return {"odometer_N1", "odometer_N2", "odometer_N3", "fibonacci_N1", "grid_1d_R2",
          "grid_2d_R1",  "z12_pou_N4",  "z12_pou_N16", "pair_groupoids", "pipeline_dyadic"};
}

Json corpus_case_output(const std::string& name) {
  if (name == "odometer_N1") return odometer_case(1);
  if (name == "odometer_N2") return odometer_case(2);
  if (name == "odometer_N3") return odometer_case(3);
  if (name == "fibonacci_N1") return fibonacci_case();
  if (name == "grid_1d_R2") return grid_case({199}, 2);
  if (name == "grid_2d_R1") return grid_case({19, 19}, 1);
  if (name == "z12_pou_N4") return z12_case(4);
  if (name == "z12_pou_N16") return z12_case(16);
  if (name == "pair_groupoids") return pair_case();
  if (name == "pipeline_dyadic") return pipeline_case();
  fail(ErrorCode::kUsage, "unknown corpus case '" + name + "'");
}

CorpusSummary corpus_check(const std::filesystem::path& dir, bool regenerate) {
  if (!std::filesystem::is_directory(dir))
    fail(ErrorCode::kConfiguration, "corpus directory " + dir.string() + " does not exist");
  const auto names = corpus_case_names();
  std::vector<std::future<CorpusCase>> jobs;
  for (const auto& name : names) {
    jobs.push_back(std::async(std::launch::async, [name, &dir, regenerate] {
      CorpusCase c{name, "", {}};
      const auto path = dir / (name + ".json");
      try {
        const Json actual = corpus_case_output(name);
        if (regenerate) {
          io::write_json(path, actual);
          c.status = "written";
          return c;
        }
        if (!std::filesystem::exists(path)) {
          c.status = "missing";
          c.diffs.push_back(path.string() + " not found");
          return c;
        }
        const std::string golden_text = io::read_text(path);
        if (golden_text == io::dump(actual)) {
          c.status = "match";
          return c;
        }
        const Json golden = io::parse_json(golden_text);
        c.diffs = json_diff(golden, actual);
        // Byte equality is required unless the case carries floats.
        if (c.diffs.empty() && !has_float(golden)) c.diffs.push_back("not byte-identical");
        c.status = c.diffs.empty() ? "within_tolerance" : "diff";
      } catch (const Error& e) {
        c.status = "error";
        c.diffs.push_back(std::string(error_name(e.code())) + ": " + e.what());
      }
      return c;
    }));
  }
  CorpusSummary s;
  s.green = true;
  for (auto& j : jobs) {
    s.cases.push_back(j.get());
    const auto& st = s.cases.back().status;
    if (st != "match" && st != "within_tolerance" && st != "written") s.green = false;
  }
  return s;
}

}  // namespace dadim
