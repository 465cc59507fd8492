#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dadim/convolution.hpp"
#include "dadim/dad_witness.hpp"
#include "dadim/errors.hpp"
#include "dadim/groupoid.hpp"
#include "dadim/io.hpp"
#include "dadim/pou.hpp"
#include "dadim/symbolic.hpp"

namespace dadim {

// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

// Z/P acting on itself by rotation, P = k_1...k_depth, standing in for the
// odometer truncated at `depth`.
FiniteGroupoid quotient_groupoid(const SymbolicSystem& sys, int depth);
// Arrows whose group part lies in [-radius, radius] (mod P).
std::vector<Arrow> quotient_K(const FiniteGroupoid& G, long radius);

struct QuotientWitness {
  GroupoidDadWitness witness;  // colors = residues of the clopen colors
  GroupoidVerification report;
  // Per color: group parts of the generated subgroupoid and the declared
  // finite set reduced mod P; equal when the color does not wrap around.
  std::vector<std::vector<long>> group_parts;
  std::vector<std::vector<long>> finite_sets_mod_P;
};

// Transfers a Z-witness to the quotient transformation groupoid with
// K = arrows of group part in E. Colors finer than `depth` give DepthExceeded.
// Smallness: at most P^2 - 1 arrows, i.e. no color wraps around the cycle.
QuotientWitness quotient_groupoid_witness(const DadWitness& w, int depth, const FiniteGroupoid& G, long radius);

struct PipelineParams {
  long N = 1;                  // K = group parts in [-N, N]
  int depth = 6;               // quotient depth
  std::optional<long> witness_N;  // default: the largest that fits the depth
  int tower_depth = 3;
  Rational epsilon = Rational(1);
};

struct ChainStage {
  int index = 0;
  std::string kind;
  std::string file;
  std::string sha256;
  std::string input_sha256;  // hash of the previous stage's file
  bool verified = false;
  ErrorCode code = ErrorCode::kOk;
  std::string message;
  std::string created;       // UTC timestamp
};

struct CertificateChain {
  std::vector<ChainStage> stages;
  bool green = false;
  int failed_stage = 0;      // 0 when green
  ErrorCode code = ErrorCode::kOk;
  std::string message;
  io::Json params;
};

// Stages: 1 witness, 2 groupoid, 3 tower, 4 pou, 5 decomposition. Each writes
// <kind>.json into out_dir, next to system.json and chain.json. Stage errors
// stop the chain and are recorded with their stage index.
CertificateChain run_pipeline(const io::Json& system, const PipelineParams& params,
                              const std::filesystem::path& out_dir);

// Recomputes every file hash and link; HashMismatch on the first difference.
// Then re-verifies the witness against the system.
CertificateChain check_chain(const std::filesystem::path& out_dir);

io::Json chain_to_json(const CertificateChain& c);

// Largest witness N >= min_N whose Z-witness colors live at depth <= depth;
// DepthExceeded when even min_N does not fit.
long fitting_witness_N(const SystemPtr& sys, int depth, long min_N);

struct CorpusCase {
  std::string name;
  std::string status;  // match, within_tolerance, diff, missing, written, error
  std::vector<std::string> diffs;
};

struct CorpusSummary {
  std::vector<CorpusCase> cases;
  bool green = false;
};

std::vector<std::string> corpus_case_names();
io::Json corpus_case_output(const std::string& name);

// Configuration error when the directory does not exist. With regenerate the
// golden files are rewritten instead of compared.
CorpusSummary corpus_check(const std::filesystem::path& dir, bool regenerate = false);

// Differences between two documents; floats compared with relative tolerance.
std::vector<std::string> json_diff(const io::Json& golden, const io::Json& actual, double rel_tol = 1e-9);

}  // namespace dadim
