#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "dadim/coarse.hpp"
#include "dadim/convolution.hpp"
#include "dadim/dad_witness.hpp"
#include "dadim/groupoid.hpp"
#include "dadim/nerve.hpp"
#include "dadim/pou.hpp"
#include "dadim/symbolic.hpp"

// JSON formats. Keys come out sorted (nlohmann::json uses std::map), exact
// rationals are "p/q" strings and floats are rounded to 12 significant digits.
namespace dadim::io {

using Json = nlohmann::json;

Json read_json(const std::filesystem::path& path);   // kIo / kParse
Json parse_json(const std::string& text);            // kParse
std::string dump(const Json& j);                     // canonical text, trailing newline
void write_json(const std::filesystem::path& path, const Json& j);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

double round12(double x);
Json rational_json(const Rational& q);
Rational rational_from(const Json& j);  // "p/q" string or integer

// {"kind":"odometer","base":[2]} or {"kind":"subshift","alphabet":[...],
// "substitution":{...}} / "forbidden":[...]; optional "depth_limit".
SystemPtr system_from_json(const Json& j);
Json system_to_json(const SymbolicSystem& s);

// {"offset":o,"length":l,"cells":[printable words, sorted]}
Json clopen_to_json(const ClopenSet& s);
ClopenSet clopen_from_json(const SystemPtr& sys, const Json& j);

// {"E":[...],"colors":[...],"finite_sets":[[...],...]}
Json witness_to_json(const DadWitness& w);
DadWitness witness_from_json(const SystemPtr& sys, const Json& j);
Json report_to_json(const DadVerification& r);

// {"units":n,"arrows":[{"id","s","r"}],"compose":[[g,h,gh],...]},
// {"pair":n}, {"block_pairs":[sizes]} or {"action":{"rotation":n}} /
// {"action":{"cyclic":n,"act":[[...]]}} / {"action":{"mult":[[...]],"act":[[...]]}}.
FiniteGroupoid groupoid_from_json(const Json& j);
Json groupoid_to_json(const FiniteGroupoid& G);
FiniteAction action_from_json(const Json& j);
Json action_to_json(const FiniteAction& a);

Json subgroupoid_to_json(const Subgroupoid& H);
Subgroupoid subgroupoid_from_json(const Json& j);
// {"K":[...],"colors":[[...]],"generated":[...]}
Json groupoid_witness_to_json(const GroupoidDadWitness& w);
GroupoidDadWitness groupoid_witness_from_json(const Json& j);
Json report_to_json(const GroupoidVerification& r);

// {"grid":{"dims":[...]}} or {"grid":{"lo":[...],"hi":[...]}},
// {"points":n,"edges":[[a,b,w],...]}, {"matrix":[[...]]},
// {"group_ball":{"kind":"free_abelian"|"permutation","generators":[...],"radius":r}}.
std::unique_ptr<FiniteMetricSpace> space_from_json(const Json& j);
Json asdim_witness_to_json(const AsdimWitness& w);
AsdimWitness asdim_witness_from_json(const Json& j);
Json report_to_json(const AsdimVerification& r);
Json report_to_json(const BridgeResult& r);

// {"vertices":[...],"maximal_faces":[[...]]}
Json complex_to_json(const SimplicialComplex& C);
SimplicialComplex complex_from_json(const Json& j);
// [{"id":x,"weights":[[v,"p/q"],...]},...]
Json map_to_json(const SampledMap& f);
SampledMap map_from_json(const Json& j);
// {"action":{...},"vertex_act":[[...]]}
ComplexAction complex_action_from_json(const Json& j);
Json complex_action_to_json(const ComplexAction& a);
Json cover_to_json(const EquivariantCover& U);
EquivariantCover cover_from_json(const Json& j);
Json report_to_json(const CoverConditions& c);
Json report_to_json(const EquivarianceReport& r);
Json report_to_json(const NerveMap& m);
Json report_to_json(const BlrWitness& w);

// {"N":n,"num_units":m,"psi":[[[unit,"p/q"],...],...],"norm_sq":[[unit,"p/q"],...],
//  "supports":[[...]],"towers":[{"color","levels":[[...]],"generated_size"}]}
// norm_sq lists only the units where it differs from 1.
Json pou_to_json(const PartitionOfUnity& p, const TowerSet* towers = nullptr);
PartitionOfUnity pou_from_json(const Json& j);
Json report_to_json(const PouReport& r);
Json report_to_json(const EnlargedCover& e);

// {"terms":[[arrow,re,im],...]}
Json element_to_json(const ConvElement<Complex>& f);
ConvElement<Complex> element_from_json(const FiniteGroupoid& G, const Json& j);
Json report_to_json(const CommutatorReport& r);
Json report_to_json(const DecompositionReport& r);
Json report_to_json(const BlockDecomposition& b);

std::vector<long> long_list(const Json& j);
std::vector<Arrow> arrow_list(const Json& j);

}  // namespace dadim::io
