#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "reconf/engine.hpp"
#include "reconf/kernelize.hpp"
#include "reconf/reductions.hpp"
#include "reconf/tape.hpp"

namespace reconf {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Artifacts are flat objects {"kind": ..., "version": 1, <fields>}.
/// Readers throw malformed-input on any shape or range problem.
Json to_json(const Graph& g);
Json to_json(const DsrInstance& inst);
Json to_json(const DcrInstance& inst);
Json to_json(const TapeInstance& inst);
Json to_json(const MultiTapeInstance& inst);
Json to_json(const NormalizedFormula& phi);
Json to_json(const Provenance& p);

Graph graph_from_json(const Json& j);
DsrInstance dsr_from_json(const Json& j);
DcrInstance dcr_from_json(const Json& j);
TapeInstance tape_from_json(const Json& j);
MultiTapeInstance multi_from_json(const Json& j);
NormalizedFormula formula_from_json(const Json& j);
Provenance provenance_from_json(const Json& j);

Json witness_to_json(const std::vector<VertexSet>& seq);
std::vector<VertexSet> witness_from_json(const Json& j, int n);
Json tape_witness_to_json(const std::vector<Config>& seq);
std::vector<Config> tape_witness_from_json(const Json& j);

using ArtifactValue =
    std::variant<Graph, DsrInstance, DcrInstance, TapeInstance, MultiTapeInstance, NormalizedFormula>;
struct Artifact {
  std::string kind;  // graph | dsr | dcr | tape | multi | formula
  ArtifactValue value;
};

/// Routes on "kind" (checking "version"); `fallback` is used when the object
/// carries no kind.
Artifact read_artifact(const Json& j, const std::string& fallback = "");
Json write_artifact(const Artifact& a);

Json parse_json(const std::string& text);
Json load_json_file(const std::string& path);
/// Compact, keys sorted.
std::string dump(const Json& j);

}  // namespace reconf
