#include "reconf/io.hpp"

#include <fstream>
#include <sstream>

#include "reconf/errors.hpp"

namespace reconf {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw malformed(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw malformed(std::string(what) + " must be an integer");
  return j.get<int>();
}

int int_field(const Json& j, const char* key) { return as_int(field(j, key), key); }

bool bool_field(const Json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw malformed(std::string(key) + " must be a boolean");
  return j.at(key).get<bool>();
}

std::vector<int> int_list(const Json& j, const char* what) {
  if (!j.is_array()) throw malformed(std::string(what) + " must be a list");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(as_int(x, what));
  return out;
}

VertexSet vertex_set(const Json& j, int n, const char* what) {
  VertexSet s(n);
  for (int v : int_list(j, what)) {
    if (v < 0 || v >= n) throw malformed(std::string(what) + " vertex out of range");
    s.set(v);
  }
  return s;
}

Json set_json(const VertexSet& s) { return s.members(); }

void check_kind(const Json& j, const char* kind) {
  if (!j.is_object()) throw malformed("artifact must be an object");
  if (j.contains("kind") && j.at("kind") != kind)
    throw malformed(std::string("expected kind \"") + kind + "\"");
  if (j.contains("version") && j.at("version") != kFormatVersion) throw malformed("unsupported version");
}

Json head(const char* kind) { return Json{{"kind", kind}, {"version", kFormatVersion}}; }

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw malformed(e.what());
  }
}

Json tape_json(const Tape& t) {
  Json content = Json::object(), number = Json::object();
  for (int c = 0; c < t.size(); ++c)
    if (!t.content[c].empty()) content[std::to_string(c)] = t.content[c].members();
  Json out{{"cells", to_json(t.cells)}, {"content", content}, {"start", t.start}, {"end", t.end}};
  if (t.numbered()) {
    for (int c = 0; c < t.size(); ++c) number[std::to_string(c)] = t.number[c];
    out["number"] = number;
  }
  out["cells"].erase("kind");
  out["cells"].erase("version");
  return out;
}

int cell_key(const std::string& key, int size) {
  std::size_t used = 0;
  int c = -1;
  try {
    c = std::stoi(key, &used);
  } catch (const std::exception&) {
    throw malformed("cell key \"" + key + "\" is not an integer");
  }
  if (used != key.size() || c < 0 || c >= size) throw malformed("cell key \"" + key + "\" out of range");
  return c;
}

Tape tape_from(const Json& j, int sigma) {
  Tape t;
  t.cells = graph_from_json(field(j, "cells"));
  const int n = t.cells.n();
  t.content.assign(n, LetterSet(sigma));
  const Json& content = field(j, "content");
  if (!content.is_object()) throw malformed("content must map cells to letter lists");
  for (const auto& [key, letters] : content.items()) {
    int c = cell_key(key, n);
    for (int a : int_list(letters, "content")) {
      if (a < 0 || a >= sigma) throw malformed("letter out of range");
      t.content[c].set(a);
    }
  }
  t.start = int_field(j, "start");
  t.end = int_field(j, "end");
  if (t.start < 0 || t.start >= n || t.end < 0 || t.end >= n) throw malformed("start/end out of range");
  if (j.contains("number")) {
    const Json& number = j.at("number");
    if (!number.is_object()) throw malformed("number must map cells to integers");
    t.number.assign(n, 0);
    std::vector<bool> seen(n, false);
    for (const auto& [key, value] : number.items()) {
      int c = cell_key(key, n);
      t.number[c] = as_int(value, "number");
      seen[c] = true;
    }
    for (bool s : seen)
      if (!s) throw malformed("number must cover every cell");
  }
  return t;
}

Json formula_node(const Formula& f) {
  if (f.op == Formula::Op::kVar) return f.var;
  Json kids = Json::array();
  for (const auto& k : f.kids) kids.push_back(formula_node(k));
  return Json{{f.op == Formula::Op::kAnd ? "and" : "or", kids}};
}

Formula formula_from_node(const Json& j) {
  if (j.is_number_integer()) return Formula::variable(j.get<int>());
  if (!j.is_object() || j.size() != 1) throw malformed("formula node must be a variable or {\"and\"|\"or\": [...]}");
  auto it = j.begin();
  Formula f;
  if (it.key() == "and")
    f.op = Formula::Op::kAnd;
  else if (it.key() == "or")
    f.op = Formula::Op::kOr;
  else
    throw malformed("unknown connective \"" + it.key() + "\"");
  if (!it.value().is_array()) throw malformed("connective needs a list");
  for (const auto& k : it.value()) f.kids.push_back(formula_from_node(k));
  return f;
}

}  // namespace

Json to_json(const Graph& g) {
  Json out = head("graph");
  out["n"] = g.n();
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  out["edges"] = edges;
  if (!g.labels().empty()) {
    Json labels = Json::object();
    for (const auto& [v, l] : g.labels()) labels[std::to_string(v)] = l;
    out["labels"] = labels;
  }
  return out;
}

Graph graph_from_json(const Json& j) {
  return guarded([&] {
    check_kind(j, "graph");
    const int n = int_field(j, "n");
    if (n < 0) throw malformed("n must be non-negative");
    std::vector<Edge> edges;
    const Json& e = field(j, "edges");
    if (!e.is_array()) throw malformed("edges must be a list");
    for (const auto& pair : e) {
      auto uv = int_list(pair, "edge");
      if (uv.size() != 2) throw malformed("edge must have two endpoints");
      edges.emplace_back(uv[0], uv[1]);
    }
    std::map<int, std::string> labels;
    if (j.contains("labels")) {
      if (!j.at("labels").is_object()) throw malformed("labels must be an object");
      for (const auto& [key, value] : j.at("labels").items()) {
        if (!value.is_string()) throw malformed("label must be a string");
        labels[cell_key(key, n)] = value.get<std::string>();
      }
    }
    return Graph(n, edges, labels);
  });
}

Json to_json(const Provenance& p) {
  Json data = Json::object();
  for (const auto& [k, v] : p.data) data[k] = v;
  return Json{{"construction", p.construction}, {"data", data}};
}

Provenance provenance_from_json(const Json& j) {
  return guarded([&] {
    Provenance p;
    if (!field(j, "construction").is_string()) throw malformed("construction must be a string");
    p.construction = j.at("construction").get<std::string>();
    if (j.contains("data")) {
      if (!j.at("data").is_object()) throw malformed("provenance data must be an object");
      for (const auto& [k, v] : j.at("data").items()) p.data[k] = int_list(v, "provenance data");
    }
    return p;
  });
}

Json to_json(const DsrInstance& inst) {
  Json out = head("dsr");
  Json g = to_json(inst.graph);
  g.erase("kind");
  g.erase("version");
  out["graph"] = g;
  out["k"] = inst.k;
  out["source"] = set_json(inst.source);
  out["target"] = set_json(inst.target);
  out["rule"] = inst.rule == Rule::kSlide ? "slide" : "jump";
  out["connected"] = inst.connected;
  if (inst.core) out["core"] = set_json(*inst.core);
  if (!inst.partition.empty()) {
    Json parts = Json::array();
    for (const auto& p : inst.partition) parts.push_back(set_json(p));
    out["partition"] = parts;
  }
  if (!inst.provenance.empty()) out["provenance"] = to_json(inst.provenance);
  return out;
}

DsrInstance dsr_from_json(const Json& j) {
  return guarded([&] {
    check_kind(j, "dsr");
    DsrInstance inst;
    inst.graph = graph_from_json(field(j, "graph"));
    const int n = inst.graph.n();
    inst.k = int_field(j, "k");
    inst.source = vertex_set(field(j, "source"), n, "source");
    inst.target = vertex_set(field(j, "target"), n, "target");
    std::string rule = j.value("rule", "slide");
    if (rule != "slide" && rule != "jump") throw malformed("rule must be \"slide\" or \"jump\"");
    inst.rule = rule == "slide" ? Rule::kSlide : Rule::kJump;
    inst.connected = bool_field(j, "connected", false);
    if (j.contains("core")) inst.core = vertex_set(j.at("core"), n, "core");
    if (j.contains("partition")) {
      if (!j.at("partition").is_array()) throw malformed("partition must be a list of lists");
      for (const auto& p : j.at("partition")) inst.partition.push_back(vertex_set(p, n, "partition"));
    }
    if (j.contains("provenance")) inst.provenance = provenance_from_json(j.at("provenance"));
    auto problems = validate_dsr(inst);
    if (!problems.empty()) throw malformed(problems.front());
    return inst;
  });
}

Json to_json(const DcrInstance& inst) {
  Json out = head("dcr");
  Json g = to_json(inst.graph);
  g.erase("kind");
  g.erase("version");
  out["graph"] = g;
  out["k"] = inst.k;
  out["source"] = set_json(inst.source);
  out["target"] = set_json(inst.target);
  if (inst.core) out["core"] = set_json(*inst.core);
  out["d"] = inst.d;
  out["family"] = inst.family == Family::kK3dFree ? "k3d-free" : "k4d-minor-free";
  if (inst.anchor >= 0) out["anchor"] = inst.anchor;
  return out;
}

DcrInstance dcr_from_json(const Json& j) {
  return guarded([&] {
    if (j.is_object() && j.value("kind", "dcr") == "dsr") {
      // A sliding DSR instance read as core reconfiguration.
      auto d = dsr_from_json(j);
      if (d.rule != Rule::kSlide || d.connected || !d.partition.empty())
        throw malformed("only plain token sliding instances can be kernelized");
      DcrInstance inst;
      inst.graph = d.graph;
      inst.k = d.k;
      inst.source = d.source;
      inst.target = d.target;
      inst.core = d.core;
      return inst;
    }
    check_kind(j, "dcr");
    DcrInstance inst;
    inst.graph = graph_from_json(field(j, "graph"));
    const int n = inst.graph.n();
    inst.k = int_field(j, "k");
    inst.source = vertex_set(field(j, "source"), n, "source");
    inst.target = vertex_set(field(j, "target"), n, "target");
    if (j.contains("core")) inst.core = vertex_set(j.at("core"), n, "core");
    inst.d = j.contains("d") ? int_field(j, "d") : 2;
    std::string family = j.value("family", "k3d-free");
    if (family != "k3d-free" && family != "k4d-minor-free")
      throw malformed("family must be \"k3d-free\" or \"k4d-minor-free\"");
    inst.family = family == "k3d-free" ? Family::kK3dFree : Family::kK4dMinorFree;
    inst.anchor = j.contains("anchor") ? int_field(j, "anchor") : -1;
    if (inst.anchor < -1 || inst.anchor >= n) throw malformed("anchor out of range");
    if (inst.source.count() != inst.k || inst.target.count() != inst.k) throw malformed("source/target size differs from k");
    return inst;
  });
}

Json to_json(const TapeInstance& inst) {
  Json out = head("tape");
  out["sigma"] = inst.sigma;
  Json tapes = Json::array();
  for (const auto& t : inst.tapes) tapes.push_back(tape_json(t));
  out["tapes"] = tapes;
  out["cs"] = inst.cs;
  out["ct"] = inst.ct;
  out["sync"] = inst.sync;
  if (inst.sync || inst.r) out["r"] = inst.r;
  if (!inst.provenance.empty()) out["provenance"] = to_json(inst.provenance);
  return out;
}

TapeInstance tape_from_json(const Json& j) {
  return guarded([&] {
    check_kind(j, "tape");
    TapeInstance inst;
    inst.sigma = int_field(j, "sigma");
    if (inst.sigma < 0) throw malformed("sigma must be non-negative");
    const Json& tapes = field(j, "tapes");
    if (!tapes.is_array()) throw malformed("tapes must be a list");
    for (const auto& t : tapes) inst.tapes.push_back(tape_from(t, inst.sigma));
    inst.cs = int_list(field(j, "cs"), "cs");
    inst.ct = int_list(field(j, "ct"), "ct");
    inst.sync = bool_field(j, "sync", false);
    inst.r = j.contains("r") ? int_field(j, "r") : 0;
    if (j.contains("provenance")) inst.provenance = provenance_from_json(j.at("provenance"));
    auto problems = validate_instance(inst);
    if (!problems.empty()) throw malformed(problems.front());
    return inst;
  });
}

Json to_json(const MultiTapeInstance& inst) {
  Json out = head("multi");
  out["sigma"] = inst.sigma;
  Json tuples = Json::array();
  for (const auto& tuple : inst.tuples) {
    Json list = Json::array();
    for (const auto& t : tuple) list.push_back(tape_json(t));
    tuples.push_back(list);
  }
  out["tuples"] = tuples;
  out["sync"] = inst.sync;
  if (inst.sync || inst.r) out["r"] = inst.r;
  if (!inst.provenance.empty()) out["provenance"] = to_json(inst.provenance);
  return out;
}

MultiTapeInstance multi_from_json(const Json& j) {
  return guarded([&] {
    check_kind(j, "multi");
    MultiTapeInstance inst;
    inst.sigma = int_field(j, "sigma");
    if (inst.sigma < 0) throw malformed("sigma must be non-negative");
    const Json& tuples = field(j, "tuples");
    if (!tuples.is_array()) throw malformed("tuples must be a list of tape lists");
    for (const auto& tuple : tuples) {
      if (!tuple.is_array()) throw malformed("each tuple must be a list of tapes");
      std::vector<Tape> list;
      for (const auto& t : tuple) list.push_back(tape_from(t, inst.sigma));
      inst.tuples.push_back(std::move(list));
    }
    inst.sync = bool_field(j, "sync", false);
    inst.r = j.contains("r") ? int_field(j, "r") : 0;
    if (j.contains("provenance")) inst.provenance = provenance_from_json(j.at("provenance"));
    auto problems = validate_multi(inst);
    if (!problems.empty()) throw malformed(problems.front());
    return inst;
  });
}

Json to_json(const NormalizedFormula& phi) {
  Json out = head("formula");
  out["variables"] = phi.variables;
  out["formula"] = formula_node(phi.root);
  return out;
}

NormalizedFormula formula_from_json(const Json& j) {
  return guarded([&] {
    check_kind(j, "formula");
    NormalizedFormula phi;
    phi.variables = int_field(j, "variables");
    phi.root = formula_from_node(field(j, "formula"));
    auto problem = formula_problem(phi);
    if (!problem.empty()) throw malformed(problem);
    return phi;
  });
}

Json witness_to_json(const std::vector<VertexSet>& seq) {
  Json out = Json::array();
  for (const auto& d : seq) out.push_back(set_json(d));
  return out;
}

std::vector<VertexSet> witness_from_json(const Json& j, int n) {
  return guarded([&] {
    if (!j.is_array()) throw malformed("witness must be a list of vertex lists");
    std::vector<VertexSet> out;
    for (const auto& d : j) out.push_back(vertex_set(d, n, "witness"));
    return out;
  });
}

Json tape_witness_to_json(const std::vector<Config>& seq) { return seq; }

std::vector<Config> tape_witness_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_array()) throw malformed("witness must be a list of configurations");
    std::vector<Config> out;
    for (const auto& c : j) out.push_back(int_list(c, "configuration"));
    return out;
  });
}

Artifact read_artifact(const Json& j, const std::string& fallback) {
  if (!j.is_object()) throw malformed("artifact must be an object");
  std::string kind = fallback;
  if (j.contains("kind")) {
    if (!j.at("kind").is_string()) throw malformed("kind must be a string");
    kind = j.at("kind").get<std::string>();
  }
  if (kind == "graph") return {kind, graph_from_json(j)};
  if (kind == "dsr") return {kind, dsr_from_json(j)};
  if (kind == "dcr") return {kind, dcr_from_json(j)};
  if (kind == "tape") return {kind, tape_from_json(j)};
  if (kind == "multi") return {kind, multi_from_json(j)};
  if (kind == "formula") return {kind, formula_from_json(j)};
  throw malformed(kind.empty() ? "artifact has no kind" : "unknown kind \"" + kind + "\"");
}

Json write_artifact(const Artifact& a) {
  return std::visit([](const auto& v) { return to_json(v); }, a.value);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw malformed(std::string("invalid JSON: ") + e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw malformed("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

std::string dump(const Json& j) { return j.dump(); }

}  // namespace reconf
