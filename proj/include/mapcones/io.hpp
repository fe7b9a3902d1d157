#pragma once

// JSON (de)serialization shared by the CLI and the ledgers.
//
// Matrix:  {"dims":[dA,dB] or [d], "re":[[..]], "im":[[..]]}, row-major,
//          A-major composite indexing.
// Map:     matrix JSON of the Choi matrix plus {"dimA":.., "dimB":..}.
// Cone:    {"dimA":..,"dimB":..,"include_sp1":bool,"generators":[map..]}.
// Verdict: {"status","gap","certificate","meta"}.

#include "mapcones/cones.hpp"
#include "mapcones/harness.hpp"
#include "mapcones/hpmap.hpp"
#include "mapcones/pptsquare.hpp"
#include "mapcones/verdict.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace mapcones {

using nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json matrix_entries_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return json{{"re", re}, {"im", im}};
}

inline Matrix matrix_entries_from_json(const json& j, int rows, int cols) {
  Matrix m(rows, cols);
  const auto& re = j.at("re");
  const bool has_im = j.contains("im");
  if (static_cast<int>(re.size()) != rows) throw ParseError("matrix: row count mismatch");
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(re[i].size()) != cols) throw ParseError("matrix: col count mismatch");
    for (int jj = 0; jj < cols; ++jj) {
      double a = re[i][jj].get<double>();
      double b = has_im ? j.at("im")[i][jj].get<double>() : 0.0;
      m(i, jj) = cxd(a, b);
    }
  }
  return m;
}

inline json to_json(const HermitianMatrix& a) {
  json j = matrix_entries_json(a.mat());
  j["dims"] = json::array({a.dim()});
  return j;
}

inline json to_json(const BipartiteMatrix& x) {
  json j = matrix_entries_json(x.mat());
  j["dims"] = json::array({x.dimA(), x.dimB()});
  return j;
}

inline json to_json(const HPMap& m) {
  json j = to_json(m.choi());
  j["dimA"] = m.dimA();
  j["dimB"] = m.dimB();
  return j;
}

inline BipartiteMatrix bipartite_from_json(const json& j) {
  if (!j.contains("dims")) throw ParseError("matrix JSON: missing dims");
  auto dims = j.at("dims");
  int dA, dB;
  if (dims.size() == 2) {
    dA = dims[0].get<int>();
    dB = dims[1].get<int>();
  } else if (dims.size() == 1) {
    dA = 1;
    dB = dims[0].get<int>();
  } else {
    throw ParseError("matrix JSON: dims must have one or two entries");
  }
  return BipartiteMatrix(dA, dB, matrix_entries_from_json(j, dA * dB, dA * dB));
}

inline HermitianMatrix hermitian_from_json(const json& j) {
  auto dims = j.at("dims");
  int d = dims.size() == 1 ? dims[0].get<int>()
                           : dims[0].get<int>() * dims[1].get<int>();
  return HermitianMatrix(matrix_entries_from_json(j, d, d));
}

inline HPMap hpmap_from_json(const json& j) {
  if (!j.contains("dimA") || !j.contains("dimB"))
    throw ParseError("map JSON: missing dimA/dimB");
  int dA = j.at("dimA").get<int>(), dB = j.at("dimB").get<int>();
  return from_choi(dA, dB, matrix_entries_from_json(j, dA * dB, dA * dB));
}

inline json to_json(const AugmentedCone& k) {
  json gens = json::array();
  for (const auto& g : k.generators) gens.push_back(to_json(g));
  return json{{"dimA", k.dimA},
              {"dimB", k.dimB},
              {"include_sp1", k.include_sp1},
              {"generators", gens}};
}

inline AugmentedCone cone_from_json(const json& j) {
  AugmentedCone k;
  k.dimA = j.at("dimA").get<int>();
  k.dimB = j.at("dimB").get<int>();
  k.include_sp1 = j.value("include_sp1", true);
  for (const auto& g : j.value("generators", json::array()))
    k.generators.push_back(hpmap_from_json(g));
  return k;
}

inline json vector_json(const Vector& v) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"re", re}, {"im", im}};
}

inline json to_json(const Certificate& c) {
  if (c.empty()) return nullptr;
  json j{{"kind", c.kind}};
  if (!c.note.empty()) j["note"] = c.note;
  if (c.vec.size() > 0) j["vector"] = vector_json(c.vec);
  if (c.mat_a.size() > 0) j["matrix"] = matrix_entries_json(c.mat_a);
  if (c.mat_b.size() > 0) j["matrix_b"] = matrix_entries_json(c.mat_b);
  if (!c.kraus.empty()) {
    json ks = json::array();
    for (const auto& v : c.kraus) ks.push_back(matrix_entries_json(v));
    j["kraus"] = ks;
  }
  if (!c.parts.empty()) {
    json ps = json::array();
    for (const auto& p : c.parts) ps.push_back(matrix_entries_json(p));
    j["parts"] = ps;
  }
  if (!c.weights.empty()) j["weights"] = c.weights;
  return j;
}

inline json to_json(const MembershipVerdict& v) {
  json j{{"status", to_string(v.status)}, {"gap", v.gap}};
  j["certificate"] = to_json(v.certificate);
  if (!v.meta.empty()) j["meta"] = v.meta;
  return j;
}

inline json to_json(const CheckResult& c) {
  return json{{"name", c.name},
              {"samples", c.samples},
              {"passed", c.passed},
              {"expected_to_fail", c.expected_to_fail},
              {"violations", c.violations}};
}

inline json to_json(const HarnessReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return json{{"cone", r.cone}, {"seed", r.seed}, {"checks", checks}};
}

inline json to_json(const AmpliationReport& r) {
  return json{{"side", r.side},
              {"agree", r.agree},
              {"predicates", r.predicates},
              {"verdicts", r.verdicts},
              {"disagreements", r.disagreements}};
}

inline json to_json(const TrialRecord& t) {
  return json{{"trial", t.trial},
              {"seed", t.seed},
              {"dims", {t.dimA, t.dimB}},
              {"phi_hash", t.phi_hash},
              {"psi_hash", t.psi_hash},
              {"ppt", {{"status", to_string(t.ppt.status)}, {"gap", t.ppt.gap}}},
              {"eb", {{"status", to_string(t.eb.status)}, {"gap", t.eb.gap}}},
              {"flag", t.flag}};
}

inline json to_json(const SamplerReport& r) {
  return json{{"statement", r.statement}, {"trials", r.trials},   {"passes", r.passes},
              {"unknowns", r.unknowns},   {"failures", r.failures}, {"witnesses", r.witnesses}};
}

// ---------------------------------------------------------------------------
// Builtin-name parsing for CLI arguments.

inline std::vector<double> parse_params(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ParseError("bad numeric parameter: " + item);
    }
  }
  return out;
}

/// Resolves a builtin map name ("sigma", "tau", "identity[:d]",
/// "transpose[:d]", "phi_abcd:a,b,c,d", "phi_alpha:x") or a JSON file path.
inline HPMap resolve_map(const std::string& arg) {
  auto colon = arg.find(':');
  std::string head = colon == std::string::npos ? arg : arg.substr(0, colon);
  std::string tail = colon == std::string::npos ? "" : arg.substr(colon + 1);
  if (head == "sigma") return sigma_map();
  if (head == "tau") return tau_map();
  if (head == "identity") return identity_map(tail.empty() ? 2 : static_cast<int>(std::stoi(tail)));
  if (head == "transpose")
    return transpose_map(tail.empty() ? 2 : static_cast<int>(std::stoi(tail)));
  if (head == "phi_abcd") {
    auto p = parse_params(tail);
    if (p.size() != 4) throw ParseError("phi_abcd needs four parameters a,b,c,d");
    return phi_abcd(p[0], p[1], p[2], p[3]);
  }
  if (head == "phi_alpha") {
    auto p = parse_params(tail);
    if (p.size() != 1) throw ParseError("phi_alpha needs one parameter");
    return phi_alpha(p[0]);
  }
  std::ifstream f(arg);
  if (!f) throw ParseError("cannot open map file or unknown builtin: " + arg);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return hpmap_from_json(j);
}

inline BipartiteMatrix resolve_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open matrix file: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return bipartite_from_json(j);
}

/// Cone handles: "cp","ccp","ppt","dec","p:k","sp:k","example-K",
/// "cp-after-e11", or a cone JSON file.
inline ConeSpec resolve_cone(const std::string& arg) {
  std::string s = arg;
  for (auto& ch : s) ch = static_cast<char>(std::tolower(ch));
  if (s == "cp") return ConeSpec::builtin(ConeId::cp());
  if (s == "ccp") return ConeSpec::builtin(ConeId::ccp());
  if (s == "ppt") return ConeSpec::builtin(ConeId::ppt());
  if (s == "dec") return ConeSpec::builtin(ConeId::dec());
  if (s.rfind("p:", 0) == 0) return ConeSpec::builtin(ConeId::p(std::stoi(s.substr(2))));
  if (s.rfind("sp:", 0) == 0) return ConeSpec::builtin(ConeId::sp(std::stoi(s.substr(3))));
  if (s == "example-k") return ConeSpec::augmented(example_cone());
  if (s == "cp-after-e11") {
    Matrix c = Matrix::Zero(4, 4);
    c(0, 0) = 1.0;  // Choi e11 (x) e11
    return ConeSpec::cp_after(from_choi(2, 2, c));
  }
  std::ifstream f(arg);
  if (!f) throw ParseError("cannot open cone file or unknown cone: " + arg);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return ConeSpec::augmented(cone_from_json(j));
}

}  // namespace mapcones
