#include "exqp/problem_io.hpp"

#include <json.hpp>

namespace exqp {

using nlohmann::json;

namespace {

const char* cone_name(ConeKind c) {
  switch (c) {
    case ConeKind::Psd: return "psd";
    case ConeKind::Dnn: return "dnn";
    case ConeKind::Cpp: return "cpp";
  }
  return "psd";
}

ConeKind cone_from(const std::string& s) {
  if (s == "psd") return ConeKind::Psd;
  if (s == "dnn") return ConeKind::Dnn;
  if (s == "cpp") return ConeKind::Cpp;
  throw Error("parse_problem: unknown cone '" + s + "'");
}

std::string class_name(const ExactnessClass& c) {
  switch (c.tag) {
    case ClassTag::RogNiqcBase: return "rog_niqc";
    case ClassTag::RogRank2: return "rog_rank2";
    case ClassTag::Convex: return "convex";
    case ClassTag::SignPattern: return "sign_pattern";
    case ClassTag::SubmodularBox: return "submodular_box";
    case ClassTag::CombinatorialFace: return "combinatorial_face";
    case ClassTag::StdQp:
      switch (*c.subclass) {
        case StdQpSub::Q1: return "stdqp_q1";
        case StdQpSub::Concave: return "stdqp_concave";
        case StdQpSub::Convex: return "stdqp_convex";
      }
      return "stdqp_q1";
    case ClassTag::AssumedExact: return "assumed_exact";
  }
  return "assumed_exact";
}

ExactnessClass class_from(const std::string& s) {
  ExactnessClass c;
  if (s == "rog_niqc") c.tag = ClassTag::RogNiqcBase;
  else if (s == "rog_rank2") c.tag = ClassTag::RogRank2;
  else if (s == "convex") c.tag = ClassTag::Convex;
  else if (s == "sign_pattern") c.tag = ClassTag::SignPattern;
  else if (s == "submodular_box") c.tag = ClassTag::SubmodularBox;
  else if (s == "combinatorial_face") c.tag = ClassTag::CombinatorialFace;
  else if (s == "stdqp_q1") { c.tag = ClassTag::StdQp; c.subclass = StdQpSub::Q1; }
  else if (s == "stdqp_concave") { c.tag = ClassTag::StdQp; c.subclass = StdQpSub::Concave; }
  else if (s == "stdqp_convex") { c.tag = ClassTag::StdQp; c.subclass = StdQpSub::Convex; }
  else if (s == "assumed_exact") c.tag = ClassTag::AssumedExact;
  else throw Error("parse_problem: unknown class '" + s + "'");
  return c;
}

SymMat matrix_from(const json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw Error(std::string("parse_problem: ") + what + " must be an " + std::to_string(n) +
                "x" + std::to_string(n) + " array");
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = j.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw Error(std::string("parse_problem: ragged matrix in ") + what);
    for (int k = 0; k < n; ++k) {
      if (!row.at(k).is_number())
        throw Error(std::string("parse_problem: non-numeric entry in ") + what);
      M(i, k) = row.at(k).get<double>();
    }
  }
  try {
    return SymMat::from_dense(M, 1e-12);
  } catch (const Error& e) {
    throw Error(std::string("parse_problem: ") + what + ": " + e.what());
  }
}

json matrix_to(const SymMat& A) {
  const int n = A.dim();
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(A(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Problem parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("parse_problem: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("parse_problem: top level must be an object");
  if (!j.contains("n") || !j.at("n").is_number_integer())
    throw Error("parse_problem: missing integer field 'n'");

  Problem prob;
  prob.n = j.at("n").get<int>();
  if (prob.n <= 0) throw Error("parse_problem: n must be positive");
  prob.cone = cone_from(j.value("cone", std::string("psd")));
  if (prob.cone == ConeKind::Cpp && prob.n > 4)
    throw Error("parse_problem: cone 'cpp' is unsupported for n > 4");

  const json& hj = j.at("H");
  if (hj.is_string()) {
    const std::string hs = hj.get<std::string>();
    if (hs == "H1") prob.H = h1_matrix(prob.n);
    else if (hs == "eeT") prob.H = ones_matrix(prob.n);
    else throw Error("parse_problem: H shortcut must be 'H1' or 'eeT'");
  } else {
    prob.H = matrix_from(hj, prob.n, "H");
  }
  prob.Q = matrix_from(j.at("Q"), prob.n, "Q");

  const json& bj = j.at("base");
  prob.base_class = class_from(bj.at("class").get<std::string>());
  if (bj.contains("anchor")) {
    const json& aj = bj.at("anchor");
    Eigen::VectorXd a(aj.size());
    for (size_t i = 0; i < aj.size(); ++i) a[static_cast<int>(i)] = aj.at(i).get<double>();
    if (a.size() != prob.n) throw Error("parse_problem: anchor length must equal n");
    prob.base_class.anchor = a;
  }
  for (const json& m : bj.value("constraints", json::array()))
    prob.base.push_back(matrix_from(m, prob.n, "base constraint"));
  for (const json& m : j.value("added", json::array()))
    prob.added.push_back(matrix_from(m, prob.n, "added constraint"));
  if (j.contains("face") && !j.at("face").is_null())
    prob.face = FaceSpec::from_matrix(matrix_from(j.at("face"), prob.n, "face"));

  prob.validate();
  return prob;
}

std::string serialize_problem(const Problem& prob, int indent) {
  json j;
  j["n"] = prob.n;
  j["cone"] = cone_name(prob.cone);
  j["H"] = matrix_to(prob.H);
  j["Q"] = matrix_to(prob.Q);
  json base;
  base["class"] = class_name(prob.base_class);
  if (prob.base_class.anchor) {
    json a = json::array();
    for (int i = 0; i < prob.base_class.anchor->size(); ++i) a.push_back((*prob.base_class.anchor)[i]);
    base["anchor"] = a;
  }
  json bc = json::array();
  for (const SymMat& A : prob.base) bc.push_back(matrix_to(A));
  base["constraints"] = bc;
  j["base"] = base;
  json added = json::array();
  for (const SymMat& B : prob.added) added.push_back(matrix_to(B));
  j["added"] = added;
  if (prob.face) j["face"] = matrix_to(prob.face->F);
  return j.dump(indent);
}

bool problems_equal(const Problem& a, const Problem& b, double tol) {
  auto mat_eq = [tol](const SymMat& x, const SymMat& y) {
    if (x.dim() != y.dim()) return false;
    return (x - y).max_abs() <= tol;
  };
  if (a.n != b.n || a.cone != b.cone) return false;
  if (!mat_eq(a.Q, b.Q) || !mat_eq(a.H, b.H)) return false;
  if (a.base.size() != b.base.size() || a.added.size() != b.added.size()) return false;
  for (size_t i = 0; i < a.base.size(); ++i)
    if (!mat_eq(a.base[i], b.base[i])) return false;
  for (size_t i = 0; i < a.added.size(); ++i)
    if (!mat_eq(a.added[i], b.added[i])) return false;
  if (a.base_class.tag != b.base_class.tag) return false;
  if (a.base_class.anchor.has_value() != b.base_class.anchor.has_value()) return false;
  if (a.base_class.anchor && (*a.base_class.anchor - *b.base_class.anchor).cwiseAbs().maxCoeff() > tol)
    return false;
  if (a.base_class.subclass != b.base_class.subclass) return false;
  if (a.face.has_value() != b.face.has_value()) return false;
  if (a.face && !mat_eq(a.face->F, b.face->F)) return false;
  return true;
}

}  // namespace exqp
