#include "instanton/json_io.hpp"

#include <fstream>
#include <sstream>

#include "instanton/errors.hpp"

namespace instanton::io {
namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ConfigInvalid(where + ": " + what);
}

double number_at(const json& j, size_t i, const std::string& where) {
  if (!j[i].is_number()) bad(where, "component " + std::to_string(i) + " is not a number");
  return j[i].get<double>();
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

json to_json(const Quaternion& q) { return json::array({q.w, q.x, q.y, q.z}); }

json to_json(const CQuaternion& q) {
  return json::array({q.re.w, q.re.x, q.re.y, q.re.z, q.im.w, q.im.x, q.im.y, q.im.z});
}

Quaternion quaternion_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) bad(where, "expected a 4-element array");
  return {number_at(j, 0, where), number_at(j, 1, where), number_at(j, 2, where),
          number_at(j, 3, where)};
}

CQuaternion cquaternion_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || (j.size() != 4 && j.size() != 8))
    bad(where, "expected a 4- or 8-element array");
  CQuaternion q;
  q.re = {number_at(j, 0, where), number_at(j, 1, where), number_at(j, 2, where),
          number_at(j, 3, where)};
  if (j.size() == 8)
    q.im = {number_at(j, 4, where), number_at(j, 5, where), number_at(j, 6, where),
            number_at(j, 7, where)};
  return q;
}

json to_json(const AdhmData& d) {
  json t = json::array();
  json p = json::array();
  if (d.form == AdhmForm::Real) {
    for (int i = 0; i < d.k; ++i) {
      json row = json::array();
      for (int j = 0; j < d.k; ++j) row.push_back(to_json(d.t(i, j)));
      t.push_back(std::move(row));
    }
    for (int i = 0; i < d.k; ++i) p.push_back(to_json(d.p(i, 0)));
  } else {
    for (int i = 0; i < d.k; ++i) {
      json row = json::array();
      for (int j = 0; j < d.k; ++j) row.push_back(to_json(d.tc(i, j)));
      t.push_back(std::move(row));
    }
    for (int i = 0; i < d.k; ++i) p.push_back(to_json(d.pc(i, 0)));
  }
  return {{"k", d.k},
          {"form", d.form == AdhmForm::Real ? "real" : "complex"},
          {"T", std::move(t)},
          {"P", std::move(p)}};
}

AdhmData adhm_from_json(const json& j) {
  const std::string where = "datum";
  const json& jk = field(j, "k", where);
  if (!jk.is_number_integer() || jk.get<int>() <= 0) bad(where, "k must be a positive integer");
  const int k = jk.get<int>();
  const std::string form = field(j, "form", where).get<std::string>();
  if (form != "real" && form != "complex") bad(where, "form must be \"real\" or \"complex\"");
  const json& jt = field(j, "T", where);
  const json& jp = field(j, "P", where);
  if (!jt.is_array() || static_cast<int>(jt.size()) != k) bad(where, "T must be a k x k matrix");
  if (!jp.is_array() || static_cast<int>(jp.size()) != k) bad(where, "P must be a k-vector");
  for (int i = 0; i < k; ++i)
    if (!jt[i].is_array() || static_cast<int>(jt[i].size()) != k)
      bad(where, "T row " + std::to_string(i) + " must have k entries");

  if (form == "real") {
    QMatrix t(k, k), p(k, 1);
    for (int i = 0; i < k; ++i)
      for (int c = 0; c < k; ++c)
        t(i, c) = quaternion_from_json(jt[i][c], "datum.T[" + std::to_string(i) + "][" +
                                                     std::to_string(c) + "]");
    for (int i = 0; i < k; ++i)
      p(i, 0) = quaternion_from_json(jp[i], "datum.P[" + std::to_string(i) + "]");
    return AdhmData::make_real(std::move(t), std::move(p));
  }
  CQMatrix t(k, k), p(k, 1);
  for (int i = 0; i < k; ++i)
    for (int c = 0; c < k; ++c)
      t(i, c) = cquaternion_from_json(jt[i][c], "datum.T[" + std::to_string(i) + "][" +
                                                    std::to_string(c) + "]");
  for (int i = 0; i < k; ++i)
    p(i, 0) = cquaternion_from_json(jp[i], "datum.P[" + std::to_string(i) + "]");
  return AdhmData::make_complex(std::move(t), std::move(p));
}

namespace {

const char* kind_name(SubmanifoldKind k) {
  switch (k) {
    case SubmanifoldKind::Point: return "point";
    case SubmanifoldKind::Circle: return "circle";
    case SubmanifoldKind::Sphere2: return "sphere2";
    case SubmanifoldKind::Sphere3: return "sphere3";
    case SubmanifoldKind::Torus2: return "torus2";
  }
  throw DomainError("unknown submanifold kind");
}

SubmanifoldKind kind_from_name(const std::string& name) {
  if (name == "point") return SubmanifoldKind::Point;
  if (name == "circle") return SubmanifoldKind::Circle;
  if (name == "sphere2") return SubmanifoldKind::Sphere2;
  if (name == "sphere3") return SubmanifoldKind::Sphere3;
  if (name == "torus2") return SubmanifoldKind::Torus2;
  bad("submanifold.kind", "unknown kind \"" + name + "\"");
}

}  // namespace

json to_json(const SubmanifoldSpec& s) {
  json rot = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(s.frame.rotation(i, c));
    rot.push_back(std::move(row));
  }
  json out = {{"kind", kind_name(s.kind)},
              {"radius", s.radius},
              {"frame", {{"rotation", std::move(rot)}, {"offset", to_json(s.frame.offset)}}},
              {"order", s.order}};
  if (s.kind == SubmanifoldKind::Torus2) out["radius2"] = s.radius2;
  return out;
}

SubmanifoldSpec submanifold_from_json(const json& j) {
  const std::string where = "submanifold";
  SubmanifoldSpec s;
  s.kind = kind_from_name(field(j, "kind", where).get<std::string>());
  if (auto it = j.find("radius"); it != j.end()) {
    if (!it->is_number()) bad(where, "radius must be a number");
    s.radius = it->get<double>();
  }
  if (auto it = j.find("radius2"); it != j.end()) {
    if (!it->is_number()) bad(where, "radius2 must be a number");
    s.radius2 = it->get<double>();
  }
  if (auto it = j.find("order"); it != j.end()) {
    if (!it->is_number_integer()) bad(where, "order must be an integer");
    s.order = it->get<int>();
  }
  if (auto it = j.find("frame"); it != j.end()) {
    const json& jr = field(*it, "rotation", where + ".frame");
    if (!jr.is_array() || jr.size() != 4) bad(where + ".frame", "rotation must be 4 x 4");
    for (int i = 0; i < 4; ++i) {
      if (!jr[i].is_array() || jr[i].size() != 4) bad(where + ".frame", "rotation must be 4 x 4");
      for (int c = 0; c < 4; ++c)
        s.frame.rotation(i, c) = number_at(jr[i], c, where + ".frame.rotation");
    }
    s.frame.offset = quaternion_from_json(field(*it, "offset", where + ".frame"),
                                          where + ".frame.offset");
  }
  try {
    s.validate();
  } catch (const Error& e) {
    bad(where, e.what());
  }
  return s;
}

json to_json(const IntegralResult& r) {
  return {{"value", r.value}, {"error", r.error}, {"nodes", r.nodes}};
}

json to_json(const LinkingResult& r) {
  return {{"value", r.value},
          {"error", r.error},
          {"nearest_integer", r.nearest_integer},
          {"config", r.config}};
}

json to_json(const Don1Result& r) {
  return {{"value", r.value},
          {"error", r.error},
          {"epsilons", r.epsilons},
          {"at_epsilon", r.at_epsilon},
          {"mc_error", r.mc_error},
          {"config", r.config}};
}

json to_json(const GaugeSample& s) {
  json v = json::array();
  for (const auto& q : s.v) v.push_back(to_json(q));
  json a = json::array();
  for (const auto& q : s.a) a.push_back(to_json(q));
  json f = json::array();
  for (const auto& q : s.f) f.push_back(to_json(q));
  return {{"x", to_json(s.x)},
          {"v", std::move(v)},
          {"A", std::move(a)},
          {"F", std::move(f)},
          {"c2", s.c2}};
}

json to_json(const EulerClass& e) {
  return {{"exponent", e.exponent},
          {"coefficient", e.coefficient},
          {"fit_residual", e.fit_residual}};
}

json to_json(const ReducibleCheck& r) {
  return {{"rhos", r.rhos},
          {"far_error", r.far_error},
          {"far_slope", r.far_slope},
          {"near_mass", r.near_mass},
          {"mu_excess", r.mu_excess},
          {"pd_pairing", r.pd_pairing},
          {"sigma", to_json(r.sigma)}};
}

json to_json(const VanishingReport& r) {
  return {{"k_min", r.k_min},
          {"k_max", r.k_max},
          {"l_max", r.l_max},
          {"dims_scanned", r.dims_scanned},
          {"certificates", r.certificates},
          {"near_miss_dims", r.near_miss_dims},
          {"near_miss_bad_p", r.near_miss_bad_p},
          {"pass", r.pass()}};
}

std::string dump_doc(const json& j) { return j.dump(2) + "\n"; }

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigInvalid("cannot write " + path);
  out << dump_doc(j);
  if (!out) throw ConfigInvalid("write failed: " + path);
}

}  // namespace instanton::io
