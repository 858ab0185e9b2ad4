#include "instanton/scenario.hpp"

#include <cmath>
#include <numbers>

#include "instanton/adhm.hpp"
#include "instanton/equivariant.hpp"
#include "instanton/errors.hpp"
#include "instanton/gauge.hpp"
#include "instanton/invariants.hpp"
#include "instanton/rng.hpp"
#include "instanton/vanishing.hpp"

namespace instanton {
namespace {

using io::json;

double get_num(const json& c, const char* key, double dflt) {
  auto it = c.find(key);
  if (it == c.end()) return dflt;
  if (!it->is_number()) throw ConfigInvalid(std::string(key) + " must be a number");
  return it->get<double>();
}

int64_t get_int(const json& c, const char* key, int64_t dflt) {
  auto it = c.find(key);
  if (it == c.end()) return dflt;
  if (!it->is_number_integer()) throw ConfigInvalid(std::string(key) + " must be an integer");
  return it->get<int64_t>();
}

bool get_bool(const json& c, const char* key, bool dflt) {
  auto it = c.find(key);
  if (it == c.end()) return dflt;
  if (!it->is_boolean()) throw ConfigInvalid(std::string(key) + " must be a boolean");
  return it->get<bool>();
}

std::string get_str(const json& c, const char* key, const std::string& dflt) {
  auto it = c.find(key);
  if (it == c.end()) return dflt;
  if (!it->is_string()) throw ConfigInvalid(std::string(key) + " must be a string");
  return it->get<std::string>();
}

AdhmData get_datum(const json& c) {
  auto it = c.find("datum");
  if (it == c.end()) throw ConfigInvalid("config needs a \"datum\"");
  return io::adhm_from_json(*it);
}

Quaternion get_quat(const json& c, const char* key, const Quaternion& dflt) {
  auto it = c.find(key);
  if (it == c.end()) return dflt;
  return io::quaternion_from_json(*it, key);
}

std::vector<double> get_num_list(const json& c, const char* key,
                                 const std::vector<double>& dflt) {
  auto it = c.find(key);
  if (it == c.end()) return dflt;
  if (!it->is_array()) throw ConfigInvalid(std::string(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) throw ConfigInvalid(std::string(key) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json series(const std::string& name, std::vector<std::string> columns,
            std::vector<std::vector<json>> rows) {
  json r = json::array();
  for (auto& row : rows) r.push_back(json(row));
  return {{"name", name}, {"columns", columns}, {"rows", std::move(r)}};
}

// Sample points near the datum's centers, avoiding gauge singularities.
std::vector<Quaternion> probe_points(const AdhmData& d, int count, double spread, Rng& rng) {
  Quaternion center{};
  for (int i = 0; i < d.k; ++i) center += d.t_complex()(i, i).re;
  center = center / std::max(1, d.k);
  std::vector<Quaternion> pts;
  pts.reserve(count);
  while (static_cast<int>(pts.size()) < count) {
    const Quaternion x = center + spread * rng.normal_quaternion();
    try {
      build_frame_complex(d, x);
    } catch (const GaugeSingularity&) {
      continue;
    }
    pts.push_back(x);
  }
  return pts;
}

// ---- pipelines ------------------------------------------------------------

RunOutcome run_adhm_check(const json& c) {
  const AdhmData d = get_datum(c);
  const double tol = get_num(c, "tol", 1e-10);
  const double residual = moment_map(d).norm();
  const bool adhm_ok = check_adhm(d, tol);
  const auto verdict = nondegeneracy_check(d);
  const bool pass = adhm_ok && verdict.nondegenerate;
  json doc = {{"command", "adhm-check"},
              {"inputs", {{"datum", io::to_json(d)}, {"tol", tol}}},
              {"moment_residual", residual},
              {"adhm_ok", adhm_ok},
              {"nondegenerate", verdict.nondegenerate},
              {"margin", verdict.margin},
              {"witness", io::to_json(verdict.witness)},
              {"pass", pass}};
  return {pass ? 0 : 2, std::move(doc)};
}

RunOutcome run_charge(const json& c) {
  const AdhmData d = get_datum(c);
  const double tol = get_num(c, "tol", 1e-3);
  R4QuadratureSpec spec{.scheme = QuadScheme::RadialSpherical, .scale = 0.0, .budget = 0};
  const std::string scheme = get_str(c, "scheme", "");
  if (scheme == "radial") spec.scheme = QuadScheme::RadialSpherical;
  else if (scheme == "mc") spec.scheme = QuadScheme::MonteCarloImportance;
  else if (scheme == "sparse") spec.scheme = QuadScheme::SparseGrid;
  else if (!scheme.empty()) throw ConfigInvalid("scheme must be radial, mc, or sparse");
  // budget/scale 0 are the pick-your-own-defaults sentinel understood by charge()
  spec.budget = get_int(c, "budget", 0);
  spec.seed = static_cast<uint64_t>(get_int(c, "seed", 1));
  spec.scale = get_num(c, "scale", 0.0);
  spec.center = get_quat(c, "center", {});
  const IntegralResult r = charge(d, spec);
  const double target = d.k;
  const bool pass = std::abs(r.value - target) <= tol;
  json doc = {{"command", "charge"},
              {"inputs",
               {{"datum", io::to_json(d)},
                {"tol", tol},
                {"scheme", scheme},
                {"budget", spec.budget},
                {"scale", spec.scale}}},
              {"seed", spec.seed},
              {"value", r.value},
              {"error", r.error},
              {"nodes", r.nodes},
              {"target", target},
              {"pass", pass}};
  return {pass ? 0 : 2, std::move(doc)};
}

RunOutcome run_asd_check(const json& c) {
  const AdhmData d = get_datum(c);
  const std::string mode_name = get_str(c, "mode", "analytic");
  DerivMode mode;
  double dflt_tol;
  if (mode_name == "analytic") {
    mode = DerivMode::Analytic;
    dflt_tol = 1e-6;
  } else if (mode_name == "fd") {
    mode = DerivMode::FiniteDifference;
    dflt_tol = 1e-4;
  } else {
    throw ConfigInvalid("mode must be analytic or fd");
  }
  const double tol = get_num(c, "tol", dflt_tol);
  const int count = static_cast<int>(get_int(c, "count", 20));
  const uint64_t seed = static_cast<uint64_t>(get_int(c, "seed", 5));
  const double spread = get_num(c, "spread", 2.0);
  if (count <= 0) throw ConfigInvalid("count must be positive");

  Rng rng(seed);
  double max_res = 0.0, sum = 0.0;
  for (const Quaternion& x : probe_points(d, count, spread, rng)) {
    const double r = asd_residual(curvature(d, x, mode));
    max_res = std::max(max_res, r);
    sum += r;
  }
  const bool pass = max_res <= tol;
  json doc = {{"command", "asd-check"},
              {"inputs",
               {{"datum", io::to_json(d)},
                {"mode", mode_name},
                {"count", count},
                {"spread", spread},
                {"tol", tol}}},
              {"seed", seed},
              {"max_residual", max_res},
              {"mean_residual", sum / count},
              {"pass", pass}};
  return {pass ? 0 : 2, std::move(doc)};
}

RunOutcome run_k1_closed_form(const json& c) {
  const Quaternion t0 = get_quat(c, "t0", {});
  const double rho = get_num(c, "rho", 1.0);
  if (rho <= 0) throw ConfigInvalid("rho must be positive");
  const double tol = get_num(c, "tol", 1e-10);
  const int count = static_cast<int>(get_int(c, "count", 20));
  const uint64_t seed = static_cast<uint64_t>(get_int(c, "seed", 11));
  const int profile_points = static_cast<int>(get_int(c, "profile_points", 33));

  const AdhmData d = AdhmData::k1(t0, rho);
  const ClosedFormK1 cf{t0, rho};
  Rng rng(seed);
  double err_a = 0.0, err_f = 0.0, err_c2 = 0.0;
  for (const Quaternion& x : probe_points(d, count, 2.0 * rho, rng)) {
    const Connection a = connection(d, x);
    const Connection a_cf = cf.connection(x);
    const Curvature f = curvature(d, x);
    const Curvature f_cf = cf.curvature(x);
    double na = 0, nf = 0, da = 0, df = 0;
    for (int m = 0; m < 4; ++m) {
      da += (a.a[m] - a_cf.a[m]).norm_sq();
      na += a_cf.a[m].norm_sq();
    }
    for (int m = 0; m < 6; ++m) {
      df += (f.f[m] - f_cf.f[m]).norm_sq();
      nf += f_cf.f[m].norm_sq();
    }
    err_a = std::max(err_a, std::sqrt(da / na));
    err_f = std::max(err_f, std::sqrt(df / nf));
    err_c2 = std::max(err_c2, std::abs(c2_density(d, x) - cf.c2(x)) / cf.peak_density());
  }

  std::vector<std::vector<json>> rows;
  for (int i = 0; i < profile_points; ++i) {
    const double r = 4.0 * rho * i / (profile_points - 1);
    rows.push_back({r, cf.c2(t0 + Quaternion{r, 0, 0, 0})});
  }
  const bool pass = err_a <= tol && err_f <= tol && err_c2 <= tol;
  json doc = {{"command", "k1-closed-form"},
              {"inputs",
               {{"t0", io::to_json(t0)},
                {"rho", rho},
                {"count", count},
                {"profile_points", profile_points},
                {"tol", tol}}},
              {"seed", seed},
              {"connection_rel_error", err_a},
              {"curvature_rel_error", err_f},
              {"c2_rel_error", err_c2},
              {"series", series("k1-radial-profile", {"r", "c2"}, std::move(rows))},
              {"pass", pass}};
  return {pass ? 0 : 2, std::move(doc)};
}

RunOutcome run_link(const json& c) {
  auto ia = c.find("a");
  auto ib = c.find("b");
  if (ia == c.end() || ib == c.end()) throw ConfigInvalid("config needs \"a\" and \"b\"");
  const SubmanifoldSpec a = io::submanifold_from_json(*ia);
  const SubmanifoldSpec b = io::submanifold_from_json(*ib);
  const double tol = get_num(c, "tol", 1e-2);
  const LinkingResult r = gauss_link(a, b);
  bool pass = r.error <= tol && std::abs(r.value - r.nearest_integer) <= tol;
  json inputs = {{"a", io::to_json(a)}, {"b", io::to_json(b)}, {"tol", tol}};
  if (auto it = c.find("expect"); it != c.end()) {
    const long expect = it->get<long>();
    inputs["expect"] = expect;
    pass = pass && r.nearest_integer == expect;
  }
  json doc = {{"command", "link"},
              {"inputs", std::move(inputs)},
              {"value", r.value},
              {"error", r.error},
              {"nearest_integer", r.nearest_integer},
              {"config", r.config},
              {"pass", pass}};
  return {pass ? 0 : 2, std::move(doc)};
}

RunOutcome run_don1(const json& c) {
  auto it = c.find("sigmas");
  if (it == c.end() || !it->is_array() || it->size() < 2)
    throw ConfigInvalid("config needs a \"sigmas\" array (two or more surfaces)");
  std::vector<SubmanifoldSpec> sigmas;
  for (const auto& js : *it) sigmas.push_back(io::submanifold_from_json(js));

  Don1Options opt;
  opt.samples = get_int(c, "samples", opt.samples);
  opt.seed = static_cast<uint64_t>(get_int(c, "seed", static_cast<int64_t>(opt.seed)));
  opt.inner_order = static_cast<int>(get_int(c, "inner_order", opt.inner_order));
  opt.epsilons = get_num_list(c, "epsilons", {});
  const Don1Result r = don1(sigmas, opt);

  json jsig = json::array();
  for (const auto& s : sigmas) jsig.push_back(io::to_json(s));
  json inputs = {{"sigmas", std::move(jsig)},
                 {"samples", opt.samples},
                 {"inner_order", opt.inner_order},
                 {"epsilons", opt.epsilons}};
  bool pass = true;
  if (auto ex = c.find("expect"); ex != c.end()) {
    const double tol = get_num(c, "tol", 0.1);
    const double expect = ex->get<double>();
    inputs["expect"] = expect;
    inputs["tol"] = tol;
    pass = std::abs(r.value - expect) <= tol;
  }
  std::vector<std::vector<json>> rows;
  for (size_t i = 0; i < r.at_epsilon.size(); ++i)
    rows.push_back({r.epsilons[i], r.at_epsilon[i], r.mc_error[i]});
  json doc = {{"command", "don1"},
              {"inputs", std::move(inputs)},
              {"seed", opt.seed},
              {"value", r.value},
              {"error", r.error},
              {"epsilons", r.epsilons},
              {"at_epsilon", r.at_epsilon},
              {"mc_error", r.mc_error},
              {"config", r.config},
              {"series", series("don1-vs-epsilon", {"epsilon", "value", "mc_error"},
                                std::move(rows))},
              {"pass", pass}};
  return {pass ? 0 : 2, std::move(doc)};
}

RunOutcome run_delta_limits(const json& c) {
  const double rho = get_num(c, "rho", 1e-2);
  const double tol = get_num(c, "tol", 0.01);
  const int64_t budget = get_int(c, "budget", 200'000);
  const std::vector<double> rhos = get_num_list(c, "rhos", {0.1, 0.05, 0.02, 0.01});
  const double scale = std::numbers::pi * std::numbers::pi / 6.0;

  const double m2 = delta_family_mass(2, rho, nullptr, {}, budget).value;
  const double m3 = delta_family_mass(3, rho, nullptr, {}, budget).value;
  const double m4 = delta_family_mass(4, rho, nullptr, {}, budget).value;
  const double kernel = m4 / scale;  // (6/pi^2) rho^4/D^8 is the unit-mass density

  std::vector<std::vector<json>> rows;
  for (double r : rhos) {
    rows.push_back({r, delta_family_mass(2, r, nullptr, {}, budget).value,
                    delta_family_mass(3, r, nullptr, {}, budget).value,
                    delta_family_mass(4, r, nullptr, {}, budget).value});
  }
  const bool pass = std::abs(m4 - scale) <= tol * scale && std::abs(m2) <= tol * scale &&
                    std::abs(m3) <= tol * scale && std::abs(kernel - 1.0) <= tol;
  json doc = {{"command", "delta-limits"},
              {"inputs", {{"rho", rho}, {"budget", budget}, {"rhos", rhos}, {"tol", tol}}},
              {"mass_n2", m2},
              {"mass_n3", m3},
              {"mass_n4", m4},
              {"kernel_mass", kernel},
              {"target_n4", scale},
              {"series", series("delta-mass-vs-rho", {"rho", "mass_n2", "mass_n3", "mass_n4"},
                                std::move(rows))},
              {"pass", pass}};
  return {pass ? 0 : 2, std::move(doc)};
}

RunOutcome run_euler(const json& c) {
  const int k_min = static_cast<int>(get_int(c, "k_min", 1));
  const int k_max = static_cast<int>(get_int(c, "k_max", 4));
  const double tol = get_num(c, "tol", 1e-10);
  if (k_min < 1 || k_max < k_min) throw ConfigInvalid("need 1 <= k_min <= k_max");

  bool pass = true;
  json table = json::array();
  std::vector<std::vector<json>> rows;
  for (int k = k_min; k <= k_max; ++k) {
    const double target = std::pow(2.0 * std::numbers::pi, -4.0 * k);
    for (int j = 0; j < k; ++j) {
      const EulerClass e = euler_class(k, j);
      const bool ok =
          e.exponent == 4 * k && std::abs(e.coefficient - target) <= tol * target;
      pass = pass && ok;
      table.push_back({{"k", k},
                       {"j", j},
                       {"exponent", e.exponent},
                       {"coefficient", e.coefficient},
                       {"fit_residual", e.fit_residual},
                       {"ok", ok}});
      rows.push_back({k, j, e.exponent, e.coefficient});
    }
  }
  json doc = {{"command", "euler"},
              {"inputs", {{"k_min", k_min}, {"k_max", k_max}, {"tol", tol}}},
              {"table", std::move(table)},
              {"series",
               series("euler-classes", {"k", "j", "exponent", "coefficient"}, std::move(rows))},
              {"pass", pass}};
  return {pass ? 0 : 2, std::move(doc)};
}

RunOutcome run_reducible_check(const json& c) {
  const Quaternion t0 = get_quat(c, "t0", {});
  const AdhmData d1 = get_datum(c);
  ReducibleOptions opt;
  opt.rhos = get_num_list(c, "rhos", opt.rhos);
  opt.ball_radius = get_num(c, "ball_radius", opt.ball_radius);
  opt.ball_radial_order = static_cast<int>(get_int(c, "ball_radial_order", opt.ball_radial_order));
  opt.ball_sphere_order = static_cast<int>(get_int(c, "ball_sphere_order", opt.ball_sphere_order));
  opt.sigma_radius = get_num(c, "sigma_radius", opt.sigma_radius);
  opt.sigma_order = static_cast<int>(get_int(c, "sigma_order", opt.sigma_order));
  opt.mu_rho = get_num(c, "mu_rho", opt.mu_rho);
  opt.path_order = static_cast<int>(get_int(c, "path_order", opt.path_order));
  opt.pd_width = get_num(c, "pd_width", opt.pd_width);
  const double slope_lo = get_num(c, "slope_lo", 3.5);
  const double slope_hi = get_num(c, "slope_hi", 4.5);
  const double mass_tol = get_num(c, "tol", 0.02);

  const ReducibleCheck r = reducible_restriction_check(t0, d1, opt);
  const bool pass = r.far_slope >= slope_lo && r.far_slope <= slope_hi &&
                    std::abs(r.near_mass - 1.0) <= mass_tol;
  std::vector<std::vector<json>> rows;
  for (size_t i = 0; i < r.rhos.size(); ++i) rows.push_back({r.rhos[i], r.far_error[i]});
  json doc = io::to_json(r);
  doc["command"] = "reducible-check";
  doc["inputs"] = {{"t0", io::to_json(t0)},
                   {"datum", io::to_json(d1)},
                   {"slope_lo", slope_lo},
                   {"slope_hi", slope_hi},
                   {"tol", mass_tol}};
  doc["series"] = series("far-field-error", {"rho", "max_error"}, std::move(rows));
  doc["pass"] = pass;
  return {pass ? 0 : 2, std::move(doc)};
}

json certificate_json(const PartitionCertificate& cert) {
  return {{"blocks", cert.blocks},
          {"p", cert.p()},
          {"within_block_orderings", cert.within_block_orderings},
          {"tail_block_orderings", cert.tail_block_orderings}};
}

RunOutcome run_vanish(const json& c) {
  if (auto it = c.find("dims"); it != c.end()) {
    ContributionQuery q;
    q.k = static_cast<int>(get_int(c, "k", 1));
    q.relax_block_bound = get_bool(c, "relax", false);
    if (!it->is_array()) throw ConfigInvalid("dims must be an array");
    for (const auto& v : *it) q.dims.push_back(v.get<int>());
    const auto certs = enumerate_contributions(q);
    json jl = json::array();
    for (const auto& cert : certs) jl.push_back(certificate_json(cert));
    const bool pass = q.k < 2 || q.relax_block_bound || certs.empty();
    json doc = {{"command", "vanish"},
                {"inputs", {{"k", q.k}, {"dims", q.dims}, {"relax", q.relax_block_bound}}},
                {"count", static_cast<long>(certs.size())},
                {"certificates", std::move(jl)},
                {"pass", pass}};
    return {pass ? 0 : 2, std::move(doc)};
  }

  const int k_min = static_cast<int>(get_int(c, "k_min", 2));
  const int k_max = static_cast<int>(get_int(c, "k_max", 5));
  const int l_max = static_cast<int>(get_int(c, "l_max", 12));
  VanishingReport total{k_min, k_max, l_max, 0, 0, 0, 0};
  std::vector<std::vector<json>> rows;
  for (int k = k_min; k <= k_max; ++k) {
    const VanishingReport r = verify_vanishing(k, k, l_max);
    total.dims_scanned += r.dims_scanned;
    total.certificates += r.certificates;
    total.near_miss_dims += r.near_miss_dims;
    total.near_miss_bad_p += r.near_miss_bad_p;
    rows.push_back({k, r.dims_scanned, r.certificates, r.near_miss_dims, r.near_miss_bad_p});
  }
  const bool pass = total.pass();
  json doc = io::to_json(total);
  doc["command"] = "vanish";
  doc["inputs"] = {{"k_min", k_min}, {"k_max", k_max}, {"l_max", l_max}};
  doc["series"] = series(
      "emptiness-by-charge",
      {"k", "dims_scanned", "certificates", "near_miss_dims", "near_miss_bad_p"},
      std::move(rows));
  return {pass ? 0 : 2, std::move(doc)};
}

}  // namespace

const std::vector<std::string>& scenario_commands() {
  static const std::vector<std::string> cmds = {
      "adhm-check", "charge",       "asd-check",       "k1-closed-form", "link",
      "don1",       "delta-limits", "euler",           "reducible-check", "vanish"};
  return cmds;
}

RunOutcome run_scenario(const std::string& command, const io::json& config,
                        const RunOverrides& ov) {
  if (!config.is_object() && !config.is_null())
    throw ConfigInvalid("config must be a JSON object");
  json c = config.is_null() ? json::object() : config;
  if (ov.seed) c["seed"] = *ov.seed;
  if (ov.tol) c["tol"] = *ov.tol;
  if (ov.budget) {
    if (command == "don1") c["samples"] = *ov.budget;
    else c["budget"] = *ov.budget;
  }

  if (command == "adhm-check") return run_adhm_check(c);
  if (command == "charge") return run_charge(c);
  if (command == "asd-check") return run_asd_check(c);
  if (command == "k1-closed-form") return run_k1_closed_form(c);
  if (command == "link") return run_link(c);
  if (command == "don1") return run_don1(c);
  if (command == "delta-limits") return run_delta_limits(c);
  if (command == "euler") return run_euler(c);
  if (command == "reducible-check") return run_reducible_check(c);
  if (command == "vanish") return run_vanish(c);
  throw ConfigInvalid("unknown command: " + command);
}

namespace {

std::string csv_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();  // shortest round-trip for numbers
}

void csv_series(std::string& out, const json& s, const std::string& label, bool with_label) {
  for (const auto& row : s.at("rows")) {
    std::vector<std::string> cells;
    if (with_label) cells.push_back(label);
    for (const auto& v : row) cells.push_back(csv_cell(v));
    for (size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += "\n";
  }
}

}  // namespace

std::string emit_plotdata(const io::json& doc) {
  auto it = doc.find("series");
  if (it == doc.end()) throw ConfigInvalid("document has no \"series\" entry");
  const bool many = it->is_array();
  const json first = many ? (it->empty() ? json() : (*it)[0]) : *it;
  if (first.is_null()) return "series\n";

  std::vector<std::string> columns = first.at("columns").get<std::vector<std::string>>();
  std::string header = many ? "series" : "";
  for (const auto& col : columns) {
    if (!header.empty()) header += ",";
    header += col;
  }
  std::string out = header + "\n";
  if (many) {
    for (const auto& s : *it) {
      if (s.at("columns").get<std::vector<std::string>>() != columns)
        throw ConfigInvalid("series in one document must share columns");
      csv_series(out, s, s.at("name").get<std::string>(), true);
    }
  } else {
    csv_series(out, first, "", false);
  }
  return out;
}

}  // namespace instanton
