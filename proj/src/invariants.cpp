#include "instanton/invariants.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "instanton/errors.hpp"
#include "instanton/rng.hpp"
#include "instanton/summation.hpp"

namespace instanton {
namespace {

using std::numbers::pi;

const char* kind_name(SubmanifoldKind k) {
  switch (k) {
    case SubmanifoldKind::Point: return "point";
    case SubmanifoldKind::Circle: return "circle";
    case SubmanifoldKind::Sphere2: return "sphere2";
    case SubmanifoldKind::Sphere3: return "sphere3";
    case SubmanifoldKind::Torus2: return "torus2";
  }
  return "?";
}

std::string describe(const SubmanifoldSpec& s) {
  std::string out = kind_name(s.kind);
  if (s.kind != SubmanifoldKind::Point) out += "(r=" + std::to_string(s.radius) + ")";
  return out;
}

Eigen::Vector4d as_vec(const Quaternion& q) { return {q.w, q.x, q.y, q.z}; }

double link_pass(const std::vector<SurfaceNode>& na, int da,
                 const std::vector<SurfaceNode>& nb, int db) {
  std::vector<double> contrib;
  contrib.reserve(na.size());
  Eigen::Matrix4d m;
  for (const SurfaceNode& a : na) {
    double row = 0;
    for (const SurfaceNode& b : nb) {
      const Quaternion d = a.x - b.x;
      const double r2 = d.norm_sq();
      int c = 0;
      m.col(c++) = as_vec(d);
      for (int i = 0; i < da; ++i) m.col(c++) = as_vec(a.tangent[i]);
      for (int i = 0; i < db; ++i) m.col(c++) = -as_vec(b.tangent[i]);
      row += a.weight * b.weight * m.determinant() / (r2 * r2);
    }
    contrib.push_back(row);
  }
  return pairwise_sum(contrib) / (2.0 * pi * pi);
}

}  // namespace

LinkingResult gauss_link(const SubmanifoldSpec& a, const SubmanifoldSpec& b) {
  a.validate();
  b.validate();
  const int da = a.dim(), db = b.dim();
  if (da + db != 3)
    throw DimensionMismatch("gauss_link: dimensions must sum to 3, got " +
                            std::to_string(da) + "+" + std::to_string(db));
  const double sep = min_distance(a, b);
  if (sep < 1e-6 * std::max(1.0, a.radius + b.radius))
    throw NotDisjoint("gauss_link: surfaces touch (min distance " + std::to_string(sep) + ")");

  const int order = std::max(a.order, b.order);
  const double coarse = link_pass(surface_quadrature(a, order), da,
                                  surface_quadrature(b, order), db);
  const double fine = link_pass(surface_quadrature(a, order + 4), da,
                                surface_quadrature(b, order + 4), db);
  LinkingResult r;
  r.value = fine;
  r.error = std::abs(fine - coarse);
  r.nearest_integer = std::lround(fine);
  r.config = describe(a) + "+" + describe(b);
  return r;
}

double total_form_k1(const K1Modulus& mod, const Quaternion& x,
                     std::span<const TotalVector> v) {
  if (v.size() != 4) throw DimensionMismatch("total_form_k1: needs exactly 4 vectors");
  if (!(mod.rho > 0)) throw DomainError("total_form_k1: rho must be positive");
  const Quaternion xt = x - mod.t;
  const double r2 = xt.norm_sq();
  const double d2 = mod.rho * mod.rho + r2;
  const double d8 = (d2 * d2) * (d2 * d2);
  const double rho2 = mod.rho * mod.rho;
  const double g4 = 6.0 * rho2 * rho2 / (pi * pi * d8);
  const double g3 = 6.0 * rho2 * mod.rho / (pi * pi * d8);

  Eigen::Matrix4d dxt;
  for (int c = 0; c < 4; ++c) dxt.col(c) = as_vec(v[c].dx - v[c].dt);
  double value = g4 * dxt.determinant();

  // (drho ^ psi)(V_1..V_4) = sum_j (-1)^j drho(V_j) psi(the others in order),
  // psi(u1,u2,u3) = -det[xt, u1, u2, u3].
  Eigen::Matrix4d m;
  for (int j = 0; j < 4; ++j) {
    if (v[j].drho == 0.0) continue;
    m.col(0) = as_vec(xt);
    int c = 1;
    for (int i = 0; i < 4; ++i)
      if (i != j) m.col(c++) = dxt.col(i);
    const double psi = -m.determinant();
    value += g3 * (j % 2 == 0 ? 1.0 : -1.0) * v[j].drho * psi;
  }
  return value;
}

std::vector<std::vector<int>> moduli_subsets(int size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(cur.size()) == size) {
      out.push_back(cur);
      return;
    }
    for (int i = next; i < 5; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

double mu_form_k1(const SubmanifoldSpec& sigma, const K1Modulus& m,
                  std::span<const ModuliVector> w, int order_override) {
  sigma.validate();
  const int d = sigma.dim();
  if (static_cast<int>(w.size()) != 4 - d)
    throw DimensionMismatch("mu_form_k1: a dim-" + std::to_string(d) +
                            " surface pairs with " + std::to_string(4 - d) + " moduli vectors");
  const auto nodes = order_override > 0 ? surface_quadrature(sigma, order_override)
                                        : surface_quadrature(sigma);
  std::array<TotalVector, 4> v{};
  for (int i = 0; i < 4 - d; ++i) v[d + i] = TotalVector{{}, w[i].dt, w[i].drho};
  std::vector<double> contrib;
  contrib.reserve(nodes.size());
  for (const SurfaceNode& n : nodes) {
    for (int i = 0; i < d; ++i) v[i] = TotalVector{n.tangent[i], {}, 0.0};
    contrib.push_back(n.weight * total_form_k1(m, n.x, v));
  }
  return pairwise_sum(contrib);
}

namespace {

// Cached-rule evaluator of all mu components of one surface.  Subsets containing
// the drho index (always last within a sorted subset) reduce to
//   w * g3 * det[xt, V_1, V_2, V_3]  (the (-1)^3 from the wedge position cancels
// against the sign of psi); the rest are w * g4 * det of the four dxt columns,
// with dxt(E_j) = -e_j on the dT directions.
struct MuEvaluator {
  int d = 0;
  std::vector<SurfaceNode> nodes;
  std::vector<std::vector<int>> subsets;

  MuEvaluator() = default;
  MuEvaluator(const SubmanifoldSpec& s, int order) : d(s.dim()), subsets(moduli_subsets(4 - d)) {
    nodes = order > 0 ? surface_quadrature(s, order) : surface_quadrature(s);
  }

  void eval(const K1Modulus& mod, std::vector<double>& out) const {
    out.assign(subsets.size(), 0.0);
    const double rho2 = mod.rho * mod.rho;
    Eigen::Matrix4d m;
    for (const SurfaceNode& n : nodes) {
      const Quaternion xt = n.x - mod.t;
      const double d2 = rho2 + xt.norm_sq();
      const double d8 = (d2 * d2) * (d2 * d2);
      const double g4 = 6.0 * rho2 * rho2 / (pi * pi * d8);
      const double g3 = 6.0 * rho2 * mod.rho / (pi * pi * d8);
      for (size_t s = 0; s < subsets.size(); ++s) {
        const auto& sub = subsets[s];
        const bool has_rho = !sub.empty() && sub.back() == 4;
        int c = 0;
        if (has_rho) m.col(c++) = as_vec(xt);
        for (int i = 0; i < d; ++i) m.col(c++) = as_vec(n.tangent[i]);
        for (size_t i = 0; i + (has_rho ? 1 : 0) < sub.size(); ++i)
          m.col(c++) = -Eigen::Vector4d::Unit(sub[i]);
        out[s] += n.weight * (has_rho ? g3 : g4) * m.determinant();
      }
    }
  }
};

}  // namespace

std::vector<double> mu_form_components(const SubmanifoldSpec& sigma, const K1Modulus& m,
                                       int order_override) {
  sigma.validate();
  MuEvaluator ev(sigma, order_override);
  std::vector<double> out;
  ev.eval(m, out);
  return out;
}

namespace {

// ---- don1 machinery ----

struct WedgeTerm {
  double sign;
  std::vector<int> comp;  // per factor: index into its component vector
};

int inversion_sign(const std::vector<int>& seq) {
  int inv = 0;
  for (size_t i = 0; i < seq.size(); ++i)
    for (size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

std::vector<WedgeTerm> wedge_terms(const std::vector<int>& sizes) {
  std::vector<std::vector<std::vector<int>>> table(5);
  for (int s = 0; s <= 4; ++s) table[s] = moduli_subsets(s);
  std::vector<std::array<int, 32>> position(5);
  for (int s = 0; s <= 4; ++s) {
    position[s].fill(-1);
    for (size_t i = 0; i < table[s].size(); ++i) {
      int mask = 0;
      for (int b : table[s][i]) mask |= 1 << b;
      position[s][mask] = static_cast<int>(i);
    }
  }

  std::vector<WedgeTerm> out;
  std::vector<int> masks(sizes.size());
  std::vector<int> seq;
  auto rec = [&](auto&& self, size_t factor, int used) -> void {
    if (factor == sizes.size()) {
      WedgeTerm t;
      t.sign = inversion_sign(seq);
      for (size_t f = 0; f < sizes.size(); ++f) t.comp.push_back(position[sizes[f]][masks[f]]);
      out.push_back(std::move(t));
      return;
    }
    for (const auto& sub : table[sizes[factor]]) {
      int mask = 0;
      for (int b : sub) mask |= 1 << b;
      if (mask & used) continue;
      masks[factor] = mask;
      for (int b : sub) seq.push_back(b);
      self(self, factor + 1, used | mask);
      seq.resize(seq.size() - sub.size());
    }
  };
  rec(rec, 0, 0);
  return out;
}

double lump_pdf(const Quaternion& y, const Quaternion& c, double s) {
  const double s2 = s * s;
  const double u = s2 + (y - c).norm_sq();
  return (6.0 / (pi * pi)) * (s2 * s2) / ((u * u) * (u * u));
}

// Radial quantile of the lump density: solve 3w^2 - 2w^3 = eta, r = s sqrt(1/w - 1).
double lump_radius(double s, double eta) {
  double w = 0.5;
  for (int it = 0; it < 60; ++it) {
    const double g = 3.0 * w * w - 2.0 * w * w * w - eta;
    const double dg = 6.0 * w * (1.0 - w);
    if (std::abs(dg) < 1e-300) break;
    const double step = g / dg;
    w = std::clamp(w - step, 1e-12, 1.0 - 1e-15);
    if (std::abs(step) < 1e-15) break;
  }
  return s * std::sqrt(1.0 / w - 1.0);
}

Quaternion sample_lump(Rng& rng, const Quaternion& c, double s) {
  return c + lump_radius(s, rng.uniform()) * rng.unit_quaternion();
}

struct TubeNode {
  Quaternion y;
  double weight;  // normalized over the tube set
};

struct ProposalComponent {
  double weight = 0;
  Quaternion center;
  double base_scale = 0;
  double rho_factor = 0;  // scale = max(rho_factor * rho, base_scale)
  std::vector<TubeNode> tube;
  double scale(double rho) const { return std::max(rho_factor * rho, base_scale); }
};

// Importance proposal over (T, rho): half-Cauchy rho above the cutoff, T from a
// mixture of charge-lump profiles (global, one per surface center or point, and
// discrete tubes along positive-dimensional surfaces so the rho -> 0 concentration
// along them stays covered).
struct Proposal {
  std::vector<ProposalComponent> comps;
  double eps = 0;
  double rho_scale = 1;

  double density(const Quaternion& t, double rho) const {
    if (rho <= eps) return 0.0;
    const double z = (rho - eps) / rho_scale;
    const double qr = (2.0 / (pi * rho_scale)) / (1.0 + z * z);
    double qt = 0;
    for (const auto& c : comps) {
      const double s = c.scale(rho);
      if (c.tube.empty()) {
        qt += c.weight * lump_pdf(t, c.center, s);
      } else {
        double acc = 0;
        for (const auto& n : c.tube) acc += n.weight * lump_pdf(t, n.y, s);
        qt += c.weight * acc;
      }
    }
    return qr * qt;
  }

  std::pair<Quaternion, double> sample(Rng& rng) const {
    const double rho = eps + rho_scale * std::tan(0.5 * pi * rng.uniform());
    double pick = rng.uniform();
    for (const auto& c : comps) {
      if (pick > c.weight && &c != &comps.back()) {
        pick -= c.weight;
        continue;
      }
      const double s = c.scale(rho);
      if (c.tube.empty()) return {sample_lump(rng, c.center, s), rho};
      double np = rng.uniform();
      for (const auto& n : c.tube) {
        if (np > n.weight && &n != &c.tube.back()) {
          np -= n.weight;
          continue;
        }
        return {sample_lump(rng, n.y, s), rho};
      }
    }
    return {sample_lump(rng, comps.back().center, comps.back().scale(rho)), rho};
  }
};

double gram_volume(const SurfaceNode& n, int d) {
  if (d == 0) return 1.0;
  Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = dot(n.tangent[i], n.tangent[j]);
  return std::sqrt(std::max(0.0, g.determinant()));
}

double node_spacing(const SubmanifoldSpec& s, int order) {
  switch (s.kind) {
    case SubmanifoldKind::Circle: return 2.0 * pi * s.radius / (4.0 * order);
    case SubmanifoldKind::Sphere2:
    case SubmanifoldKind::Sphere3: return pi * s.radius / order;
    case SubmanifoldKind::Torus2: return pi * std::max(s.radius, s.radius2) / order;
    default: return 0.0;
  }
}

Proposal build_proposal(const std::vector<SubmanifoldSpec>& sigmas, double eps,
                        double span, const Quaternion& cbar) {
  Proposal p;
  p.eps = eps;
  p.rho_scale = 0.5 * span + 0.1;

  ProposalComponent global;
  global.weight = 0.15;
  global.center = cbar;
  global.base_scale = 2.0 * span + 0.5;
  p.comps.push_back(global);

  const double share = 0.85 / static_cast<double>(sigmas.size());
  const int tube_order = 4;
  for (const auto& s : sigmas) {
    if (s.dim() == 0) {
      ProposalComponent sharp;
      sharp.weight = share;
      sharp.center = s.frame.offset;
      sharp.rho_factor = 2.0;
      sharp.base_scale = 1e-4 * span;
      p.comps.push_back(sharp);
      continue;
    }
    ProposalComponent center;
    center.weight = 0.5 * share;
    center.center = s.frame.offset;
    center.base_scale = s.radius + (s.kind == SubmanifoldKind::Torus2 ? s.radius2 : 0.0);
    center.rho_factor = 2.0;
    p.comps.push_back(center);

    ProposalComponent tube;
    tube.weight = 0.5 * share;
    tube.rho_factor = 2.0;
    tube.base_scale = 0.6 * node_spacing(s, tube_order);
    const auto nodes = surface_quadrature(s, tube_order);
    double mass = 0;
    for (const auto& n : nodes) mass += n.weight * gram_volume(n, s.dim());
    for (const auto& n : nodes)
      tube.tube.push_back({n.x, n.weight * gram_volume(n, s.dim()) / mass});
    p.comps.push_back(tube);
  }
  return p;
}

double smooth_ramp(double s, double a, double b) {
  if (s <= a) return 1.0;
  if (s >= b) return 0.0;
  return 0.5 * (1.0 + std::cos(pi * (s - a) / (b - a)));
}

}  // namespace

Don1Result don1(const std::vector<SubmanifoldSpec>& sigmas, const Don1Options& opt) {
  if (sigmas.size() < 2) throw DomainError("don1: needs at least two surfaces");
  const int l = static_cast<int>(sigmas.size());
  int dim_sum = 0;
  std::vector<int> sizes;
  for (const auto& s : sigmas) {
    s.validate();
    dim_sum += s.dim();
    sizes.push_back(4 - s.dim());
  }
  if (dim_sum != 4 * l - 5)
    throw DimensionBudgetViolated("don1: sum of dimensions must be 4l-5 = " +
                                  std::to_string(4 * l - 5) + ", got " +
                                  std::to_string(dim_sum));

  Quaternion cbar{};
  for (const auto& s : sigmas) cbar += s.frame.offset * (1.0 / l);
  double span = 0.5;
  for (const auto& s : sigmas)
    span = std::max(span, (s.frame.offset - cbar).norm() + s.radius +
                              (s.kind == SubmanifoldKind::Torus2 ? s.radius2 : 0.0));

  auto phi = opt.phi;
  if (!phi) {
    const double sp = span;
    const Quaternion c = cbar;
    phi = [sp, c](const Quaternion& t, double rho) {
      return smooth_ramp((t - c).norm(), 4.0 * sp, 6.0 * sp) *
             smooth_ramp(rho, 6.0 * sp, 9.0 * sp);
    };
  }

  std::vector<double> epsilons = opt.epsilons;
  if (epsilons.empty()) epsilons = {0.2 * span, 0.1 * span, 0.05 * span};

  const auto terms = wedge_terms(sizes);
  std::vector<MuEvaluator> evals;
  for (const auto& s : sigmas) evals.emplace_back(s, opt.inner_order);

  Don1Result result;
  result.epsilons = epsilons;
  for (const auto& s : sigmas) {
    if (!result.config.empty()) result.config += "+";
    result.config += describe(s);
  }

  constexpr int kChunks = 64;
  const int64_t per_chunk = (opt.samples + kChunks - 1) / kChunks;

  for (size_t ei = 0; ei < epsilons.size(); ++ei) {
    const Proposal prop = build_proposal(sigmas, epsilons[ei], span, cbar);
    std::array<double, kChunks> means{};
    std::atomic<int> next{0};
    auto worker = [&]() {
      std::vector<std::vector<double>> comps(l);
      std::vector<double> acc(static_cast<size_t>(per_chunk));
      for (;;) {
        const int c = next.fetch_add(1);
        if (c >= kChunks) return;
        Rng rng = Rng(opt.seed).fork(ei * kChunks + c);
        for (int64_t i = 0; i < per_chunk; ++i) {
          const auto [t, rho] = prop.sample(rng);
          const double w = phi(t, rho);
          if (w == 0.0) {
            acc[static_cast<size_t>(i)] = 0.0;
            continue;
          }
          const K1Modulus m{t, rho};
          for (int f = 0; f < l; ++f) evals[f].eval(m, comps[f]);
          double wedge = 0;
          for (const auto& term : terms) {
            double prod = term.sign;
            for (int f = 0; f < l; ++f) prod *= comps[f][term.comp[f]];
            wedge += prod;
          }
          acc[static_cast<size_t>(i)] = w * wedge / prop.density(t, rho);
        }
        means[c] = pairwise_sum(acc) / static_cast<double>(per_chunk);
      }
    };
    std::vector<std::thread> pool;
    const int nt = std::max(1, std::min(worker_threads(), kChunks));
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    const double mean = pairwise_sum(std::span<const double>(means)) / kChunks;
    double var = 0;
    for (double m : means) var += (m - mean) * (m - mean);
    result.at_epsilon.push_back(mean);
    result.mc_error.push_back(std::sqrt(var / (kChunks * (kChunks - 1.0))));
  }

  // Richardson step assuming value(eps) = D + c eps^4.
  const size_t n = result.at_epsilon.size();
  if (n == 1) {
    result.value = result.at_epsilon[0];
    result.error = result.mc_error[0];
  } else {
    const double r = epsilons[n - 2] / epsilons[n - 1];
    const double r4 = r * r * r * r;
    const double v1 = result.at_epsilon[n - 2], v2 = result.at_epsilon[n - 1];
    result.value = v2 + (v2 - v1) / (r4 - 1.0);
    double spread = std::abs(result.value - v2);
    if (n >= 3) {
      const double rp = epsilons[n - 3] / epsilons[n - 2];
      const double rp4 = rp * rp * rp * rp;
      const double d_prev = v1 + (v1 - result.at_epsilon[n - 3]) / (rp4 - 1.0);
      spread = std::max(spread, std::abs(result.value - d_prev));
    }
    result.error = result.mc_error[n - 1] + spread;
  }
  return result;
}

IntegralResult delta_family_mass(int n, double rho, const ScalarField& f,
                                 const Quaternion& center, int64_t budget) {
  if (n < 2 || n > 6) throw DomainError("delta_family_mass: exponent n must be in 2..6");
  if (!(rho > 0)) throw DomainError("delta_family_mass: rho must be positive");
  const double rho2 = rho * rho;
  const double rho4 = rho2 * rho2;
  const bool has_f = static_cast<bool>(f);
  ScalarField g = [rho2, rho4, n, center, has_f, &f](const Quaternion& y) {
    const double u = rho2 + (y - center).norm_sq();
    double kern = rho4;
    for (int i = 0; i < n; ++i) kern /= u;
    return has_f ? kern * f(y) : kern;
  };
  R4QuadratureSpec spec;
  spec.scheme = QuadScheme::RadialSpherical;
  spec.center = center;
  spec.scale = rho;
  spec.budget = budget;
  return integrate_r4(g, spec);
}

}  // namespace instanton
