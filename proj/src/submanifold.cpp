#include "instanton/submanifold.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "instanton/errors.hpp"
#include "instanton/summation.hpp"
#include "quad_rules.hpp"

namespace instanton {

namespace {

using std::numbers::pi;
using rules::Rule1d;
using rules::gauss_legendre;
using rules::gauss_legendre_on;

Quaternion apply_rot(const Eigen::Matrix4d& r, const Quaternion& v) {
  const Eigen::Vector4d w = r * Eigen::Vector4d(v.w, v.x, v.y, v.z);
  return {w(0), w(1), w(2), w(3)};
}

Quaternion apply_rot_t(const Eigen::Matrix4d& r, const Quaternion& v) {
  const Eigen::Vector4d w = r.transpose() * Eigen::Vector4d(v.w, v.x, v.y, v.z);
  return {w(0), w(1), w(2), w(3)};
}

}  // namespace

int SubmanifoldSpec::dim() const {
  switch (kind) {
    case SubmanifoldKind::Point: return 0;
    case SubmanifoldKind::Circle: return 1;
    case SubmanifoldKind::Sphere2: return 2;
    case SubmanifoldKind::Sphere3: return 3;
    case SubmanifoldKind::Torus2: return 2;
  }
  throw DomainError("SubmanifoldSpec: unknown kind");
}

void SubmanifoldSpec::validate() const {
  if (kind != SubmanifoldKind::Point && !(radius > 0))
    throw DegenerateParametrization("SubmanifoldSpec: radius must be positive");
  if (kind == SubmanifoldKind::Torus2 && !(radius2 > 0))
    throw DegenerateParametrization("SubmanifoldSpec: torus needs radius2 > 0");
  if (order < 2) throw DegenerateParametrization("SubmanifoldSpec: order must be >= 2");
  if ((frame.rotation * frame.rotation.transpose() - Eigen::Matrix4d::Identity()).norm() > 1e-10)
    throw NotInGroup("SubmanifoldSpec: frame rotation is not orthogonal");
}

std::vector<SurfaceNode> surface_quadrature(const SubmanifoldSpec& s, int order) {
  s.validate();
  std::vector<SurfaceNode> nodes;
  const double r = s.radius;

  auto place = [&](const Quaternion& xm, std::array<Quaternion, 3> tm, double w) {
    SurfaceNode n;
    n.x = apply_rot(s.frame.rotation, xm) + s.frame.offset;
    for (int i = 0; i < 3; ++i) n.tangent[i] = apply_rot(s.frame.rotation, tm[i]);
    n.weight = w;
    nodes.push_back(n);
  };

  switch (s.kind) {
    case SubmanifoldKind::Point:
      place({}, {}, 1.0);
      break;
    case SubmanifoldKind::Circle: {
      const int n = std::max(8, 4 * order);
      for (int c = 0; c < n; ++c) {
        const double u = 2 * pi * c / n;
        place({r * std::cos(u), r * std::sin(u), 0, 0},
              {Quaternion{-r * std::sin(u), r * std::cos(u), 0, 0}, {}, {}}, 2 * pi / n);
      }
      break;
    }
    case SubmanifoldKind::Sphere2: {
      const int nt = std::max(4, order), np = 2 * std::max(4, order);
      const Rule1d u = gauss_legendre(nt);  // u = cos(theta)
      for (int a = 0; a < nt; ++a) {
        const double ct = u.x[a], st = std::sqrt(1 - ct * ct);
        for (int b = 0; b < np; ++b) {
          const double phi = 2 * pi * b / np;
          const double cp = std::cos(phi), sp = std::sin(phi);
          place({r * st * cp, r * st * sp, r * ct, 0},
                {Quaternion{r * ct * cp, r * ct * sp, -r * st, 0},
                 Quaternion{-r * st * sp, r * st * cp, 0, 0},
                 {}},
                (u.w[a] / st) * (2 * pi / np));
        }
      }
      break;
    }
    case SubmanifoldKind::Sphere3: {
      const int npsi = std::max(4, order), nt = std::max(4, order), np = 2 * std::max(4, order);
      const Rule1d psi = gauss_legendre_on(npsi, 0, pi);
      const Rule1d u = gauss_legendre(nt);
      for (int a = 0; a < npsi; ++a) {
        const double sps = std::sin(psi.x[a]), cps = std::cos(psi.x[a]);
        for (int b = 0; b < nt; ++b) {
          const double ct = u.x[b], st = std::sqrt(1 - ct * ct);
          for (int c = 0; c < np; ++c) {
            const double phi = 2 * pi * c / np;
            const double cp = std::cos(phi), sp = std::sin(phi);
            place({r * cps, r * sps * ct, r * sps * st * cp, r * sps * st * sp},
                  {Quaternion{-r * sps, r * cps * ct, r * cps * st * cp, r * cps * st * sp},
                   Quaternion{0, -r * sps * st, r * sps * ct * cp, r * sps * ct * sp},
                   Quaternion{0, 0, -r * sps * st * sp, r * sps * st * cp}},
                  psi.w[a] * (u.w[b] / st) * (2 * pi / np));
          }
        }
      }
      break;
    }
    case SubmanifoldKind::Torus2: {
      const int n1 = 2 * std::max(4, order), n2 = 2 * std::max(4, order);
      const double r2 = s.radius2;
      for (int a = 0; a < n1; ++a) {
        const double uu = 2 * pi * a / n1;
        for (int b = 0; b < n2; ++b) {
          const double vv = 2 * pi * b / n2;
          place({r * std::cos(uu), r * std::sin(uu), r2 * std::cos(vv), r2 * std::sin(vv)},
                {Quaternion{-r * std::sin(uu), r * std::cos(uu), 0, 0},
                 Quaternion{0, 0, -r2 * std::sin(vv), r2 * std::cos(vv)},
                 {}},
                (2 * pi / n1) * (2 * pi / n2));
        }
      }
      break;
    }
  }
  return nodes;
}

std::vector<SurfaceNode> surface_quadrature(const SubmanifoldSpec& s) {
  return surface_quadrature(s, s.order);
}

double integrate_form(const SubmanifoldSpec& s, const FormOnVectors& form) {
  const int d = s.dim();
  const std::vector<SurfaceNode> nodes = surface_quadrature(s);
  std::vector<double> vals;
  vals.reserve(nodes.size());
  for (const SurfaceNode& n : nodes)
    vals.push_back(n.weight * form(n.x, std::span<const Quaternion>(n.tangent.data(), d)));
  return pairwise_sum(vals);
}

double integrate_scalar(const SubmanifoldSpec& s, const std::function<double(const Quaternion&)>& f) {
  const int d = s.dim();
  const std::vector<SurfaceNode> nodes = surface_quadrature(s);
  std::vector<double> vals;
  vals.reserve(nodes.size());
  for (const SurfaceNode& n : nodes) {
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = dot(n.tangent[i], n.tangent[j]);
    const double vol = d == 0 ? 1.0 : std::sqrt(std::max(0.0, g.determinant()));
    vals.push_back(n.weight * vol * f(n.x));
  }
  return pairwise_sum(vals);
}

double min_distance(const SubmanifoldSpec& a, const SubmanifoldSpec& b) {
  const std::vector<SurfaceNode> na = surface_quadrature(a, 10);
  const std::vector<SurfaceNode> nb = surface_quadrature(b, 10);
  double best = std::numeric_limits<double>::infinity();
  for (const SurfaceNode& x : na)
    for (const SurfaceNode& y : nb) best = std::min(best, (x.x - y.x).norm_sq());
  return std::sqrt(best);
}

namespace {

// C-infinity bump on (-1, 1).
double bump(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s2));
}

double bump_moment(int power) {
  // int_0^1 B(s) s^power ds, fixed 64-node rule (evaluated once per process).
  const Rule1d r = gauss_legendre_on(64, 0, 1);
  double sum = 0;
  for (size_t i = 0; i < r.x.size(); ++i) sum += r.w[i] * bump(r.x[i]) * std::pow(r.x[i], power);
  return sum;
}

}  // namespace

PoincareDual::PoincareDual(const SubmanifoldSpec& s, double width) : spec_(s), width_(width) {
  spec_.validate();
  if (!(width > 0)) throw WidthTooLarge("PoincareDual: width must be positive");
  const double reach =
      spec_.kind == SubmanifoldKind::Point
          ? std::numeric_limits<double>::infinity()
          : (spec_.kind == SubmanifoldKind::Torus2 ? std::min(spec_.radius, spec_.radius2)
                                                   : spec_.radius);
  if (width > 0.5 * reach) throw WidthTooLarge("PoincareDual: width exceeds half the reach");
  // Normalizations: 1D integral 2*m0, area 2*pi*m1, 4-volume 2*pi^2*m3.
  norm1_ = 2.0 * bump_moment(0);
  norm2_ = 2.0 * pi * bump_moment(1);
  norm4_ = 2.0 * pi * pi * bump_moment(3);
}

double PoincareDual::operator()(const Quaternion& x, std::span<const Quaternion> vs) const {
  if (static_cast<int>(vs.size()) != degree())
    throw DimensionMismatch("PoincareDual: wrong number of vectors");
  const Quaternion y = apply_rot_t(spec_.frame.rotation, x - spec_.frame.offset);
  std::array<Quaternion, 4> v;
  for (size_t i = 0; i < vs.size(); ++i) v[i] = apply_rot_t(spec_.frame.rotation, vs[i]);
  const double w = width_, r = spec_.radius;

  // Each dual is a product of bump profiles in tube coordinates times the wedge of
  // their differentials; the wedge value is a small determinant of pairings.
  switch (spec_.kind) {
    case SubmanifoldKind::Point: {
      const double f = bump(y.norm() / w) / (norm4_ * w * w * w * w);
      Eigen::Matrix4d m;
      for (int i = 0; i < 4; ++i) {
        const auto c = v[i].components();
        for (int j = 0; j < 4; ++j) m(j, i) = c[j];
      }
      return f * m.determinant();
    }
    case SubmanifoldKind::Sphere3: {
      const double rr = y.norm();
      if (rr < 1e-12) return 0.0;
      const double f = bump((rr - r) / w) / (norm1_ * w);
      return f * dot(y, v[0]) / rr;
    }
    case SubmanifoldKind::Sphere2: {
      const double u3 = std::sqrt(y.w * y.w + y.x * y.x + y.y * y.y);
      if (u3 < 1e-12) return 0.0;
      const Quaternion grad_u{y.w / u3, y.x / u3, y.y / u3, 0};
      const Quaternion e4{0, 0, 0, 1};
      const double f =
          bump((u3 - r) / w) / (norm1_ * w) * bump(y.z / w) / (norm1_ * w);
      return f * (dot(grad_u, v[0]) * dot(e4, v[1]) - dot(grad_u, v[1]) * dot(e4, v[0]));
    }
    case SubmanifoldKind::Circle: {
      const double u2 = std::sqrt(y.w * y.w + y.x * y.x);
      if (u2 < 1e-12) return 0.0;
      const Quaternion grad_u{y.w / u2, y.x / u2, 0, 0};
      const Quaternion e3{0, 0, 1, 0}, e4{0, 0, 0, 1};
      const double z = std::sqrt(y.y * y.y + y.z * y.z);
      const double f = bump((u2 - r) / w) / (norm1_ * w) * bump(z / w) / (norm2_ * w * w);
      Eigen::Matrix3d m;
      const std::array<Quaternion, 3> basis{grad_u, e3, e4};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = dot(basis[i], v[j]);
      return f * m.determinant();
    }
    case SubmanifoldKind::Torus2: {
      const double u1 = std::sqrt(y.w * y.w + y.x * y.x);
      const double u2 = std::sqrt(y.y * y.y + y.z * y.z);
      if (u1 < 1e-12 || u2 < 1e-12) return 0.0;
      const Quaternion g1{y.w / u1, y.x / u1, 0, 0};
      const Quaternion g2{0, 0, y.y / u2, y.z / u2};
      const double f = bump((u1 - r) / w) / (norm1_ * w) *
                       bump((u2 - spec_.radius2) / w) / (norm1_ * w);
      return f * (dot(g1, v[0]) * dot(g2, v[1]) - dot(g1, v[1]) * dot(g2, v[0]));
    }
  }
  throw DomainError("PoincareDual: unknown kind");
}

PoincareDual poincare_dual_mollified(const SubmanifoldSpec& s, double width) {
  return PoincareDual(s, width);
}

}  // namespace instanton
