#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <iosfwd>

namespace instanton {

// Hamilton quaternion q = w + x i + y j + z k over the reals, i j = k.
// Components double throughout; the component order (w, x, y, z) is also the
// serialization order.
struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}
  static constexpr Quaternion real(double r) { return {r, 0.0, 0.0, 0.0}; }

  constexpr double re() const { return w; }
  constexpr Quaternion im() const { return {0.0, x, y, z}; }
  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm_sq() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }

  Quaternion inv() const {
    const double n2 = norm_sq();
    return {w / n2, -x / n2, -y / n2, -z / n2};
  }

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
  constexpr Quaternion& operator+=(const Quaternion& q) {
    w += q.w; x += q.x; y += q.y; z += q.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& q) {
    w -= q.w; x -= q.x; y -= q.y; z -= q.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  constexpr std::array<double, 4> components() const { return {w, x, y, z}; }
  // Basis element e_mu, mu in 0..3 <-> 1, i, j, k.  Coordinates x_1..x_4 of R^4
  // correspond to (w, x, y, z) in this order.
  static constexpr Quaternion unit(int mu) {
    return {mu == 0 ? 1.0 : 0.0, mu == 1 ? 1.0 : 0.0, mu == 2 ? 1.0 : 0.0, mu == 3 ? 1.0 : 0.0};
  }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline bool operator==(const Quaternion& a, const Quaternion& b) {
  return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}
inline bool operator!=(const Quaternion& a, const Quaternion& b) { return !(a == b); }

// <a, b> = Re(a conj(b)), the euclidean R^4 inner product.
constexpr double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double abs_distance(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

// Complexified quaternion re + I*im, with the complexification unit I commuting
// with i, j, k.  Arises for unitary-form ADHM data and equivariant quantities.
struct CQuaternion {
  Quaternion re, im;

  constexpr CQuaternion() = default;
  constexpr CQuaternion(const Quaternion& re_, const Quaternion& im_ = {}) : re(re_), im(im_) {}
  static constexpr CQuaternion real(double r) { return {Quaternion::real(r), {}}; }

  // Quaternionic conjugate of the complex conjugate; matrix adjoints reduce to this
  // entrywise.  Self-dagger scalars have real spectrum (they are hermitian in the
  // 2x2 complex representation).
  constexpr CQuaternion dagger() const { return {re.conj(), -(im.conj())}; }
  constexpr CQuaternion complex_conj() const { return {re, -im}; }
  constexpr CQuaternion quat_conj() const { return {re.conj(), im.conj()}; }

  double norm() const { return std::sqrt(re.norm_sq() + im.norm_sq()); }

  constexpr CQuaternion operator-() const { return {-re, -im}; }
  constexpr CQuaternion& operator+=(const CQuaternion& q) {
    re += q.re; im += q.im;
    return *this;
  }
  constexpr CQuaternion& operator-=(const CQuaternion& q) {
    re -= q.re; im -= q.im;
    return *this;
  }
  constexpr CQuaternion& operator*=(double s) {
    re *= s; im *= s;
    return *this;
  }
};

constexpr CQuaternion operator+(CQuaternion a, const CQuaternion& b) { return a += b; }
constexpr CQuaternion operator-(CQuaternion a, const CQuaternion& b) { return a -= b; }
constexpr CQuaternion operator*(CQuaternion a, double s) { return a *= s; }
constexpr CQuaternion operator*(double s, CQuaternion a) { return a *= s; }

constexpr CQuaternion operator*(const CQuaternion& a, const CQuaternion& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CQuaternion operator*(const std::complex<double>& c, const CQuaternion& q) {
  return CQuaternion{c.real() * q.re - c.imag() * q.im, c.real() * q.im + c.imag() * q.re};
}

inline bool operator==(const CQuaternion& a, const CQuaternion& b) { return a.re == b.re && a.im == b.im; }

std::ostream& operator<<(std::ostream& os, const Quaternion& q);
std::ostream& operator<<(std::ostream& os, const CQuaternion& q);

// Scalar-algebra helpers shared by the templated matrix code.  For Quaternion the
// "dagger" is plain quaternionic conjugation.
constexpr Quaternion dagger(const Quaternion& q) { return q.conj(); }
constexpr CQuaternion dagger(const CQuaternion& q) { return q.dagger(); }
constexpr double re_part(const Quaternion& q) { return q.w; }
constexpr std::complex<double> re_part(const CQuaternion& q) { return {q.re.w, q.im.w}; }
inline double abs_value(const Quaternion& q) { return q.norm(); }
inline double abs_value(const CQuaternion& q) { return q.norm(); }

}  // namespace instanton
