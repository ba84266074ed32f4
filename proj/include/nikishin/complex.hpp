#ifndef NIKISHIN_COMPLEX_HPP_
#define NIKISHIN_COMPLEX_HPP_

// std::complex<T> is unspecified for non-builtin T, so evaluation points get
// a minimal pair type of their own.

#include <cmath>
#include <ostream>
#include <type_traits>
#include <utility>

#include "nikishin/real.hpp"

namespace nikishin {

template <class Real>
struct Complex {
  Real re{};
  Real im{};

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(0) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  template <class U>
    requires(std::is_arithmetic_v<U> && !std::is_same_v<U, Real>)
  Complex(U r) : re(r), im(0) {}

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  Complex& operator/=(const Complex& o) { return *this = *this / o; }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Real& s, const Complex& a) { return {s * a.re, s * a.im}; }
  friend Complex operator*(const Complex& a, const Real& s) { return {s * a.re, s * a.im}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    // Smith's algorithm.
    using std::abs;
    if (abs(b.re) >= abs(b.im)) {
      Real t = b.im / b.re;
      Real d = b.re + b.im * t;
      return {(a.re + a.im * t) / d, (a.im - a.re * t) / d};
    }
    Real t = b.re / b.im;
    Real d = b.re * t + b.im;
    return {(a.re * t + a.im) / d, (a.im * t - a.re) / d};
  }
  friend Complex operator/(const Complex& a, const Real& s) { return {a.re / s, a.im / s}; }

  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

  friend std::ostream& operator<<(std::ostream& os, const Complex& z) {
    return os << '(' << z.re << ", " << z.im << ')';
  }
};

template <class Real>
Real abs(const Complex<Real>& z) {
  using std::hypot;
  return hypot(z.re, z.im);
}

template <class Real>
Complex<Real> conj(const Complex<Real>& z) {
  return {z.re, -z.im};
}

template <class Real>
Complex<Real> polar(const Real& r, const Real& theta) {
  using std::cos;
  using std::sin;
  return {r * cos(theta), r * sin(theta)};
}

}  // namespace nikishin

#endif  // NIKISHIN_COMPLEX_HPP_
