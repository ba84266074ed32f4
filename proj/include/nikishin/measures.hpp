#ifndef NIKISHIN_MEASURES_HPP_
#define NIKISHIN_MEASURES_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nikishin/complex.hpp"
#include "nikishin/error.hpp"
#include "nikishin/polynomial.hpp"
#include "nikishin/quadrature.hpp"
#include "nikishin/rational.hpp"

namespace nikishin {

template <class Real>
struct Interval {
  Real a;
  Real b;

  Interval(Real lo, Real hi) : a(std::move(lo)), b(std::move(hi)) {
    if (!(a < b)) throw Error(ErrorKind::kDomain, "interval endpoints must satisfy a < b");
    if (!isfinite_value(a) || !isfinite_value(b)) throw Error(ErrorKind::kDomain, "interval must be bounded");
  }

  bool contains(const Real& x) const { return a <= x && x <= b; }
  Real length() const { return b - a; }

  // Distance from a complex point to the segment.
  Real distance(const Complex<Real>& z) const {
    using std::abs;
    Real dx(0);
    if (z.re < a) dx = a - z.re;
    else if (z.re > b) dx = z.re - b;
    using std::hypot;
    return hypot(dx, z.im);
  }

 private:
  static bool isfinite_value(const Real& x) {
    using std::isfinite;
    return isfinite(x);
  }
};

// Finite signed point-mass measure: sign * sum_i weights_i delta(nodes_i),
// nodes strictly increasing inside `support`, weights positive.
template <class Real>
class AtomicMeasure {
 public:
  AtomicMeasure(std::vector<Real> nodes, std::vector<Real> weights, int sign, Interval<Real> support)
      : nodes_(std::move(nodes)), weights_(std::move(weights)), sign_(sign), support_(std::move(support)) {
    if (nodes_.empty()) throw Error(ErrorKind::kDomain, "atomic measure needs at least one node");
    if (nodes_.size() != weights_.size()) throw Error(ErrorKind::kDomain, "nodes and weights differ in length");
    if (sign_ != 1 && sign_ != -1) throw Error(ErrorKind::kDomain, "measure sign must be +1 or -1");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!support_.contains(nodes_[i])) throw Error(ErrorKind::kDomain, "node outside the support interval");
      if (i > 0 && !(nodes_[i - 1] < nodes_[i])) throw Error(ErrorKind::kDomain, "nodes must be strictly increasing");
      if (!(weights_[i] > Real(0))) throw Error(ErrorKind::kDomain, "weights must be positive");
    }
  }

  const std::vector<Real>& nodes() const { return nodes_; }
  const std::vector<Real>& weights() const { return weights_; }
  int sign() const { return sign_; }
  const Interval<Real>& support() const { return support_; }
  std::size_t size() const { return nodes_.size(); }

  // sign * sum weights; the zeroth moment.
  Real signed_mass() const {
    Real s(0);
    for (const auto& w : weights_) s += w;
    return sign_ > 0 ? s : -s;
  }

  Real max_abs_node() const {
    using std::abs;
    Real m(0);
    for (const auto& x : nodes_) {
      Real a = abs(x);
      if (a > m) m = a;
    }
    return m;
  }

  AtomicMeasure scaled(const Real& factor) const {
    if (factor == Real(0)) throw Error(ErrorKind::kDomain, "cannot scale a measure by zero");
    std::vector<Real> w = weights_;
    using std::abs;
    Real f = abs(factor);
    for (auto& x : w) x *= f;
    return AtomicMeasure(nodes_, std::move(w), factor < Real(0) ? -sign_ : sign_, support_);
  }

 private:
  std::vector<Real> nodes_;
  std::vector<Real> weights_;
  int sign_;
  Interval<Real> support_;
};

enum class MeasureKind { kAtoms, kLegendreDensity, kJacobiDensity };

template <class Real>
struct MeasureSpec {
  MeasureKind kind = MeasureKind::kAtoms;
  Interval<Real> interval{Real(-1), Real(1)};
  int node_count = 1;                  // density kinds
  std::vector<Real> atom_nodes;        // atoms kind
  std::vector<Real> atom_weights;      // atoms kind
  int sign = 1;                        // atoms kind
  Real density_scale{1};               // density kinds; its sign is the measure's sign
  Real alpha{0};                       // jacobi-density
  Real beta{0};
};

// Density kinds use the Gauss rule of the stated family with node_count
// nodes; weights are multiplied by |density_scale|.
template <class Real>
AtomicMeasure<Real> realize(const MeasureSpec<Real>& spec) {
  switch (spec.kind) {
    case MeasureKind::kAtoms:
      return AtomicMeasure<Real>(spec.atom_nodes, spec.atom_weights, spec.sign, spec.interval);
    case MeasureKind::kLegendreDensity:
    case MeasureKind::kJacobiDensity: {
      if (spec.node_count < 1) throw Error(ErrorKind::kDomain, "node_count must be positive");
      if (spec.density_scale == Real(0)) throw Error(ErrorKind::kDomain, "density_scale must be nonzero");
      Real alpha = spec.kind == MeasureKind::kJacobiDensity ? spec.alpha : Real(0);
      Real beta = spec.kind == MeasureKind::kJacobiDensity ? spec.beta : Real(0);
      auto rule = gauss_jacobi(spec.node_count, alpha, beta, spec.interval.a, spec.interval.b);
      using std::abs;
      Real f = abs(spec.density_scale);
      for (auto& w : rule.weights) w *= f;
      return AtomicMeasure<Real>(std::move(rule.nodes), std::move(rule.weights),
                                 spec.density_scale < Real(0) ? -1 : 1, spec.interval);
    }
  }
  throw Error(ErrorKind::kDomain, "unknown measure kind");
}

// c_k = sign * sum_i w_i x_i^k for k = 0..K (K + 1 entries).
template <class Real>
LaurentTail<Real> moments(const AtomicMeasure<Real>& mu, std::size_t K) {
  LaurentTail<Real> c;
  c.coeffs.assign(K + 1, Real(0));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Real p = mu.weights()[i];
    for (std::size_t k = 0; k <= K; ++k) {
      c[k] += p;
      p *= mu.nodes()[i];
    }
  }
  if (mu.sign() < 0)
    for (auto& x : c.coeffs) x = -x;
  return c;
}

template <class Real>
Complex<Real> cauchy_eval(const AtomicMeasure<Real>& mu, const Complex<Real>& z) {
  const Real tol = half_precision_tol<Real>();
  Complex<Real> s(Real(0));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Complex<Real> d = z - Complex<Real>(mu.nodes()[i]);
    if (abs(d) <= tol) throw Error(ErrorKind::kEvaluation, "evaluation on support");
    s += Complex<Real>(mu.weights()[i]) / d;
  }
  return mu.sign() > 0 ? s : -s;
}

// Cauchy transform on the real line away from the nodes.
template <class Real>
Real cauchy_eval_real(const AtomicMeasure<Real>& mu, const Real& x) {
  using std::abs;
  const Real tol = half_precision_tol<Real>();
  Real s(0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Real d = x - mu.nodes()[i];
    if (abs(d) <= tol) throw Error(ErrorKind::kEvaluation, "evaluation on support");
    s += mu.weights()[i] / d;
  }
  return mu.sign() > 0 ? s : -s;
}

// 1 / mu^(z) = ell(z) + tau^(z). tau is absent for a single atom.
template <class Real>
struct InverseMeasure {
  Polynomial<Real> ell;
  std::optional<AtomicMeasure<Real>> tau;
};

template <class Real>
Complex<Real> cauchy_eval(const std::optional<AtomicMeasure<Real>>& mu, const Complex<Real>& z) {
  if (!mu) return Complex<Real>(Real(0));
  return cauchy_eval(*mu, z);
}

// mu^ = N / prod(z - x_i) with deg N = #atoms - 1; the zeros y_k of N interlace
// the nodes (mu^ is monotone between consecutive nodes) and tau carries the
// residues of 1/mu^ there, -1 / (sign * sum_i w_i / (y_k - x_i)^2), all of
// sign -sign(mu). ell(z) = z / c_0 - c_1 / c_0^2 matches the series at infinity.
template <class Real>
InverseMeasure<Real> inverse_measure(const AtomicMeasure<Real>& mu) {
  auto c = moments(mu, 1);
  if (c[0] == Real(0)) throw Error(ErrorKind::kDomain, "inverse measure needs nonzero total mass");
  InverseMeasure<Real> out;
  out.ell = Polynomial<Real>{-c[1] / (c[0] * c[0]), Real(1) / c[0]};
  if (mu.size() == 1) return out;

  const auto& x = mu.nodes();
  const auto& w = mu.weights();
  auto f = [&](const Real& t) {
    Real s(0);
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] / (t - x[i]);
    return s;
  };
  const long max_iter = scalar_traits<Real>::bits() + 64;
  std::vector<Real> roots, res;
  roots.reserve(x.size() - 1);
  res.reserve(x.size() - 1);
  for (std::size_t g = 0; g + 1 < x.size(); ++g) {
    Real lo = x[g], hi = x[g + 1];
    for (long it = 0; it < max_iter; ++it) {
      Real mid = (lo + hi) / Real(2);
      if (mid == lo || mid == hi) break;
      if (f(mid) > Real(0)) lo = mid;
      else hi = mid;
    }
    Real y = (lo + hi) / Real(2);
    if (!(x[g] < y && y < x[g + 1])) {
      throw Error(ErrorKind::kNumerics, "inverse measure construction failed; raise precision");
    }
    Real s(0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      Real d = y - x[i];
      s += w[i] / (d * d);
    }
    roots.push_back(std::move(y));
    res.push_back(Real(1) / s);
  }
  out.tau.emplace(std::move(roots), std::move(res), -mu.sign(), mu.support());
  return out;
}

// sum_{n=1..N} |c_n|^(-1/(2n)) for the image of mu under x -> x - a when the
// support starts left of 0 (supports already in [0, inf) are left alone).
// Returns +inf when some moment vanishes.
template <class Real>
Real carleman_partial_sum(const AtomicMeasure<Real>& mu, std::size_t N) {
  using std::abs;
  using std::pow;
  if (N == 0) throw Error(ErrorKind::kDomain, "Carleman partial sum needs N >= 1");
  Real shift = mu.support().a < Real(0) ? mu.support().a : Real(0);
  std::vector<Real> shifted;
  shifted.reserve(mu.size());
  for (const auto& x : mu.nodes()) shifted.push_back(x - shift);
  Interval<Real> img(mu.support().a - shift, mu.support().b - shift);
  AtomicMeasure<Real> image(std::move(shifted), mu.weights(), mu.sign(), img);
  auto c = moments(image, N);
  Real sum(0);
  for (std::size_t n = 1; n <= N; ++n) {
    Real m = abs(c[n]);
    if (m == Real(0)) return scalar_traits<Real>::infinity();
    sum += pow(m, Real(-1) / Real(static_cast<long>(2 * n)));
  }
  return sum;
}

}  // namespace nikishin

#endif  // NIKISHIN_MEASURES_HPP_
