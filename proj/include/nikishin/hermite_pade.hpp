#ifndef NIKISHIN_HERMITE_PADE_HPP_
#define NIKISHIN_HERMITE_PADE_HPP_

// Type I / type II Hermite-Pade approximants of (s^_{1,1}, ..., s^_{1,m}),
// optionally perturbed by rational functions r_j, via nullspaces of the
// moment-shift (Hankel-block) order-condition matrices.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nikishin/complex.hpp"
#include "nikishin/error.hpp"
#include "nikishin/linalg.hpp"
#include "nikishin/measures.hpp"
#include "nikishin/nikishin_system.hpp"
#include "nikishin/polynomial.hpp"
#include "nikishin/rational.hpp"
#include "nikishin/roots.hpp"

namespace nikishin {

class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> n) : MultiIndex(std::vector<int>(n)) {}
  explicit MultiIndex(std::vector<int> n) : n_(std::move(n)) {
    if (n_.empty()) throw Error(ErrorKind::kDomain, "multi-index needs at least one component");
    for (int x : n_)
      if (x < 0) throw Error(ErrorKind::kDomain, "multi-index components must be nonnegative");
    if (total() < 1) throw Error(ErrorKind::kDomain, "multi-index must not be all zero");
  }

  std::size_t size() const { return n_.size(); }
  // 1-based component n_j.
  int operator[](std::size_t j) const { return n_.at(j - 1); }
  const std::vector<int>& components() const { return n_; }
  int total() const { return std::accumulate(n_.begin(), n_.end(), 0); }
  int max() const { return *std::max_element(n_.begin(), n_.end()); }
  int min() const { return *std::min_element(n_.begin(), n_.end()); }
  int spread() const { return max() - min(); }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < n_.size(); ++i) s += (i ? "," : "") + std::to_string(n_[i]);
    return s + ")";
  }

 private:
  std::vector<int> n_;
};

template <class Real>
struct Pole {
  Complex<Real> zeta;
  int multiplicity = 1;
};

// r = (v_1/t_1, ..., v_m/t_m) with T = prod t_j, D = deg T and the poles of T
// clustered with multiplicities.
template <class Real>
class RationalPerturbation {
 public:
  // The zero perturbation for m components.
  static RationalPerturbation none(std::size_t m) {
    RationalPerturbation p;
    p.r_.assign(m, RationalFn<Real>());
    p.T_ = Polynomial<Real>::constant(Real(1));
    return p;
  }

  RationalPerturbation(const NikishinSystem<Real>& sys, std::vector<RationalFn<Real>> r) : r_(std::move(r)) {
    if (r_.size() != sys.size()) throw Error(ErrorKind::kDomain, "perturbation needs one rational function per component");
    T_ = Polynomial<Real>::constant(Real(1));
    for (const auto& rj : r_) T_ = T_ * rj.den();
    for (std::size_t j = 0; j < r_.size(); ++j) {
      for (std::size_t k = j + 1; k < r_.size(); ++k) {
        if (r_[j].den().degree() > 0 && r_[k].den().degree() > 0 &&
            poly_gcd(r_[j].den(), r_[k].den()).degree() > 0) {
          throw Error(ErrorKind::kDomain, "poles of r_" + std::to_string(j + 1) + " and r_" + std::to_string(k + 1) +
                                              " must be distinct");
        }
      }
    }
    if (T_.degree() > 0) cluster_poles(poly_roots(T_));
    const Real tol = precision_fraction<Real>(1, 4);
    for (const auto& p : poles_) {
      for (std::size_t j : {std::size_t{1}, sys.size()}) {
        if (sys.interval(j).distance(p.zeta) <= tol) {
          throw Error(ErrorKind::kDomain, "perturbation pole lies on Delta_1 or Delta_m");
        }
      }
    }
  }

  std::size_t size() const { return r_.size(); }
  const std::vector<RationalFn<Real>>& r() const { return r_; }
  const RationalFn<Real>& r(std::size_t j) const { return r_.at(j - 1); }
  const Polynomial<Real>& T() const { return T_; }
  int D() const { return T_.degree(); }
  const std::vector<Pole<Real>>& poles() const { return poles_; }
  bool is_zero() const {
    return std::all_of(r_.begin(), r_.end(), [](const auto& x) { return x.is_zero(); });
  }

 private:
  RationalPerturbation() = default;

  void cluster_poles(const std::vector<Complex<Real>>& roots) {
    const Real tol = precision_fraction<Real>(1, 8);
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (used[i]) continue;
      Complex<Real> sum = roots[i];
      int count = 1;
      used[i] = true;
      Real mag = abs(roots[i]);
      for (std::size_t k = i + 1; k < roots.size(); ++k) {
        if (!used[k] && abs(roots[k] - roots[i]) <= tol * (mag > Real(1) ? mag : Real(1))) {
          used[k] = true;
          sum += roots[k];
          ++count;
        }
      }
      poles_.push_back({sum / Real(count), count});
    }
  }

  std::vector<RationalFn<Real>> r_;
  Polynomial<Real> T_;
  std::vector<Pole<Real>> poles_;
};

// Numerical diagnostics attached to every solve.
template <class Real>
struct SolveInfo {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int incompleteness = 0;   // M
  bool nullity_flag = false;  // numerically more than one admissible direction
  Real sigma_min{0};
  Real sigma_next{0};
  Real sigma_max{0};
  long precision_used = 0;
};

template <class Real>
struct TypeIVector {
  std::vector<Polynomial<Real>> a;  // a_0, a_1, ..., a_m
  MultiIndex n;
  int residual_order = 0;  // A = a_0 + sum a_j f_j is O(z^-residual_order)
  SolveInfo<Real> info;

  std::size_t m() const { return a.size() - 1; }
  // a_1..a_m
  std::vector<Polynomial<Real>> components() const { return {a.begin() + 1, a.end()}; }
};

template <class Real>
struct TypeIIVector {
  Polynomial<Real> Q;
  std::vector<Polynomial<Real>> P;  // P_1..P_m
  MultiIndex n;
  Real max_order_violation{0};  // largest |coefficient| of Q f_j - P_j that should vanish
  Real violation_scale{0};      // largest sum of |terms| behind those coefficients
  SolveInfo<Real> info;
};

// (|n| - 1 - M) x |n| matrix: row t = 0..|n|-2-M, column (j, l) with
// l = 0..n_j-1 holds tail_j[l + t]. Its nullspace is the set of coefficient
// vectors of (a_1..a_m) meeting the order condition.
template <class Real>
Matrix<Real> assemble_type1_system(const std::vector<LaurentTail<Real>>& tails, const MultiIndex& n, int M) {
  if (tails.size() != n.size()) throw Error(ErrorKind::kDomain, "one Laurent tail per component required");
  if (M < 0) throw Error(ErrorKind::kDomain, "incompleteness M must be nonnegative");
  const int rows = std::max(n.total() - 1 - M, 0);
  const int cols = n.total();
  for (std::size_t j = 1; j <= n.size(); ++j) {
    if (n[j] == 0) continue;
    const std::size_t need = static_cast<std::size_t>(std::max(n[j] - 1 + rows, 0));
    if (tails[j - 1].size() < need) throw Error(ErrorKind::kDomain, "Laurent tails too short for the order conditions");
  }
  Matrix<Real> A(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  std::size_t col = 0;
  for (std::size_t j = 1; j <= n.size(); ++j) {
    for (int l = 0; l < n[j]; ++l, ++col) {
      for (int t = 0; t < rows; ++t) A(static_cast<std::size_t>(t), col) = tails[j - 1][static_cast<std::size_t>(l + t)];
    }
  }
  return A;
}

namespace detail {

template <class Real>
std::vector<Polynomial<Real>> split_columns(const std::vector<Real>& v, const MultiIndex& n) {
  std::vector<Polynomial<Real>> out;
  std::size_t col = 0;
  for (std::size_t j = 1; j <= n.size(); ++j) {
    std::vector<Real> c(v.begin() + static_cast<std::ptrdiff_t>(col), v.begin() + static_cast<std::ptrdiff_t>(col + n[j]));
    col += static_cast<std::size_t>(n[j]);
    out.emplace_back(std::move(c));
  }
  return out;
}

// max |coef| over all components = 1; the highest numerically nonzero
// coefficient of the last numerically nonzero component is positive.
template <class Real>
void normalize_components(std::vector<Polynomial<Real>>& a) {
  Real big(0);
  for (const auto& p : a) {
    Real x = p.max_abs_coeff();
    if (x > big) big = x;
  }
  if (big == Real(0)) throw Error(ErrorKind::kNumerics, "nullspace vector vanished");
  const Real cut = half_precision_tol<Real>() * big;
  Real lead(0);
  for (auto it = a.rbegin(); it != a.rend() && lead == Real(0); ++it) {
    for (int i = it->degree(); i >= 0; --i) {
      using std::abs;
      if (abs(it->coeff(i)) > cut) {
        lead = it->coeff(i);
        break;
      }
    }
  }
  Real f = lead < Real(0) ? Real(-1) / big : Real(1) / big;
  for (auto& p : a) p = f * p;
}

template <class Real>
std::size_t tail_length(const MultiIndex& n, int extra = 0) {
  return static_cast<std::size_t>(n.total() + n.max() + 4 + extra);
}

// Coefficients e_k of z^(-k-1) in a_0 + sum a_j f_j for k < order, together
// with per-coefficient magnitude scales sum |a_jl| |f_j[l+k]|.
template <class Real>
std::pair<LaurentTail<Real>, std::vector<Real>> remainder_tail(const std::vector<Polynomial<Real>>& comps,
                                                               const std::vector<LaurentTail<Real>>& tails,
                                                               std::size_t order) {
  using std::abs;
  LaurentTail<Real> e;
  e.coeffs.assign(order, Real(0));
  std::vector<Real> scale(order, Real(0));
  for (std::size_t j = 0; j < comps.size(); ++j) {
    const auto& p = comps[j];
    for (std::size_t k = 0; k < order; ++k) {
      for (int l = 0; l <= p.degree(); ++l) {
        Real term = p.coeff(l) * tails[j][static_cast<std::size_t>(l) + k];
        scale[k] += abs(term);
        e[k] += term;
      }
    }
  }
  return {e, scale};
}

// Polynomial part of sum a_j f_j.
template <class Real>
Polynomial<Real> polynomial_part(const std::vector<Polynomial<Real>>& comps, const std::vector<LaurentTail<Real>>& tails) {
  Polynomial<Real> sum;
  for (std::size_t j = 0; j < comps.size(); ++j) sum += multiply_expand(comps[j], tails[j], 0).polynomial_part;
  return sum;
}

// Number of leading numerically-zero coefficients, plus one: the exponent q
// with e = O(z^-q).
template <class Real>
int vanishing_order(const LaurentTail<Real>& e, const std::vector<Real>& scale) {
  using std::abs;
  const Real tol = half_precision_tol<Real>();
  std::size_t k = 0;
  while (k < e.size() && abs(e[k]) <= tol * scale[k]) ++k;
  return static_cast<int>(k) + 1;
}

template <class Real>
using TailProvider = std::function<std::vector<LaurentTail<Real>>(std::size_t length)>;

template <class Real>
TypeIVector<Real> solve_type1_once(const TailProvider<Real>& provider, const MultiIndex& n, int M) {
  const std::size_t L = tail_length<Real>(n);
  auto tails = provider(L);
  Matrix<Real> A = assemble_type1_system(tails, n, M);
  NullDirection<Real> nd = least_singular_direction(A);

  TypeIVector<Real> v;
  v.n = n;
  v.info.rows = A.rows();
  v.info.cols = A.cols();
  v.info.incompleteness = M;
  v.info.nullity_flag = nd.multiple;
  v.info.sigma_min = nd.sigma_min;
  v.info.sigma_next = nd.sigma_next;
  v.info.sigma_max = nd.sigma_max;
  v.info.precision_used = scalar_traits<Real>::bits();

  auto comps = split_columns(nd.vector, n);
  normalize_components(comps);
  Polynomial<Real> a0 = -polynomial_part(comps, tails);
  auto [e, scale] = remainder_tail(comps, tails, static_cast<std::size_t>(n.total() + 4));
  v.residual_order = vanishing_order(e, scale);
  v.a.reserve(comps.size() + 1);
  v.a.push_back(std::move(a0));
  for (auto& c : comps) v.a.push_back(std::move(c));
  return v;
}

// Re-solves at doubled precision (up to the library maximum) while the
// achieved order falls short of |n| - M. With M = 0 a flagged nullity also
// escalates: Nikishin systems are perfect, so a second vanishing singular
// value there is lost precision rather than genuine freedom. For M = 0 the
// forward error of the direction, about 2^-P sigma_max / sigma_next, must
// also stay below 2^(-3 P0 / 4) with P0 the caller's precision.
template <class Real>
TypeIVector<Real> solve_type1_escalating(const TailProvider<Real>& provider, const MultiIndex& n, int M) {
  const long base = scalar_traits<Real>::bits();
  long bits = base;
  while (true) {
    TypeIVector<Real> v = with_precision<Real>(bits, [&] { return solve_type1_once(provider, n, M); });
    bool ok = v.residual_order >= n.total() - M && !(M == 0 && v.info.nullity_flag);
    if (ok && M == 0 && has_variable_precision<Real>) {
      ok = with_precision<Real>(bits, [&] {
        using std::ldexp;
        const Real err = ldexp(Real(1), -bits) * v.info.sigma_max;
        return err <= ldexp(Real(1), -(3 * base) / 4) * v.info.sigma_next;
      });
    }
    if (ok || !has_variable_precision<Real> || bits * 2 > mp::kMaxPrecisionBits) return v;
    bits *= 2;
  }
}

template <class Real>
std::vector<LaurentTail<Real>> forward_tails(const NikishinSystem<Real>& sys, std::size_t length) {
  if (has_variable_precision<Real> && scalar_traits<Real>::bits() > sys.precision()) {
    return forward_tails(sys.refined(), length);
  }
  std::vector<LaurentTail<Real>> tails;
  tails.reserve(sys.size());
  for (std::size_t j = 1; j <= sys.size(); ++j) tails.push_back(moments(sys.s(1, j), length - 1));
  return tails;
}

template <class Real>
std::vector<LaurentTail<Real>> perturbed_tails(const NikishinSystem<Real>& sys, const RationalPerturbation<Real>& pert,
                                               std::size_t length) {
  auto tails = forward_tails(sys, length);
  for (std::size_t j = 0; j < tails.size(); ++j) tails[j] = tails[j] + laurent_expand_rational(pert.r()[j], length);
  return tails;
}

}  // namespace detail

// Supplies the Laurent tails f_j (coefficients of z^-1, z^-2, ...) of a given
// length at the calling thread's precision.
template <class Real>
using TailProvider = detail::TailProvider<Real>;

// Moments of s_{1,1}, ..., s_{1,m}: the Laurent tails of the unperturbed system.
template <class Real>
std::vector<LaurentTail<Real>> system_tails(const NikishinSystem<Real>& sys, std::size_t length) {
  return detail::forward_tails(sys, length);
}

// Type I solve for arbitrary tails, with the same escalation policy.
template <class Real>
TypeIVector<Real> solve_type1_from_tails(const TailProvider<Real>& provider, const MultiIndex& n, int M = 0) {
  return detail::solve_type1_escalating(provider, n, M);
}

// Type I approximant (M = 0) or incomplete type I approximant (M > 0) of the
// Nikishin system: deg a_j <= n_j - 1 and
// a_0 + sum_j a_j s^_{1,j} = O(z^-(|n| - M)).
template <class Real>
TypeIVector<Real> solve_type1(const NikishinSystem<Real>& sys, const MultiIndex& n, int M = 0) {
  if (n.size() != sys.size()) throw Error(ErrorKind::kDomain, "multi-index length differs from the system size");
  detail::TailProvider<Real> provider = [&sys](std::size_t L) { return detail::forward_tails(sys, L); };
  return detail::solve_type1_escalating(provider, n, M);
}

// Same conditions for f_j = s^_{1,j} + r_j.
template <class Real>
TypeIVector<Real> solve_type1_perturbed(const NikishinSystem<Real>& sys, const RationalPerturbation<Real>& pert,
                                        const MultiIndex& n) {
  if (n.size() != sys.size() || pert.size() != sys.size()) {
    throw Error(ErrorKind::kDomain, "multi-index / perturbation length differs from the system size");
  }
  detail::TailProvider<Real> provider = [&sys, &pert](std::size_t L) { return detail::perturbed_tails(sys, pert, L); };
  return detail::solve_type1_escalating(provider, n, 0);
}

template <class Real>
struct ReductionReport {
  Polynomial<Real> p0;                 // T a_0 + sum_j T a_j r_j
  std::vector<Polynomial<Real>> Ta;    // T a_1, ..., T a_m
  int required_order = 0;              // |n| - D
  Real max_violation{0};               // largest coefficient that should vanish
  Real scale{0};
};

// Multiplies the perturbed order condition by T: with p_0 as above,
// p_0 + sum_j (T a_j) s^_{1,j} must be O(z^-(|n|-D)), i.e. an incomplete
// type I approximant of the unperturbed system with M = D.
template <class Real>
ReductionReport<Real> perturbed_reduce(const RationalPerturbation<Real>& pert, const TypeIVector<Real>& v,
                                       const NikishinSystem<Real>& sys) {
  using std::abs;
  if (pert.size() != v.m() || sys.size() != v.m()) throw Error(ErrorKind::kDomain, "size mismatch in reduction");
  const Real tol = half_precision_tol<Real>();
  ReductionReport<Real> rep;
  const auto& T = pert.T();
  rep.p0 = T * v.a[0];
  for (std::size_t j = 1; j <= v.m(); ++j) {
    const auto& rj = pert.r(j);
    auto [cofactor, rem] = T.divmod(rj.den());
    if (!rem.is_zero() && rem.max_abs_coeff() > tol * T.max_abs_coeff()) {
      throw Error(ErrorKind::kNumerics, "pole cancellation failure: T r_j is not a polynomial");
    }
    rep.p0 += cofactor * rj.num() * v.a[j];
    rep.Ta.push_back(T * v.a[j]);
  }
  rep.required_order = v.n.total() - pert.D();

  const int extra = pert.D();
  auto tails = detail::forward_tails(sys, detail::tail_length<Real>(v.n, extra));
  // Polynomial part must cancel p_0 exactly.
  Polynomial<Real> poly = rep.p0 + detail::polynomial_part(rep.Ta, tails);
  Real poly_scale = rep.p0.max_abs_coeff();
  for (const auto& c : poly.coeffs()) rep.max_violation = std::max(rep.max_violation, abs(c));
  rep.scale = poly_scale;
  const std::size_t order = static_cast<std::size_t>(std::max(rep.required_order - 1, 0));
  auto [e, scale] = detail::remainder_tail(rep.Ta, tails, order);
  for (std::size_t k = 0; k < order; ++k) {
    rep.max_violation = std::max(rep.max_violation, abs(e[k]));
    rep.scale = std::max(rep.scale, scale[k]);
  }
  return rep;
}

// Common denominator Q (deg <= |n|) with Q s^_{1,j} - P_j = O(z^-(n_j+1)).
// Q is monic; when the nullspace is not a line the lowest-degree admissible
// Q is taken.
template <class Real>
TypeIIVector<Real> solve_type2(const NikishinSystem<Real>& sys, const MultiIndex& n) {
  using std::abs;
  if (n.size() != sys.size()) throw Error(ErrorKind::kDomain, "multi-index length differs from the system size");
  const int N = n.total();
  const std::size_t L = static_cast<std::size_t>(2 * N + n.max() + 4);
  auto tails = detail::forward_tails(sys, L);
  auto build = [&](int cols) {
    Matrix<Real> A(static_cast<std::size_t>(N), static_cast<std::size_t>(cols));
    std::size_t row = 0;
    for (std::size_t j = 1; j <= n.size(); ++j) {
      for (int t = 0; t < n[j]; ++t, ++row) {
        for (int i = 0; i < cols; ++i) A(row, static_cast<std::size_t>(i)) = tails[j - 1][static_cast<std::size_t>(i + t)];
      }
    }
    return A;
  };
  Matrix<Real> full = build(N + 1);
  NullDirection<Real> nd = least_singular_direction(full);

  TypeIIVector<Real> out;
  out.n = n;
  out.info.rows = full.rows();
  out.info.cols = full.cols();
  out.info.nullity_flag = nd.multiple;
  out.info.sigma_min = nd.sigma_min;
  out.info.sigma_next = nd.sigma_next;
  out.info.precision_used = scalar_traits<Real>::bits();

  std::vector<Real> q = nd.vector;
  if (nd.multiple) {
    const Real tol = half_precision_tol<Real>();
    for (int d = 0; d <= N; ++d) {
      NullDirection<Real> sub = least_singular_direction(build(d + 1));
      if (sub.sigma_min <= tol * (sub.sigma_max > Real(1) ? sub.sigma_max : Real(1))) {
        q = sub.vector;
        break;
      }
    }
  }
  out.Q = Polynomial<Real>(q).trimmed(half_precision_tol<Real>()).monic();
  std::vector<Real> qabs;
  for (const auto& c : out.Q.coeffs()) qabs.push_back(abs(c));
  const Polynomial<Real> Qabs(qabs);
  for (std::size_t j = 0; j < n.size(); ++j) {
    const auto order = static_cast<std::size_t>(n[j + 1]);
    auto ex = multiply_expand(out.Q, tails[j], order);
    out.P.push_back(ex.polynomial_part);
    LaurentTail<Real> tabs;
    for (const auto& c : tails[j].coeffs) tabs.coeffs.push_back(abs(c));
    auto mag = multiply_expand(Qabs, tabs, order).tail;
    for (std::size_t k = 0; k < ex.tail.size(); ++k) {
      out.max_order_violation = std::max(out.max_order_violation, abs(ex.tail[k]));
      out.violation_scale = std::max(out.violation_scale, mag[k]);
    }
  }
  return out;
}

// Q s^_{1,j} - P_j expanded at infinity: coefficients of z^-1 .. z^-order.
template <class Real>
LaurentTail<Real> type2_remainder_tail(const NikishinSystem<Real>& sys, const TypeIIVector<Real>& v, std::size_t j,
                                       std::size_t order) {
  auto tails = detail::forward_tails(sys, static_cast<std::size_t>(v.Q.degree() + 1) + order);
  return multiply_expand(v.Q, tails[j - 1], order).tail;
}

// A_{n,j}(z) = a_j(z) + sum_{k=j+1}^m a_k(z) s^_{j+1,k}(z); for j = 0 with a
// perturbation the term sum_k a_k(z) r_k(z) is added. j = m gives a_m(z).
template <class Real>
Complex<Real> remainder_eval(const NikishinSystem<Real>& sys, const RationalPerturbation<Real>* pert,
                             const std::vector<Polynomial<Real>>& a, std::size_t j, const Complex<Real>& z) {
  const std::size_t m = sys.size();
  if (a.size() != m + 1 || j > m) throw Error(ErrorKind::kDomain, "remainder level out of range");
  Complex<Real> val = a[j](z);
  for (std::size_t k = j + 1; k <= m; ++k) val += a[k](z) * s_hat_eval(sys, j + 1, k, z);
  if (j == 0 && pert != nullptr) {
    for (std::size_t k = 1; k <= m; ++k) {
      if (!pert->r(k).is_zero()) val += a[k](z) * pert->r(k)(z);
    }
  }
  return val;
}

template <class Real>
Complex<Real> remainder_eval(const NikishinSystem<Real>& sys, const RationalPerturbation<Real>* pert,
                             const TypeIVector<Real>& v, std::size_t j, const Complex<Real>& z) {
  return remainder_eval(sys, pert, v.a, j, z);
}

// A_1(x) = a_1(x) + sum_{k>=2} a_k(x) s^_{2,k}(x) on the real line; comps holds
// a_1..a_m.
template <class Real>
Real first_level_remainder(const NikishinSystem<Real>& sys, const std::vector<Polynomial<Real>>& comps, const Real& x) {
  Real val = comps[0](x);
  for (std::size_t k = 2; k <= sys.size(); ++k) val += comps[k - 1](x) * cauchy_eval_real(sys.s(2, k), x);
  return val;
}

// max over nu = 0..N-2 of |sum_i x_i^nu A_1(x_i) w_i sign| on sigma_1's atoms,
// with the matching magnitude scale. comps holds a_1..a_m (or T a_1..T a_m).
template <class Real>
IdentityResidual<Real> check_orthogonality(const NikishinSystem<Real>& sys, const std::vector<Polynomial<Real>>& comps,
                                           int N) {
  using std::abs;
  if (comps.size() != sys.size()) throw Error(ErrorKind::kDomain, "component count differs from the system size");
  IdentityResidual<Real> out;
  if (N < 2) return out;
  const auto& s1 = sys.generator(1);
  std::vector<Real> vals;
  vals.reserve(s1.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    vals.push_back(first_level_remainder(sys, comps, s1.nodes()[i]) * s1.weights()[i] * Real(s1.sign()));
  }
  for (int nu = 0; nu <= N - 2; ++nu) {
    Real sum(0), mag(0);
    for (std::size_t i = 0; i < s1.size(); ++i) {
      Real term = pow(s1.nodes()[i], static_cast<long>(nu)) * vals[i];
      sum += term;
      mag += abs(term);
    }
    out.residual = std::max(out.residual, abs(sum));
    out.scale = std::max(out.scale, mag);
  }
  return out;
}

template <class Real>
IdentityResidual<Real> check_orthogonality(const NikishinSystem<Real>& sys, const TypeIVector<Real>& v, int M) {
  return check_orthogonality(sys, v.components(), v.n.total() - M);
}

}  // namespace nikishin

#endif  // NIKISHIN_HERMITE_PADE_HPP_
