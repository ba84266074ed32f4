#ifndef NIKISHIN_ANALYSIS_HPP_
#define NIKISHIN_ANALYSIS_HPP_

// Numerical diagnostics of the ratio asymptotics a_j/a_m and a_0/a_m, their
// geometric rates, sign changes of the first-level remainder and the
// attraction of zeros by perturbation poles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nikishin/complex.hpp"
#include "nikishin/error.hpp"
#include "nikishin/hermite_pade.hpp"
#include "nikishin/nikishin_system.hpp"
#include "nikishin/roots.hpp"

namespace nikishin {

template <class Real>
struct EvalGrid {
  std::vector<Complex<Real>> points;
  std::string description;
};

struct GridSpec {
  double radius_factor = 4.0;
  int circle_points = 64;
  int segment_points = 16;
  double segment_offset = 0.1;
};

namespace detail {

template <class Real>
Real outer_radius(const NikishinSystem<Real>& sys, const RationalPerturbation<Real>* pert) {
  using std::abs;
  Real r(0);
  for (std::size_t j = 1; j <= sys.size(); ++j) r = std::max({r, abs(sys.interval(j).a), abs(sys.interval(j).b)});
  if (pert != nullptr)
    for (const auto& p : pert->poles()) r = std::max(r, abs(p.zeta));
  return r > Real(0) ? r : Real(1);
}

}  // namespace detail

// Points must avoid Delta_m and keep eps_k away from every pole of T.
template <class Real>
void validate_grid(const EvalGrid<Real>& grid, const NikishinSystem<Real>& sys, const RationalPerturbation<Real>* pert,
                   const Real& eps_k) {
  if (grid.points.empty()) throw Error(ErrorKind::kValidation, "evaluation grid is empty");
  const auto& last = sys.interval(sys.size());
  const Real tol = precision_fraction<Real>(1, 4);
  for (const auto& z : grid.points) {
    if (last.distance(z) <= tol) throw Error(ErrorKind::kValidation, "grid point lies on Delta_m");
    if (pert != nullptr) {
      for (const auto& p : pert->poles()) {
        if (abs(z - p.zeta) < eps_k) throw Error(ErrorKind::kValidation, "grid point too close to a pole of T");
      }
    }
  }
}

// Circle |z| = radius_factor * (outer radius of supports and poles), plus a
// segment between Delta_1 and Delta_m lifted by segment_offset * i (omitted
// when m = 1 or the two intervals touch).
template <class Real>
EvalGrid<Real> default_grid(const NikishinSystem<Real>& sys, const RationalPerturbation<Real>* pert,
                            const GridSpec& spec = {}) {
  if (spec.circle_points < 0 || spec.segment_points < 0 || !(spec.radius_factor > 1.0)) {
    throw Error(ErrorKind::kValidation, "grid needs radius_factor > 1 and nonnegative point counts");
  }
  EvalGrid<Real> g;
  const Real radius = Real(spec.radius_factor) * detail::outer_radius(sys, pert);
  const Real two_pi = Real(2) * scalar_traits<Real>::pi();
  for (int i = 0; i < spec.circle_points; ++i) {
    g.points.push_back(polar(radius, two_pi * Real(i) / Real(spec.circle_points)));
  }
  std::string desc = std::to_string(spec.circle_points) + " points on |z| = " + scalar_traits<Real>::str(radius, 6);
  const std::size_t m = sys.size();
  if (m > 1 && spec.segment_points > 0) {
    const auto& d1 = sys.interval(1);
    const auto& dm = sys.interval(m);
    Real from = d1.b < dm.a ? d1.b : dm.b;
    Real to = d1.b < dm.a ? dm.a : d1.a;
    if (from != to) {
      for (int i = 0; i < spec.segment_points; ++i) {
        Real t = Real(i + 1) / Real(spec.segment_points + 1);
        Complex<Real> z(from + (to - from) * t, Real(spec.segment_offset));
        bool clear = true;
        if (pert != nullptr)
          for (const auto& p : pert->poles()) clear = clear && !(abs(z - p.zeta) < Real(spec.segment_offset));
        if (clear) g.points.push_back(z);
      }
      desc += "; " + std::to_string(spec.segment_points) + " points between Delta_1 and Delta_m";
    }
  }
  g.description = desc;
  validate_grid(g, sys, pert, Real(spec.segment_offset) / Real(2));
  return g;
}

template <class Real>
struct SupError {
  Real abs_error{0};   // sup |approximant - target|
  Real target_sup{0};  // sup |target| over the same points
  int skipped = 0;     // points where |a_m| is numerically zero

  // Normalized sup error; invariant under rescaling the measures.
  Real relative() const { return target_sup > Real(0) ? abs_error / target_sup : abs_error; }
};

namespace detail {

template <class Real, class Target>
SupError<Real> sup_ratio_error(const TypeIVector<Real>& v, std::size_t j, const EvalGrid<Real>& grid, Target target) {
  const std::size_t m = v.m();
  const auto& am = v.a[m];
  if (am.is_zero()) throw Error(ErrorKind::kNumerics, "degenerate last component");
  const Real tol = half_precision_tol<Real>();
  SupError<Real> out;
  for (const auto& z : grid.points) {
    Complex<Real> den = am(z);
    if (abs(den) < tol * am.eval_abs_scale(abs(z))) {
      ++out.skipped;
      continue;
    }
    Complex<Real> t = target(z);
    out.abs_error = std::max(out.abs_error, abs(v.a[j](z) / den - t));
    out.target_sup = std::max(out.target_sup, abs(t));
  }
  return out;
}

template <class Real>
Real parity(std::size_t e) {
  return e % 2 == 0 ? Real(1) : Real(-1);
}

}  // namespace detail

// sup over the grid of |a_j/a_m - (-1)^{m-j} s^_{m,j+1}|, j = 1..m-1.
template <class Real>
SupError<Real> ratio_error(const NikishinSystem<Real>& sys, const TypeIVector<Real>& v, std::size_t j,
                           const EvalGrid<Real>& grid) {
  const std::size_t m = sys.size();
  if (v.m() != m) throw Error(ErrorKind::kDomain, "approximant size differs from the system size");
  if (j < 1 || j + 1 > m) throw Error(ErrorKind::kDomain, "ratio index j must lie in 1..m-1");
  const Real sgn = detail::parity<Real>(m - j);
  return detail::sup_ratio_error(v, j, grid, [&](const Complex<Real>& z) { return sgn * s_hat_eval(sys, m, j + 1, z); });
}

// Limit of a_0/a_m:
//   (-1)^m s^_{m,1} - sum_{j=1}^{m-1} (-1)^{m-j} r_j s^_{m,j+1} - r_m.
// For m = 1 this is -(s^ + r), as the order condition at infinity forces.
template <class Real>
Complex<Real> a0_limit(const NikishinSystem<Real>& sys, const RationalPerturbation<Real>* pert, const Complex<Real>& z) {
  const std::size_t m = sys.size();
  Complex<Real> t = detail::parity<Real>(m) * s_hat_eval(sys, m, 1, z);
  if (pert == nullptr) return t;
  for (std::size_t j = 1; j < m; ++j) {
    if (!pert->r(j).is_zero()) t -= detail::parity<Real>(m - j) * (pert->r(j)(z) * s_hat_eval(sys, m, j + 1, z));
  }
  if (!pert->r(m).is_zero()) t -= pert->r(m)(z);
  return t;
}

template <class Real>
SupError<Real> ratio_error_a0(const NikishinSystem<Real>& sys, const RationalPerturbation<Real>* pert,
                              const TypeIVector<Real>& v, const EvalGrid<Real>& grid) {
  if (v.m() != sys.size()) throw Error(ErrorKind::kDomain, "approximant size differs from the system size");
  return detail::sup_ratio_error(v, 0, grid, [&](const Complex<Real>& z) { return a0_limit(sys, pert, z); });
}

template <class Real>
struct ConvergenceRow {
  MultiIndex n;
  std::vector<Real> err;  // err_1..err_{m-1}, normalized sup errors
  Real err_0{0};
  int skipped = 0;
  bool nullity_flag = false;
  long precision_used = 0;
};

template <class Real>
ConvergenceRow<Real> convergence_row(const NikishinSystem<Real>& sys, const RationalPerturbation<Real>* pert,
                                     const TypeIVector<Real>& v, const EvalGrid<Real>& grid) {
  ConvergenceRow<Real> row;
  row.n = v.n;
  row.nullity_flag = v.info.nullity_flag;
  row.precision_used = v.info.precision_used;
  for (std::size_t j = 1; j < sys.size(); ++j) {
    auto e = ratio_error(sys, v, j, grid);
    row.err.push_back(e.relative());
    row.skipped = std::max(row.skipped, e.skipped);
  }
  auto e0 = ratio_error_a0(sys, pert, v, grid);
  row.err_0 = e0.relative();
  row.skipped = std::max(row.skipped, e0.skipped);
  return row;
}

struct RateEstimate {
  std::optional<double> delta;  // exp(slope of log err against |n|)
  std::string note;
};

// Least-squares fit of log err = c + |n| log delta. Zero errors are dropped
// with a note; fewer than two usable points give no estimate.
template <class Real>
RateEstimate estimate_rate(const std::vector<int>& sizes, const std::vector<Real>& errors) {
  if (sizes.size() != errors.size()) throw Error(ErrorKind::kDomain, "sizes and errors differ in length");
  if (sizes.size() < 3) throw Error(ErrorKind::kDomain, "rate estimation needs at least three rows");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw Error(ErrorKind::kDomain, "rows must have strictly increasing |n|");
  }
  RateEstimate out;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (errors[i] < Real(0)) throw Error(ErrorKind::kDomain, "errors must be nonnegative");
    if (errors[i] == Real(0)) {
      out.note += (out.note.empty() ? "" : "; ") + std::string("|n|=") + std::to_string(sizes[i]) +
                  " excluded (exact recovery)";
      continue;
    }
    using std::log;
    xs.push_back(static_cast<double>(sizes[i]));
    ys.push_back(scalar_traits<Real>::to_double(log(errors[i])));
  }
  if (xs.size() < 2) {
    out.note += (out.note.empty() ? "" : "; ") + std::string("too few nonzero errors");
    return out;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  out.delta = std::exp(sxy / sxx);
  return out;
}

// One estimate per column: err_1..err_{m-1}, then err_0.
template <class Real>
std::vector<RateEstimate> estimate_rate(const std::vector<ConvergenceRow<Real>>& rows) {
  if (rows.size() < 3) throw Error(ErrorKind::kDomain, "rate estimation needs at least three rows");
  std::vector<int> sizes;
  for (const auto& r : rows) sizes.push_back(r.n.total());
  const std::size_t cols = rows.front().err.size();
  std::vector<RateEstimate> out;
  for (std::size_t c = 0; c <= cols; ++c) {
    std::vector<Real> e;
    for (const auto& r : rows) e.push_back(c < cols ? r.err.at(c) : r.err_0);
    out.push_back(estimate_rate(sizes, e));
  }
  return out;
}

// Strict sign alternations, ignoring entries below 2^{-P/2} max |value|.
template <class Real>
int sign_changes(const std::vector<Real>& values) {
  using std::abs;
  Real big(0);
  for (const auto& v : values) big = std::max(big, abs(v));
  if (big == Real(0)) throw Error(ErrorKind::kEvaluation, "function vanishes on grid");
  const Real cut = half_precision_tol<Real>() * big;
  int count = 0, last = 0;
  for (const auto& v : values) {
    if (abs(v) < cut) continue;
    const int s = v > Real(0) ? 1 : -1;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

// Atoms of sigma_1 plus 2^refine - 1 equally spaced points inside each gap
// between consecutive atoms.
template <class Real>
std::vector<Real> first_level_grid(const AtomicMeasure<Real>& sigma1, int refine = 1) {
  const auto& x = sigma1.nodes();
  const int parts = 1 << std::max(refine, 0);
  std::vector<Real> g;
  for (std::size_t i = 0; i < x.size(); ++i) {
    g.push_back(x[i]);
    if (i + 1 == x.size()) break;
    for (int p = 1; p < parts; ++p) g.push_back(x[i] + (x[i + 1] - x[i]) * Real(p) / Real(parts));
  }
  return g;
}

// Sign changes of A_1 = a_1 + sum_{k>=2} a_k s^_{2,k} on the first-level grid.
// The grid is refined once when fewer than `expected` changes are seen.
template <class Real>
int first_level_sign_changes(const NikishinSystem<Real>& sys, const std::vector<Polynomial<Real>>& comps, int expected) {
  int best = 0;
  for (int refine : {1, 2}) {
    std::vector<Real> vals;
    for (const auto& x : first_level_grid(sys.generator(1), refine)) vals.push_back(first_level_remainder(sys, comps, x));
    best = std::max(best, sign_changes(vals));
    if (best >= expected) break;
  }
  return best;
}

template <class Real>
struct PoleCount {
  Complex<Real> zeta;
  int multiplicity = 0;
  int count = 0;
};

template <class Real>
struct PoleCensus {
  std::vector<PoleCount<Real>> poles;
  std::vector<Complex<Real>> stray;  // roots away from every pole, from Delta_m and from infinity
  int escaping = 0;                  // roots beyond the far radius (heading to infinity)
  int degree = 0;
};

// Zeros of a_j near each pole of T, and those left over outside an
// eps-inflation of Delta_m. Roots with |z| > far_radius count as escaping to
// infinity; the default far radius is (outer radius of Delta_m and poles) / eps.
template <class Real>
PoleCensus<Real> pole_attraction(const NikishinSystem<Real>& sys, const RationalPerturbation<Real>& pert,
                                 const TypeIVector<Real>& v, std::size_t j, const Real& eps,
                                 std::optional<Real> far_radius = std::nullopt) {
  const std::size_t m = sys.size();
  if (j < 1 || j > m) throw Error(ErrorKind::kDomain, "component index must lie in 1..m");
  if (!(eps > Real(0))) throw Error(ErrorKind::kDomain, "epsilon must be positive");
  const auto& dm = sys.interval(m);
  const auto& poles = pert.poles();
  for (std::size_t p = 0; p < poles.size(); ++p) {
    if (!(Real(2) * eps < dm.distance(poles[p].zeta))) throw Error(ErrorKind::kDomain, "epsilon too large for pole separation");
    for (std::size_t q = p + 1; q < poles.size(); ++q) {
      if (!(Real(2) * eps < abs(poles[p].zeta - poles[q].zeta))) {
        throw Error(ErrorKind::kDomain, "epsilon too large for pole separation");
      }
    }
  }
  if (!far_radius) {
    using std::abs;
    Real outer = std::max({Real(1), abs(dm.a), abs(dm.b)});
    for (const auto& p : poles) outer = std::max(outer, abs(p.zeta));
    far_radius = outer / eps;
  }
  const auto& aj = v.a.at(j);
  if (aj.is_zero()) throw Error(ErrorKind::kNumerics, "component a_" + std::to_string(j) + " vanishes identically");
  auto p = aj.trimmed(half_precision_tol<Real>());
  PoleCensus<Real> out;
  out.degree = p.degree();
  for (const auto& pole : poles) out.poles.push_back({pole.zeta, pole.multiplicity, 0});
  if (p.degree() < 1) return out;
  for (const auto& z : poly_roots(p)) {
    bool near_pole = false;
    for (auto& pc : out.poles) {
      if (abs(z - pc.zeta) < eps) {
        ++pc.count;
        near_pole = true;
      }
    }
    if (near_pole || dm.distance(z) < eps) continue;
    if (abs(z) > *far_radius) ++out.escaping;
    else out.stray.push_back(z);
  }
  return out;
}

}  // namespace nikishin

#endif  // NIKISHIN_ANALYSIS_HPP_
