#ifndef NIKISHIN_REAL_HPP_
#define NIKISHIN_REAL_HPP_

// Thin RAII value type over MPFR with a per-thread working precision.
//
// Every newly produced value (constructors, arithmetic results) is created at
// the calling thread's current precision; copies keep the precision of their
// source so stored data is never silently rounded.

#include <mpfr.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace nikishin {

namespace mp {

inline constexpr long kDefaultPrecisionBits = 256;
inline constexpr long kMinPrecisionBits = 64;
inline constexpr long kMaxPrecisionBits = 4096;

inline long& thread_precision_ref() {
  thread_local long bits = kDefaultPrecisionBits;
  return bits;
}

inline long precision_bits() { return thread_precision_ref(); }

// Sets the working precision of the current thread for the lifetime of the
// scope and restores the previous value afterwards.
class PrecisionScope {
 public:
  explicit PrecisionScope(long bits) : saved_(thread_precision_ref()) {
    if (bits < kMinPrecisionBits || bits > kMaxPrecisionBits) {
      throw std::invalid_argument("precision must lie in [64, 4096] bits, got " +
                                  std::to_string(bits));
    }
    thread_precision_ref() = bits;
  }
  ~PrecisionScope() { thread_precision_ref() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

class Real {
 public:
  Real() {
    mpfr_init2(v_, precision_bits());
    mpfr_set_zero(v_, 1);
  }
  Real(int x) { init_si(x); }
  Real(long x) { init_si(x); }
  Real(long long x) { init_si(static_cast<long>(x)); }
  Real(unsigned x) { init_si(static_cast<long>(x)); }
  Real(unsigned long x) { init_si(static_cast<long>(x)); }
  Real(double x) {
    mpfr_init2(v_, precision_bits());
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  explicit Real(std::string_view text) {
    mpfr_init2(v_, precision_bits());
    std::string s(text);
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      mpfr_clear(v_);
      throw std::invalid_argument("not a decimal number: '" + s + "'");
    }
  }
  explicit Real(const char* text) : Real(std::string_view(text)) {}

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }
  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }

  // Rounds to the current thread precision.
  Real rounded() const {
    Real r;
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  // Decimal scientific notation with `digits` significant digits; digits == 0
  // picks enough digits to round-trip the stored precision.
  std::string str(std::size_t digits = 0) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (digits == 0) digits = mpfr_get_str_ndigits(10, mpfr_get_prec(v_));
    mpfr_exp_t exp = 0;
    char* raw = mpfr_get_str(nullptr, &exp, 10, digits, v_, MPFR_RNDN);
    std::string mant(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (!mant.empty() && mant[0] == '-') {
      sign = "-";
      mant.erase(0, 1);
    }
    if (mpfr_zero_p(v_)) exp = 1;
    std::string out = sign + mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    out += "e" + std::to_string(static_cast<long>(exp) - 1);
    return out;
  }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a) { Real r; mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real operator+(const Real& a) { return a.rounded(); }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }

  friend Real abs(const Real& a) { Real r; mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real sqrt(const Real& a) { Real r; mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real exp(const Real& a) { Real r; mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real log(const Real& a) { Real r; mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real cos(const Real& a) { Real r; mpfr_cos(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real sin(const Real& a) { Real r; mpfr_sin(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real tgamma(const Real& a) { Real r; mpfr_gamma(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real hypot(const Real& a, const Real& b) { Real r; mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real atan2(const Real& y, const Real& x) { Real r; mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN); return r; }
  friend Real pow(const Real& a, const Real& b) { Real r; mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real pow(const Real& a, long k) { Real r; mpfr_pow_si(r.v_, a.v_, k, MPFR_RNDN); return r; }
  friend Real pow(const Real& a, int k) { return pow(a, static_cast<long>(k)); }
  friend Real ldexp(const Real& a, long e) { Real r; mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN); return r; }
  friend bool isfinite(const Real& a) { return mpfr_number_p(a.v_) != 0; }
  friend bool isnan(const Real& a) { return mpfr_nan_p(a.v_) != 0; }
  friend int sign(const Real& a) { return mpfr_sgn(a.v_); }

  static Real pi() { Real r; mpfr_const_pi(r.v_, MPFR_RNDN); return r; }
  static Real infinity() { Real r; mpfr_set_inf(r.v_, 1); return r; }

  friend std::ostream& operator<<(std::ostream& os, const Real& a) {
    auto p = os.precision();
    return os << a.str(p > 0 ? static_cast<std::size_t>(p) : 0);
  }

 private:
  void init_si(long x) {
    mpfr_init2(v_, precision_bits());
    mpfr_set_si(v_, x, MPFR_RNDN);
  }

  mpfr_t v_;
};

}  // namespace mp

// Scalar-generic helpers so algorithms can be instantiated with double as
// well as mp::Real.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static long bits() { return std::numeric_limits<double>::digits; }
  static double from_string(std::string_view s) { return std::stod(std::string(s)); }
  static double pi() { return 3.141592653589793238462643383279502884; }
  static double infinity() { return std::numeric_limits<double>::infinity(); }
  static double to_double(double x) { return x; }
  static std::string str(double x, std::size_t digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", static_cast<int>(digits > 0 ? digits - 1 : 16), x);
    return buf;
  }
};

template <>
struct scalar_traits<mp::Real> {
  static long bits() { return mp::precision_bits(); }
  static mp::Real from_string(std::string_view s) { return mp::Real(s); }
  static mp::Real pi() { return mp::Real::pi(); }
  static mp::Real infinity() { return mp::Real::infinity(); }
  static double to_double(const mp::Real& x) { return x.to_double(); }
  static std::string str(const mp::Real& x, std::size_t digits) { return x.str(digits); }
};

// Runs fn with the working precision raised to `bits` where the scalar type
// supports it; fixed-precision types just run fn.
template <class Real, class Fn>
decltype(auto) with_precision(long bits, Fn&& fn) {
  if constexpr (std::is_same_v<Real, mp::Real>) {
    mp::PrecisionScope scope(bits);
    return fn();
  } else {
    (void)bits;
    return fn();
  }
}

template <class Real>
inline constexpr bool has_variable_precision = std::is_same_v<Real, mp::Real>;

// 2^(-bits * num / den): the family of relative tolerances used throughout
// (half precision for "numerically zero", a quarter for clustering, ...).
template <class Real>
Real precision_fraction(long num, long den) {
  using std::ldexp;
  return ldexp(Real(1), -(scalar_traits<Real>::bits() * num) / den);
}

template <class Real>
Real half_precision_tol() {
  return precision_fraction<Real>(1, 2);
}

// Number of decimal digits used when serializing at `bits` of precision.
inline std::size_t serialization_digits(long bits) {
  return static_cast<std::size_t>((bits * 3 + 9) / 10);
}

}  // namespace nikishin

#endif  // NIKISHIN_REAL_HPP_
