#pragma once

// Forward-mode automatic differentiation with dual numbers.
//
// A Dual<T> carries a value and one directional derivative. Nesting
// (Dual<Dual<double>>) yields second directional derivatives, which the
// backstepping barrier and the tracking controller need because their
// certificates are built from first derivatives of other functions.
//
//   Dual<double> x{2.0, 1.0};
//   auto y = x * sin(x);        // y.value == 2 sin 2, y.deriv == sin 2 + 2 cos 2

#include <cmath>
#include <ostream>
#include <type_traits>

#include <Eigen/Core>

namespace fwrta {

template <typename T>
struct Dual {
  T value{};
  T deriv{};

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v), deriv(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(const T& v, const T& d) : value(v), deriv(d) {}
  template <typename U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
  constexpr Dual(const T& v) : value(v), deriv(0.0) {}  // NOLINT(google-explicit-constructor)

  Dual& operator+=(const Dual& o) { value += o.value; deriv += o.deriv; return *this; }
  Dual& operator-=(const Dual& o) { value -= o.value; deriv -= o.deriv; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
  Dual& operator*=(double s) { value *= s; deriv *= s; return *this; }
  Dual& operator/=(double s) { value /= s; deriv /= s; return *this; }

  friend Dual operator+(const Dual& a) { return a; }
  friend Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.value + b.value, a.deriv + b.deriv}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.value - b.value, a.deriv - b.deriv}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T q = a.value / b.value;
    return {q, (a.deriv - q * b.deriv) / b.value};
  }

  friend Dual operator+(const Dual& a, double s) { return {a.value + s, a.deriv}; }
  friend Dual operator+(double s, const Dual& a) { return {s + a.value, a.deriv}; }
  friend Dual operator-(const Dual& a, double s) { return {a.value - s, a.deriv}; }
  friend Dual operator-(double s, const Dual& a) { return {s - a.value, -a.deriv}; }
  friend Dual operator*(const Dual& a, double s) { return {a.value * s, a.deriv * s}; }
  friend Dual operator*(double s, const Dual& a) { return {s * a.value, s * a.deriv}; }
  friend Dual operator/(const Dual& a, double s) { return {a.value / s, a.deriv / s}; }
  friend Dual operator/(double s, const Dual& a) {
    T q = s / a.value;
    return {q, -q * a.deriv / a.value};
  }
};

/// Innermost real value of a (possibly nested) dual number.
inline double value_of(double x) { return x; }
template <typename T>
double value_of(const Dual<T>& x) {
  return value_of(x.value);
}

template <typename T>
struct is_dual : std::false_type {};
template <typename T>
struct is_dual<Dual<T>> : std::true_type {};

// Comparisons look at the real value only, so branches taken inside
// differentiated code follow the primal computation.
#define FWRTA_DUAL_COMPARE(op)                                                              \
  template <typename T>                                                                   \
  bool operator op(const Dual<T>& a, const Dual<T>& b) { return value_of(a) op value_of(b); } \
  template <typename T>                                                                   \
  bool operator op(const Dual<T>& a, double b) { return value_of(a) op b; }                \
  template <typename T>                                                                   \
  bool operator op(double a, const Dual<T>& b) { return a op value_of(b); }
FWRTA_DUAL_COMPARE(<)
FWRTA_DUAL_COMPARE(>)
FWRTA_DUAL_COMPARE(<=)
FWRTA_DUAL_COMPARE(>=)
FWRTA_DUAL_COMPARE(==)
FWRTA_DUAL_COMPARE(!=)
#undef FWRTA_DUAL_COMPARE

using std::abs;
using std::cos;
using std::exp;
using std::log;
using std::log1p;
using std::sin;
using std::sqrt;
using std::tan;

template <typename T>
Dual<T> sin(const Dual<T>& x) {
  return {sin(x.value), cos(x.value) * x.deriv};
}
template <typename T>
Dual<T> cos(const Dual<T>& x) {
  return {cos(x.value), -sin(x.value) * x.deriv};
}
template <typename T>
Dual<T> tan(const Dual<T>& x) {
  T t = tan(x.value);
  return {t, (1.0 + t * t) * x.deriv};
}
template <typename T>
Dual<T> exp(const Dual<T>& x) {
  T e = exp(x.value);
  return {e, e * x.deriv};
}
template <typename T>
Dual<T> log(const Dual<T>& x) {
  return {log(x.value), x.deriv / x.value};
}
template <typename T>
Dual<T> log1p(const Dual<T>& x) {
  return {log1p(x.value), x.deriv / (1.0 + x.value)};
}
template <typename T>
Dual<T> sqrt(const Dual<T>& x) {
  T s = sqrt(x.value);
  return {s, x.deriv / (2.0 * s)};
}
template <typename T>
Dual<T> abs(const Dual<T>& x) {
  return value_of(x) < 0.0 ? -x : x;
}
template <typename T>
Dual<T> abs2(const Dual<T>& x) {
  return x * x;
}

template <typename T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& x) {
  return os << x.value << " + " << x.deriv << "ε";
}

/// Seeds a variable for differentiation: value x, derivative direction dx.
template <typename T>
Dual<T> make_dual(const T& x, const T& dx) {
  return Dual<T>(x, dx);
}

}  // namespace fwrta

namespace Eigen {

template <typename T>
struct NumTraits<fwrta::Dual<T>> : NumTraits<double> {
  using Real = fwrta::Dual<T>;
  using NonInteger = fwrta::Dual<T>;
  using Nested = fwrta::Dual<T>;
  using Literal = fwrta::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2 * NumTraits<T>::ReadCost,
    AddCost = 2 * NumTraits<T>::AddCost,
    MulCost = 3 * NumTraits<T>::MulCost
  };
  static inline Real epsilon() { return Real(NumTraits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(NumTraits<double>::dummy_precision()); }
  static inline Real highest() { return Real(NumTraits<double>::highest()); }
  static inline Real lowest() { return Real(NumTraits<double>::lowest()); }
  static inline int digits10() { return NumTraits<double>::digits10(); }
};

template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<fwrta::Dual<T>, double, BinaryOp> {
  using ReturnType = fwrta::Dual<T>;
};
template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<double, fwrta::Dual<T>, BinaryOp> {
  using ReturnType = fwrta::Dual<T>;
};

}  // namespace Eigen
