/**
 * @file scalar.hpp
 * @brief Small forward-mode scalar types: Dual<N> carries N first partials,
 * Jet2<T> carries value, first and second derivative along one direction.
 * Nesting Jet2<Dual<N>> gives spatial derivatives that are themselves
 * differentiated with respect to N parameters.
 */
#pragma once

#include <array>
#include <cmath>

namespace pinngm::pinn::ad {

template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  static Dual variable(double value, int index) {
    Dual x(value);
    x.d[index] = 1.0;
    return x;
  }
};

template <int N>
Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v + b.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}
template <int N>
Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v - b.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}
template <int N>
Dual<N> operator-(const Dual<N>& a) {
  Dual<N> r(-a.v);
  for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
  return r;
}
template <int N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v * b.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
template <int N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  const double inv = 1.0 / b.v;
  Dual<N> r(a.v * inv);
  for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
  return r;
}
template <int N>
Dual<N> sqrt(const Dual<N>& a) {
  const double s = std::sqrt(a.v);
  Dual<N> r(s);
  for (int i = 0; i < N; ++i) r.d[i] = 0.5 / s * a.d[i];
  return r;
}
template <int N>
Dual<N> tanh(const Dual<N>& a) {
  const double t = std::tanh(a.v);
  Dual<N> r(t);
  for (int i = 0; i < N; ++i) r.d[i] = (1.0 - t * t) * a.d[i];
  return r;
}

template <typename T>
struct Jet2 {
  T v{};
  T d{};
  T dd{};

  Jet2() = default;
  Jet2(double value) : v(value), d(0.0), dd(0.0) {}  // NOLINT(google-explicit-constructor)
  Jet2(T value, T first, T second) : v(value), d(first), dd(second) {}
};

template <typename T>
Jet2<T> operator+(const Jet2<T>& a, const Jet2<T>& b) {
  return {a.v + b.v, a.d + b.d, a.dd + b.dd};
}
template <typename T>
Jet2<T> operator-(const Jet2<T>& a, const Jet2<T>& b) {
  return {a.v - b.v, a.d - b.d, a.dd - b.dd};
}
template <typename T>
Jet2<T> operator-(const Jet2<T>& a) {
  return {-a.v, -a.d, -a.dd};
}
template <typename T>
Jet2<T> operator*(const Jet2<T>& a, const Jet2<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + T(2.0) * a.d * b.d + a.v * b.dd};
}

// Applies a scalar function given f, f', f'' at the value.
template <typename T>
Jet2<T> chain(const Jet2<T>& a, const T& f, const T& f1, const T& f2) {
  return {f, f1 * a.d, f2 * a.d * a.d + f1 * a.dd};
}

template <typename T>
Jet2<T> operator/(const Jet2<T>& a, const Jet2<T>& b) {
  const T f = T(1.0) / b.v;
  const Jet2<T> inv = chain(b, f, -f * f, T(2.0) * f * f * f);
  return a * inv;
}
template <typename T>
Jet2<T> sqrt(const Jet2<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  const T f1 = T(0.5) / s;
  return chain(a, s, f1, -f1 / (T(2.0) * a.v));
}
template <typename T>
Jet2<T> tanh(const Jet2<T>& a) {
  using std::tanh;
  const T t = tanh(a.v);
  const T s = T(1.0) - t * t;
  return chain(a, t, s, T(-2.0) * t * s);
}

inline double primal(double x) { return x; }
template <int N>
double primal(const Dual<N>& x) {
  return x.v;
}
template <typename T>
double primal(const Jet2<T>& x) {
  return primal(x.v);
}

}  // namespace pinngm::pinn::ad
