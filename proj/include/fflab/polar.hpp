#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fflab/arith.hpp"
#include "fflab/universe.hpp"

// The computable piece of the place at infinity. Elements of the time group
// that matter for the experiments live on two rational axes,
//
//     x = alpha * u + beta * v,
//
// and the limit maps send them to the complex plane:
//
//     lm_U(x) = -pi*alpha - i*pi*beta        (additive picture)
//     lm_F(exp_p(x)) = exp(lm_U(x))          (multiplicative picture)
//
// so the u-axis carries radial decay e^{-pi*alpha} and the v-axis carries
// pure phase e^{-i*pi*beta}. A handful of distinguished constants (iota,
// omega, ...) have pinned images; mu itself blows up to infinity.

namespace fflab {

struct ComplexExtended {
  std::complex<double> value{0.0, 0.0};
  bool infinite = false;

  friend bool operator==(const ComplexExtended& a, const ComplexExtended& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
  }
};

inline ComplexExtended cx(std::complex<double> z) {
  if (std::isnan(z.real()) || std::isnan(z.imag()))
    throw InvalidInput("ComplexExtended: NaN component in finite value");
  if (std::isinf(z.real()) || std::isinf(z.imag())) return ComplexExtended{{0.0, 0.0}, true};
  return ComplexExtended{z, false};
}

inline ComplexExtended cx_infinity() { return ComplexExtended{{0.0, 0.0}, true}; }

struct PolarElem {
  Rational alpha;  // coordinate along u, in units of u
  Rational beta;   // coordinate along v, in units of v
};

// Coordinates must land on the finite grid the tuple can actually resolve:
// alpha*u and beta*v are integers, with den(alpha) | (p-1)/(i*l) and
// den(beta) | l.
inline void validate_polar(const UniverseParams& P, const PolarElem& x) {
  Natural da(x.alpha.get_den());
  Natural db(x.beta.get_den());
  Natural res = (P.p - 1) / (P.i * P.l);
  if (!divides(da, res))
    throw InvalidInput("polar: den(alpha) = " + da.get_str() + " does not divide (p-1)/(i*l) = " + res.get_str());
  if (!divides(db, P.l))
    throw InvalidInput("polar: den(beta) = " + db.get_str() + " does not divide l = " + P.l.get_str());
}

inline UElem to_uelem(const UniverseParams& P, const PolarElem& x) {
  validate_polar(P, x);
  Rational w = x.alpha * Rational(P.u) + x.beta * Rational(P.v);
  if (w.get_den() != 1)
    throw InvalidInput("polar: alpha*u + beta*v is not an integer");
  return make_uelem(P, Integer(w.get_num()));
}

inline std::complex<double> lm_U(const PolarElem& x) {
  constexpr double pi = std::numbers::pi;
  return {-pi * to_double(x.alpha), -pi * to_double(x.beta)};
}

// exp(lm_U) computed in polar form: the modulus depends only on alpha and
// the argument only on beta.
inline ComplexExtended lm_F_polar(const PolarElem& x) {
  constexpr double pi = std::numbers::pi;
  double modulus = std::exp(-pi * to_double(x.alpha));
  double argument = -pi * to_double(x.beta);
  return cx(std::polar(modulus, argument));
}

// Floating-point consistency of the two routes: exponentiate lm_U directly,
// or build the polar form. The residual is relative once values exceed unit
// size (a fixed absolute bound would be meaningless at magnitudes ~e^{pi*a}).
// Coordinates whose images overflow binary64 return +inf.
inline double commutation_residual(const PolarElem& x) {
  std::complex<double> via_exp = std::exp(lm_U(x));
  ComplexExtended via_polar = lm_F_polar(x);
  if (via_polar.infinite || std::isinf(via_exp.real()) || std::isinf(via_exp.imag()))
    return std::numeric_limits<double>::infinity();
  double scale = std::max(1.0, std::abs(via_polar.value));
  return std::abs(via_exp - via_polar.value) / scale;
}

// --- distinguished symbols --------------------------------------------------

struct PlacedSymbol {
  enum class Kind { Mu, Iota, ISym, Omega, RootOfUnity, Radial };
  Kind kind;
  Rational arg;  // q for RootOfUnity (epsilon^{(p-1)q}), r for Radial (epsilon^{(p-1)r/i})

  static PlacedSymbol mu() { return {Kind::Mu, Rational(0)}; }
  static PlacedSymbol iota() { return {Kind::Iota, Rational(0)}; }
  static PlacedSymbol i_sym() { return {Kind::ISym, Rational(0)}; }
  static PlacedSymbol omega() { return {Kind::Omega, Rational(0)}; }
  static PlacedSymbol root_of_unity(const Rational& q) { return {Kind::RootOfUnity, q}; }
  static PlacedSymbol radial(const Rational& r) { return {Kind::Radial, r}; }
};

// Images at the place. omega = epsilon^{(p-1)/8} is special-cased to
// e^{+i*pi/4}: it is the eighth root whose image must cancel iota's
// e^{-i*pi/4} for the u-scale quadratic sums to land at 1/sqrt(a). The
// generic root_of_unity map sends q to e^{-2*pi*i*q}, which would give the
// opposite sign at q = 1/8; keeping both conventions visible is deliberate.
inline ComplexExtended place_symbol(const PlacedSymbol& s) {
  constexpr double pi = std::numbers::pi;
  switch (s.kind) {
    case PlacedSymbol::Kind::Mu: return cx_infinity();
    case PlacedSymbol::Kind::Iota: return cx(std::polar(1.0, -pi / 4));
    case PlacedSymbol::Kind::ISym: return cx(std::polar(1.0, -pi / 2));
    case PlacedSymbol::Kind::Omega: return cx(std::polar(1.0, pi / 4));
    case PlacedSymbol::Kind::RootOfUnity: return cx(std::polar(1.0, -2 * pi * to_double(s.arg)));
    case PlacedSymbol::Kind::Radial: return cx(std::complex<double>(std::exp(-2 * pi * to_double(s.arg)), 0.0));
  }
  throw InvalidInput("place_symbol: unknown symbol kind");
}

}  // namespace fflab
