#pragma once

#include <complex>
#include <string>
#include <vector>

#include "fflab/arith.hpp"
#include "fflab/parallel.hpp"
#include "fflab/polar.hpp"
#include "fflab/universe.hpp"

// Quadratic Gauss sums over F_p, in the exact shape the limit experiments
// need. For xi of exact order 2*nu^2 (nu even, so 2*nu^2 | p-1) the full sum
//
//     S = sum_{n=0}^{nu^2 - 1} xi^{n^2}
//
// collapses to nu * omega where omega = epsilon^{(p-1)/8}. The summand is
// nu^2-periodic in n, so S is the complete sum. Scaled variants express the
// discretized Gaussian/Fresnel data: a = (d/l')^2 picks the quadratic
// coefficient, and the scale decides whether the step is measured against
// mu*iota (u-scale, damped) or mu (v-scale, oscillatory).

namespace fflab {

enum class GaussScale { U_SCALE, V_SCALE };

inline std::string to_string(GaussScale s) { return s == GaussScale::U_SCALE ? "U_SCALE" : "V_SCALE"; }

namespace detail {

// nu must be a positive even integer with 2*nu^2 | p-1.
inline void check_nu(const Natural& p, const Natural& nu) {
  if (nu < 2 || !divides(Natural(2), nu))
    throw InvalidInput("gauss: nu = " + nu.get_str() + " must be a positive even integer");
  Natural two_nu_sq = 2 * nu * nu;
  if (!divides(two_nu_sq, p - 1))
    throw InvalidInput("gauss: 2*nu^2 = " + two_nu_sq.get_str() + " does not divide p-1 = " + Natural(p - 1).get_str());
}

// xi must generate exactly the order-2*nu^2 subgroup, not a proper part.
inline void check_xi(const Natural& p, const ModElem& xi, const Natural& nu) {
  check_nu(p, nu);
  if (xi.modulus != p) throw InvalidInput("gauss: xi must live in F_p");
  Natural two_nu_sq = 2 * nu * nu;
  if (mod_pow(xi, two_nu_sq).residue != 1)
    throw InvalidInput("gauss: xi^(2*nu^2) != 1, so ord(xi) does not divide 2*nu^2");
  if (multiplicative_order(xi, factorize(two_nu_sq)) != two_nu_sq)
    throw InvalidInput("gauss: xi must have exact order 2*nu^2 = " + two_nu_sq.get_str());
}

}  // namespace detail

// The canonical character of order 2*nu^2: epsilon^{(p-1)/(2*nu^2)}.
inline ModElem gauss_character(const UniverseParams& P, const Natural& nu) {
  detail::check_nu(P.p, nu);
  return mod_pow(P.epsilon, (P.p - 1) / (2 * nu * nu));
}

inline ModElem omega_element(const UniverseParams& P) {
  return mod_pow(P.epsilon, (P.p - 1) / 8);
}

// Full quadratic sum, term by term. Each block seeds xi^{lo^2} by one powm
// and then steps with xi^{2n+1}, so the work is linear in nu^2. The block
// layout is fixed and sums in F_p are exact, so any worker count produces
// the same element.
inline ModElem gauss_sum_bruteforce(const Natural& p, const ModElem& xi, const Natural& nu, ExecPolicy policy = {}) {
  detail::check_xi(p, xi, nu);
  std::size_t terms = static_cast<std::size_t>(to_u64(nu * nu));
  ModElem zero(Natural(0), p);
  ModElem xi_sq = xi * xi;
  auto block = [&](std::size_t lo, std::size_t hi) {
    Natural n(static_cast<unsigned long>(lo));
    ModElem cur = mod_pow(xi, n * n);       // xi^{lo^2}
    ModElem step = mod_pow(xi, 2 * n + 1);  // xi^{2*lo+1}
    ModElem acc = zero;
    for (std::size_t k = lo; k < hi; ++k) {
      acc = acc + cur;
      cur = cur * step;
      step = step * xi_sq;
    }
    return acc;
  };
  return block_reduce<ModElem>(
      terms, zero, block, [](const ModElem& a, const ModElem& b) { return a + b; }, policy);
}

// nu * omega in any prime field carrying an eighth root of unity; epsilon
// must generate F_p^* and 8 | p-1 so omega = epsilon^{(p-1)/8} exists.
inline ModElem gauss_sum_closed_form(const ModElem& epsilon, const Natural& nu) {
  const Natural& p = epsilon.modulus;
  if (!divides(Natural(8), p - 1))
    throw InvalidInput("gauss: closed form needs 8 | p-1, got p = " + p.get_str());
  detail::check_nu(p, nu);
  return Natural(nu % p) * mod_pow(epsilon, (p - 1) / 8);
}

inline ModElem gauss_sum_closed_form(const UniverseParams& P, const Natural& nu) {
  return gauss_sum_closed_form(P.epsilon, nu);
}

struct GaussSumReport {
  Natural nu;
  ModElem xi;
  ModElem exact_sum;
  ModElem closed_form;
  ModElem omega;
  bool match = false;
  ComplexExtended place_image;  // image of the un-normalized sum: nu * e^{i pi/4}
};

inline GaussSumReport gauss_sum_check(const UniverseParams& P, const Natural& nu, ExecPolicy policy = {}) {
  ModElem xi = gauss_character(P, nu);
  GaussSumReport r;
  r.nu = nu;
  r.xi = xi;
  r.exact_sum = gauss_sum_bruteforce(P.p, xi, nu, policy);
  r.closed_form = gauss_sum_closed_form(P, nu);
  r.omega = omega_element(P);
  r.match = (r.exact_sum == r.closed_form);
  r.place_image = cx(to_double(Rational(nu)) * place_symbol(PlacedSymbol::omega()).value);
  return r;
}

// Pointwise periodicity of the summand: (n + nu^2)^2 - n^2 = nu^2 (2n + nu^2)
// is a multiple of 2*nu^2 once nu is even, so xi^{(n+nu^2)^2} = xi^{n^2}.
// The same character validation as the brute-force sum guards the input.
inline bool periodicity_check(const Natural& p, const ModElem& xi, const Natural& nu, const Natural& n) {
  detail::check_xi(p, xi, nu);
  Natural shifted = n + nu * nu;
  return mod_pow(xi, shifted * shifted) == mod_pow(xi, n * n);
}

// Window version: any nu^2 consecutive indices sum to the complete sum.
inline bool periodicity_window_check(const UniverseParams& P, const Natural& nu, ExecPolicy policy = {}) {
  ModElem xi = gauss_character(P, nu);
  ModElem base = gauss_sum_bruteforce(P.p, xi, nu, policy);
  Natural period = nu * nu;
  std::vector<Natural> shifts{Natural(1), nu, period / 2, period - 1};
  for (const Natural& s : shifts) {
    ModElem acc(Natural(0), P.p);
    for (Natural n = s; n < s + period; ++n) acc = acc + mod_pow(xi, n * n);
    if (!(acc == base)) return false;
  }
  return true;
}

// All admissible sum lengths for this tuple: even nu with 2*nu^2 | p-1.
inline std::vector<Natural> admissible_nus(const UniverseParams& P) {
  std::vector<Natural> out;
  Natural half = (P.p - 1) / 2;
  for (Natural nu(2); nu * nu <= half; nu += 2)
    if (divides(2 * nu * nu, P.p - 1)) out.push_back(nu);
  return out;
}

// --- scaled sums -------------------------------------------------------------

// a = (d / lp)^2 in lowest terms. U-scale measures the lattice against
// mu*iota and v-scale against mu:
//
//     nu = mu*iota*lp/d   (U_SCALE)      nu = mu*lp/d   (V_SCALE)
//
// Either way the complete sum is nu*omega = mu*iota*omega*(lp/d) resp.
// mu*omega*(lp/d), an exact identity in F_p. Normalizing by 1/mu
// symbolically and applying the place gives the continuum values:
//
//     U: iota*omega*(lp/d) -> 1/sqrt(a)        (the phases cancel)
//     V: omega*(lp/d)      -> e^{+i pi/4} / sqrt(a)
struct ScaledGaussReport {
  GaussScale scale = GaussScale::U_SCALE;
  Rational a;
  Natural d, lp;  // a = (d/lp)^2
  Natural nu;
  ModElem xi;
  ModElem exact_sum;
  ModElem closed_form;
  ModElem omega;
  bool match = false;
  ComplexExtended place_image;            // image of the normalized sum
  std::complex<double> inv_sqrt_a{0, 0};  // 1/sqrt(a), the magnitude both scales share
};

inline ScaledGaussReport scaled_gauss_sum(const UniverseParams& P, const Rational& a, GaussScale scale,
                                          ExecPolicy policy = {}) {
  if (a <= 0) throw InvalidInput("gauss: scale factor a must be positive");
  Natural num(a.get_num()), den(a.get_den());
  Natural d = isqrt_exact(num, "gauss: numerator of a");
  Natural lp = isqrt_exact(den, "gauss: denominator of a");

  Natural raw = (scale == GaussScale::U_SCALE) ? Natural(P.mu * P.iota * lp) : Natural(P.mu * lp);
  if (!divides(d, raw))
    throw InvalidInput("gauss: nu = " + raw.get_str() + "/" + d.get_str() + " is not an integer for scale " +
                       to_string(scale));
  Natural nu = raw / d;
  detail::check_nu(P.p, nu);  // even and 2*nu^2 | p-1, else InvalidInput

  ScaledGaussReport r;
  r.scale = scale;
  r.a = a;
  r.d = d;
  r.lp = lp;
  r.nu = nu;
  r.xi = gauss_character(P, nu);
  r.exact_sum = gauss_sum_bruteforce(P.p, r.xi, nu, policy);
  r.closed_form = gauss_sum_closed_form(P, nu);
  r.omega = omega_element(P);
  r.match = (r.exact_sum == r.closed_form);

  double ratio = to_double(Rational(lp) / Rational(d));  // lp/d = 1/sqrt(a)
  r.inv_sqrt_a = {ratio, 0.0};
  std::complex<double> im = place_symbol(PlacedSymbol::omega()).value;
  if (scale == GaussScale::U_SCALE) im *= place_symbol(PlacedSymbol::iota()).value;
  r.place_image = cx(im * ratio);
  return r;
}

}  // namespace fflab
