#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fflab/arith.hpp"
#include "fflab/errors.hpp"

// Small lattice models, exactly. The grand partition function
//
//     P_N(y) = sum_n p_n y^n
//
// is built by a polynomial-valued transfer matrix with exact rational
// weights, cleared to integers by the recorded common denominator. On top of
// that: complex zeros (companion matrix plus a polish step), the unit-circle
// check, and the finite-field critical-point criterion P_N(y) = 0 mod p.

namespace fflab {

enum class ModelKind { FREE, LATTICE_GAS_1D, ISING_1D };
enum class Boundary { OPEN, PERIODIC };

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::FREE: return "FREE";
    case ModelKind::LATTICE_GAS_1D: return "LATTICE_GAS_1D";
    case ModelKind::ISING_1D: return "ISING_1D";
  }
  return "?";
}

inline std::string to_string(Boundary b) { return b == Boundary::OPEN ? "OPEN" : "PERIODIC"; }

struct ModelSpec {
  ModelKind kind = ModelKind::FREE;
  unsigned N = 1;         // sites
  Rational coupling = Rational(1);  // weight per adjacent occupied (aligned) pair
  Boundary boundary = Boundary::OPEN;
};

struct PartitionPoly {
  std::vector<Natural> coeffs;     // p_0 .. p_N, exact, after clearing
  Natural cleared_denominator{1};  // multiplier that made them integers
};

inline constexpr unsigned kMaxSites = 30;

namespace detail {

using PolyQ = std::vector<Rational>;  // coefficients in the activity y

inline PolyQ poly_add(const PolyQ& a, const PolyQ& b) {
  PolyQ r(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] += b[k];
  return r;
}

// y * (a + c*b): the "next site occupied" move shared by both models.
inline PolyQ poly_step_up(const PolyQ& a, const PolyQ& b, const Rational& c) {
  PolyQ r(std::max(a.size(), b.size()) + 1, Rational(0));
  for (std::size_t k = 0; k < a.size(); ++k) r[k + 1] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k + 1] += c * b[k];
  return r;
}

inline PolyQ poly_scale(const PolyQ& a, const Rational& s) {
  PolyQ r = a;
  for (auto& q : r) q *= s;
  return r;
}

inline void check_model(const ModelSpec& m) {
  if (m.N < 1) throw InvalidInput("statmech: N must be >= 1");
  if (m.coupling <= 0) throw InvalidInput("statmech: coupling must be positive");
  if (m.N > kMaxSites)
    throw ResourceLimit("statmech: N = " + std::to_string(m.N) + " exceeds the exact-coefficient bound " +
                        std::to_string(kMaxSites));
  if (m.boundary == Boundary::PERIODIC && m.N < 2)
    throw InvalidInput("statmech: periodic chain needs N >= 2");
}

// Occupation models on a 1D chain. State tracks the previous site; an
// occupied-occupied adjacency picks up one factor of the coupling. For the
// ring, both end states are closed against the remembered first site, so the
// N=2 ring sees its two parallel edges as coupling^2.
inline PolyQ gas_chain(const ModelSpec& m) {
  const Rational& c = m.coupling;
  if (m.boundary == Boundary::OPEN) {
    PolyQ vac{Rational(1)};
    PolyQ occ{Rational(0), Rational(1)};
    for (unsigned s = 1; s < m.N; ++s) {
      PolyQ nvac = poly_add(vac, occ);
      PolyQ nocc = poly_step_up(vac, occ, c);
      vac = std::move(nvac);
      occ = std::move(nocc);
    }
    return poly_add(vac, occ);
  }
  PolyQ total;
  for (int first_occ = 0; first_occ <= 1; ++first_occ) {
    PolyQ vac = first_occ ? PolyQ{} : PolyQ{Rational(1)};
    PolyQ occ = first_occ ? PolyQ{Rational(0), Rational(1)} : PolyQ{};
    for (unsigned s = 1; s < m.N; ++s) {
      PolyQ nvac = poly_add(vac, occ);
      PolyQ nocc = poly_step_up(vac, occ, c);
      vac = std::move(nvac);
      occ = std::move(nocc);
    }
    PolyQ closed = first_occ ? poly_add(vac, poly_scale(occ, c)) : poly_add(vac, occ);
    total = poly_add(total, closed);
  }
  return total;
}

// Two-state spins; y counts up spins and every aligned adjacent pair (up-up
// or down-down) carries one coupling factor.
inline PolyQ ising_chain(const ModelSpec& m) {
  const Rational& c = m.coupling;
  auto step = [&](PolyQ& down, PolyQ& up) {
    PolyQ ndown = poly_add(poly_scale(down, c), up);      // next spin down: aligned iff prev down
    PolyQ nup = poly_step_up(down, up, c);                // next spin up: aligned iff prev up
    down = std::move(ndown);
    up = std::move(nup);
  };
  if (m.boundary == Boundary::OPEN) {
    PolyQ down{Rational(1)};
    PolyQ up{Rational(0), Rational(1)};
    for (unsigned s = 1; s < m.N; ++s) step(down, up);
    return poly_add(down, up);
  }
  PolyQ total;
  for (int first_up = 0; first_up <= 1; ++first_up) {
    PolyQ down = first_up ? PolyQ{} : PolyQ{Rational(1)};
    PolyQ up = first_up ? PolyQ{Rational(0), Rational(1)} : PolyQ{};
    for (unsigned s = 1; s < m.N; ++s) step(down, up);
    PolyQ closed = poly_add(first_up ? down : poly_scale(down, c), first_up ? poly_scale(up, c) : up);
    total = poly_add(total, closed);
  }
  return total;
}

inline PolyQ grand_partition_exact(const ModelSpec& m) {
  check_model(m);
  switch (m.kind) {
    case ModelKind::FREE: {
      PolyQ p(m.N + 1, Rational(0));
      for (unsigned n = 0; n <= m.N; ++n) {
        Natural b;
        mpz_bin_uiui(b.get_mpz_t(), m.N, n);
        p[n] = Rational(b);
      }
      return p;
    }
    case ModelKind::LATTICE_GAS_1D: return gas_chain(m);
    case ModelKind::ISING_1D: return ising_chain(m);
  }
  throw InvalidInput("statmech: unknown model kind");
}

inline PartitionPoly clear_denominators(const PolyQ& p) {
  Natural den(1);
  for (const auto& q : p) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
  PartitionPoly out;
  out.cleared_denominator = den;
  out.coeffs.reserve(p.size());
  for (const auto& q : p) {
    Rational scaled = q * Rational(den);
    out.coeffs.emplace_back(scaled.get_num());
  }
  return out;
}

}  // namespace detail

inline PartitionPoly grand_partition(const ModelSpec& m) {
  return detail::clear_denominators(detail::grand_partition_exact(m));
}

// Circle-theorem normalization: substitute y = yt / coupling and clear. For
// the periodic gas this makes the polynomial palindromic (the all-occupied
// and empty states get equal weight), and the ferromagnetic zeros land on
// |yt| = 1 exactly. Open chains do not have this symmetry; the circle claim
// is made only for the ring.
inline PartitionPoly activity_normalized(const ModelSpec& m) {
  detail::PolyQ p = detail::grand_partition_exact(m);
  Rational inv_c = Rational(1) / m.coupling;
  Rational f(1);
  for (auto& q : p) {
    q *= f;
    f *= inv_c;
  }
  return detail::clear_denominators(p);
}

inline Natural partition_sum_at_one(const PartitionPoly& poly) {
  Natural s(0);
  for (const auto& c : poly.coeffs) s += c;
  return s;
}

// --- zeros -------------------------------------------------------------------

struct ZeroSet {
  std::vector<std::complex<double>> zeros;  // with multiplicity, sorted (re, im)
  double max_residual = 0.0;                // max |P(z)| / max|coeff| over returned roots
};

namespace detail {

inline std::complex<double> horner(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

}  // namespace detail

// All complex roots, multiplicity included: balanced companion-matrix
// eigenvalues, then a few steps of multiplicity-tolerant Newton (the
// iteration on P/P', which stays quadratic at repeated roots). A step is
// kept only while it shrinks |P|. Residuals are measured against the largest
// coefficient; anything above 1e-9 is a solver failure, not a report.
inline ZeroSet partition_zeros(const PartitionPoly& poly) {
  std::size_t deg = poly.coeffs.size();
  while (deg > 0 && poly.coeffs[deg - 1] == 0) --deg;
  if (deg == 0) throw InvalidInput("statmech: zero polynomial has no zero set");
  --deg;  // now the degree proper
  if (deg == 0) throw InvalidInput("statmech: constant polynomial has no zeros");

  std::vector<double> c(deg + 1);
  double scale = 0.0;
  for (std::size_t k = 0; k <= deg; ++k) {
    c[k] = mpz_get_d(Natural(poly.coeffs[k]).get_mpz_t());
    scale = std::max(scale, std::abs(c[k]));
  }
  if (!(scale > 0) || !std::isfinite(scale))
    throw InvalidInput("statmech: coefficients overflow binary64");
  std::vector<double> cp(deg);  // derivative
  for (std::size_t k = 1; k <= deg; ++k) cp[k - 1] = c[k] * static_cast<double>(k);
  std::vector<double> cpp(deg > 1 ? deg - 1 : 0);
  for (std::size_t k = 2; k <= deg; ++k) cpp[k - 2] = c[k] * static_cast<double>(k) * static_cast<double>(k - 1);

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t k = 1; k < deg; ++k) companion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = 1.0;
  for (std::size_t k = 0; k < deg; ++k)
    companion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(deg - 1)) = -c[k] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw ConvergenceFailure("statmech: companion eigensolver failed");

  ZeroSet out;
  out.zeros.reserve(deg);
  for (std::size_t k = 0; k < deg; ++k) {
    std::complex<double> z = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    double best = std::abs(detail::horner(c, z));
    for (int it = 0; it < 8; ++it) {
      std::complex<double> p = detail::horner(c, z);
      std::complex<double> dp = detail::horner(cp, z);
      std::complex<double> ddp = cpp.empty() ? std::complex<double>(0, 0) : detail::horner(cpp, z);
      std::complex<double> denom = dp * dp - p * ddp;
      if (denom == std::complex<double>(0, 0)) break;
      std::complex<double> cand = z - p * dp / denom;
      double res = std::abs(detail::horner(c, cand));
      if (!(res < best)) break;
      z = cand;
      best = res;
    }
    out.zeros.push_back(z);
    out.max_residual = std::max(out.max_residual, best / scale);
  }
  if (out.max_residual > 1e-9)
    throw ConvergenceFailure("statmech: root residual " + std::to_string(out.max_residual) + " exceeds 1e-9");
  std::sort(out.zeros.begin(), out.zeros.end(), [](std::complex<double> a, std::complex<double> b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

struct CircleCheck {
  bool on_circle = false;
  double max_deviation = 0.0;       // max | |z| - 1 |
  double min_distance_to_one = std::numeric_limits<double>::infinity();  // min |z - 1|
};

inline CircleCheck circle_check(const ZeroSet& zs, double tol) {
  CircleCheck r;
  for (const auto& z : zs.zeros) {
    r.max_deviation = std::max(r.max_deviation, std::abs(std::abs(z) - 1.0));
    r.min_distance_to_one = std::min(r.min_distance_to_one, std::abs(z - std::complex<double>(1.0, 0.0)));
  }
  r.on_circle = r.max_deviation <= tol;
  return r;
}

// --- finite-field criterion ----------------------------------------------------

// All y in F_p with P(y) = 0, by Horner scan over the whole field. Products
// stay below 2^63 because p <= 1e7.
inline std::vector<Natural> crit_mod_p(const PartitionPoly& poly, const Natural& p) {
  if (!is_prime(p)) throw InvalidInput("statmech: modulus " + p.get_str() + " is not prime");
  if (p > 10000000) throw ResourceLimit("statmech: scan bound is p <= 1e7");
  std::uint64_t pu = to_u64(p);
  std::vector<std::uint64_t> c;
  c.reserve(poly.coeffs.size());
  for (const auto& q : poly.coeffs) {
    Natural r = q % p;
    c.push_back(to_u64(r));
  }
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  std::vector<Natural> roots;
  for (std::uint64_t y = 0; y < pu; ++y) {
    std::uint64_t acc = 0;
    for (std::size_t k = c.size(); k-- > 0;) acc = (acc * y + c[k]) % pu;
    if (acc == 0) roots.emplace_back(static_cast<unsigned long>(y));
  }
  return roots;
}

// Primes p with P(1) = 0 mod p: exactly the prime factors of sum of
// coefficients. Distinct primes, ascending.
inline std::vector<Natural> crit_prime_search(const PartitionPoly& poly) {
  Natural s = partition_sum_at_one(poly);
  if (s <= 1) throw NoSolution("statmech: P(1) = " + s.get_str() + " has no prime divisor");
  std::vector<Natural> primes;
  for (const auto& [q, e] : factorize(s)) primes.push_back(q);
  return primes;
}

struct BoundsReport {
  bool upper_ok = false;  // p < 2^N
  bool lower_ok = false;  // N > log2 p
  bool consistent = false;
};

// The two bounds are the same inequality read from both sides; they are
// computed independently (big-integer compare vs bit length) and reported
// together so the equivalence is checked, not assumed.
inline BoundsReport bounds_report(unsigned N, const Natural& p) {
  BoundsReport r;
  Natural cap = pow_nat(Natural(2), N);
  r.upper_ok = p < cap;
  r.lower_ok = N >= mpz_sizeinbase(p.get_mpz_t(), 2) && p >= 1;
  if (p < 1) r.lower_ok = true;  // log2 undefined below 1; keep the pair consistent for degenerate input
  r.consistent = (r.upper_ok == r.lower_ok);
  return r;
}

}  // namespace fflab
