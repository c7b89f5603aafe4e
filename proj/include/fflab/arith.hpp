#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fflab/errors.hpp"

// Exact integer / rational / modular arithmetic. The bignum representation is
// GMP; everything number-theoretic on top of it (primality, factoring,
// orders, generators) is implemented here so the behaviour is pinned down and
// reproducible run to run.

namespace fflab {

using Natural = mpz_class;   // non-negative by convention
using Integer = mpz_class;
using Rational = mpq_class;  // GMP keeps these reduced with positive denominator

using Factorization = std::vector<std::pair<Natural, unsigned>>;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw InvalidInput("make_rational: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Natural parse_natural(const std::string& s) {
  if (s.empty()) throw InvalidInput("parse_natural: empty string");
  Natural n;
  if (mpz_set_str(n.get_mpz_t(), s.c_str(), 10) != 0 || n < 0)
    throw InvalidInput("parse_natural: not a decimal natural: '" + s + "'");
  return n;
}

// Accepts "3", "-5", "1/4".
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw InvalidInput("parse_rational: empty string");
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw InvalidInput("parse_rational: bad rational: '" + s + "'");
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw InvalidInput("parse_rational: zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

inline bool divides(const Natural& d, const Natural& n) {
  if (d == 0) return n == 0;
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Natural pow_nat(const Natural& base, unsigned long e) {
  Natural r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline std::uint64_t to_u64(const Natural& n, const char* what = "value") {
  if (n < 0 || !n.fits_ulong_p())
    throw ResourceLimit(std::string(what) + ": value out of 64-bit range");
  return mpz_get_ui(n.get_mpz_t());
}

inline double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

// Residue classes. Mixing moduli is rejected rather than silently coerced.
struct ModElem {
  Natural residue;
  Natural modulus;

  ModElem() : residue(0), modulus(2) {}
  ModElem(Natural r, Natural m) : residue(std::move(r)), modulus(std::move(m)) {
    if (modulus < 2) throw InvalidInput("ModElem: modulus must be >= 2");
    mpz_mod(residue.get_mpz_t(), residue.get_mpz_t(), modulus.get_mpz_t());
  }

  friend bool operator==(const ModElem& a, const ModElem& b) {
    return a.modulus == b.modulus && a.residue == b.residue;
  }
  friend bool operator!=(const ModElem& a, const ModElem& b) { return !(a == b); }
};

inline void require_same_modulus(const ModElem& a, const ModElem& b, const char* op) {
  if (a.modulus != b.modulus)
    throw InvalidInput(std::string("ModElem ") + op + ": mismatched moduli " +
                       a.modulus.get_str() + " vs " + b.modulus.get_str());
}

inline ModElem operator+(const ModElem& a, const ModElem& b) {
  require_same_modulus(a, b, "+");
  return ModElem(a.residue + b.residue, a.modulus);
}

inline ModElem operator*(const ModElem& a, const ModElem& b) {
  require_same_modulus(a, b, "*");
  return ModElem(a.residue * b.residue, a.modulus);
}

inline ModElem operator*(const Natural& k, const ModElem& a) {
  return ModElem(k * a.residue, a.modulus);
}

inline ModElem mod_pow(const ModElem& base, const Natural& exp) {
  if (exp < 0) throw InvalidInput("mod_pow: negative exponent");
  ModElem r;
  r.modulus = base.modulus;
  mpz_powm(r.residue.get_mpz_t(), base.residue.get_mpz_t(), exp.get_mpz_t(),
           base.modulus.get_mpz_t());
  return r;
}

inline ModElem mod_inverse(const ModElem& a) {
  ModElem r;
  r.modulus = a.modulus;
  if (mpz_invert(r.residue.get_mpz_t(), a.residue.get_mpz_t(), a.modulus.get_mpz_t()) == 0)
    throw InvalidInput("mod_inverse: element is not a unit");
  return r;
}

namespace detail {

inline bool miller_rabin_witness(const Natural& n, const Natural& a,
                                 const Natural& d, unsigned long s) {
  // returns true if 'a' witnesses compositeness of odd n = d*2^s + 1
  Natural x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return false;
  for (unsigned long i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return false;
  }
  return true;
}

inline const std::vector<unsigned long>& small_primes_1e6() {
  static const std::vector<unsigned long> primes = [] {
    const unsigned long limit = 1000000;
    std::vector<bool> sieve(limit + 1, true);
    sieve[0] = sieve[1] = false;
    for (unsigned long i = 2; i * i <= limit; ++i)
      if (sieve[i])
        for (unsigned long j = i * i; j <= limit; j += i) sieve[j] = false;
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i <= limit; ++i)
      if (sieve[i]) out.push_back(i);
    return out;
  }();
  return primes;
}

}  // namespace detail

// Deterministic Miller-Rabin below 2^64 (fixed witness set); above that,
// rounds of Miller-Rabin with the first `rounds` primes as bases, error
// probability at most 4^-rounds.
inline bool is_prime(const Natural& n, unsigned rounds = 24) {
  if (n < 2) throw InvalidInput("is_prime: n must be >= 2");
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
    if (n == p) return true;
    if (divides(Natural(p), n)) return false;
  }
  Natural d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  Natural two_pow_64 = pow_nat(Natural(2), 64);
  if (n < two_pow_64) {
    for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul})
      if (detail::miller_rabin_witness(n, Natural(a), d, s)) return false;
    return true;
  }
  const auto& primes = detail::small_primes_1e6();
  for (unsigned i = 0; i < rounds && i < primes.size(); ++i)
    if (detail::miller_rabin_witness(n, Natural(primes[i]), d, s)) return false;
  return true;
}

namespace detail {

// Brent's cycle variant of Pollard rho; deterministic because the offset c
// walks 1, 2, 3, ... instead of being drawn at random.
inline Natural pollard_rho(const Natural& n) {
  if (divides(Natural(2), n)) return Natural(2);
  for (unsigned long c = 1;; ++c) {
    Natural y(2), g(1), q(1), x, ys;
    unsigned long r = 1;
    const unsigned long m = 128;
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
      for (unsigned long k = 0; k < r && g == 1; k += m) {
        ys = y;
        unsigned long steps = std::min(m, r - k);
        for (unsigned long i = 0; i < steps; ++i) {
          y = (y * y + c) % n;
          Natural diff = x > y ? x - y : y - x;
          q = (q * diff) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      r *= 2;
    }
    if (g == n) {
      // backtrack one step at a time from the last checkpoint
      do {
        ys = (ys * ys + c) % n;
        Natural diff = x > ys ? x - ys : ys - x;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;  // proper factor; otherwise retry with next c
  }
}

inline void factor_into(const Natural& n, Factorization& out);

inline void emit_factor(const Natural& f, Factorization& out) {
  for (auto& [p, e] : out)
    if (p == f) { ++e; return; }
  out.emplace_back(f, 1);
}

inline void factor_into(const Natural& n, Factorization& out) {
  if (n == 1) return;
  if (is_prime(n)) { emit_factor(n, out); return; }
  Natural d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

// Trial division up to 10^6, then Pollard rho on what is left.  Returns
// (prime, exponent) pairs sorted by prime; factorize(1) is the empty list.
inline Factorization factorize(const Natural& n_in) {
  if (n_in < 1) throw InvalidInput("factorize: n must be >= 1");
  Factorization out;
  Natural n = n_in;
  for (unsigned long p : detail::small_primes_1e6()) {
    if (Natural(p) * p > n) break;
    if (!divides(Natural(p), n)) continue;
    unsigned e = 0;
    while (divides(Natural(p), n)) { n /= p; ++e; }
    out.emplace_back(Natural(p), e);
  }
  if (n > 1) {
    if (is_prime(n)) {
      detail::emit_factor(n, out);
    } else {
      Factorization rest;
      detail::factor_into(n, rest);
      for (auto& [p, e] : rest) {
        bool merged = false;
        for (auto& [q, f] : out)
          if (q == p) { f += e; merged = true; break; }
        if (!merged) out.emplace_back(p, e);
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

inline Natural factorization_product(const Factorization& f) {
  Natural n(1);
  for (const auto& [p, e] : f) n *= pow_nat(p, e);
  return n;
}

// Exact order of a unit, given the factored group order.
inline Natural multiplicative_order(const ModElem& a, const Factorization& factored_group_order) {
  Natural g;
  mpz_gcd(g.get_mpz_t(), a.residue.get_mpz_t(), a.modulus.get_mpz_t());
  if (g != 1) throw InvalidInput("multiplicative_order: not a unit mod " + a.modulus.get_str());
  Natural t = factorization_product(factored_group_order);
  for (const auto& [q, e] : factored_group_order) {
    for (unsigned i = 0; i < e; ++i) {
      Natural cand = t / q;
      if (mod_pow(a, cand).residue == 1)
        t = cand;
      else
        break;
    }
  }
  return t;
}

// Smallest generator of F_p^*, found by an ascending scan so reruns agree.
inline ModElem find_primitive_root(const Natural& p, const Factorization& factored_p_minus_1) {
  if (!is_prime(p)) throw InvalidInput("find_primitive_root: p must be prime");
  if (p == 2) return ModElem(Natural(1), p);
  Natural order = p - 1;
  if (factorization_product(factored_p_minus_1) != order)
    throw InvalidInput("find_primitive_root: factorization does not multiply to p-1");
  for (Natural g(2); g < p; ++g) {
    ModElem cand(g, p);
    bool primitive = true;
    for (const auto& [q, e] : factored_p_minus_1) {
      (void)e;
      if (mod_pow(cand, order / q).residue == 1) { primitive = false; break; }
    }
    if (primitive) return cand;
  }
  throw NoSolution("find_primitive_root: no generator found (p not prime?)");
}

}  // namespace fflab
