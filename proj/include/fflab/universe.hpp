#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fflab/arith.hpp"
#include "fflab/errors.hpp"

// Admissible parameter tuples (p, l, i, mu, iota, epsilon) and the two-sorted
// structure they span: the additive "time" group U = Z/((p-1)*l) and the field
// F_p, linked by exp_p(n) = epsilon^n. Units of scale inside U are
// u = (p-1)/i and v = p-1.
//
// Admissibility, at desk scale:
//   - l = mu^2 and every m <= B divides l (highly divisible square)
//   - i = iota^2, i*l | p-1, 8 | p-1
//   - mode A: i^2 + 1 = p       (the "i is a square root of -1" regime)
//   - mode B: i >= l^K          (plain scale separation, K configurable)

namespace fflab {

enum class UniverseMode { A, B };

inline std::string to_string(UniverseMode m) { return m == UniverseMode::A ? "A" : "B"; }

inline UniverseMode universe_mode_from_string(const std::string& s) {
  if (s == "A") return UniverseMode::A;
  if (s == "B") return UniverseMode::B;
  throw InvalidInput("universe mode must be 'A' or 'B', got '" + s + "'");
}

struct UniverseParams {
  Natural p;        // odd prime
  Natural l;        // mu^2, highly divisible
  Natural i;        // iota^2
  Natural mu;
  Natural iota;
  Natural u;        // (p-1)/i
  Natural v;        // p-1
  ModElem epsilon;  // canonical (smallest) generator of F_p^*
  UniverseMode mode = UniverseMode::B;
  unsigned divisibility_bound = 2;  // B
  unsigned gap_exponent = 1;        // K

  Natural time_modulus() const { return (p - 1) * l; }
};

struct UniverseConfig {
  unsigned B = 2;
  unsigned K = 1;
  UniverseMode mode = UniverseMode::B;
  Natural p_min = 3;
  Natural p_max = 100000;
  std::vector<Natural> extra_divisors;   // each must divide p-1
  std::optional<Natural> iota;           // pin iota instead of scanning
  std::optional<Natural> l_override;     // replace the default l = lcm(1..B)^2
};

inline Natural lcm_upto(unsigned B) {
  Natural l(1);
  for (unsigned m = 2; m <= B; ++m) {
    Natural mm(m);
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), mm.get_mpz_t());
  }
  return l;
}

inline Natural default_l(const UniverseConfig& cfg) {
  if (cfg.l_override) return *cfg.l_override;
  Natural base = lcm_upto(cfg.B);
  return base * base;
}

inline Natural isqrt_exact(const Natural& n, const char* what) {
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0)
    throw InvalidInput(std::string(what) + ": " + n.get_str() + " is not a perfect square");
  Natural r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// Full re-validation of a tuple; throws InvalidInput naming the first
// violated constraint. Used on every search result and on cache loads.
inline void validate_universe(const UniverseParams& P) {
  if (!is_prime(P.p)) throw InvalidInput("universe: p = " + P.p.get_str() + " is not prime");
  Natural pm1 = P.p - 1;
  if (!divides(Natural(8), pm1))
    throw InvalidInput("universe: 8 does not divide p-1 = " + pm1.get_str());
  if (P.mu * P.mu != P.l)
    throw InvalidInput("universe: mu^2 != l (mu = " + P.mu.get_str() + ", l = " + P.l.get_str() + ")");
  if (P.iota * P.iota != P.i)
    throw InvalidInput("universe: iota^2 != i (iota = " + P.iota.get_str() + ", i = " + P.i.get_str() + ")");
  for (unsigned m = 2; m <= P.divisibility_bound; ++m)
    if (!divides(Natural(m), P.l))
      throw InvalidInput("universe: " + std::to_string(m) + " does not divide l = " + P.l.get_str());
  if (!divides(P.i * P.l, pm1))
    throw InvalidInput("universe: i*l does not divide p-1 (i*l = " + Natural(P.i * P.l).get_str() + ")");
  if (P.u * P.i != pm1)
    throw InvalidInput("universe: u != (p-1)/i (u = " + P.u.get_str() + ")");
  if (P.v != pm1)
    throw InvalidInput("universe: v != p-1 (v = " + P.v.get_str() + ")");
  if (P.mode == UniverseMode::A) {
    if (P.i * P.i + 1 != P.p)
      throw InvalidInput("universe: mode A requires i^2 + 1 = p (i = " + P.i.get_str() + ")");
  } else {
    Natural bound = P.l;
    mpz_pow_ui(bound.get_mpz_t(), P.l.get_mpz_t(), P.gap_exponent);
    if (P.i < bound)
      throw InvalidInput("universe: mode B requires i >= l^K (i = " + P.i.get_str() +
                         ", l^K = " + bound.get_str() + ")");
  }
  if (P.epsilon.modulus != P.p)
    throw InvalidInput("universe: epsilon has modulus " + P.epsilon.modulus.get_str() +
                       ", expected p = " + P.p.get_str());
  if (multiplicative_order(P.epsilon, factorize(pm1)) != pm1)
    throw InvalidInput("universe: epsilon = " + P.epsilon.residue.get_str() +
                       " is not a primitive root mod " + P.p.get_str());
}

namespace detail {

struct SearchDiagnostics {
  std::map<std::string, unsigned long> eliminated;
  std::string first_violation;
  void note(const std::string& constraint) {
    ++eliminated[constraint];
    if (first_violation.empty()) first_violation = constraint;
  }
  std::string summary() const {
    std::string s;
    for (const auto& [k, v] : eliminated) {
      if (!s.empty()) s += ", ";
      s += k + " x" + std::to_string(v);
    }
    return s.empty() ? "empty search range" : s;
  }
};

// Mode B: for fixed p and l, the admissible i are squares iota^2 with
// i*l | p-1, i >= l^K, and the unit u-scale quadratic-sum modulus
// 2*(mu*iota)^2 = 2*l*i dividing p-1 with mu*iota even. The largest such i
// is taken: scale separation between i and l is the whole point of the
// tuple, so we maximize it.
inline std::optional<Natural> best_mode_b_i(const Natural& pm1, const Natural& l,
                                            const Natural& mu, unsigned K,
                                            const std::optional<Natural>& pinned_iota,
                                            SearchDiagnostics& diag) {
  Natural lK = l;
  mpz_pow_ui(lK.get_mpz_t(), l.get_mpz_t(), K);
  Natural iota_cap;
  mpz_sqrt(iota_cap.get_mpz_t(), Natural(pm1 / l).get_mpz_t());
  std::optional<Natural> best;
  for (Natural iota(1); iota <= iota_cap; ++iota) {
    if (pinned_iota && iota != *pinned_iota) continue;
    Natural i = iota * iota;
    if (!divides(i * l, pm1)) { diag.note("i*l | p-1"); continue; }
    if (i < lK) { diag.note("i >= l^K"); continue; }
    Natural nu = mu * iota;
    if (!divides(Natural(2), nu)) { diag.note("mu*iota even"); continue; }
    if (!divides(2 * nu * nu, pm1)) { diag.note("2*(mu*iota)^2 | p-1"); continue; }
    best = i;
  }
  return best;
}

}  // namespace detail

// Deterministic search: primes ascending, then the admissible i for that
// prime (mode A has no freedom in i; mode B takes the largest admissible
// one), then the smallest generator. Throws NoSolution with the first
// violated constraint when the range is exhausted.
inline UniverseParams search_universe(const UniverseConfig& cfg) {
  Natural l = default_l(cfg);
  Natural mu = isqrt_exact(l, "universe: l");
  for (unsigned m = 2; m <= cfg.B; ++m)
    if (!divides(Natural(m), l))
      throw InvalidInput("universe config: " + std::to_string(m) + " does not divide l = " + l.get_str());

  detail::SearchDiagnostics diag;
  auto finish = [&](const Natural& p, const Natural& i) {
    UniverseParams P;
    P.p = p;
    P.l = l;
    P.i = i;
    P.mu = mu;
    P.iota = isqrt_exact(i, "universe: i");
    P.u = (p - 1) / i;
    P.v = p - 1;
    P.mode = cfg.mode;
    P.divisibility_bound = cfg.B;
    P.gap_exponent = cfg.K;
    P.epsilon = find_primitive_root(p, factorize(p - 1));
    validate_universe(P);
    return P;
  };

  if (cfg.mode == UniverseMode::A) {
    // p = i^2 + 1 with i = iota^2, so walk iota directly.
    for (Natural iota(1);; ++iota) {
      if (cfg.iota && iota != *cfg.iota) {
        if (iota > *cfg.iota) break;
        continue;
      }
      Natural i = iota * iota;
      Natural p = i * i + 1;
      if (p > cfg.p_max) break;
      if (p < cfg.p_min) { diag.note("p >= p_min"); continue; }
      if (!divides(l, i)) { diag.note("l | i"); continue; }  // i*l | p-1 = i^2
      if (!is_prime(p)) { diag.note("p prime"); continue; }
      if (!divides(Natural(8), p - 1)) { diag.note("8 | p-1"); continue; }
      bool extra_ok = true;
      for (const auto& e : cfg.extra_divisors)
        if (!divides(e, p - 1)) { diag.note("extra divisor " + e.get_str() + " | p-1"); extra_ok = false; break; }
      if (!extra_ok) continue;
      return finish(p, i);
    }
    throw NoSolution("universe search (mode A) found no admissible tuple in [" +
                     cfg.p_min.get_str() + ", " + cfg.p_max.get_str() +
                     "]; first violated constraint: " +
                     (diag.first_violation.empty() ? "p range empty" : diag.first_violation) +
                     "; eliminations: " + diag.summary());
  }

  Natural p = cfg.p_min > 3 ? Natural(cfg.p_min - 1) : Natural(2);
  while (true) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (p > cfg.p_max) break;
    Natural pm1 = p - 1;
    if (!divides(Natural(8), pm1)) { diag.note("8 | p-1"); continue; }
    bool extra_ok = true;
    for (const auto& e : cfg.extra_divisors)
      if (!divides(e, pm1)) { diag.note("extra divisor " + e.get_str() + " | p-1"); extra_ok = false; break; }
    if (!extra_ok) continue;
    auto i = detail::best_mode_b_i(pm1, l, mu, cfg.K, cfg.iota, diag);
    if (!i) continue;
    return finish(p, *i);
  }
  throw NoSolution("universe search (mode B) found no admissible tuple in [" +
                   cfg.p_min.get_str() + ", " + cfg.p_max.get_str() +
                   "]; first violated constraint: " +
                   (diag.first_violation.empty() ? "p range empty" : diag.first_violation) +
                   "; eliminations: " + diag.summary());
}

// --- the time group U = Z/((p-1)*l) ---------------------------------------

struct UElem {
  Natural residue;
  Natural modulus;

  friend bool operator==(const UElem& a, const UElem& b) {
    return a.modulus == b.modulus && a.residue == b.residue;
  }
  friend bool operator!=(const UElem& a, const UElem& b) { return !(a == b); }
};

inline UElem make_uelem(const UniverseParams& P, const Integer& n) {
  Natural mod = P.time_modulus();
  Natural r;
  mpz_mod(r.get_mpz_t(), n.get_mpz_t(), mod.get_mpz_t());  // GMP mod is non-negative
  return UElem{r, mod};
}

inline UElem operator+(const UElem& a, const UElem& b) {
  if (a.modulus != b.modulus) throw InvalidInput("UElem +: mismatched moduli");
  Natural r = a.residue + b.residue;
  if (r >= a.modulus) r -= a.modulus;
  return UElem{r, a.modulus};
}

inline UElem operator-(const UElem& a, const UElem& b) {
  if (a.modulus != b.modulus) throw InvalidInput("UElem -: mismatched moduli");
  Natural r = a.residue >= b.residue ? Natural(a.residue - b.residue)
                                     : Natural(a.modulus - b.residue + a.residue);
  return UElem{r, a.modulus};
}

// exp_p(n) = epsilon^n; kernel is the subgroup generated by p-1.
inline ModElem exp_p(const UniverseParams& P, const UElem& w) {
  if (w.modulus != P.time_modulus())
    throw InvalidInput("exp_p: element lives in Z/" + w.modulus.get_str() +
                       ", universe time group is Z/" + P.time_modulus().get_str());
  Natural e;
  Natural ord = P.p - 1;
  mpz_mod(e.get_mpz_t(), w.residue.get_mpz_t(), ord.get_mpz_t());
  return mod_pow(P.epsilon, e);
}

// True iff b lies strictly inside the arc walked from a towards c in the +1
// direction. The three points must be pairwise distinct.
inline bool cyclic_less(const UElem& a, const UElem& b, const UElem& c) {
  if (a.modulus != b.modulus || b.modulus != c.modulus)
    throw InvalidInput("cyclic_less: mismatched moduli");
  if (a == b || b == c || a == c)
    throw InvalidInput("cyclic_less: points must be pairwise distinct");
  Natural ab = (b - a).residue;
  Natural ac = (c - a).residue;
  return ab < ac;
}

// --- dimension sorts: quotients U ->> Z/size with d * size = |U| -----------

struct DimensionSort {
  Natural d;     // kernel index divisor
  Natural size;  // |image| = |U| / d

  Natural ambient() const { return d * size; }
};

inline DimensionSort make_dimension_sort(const Natural& ambient, const Natural& d) {
  if (d < 1 || !divides(d, ambient))
    throw InvalidInput("dimension sort: d = " + d.get_str() + " does not divide |U| = " + ambient.get_str());
  return DimensionSort{d, ambient / d};
}

// Combine two sorted dimensions: the joint refinement has size lcm of the
// two sizes (intersection of the kernels), and coordinates multiply.
inline std::pair<DimensionSort, Natural> dimension_product(const DimensionSort& D1, const DimensionSort& D2,
                                                           const Natural& x1, const Natural& x2) {
  if (D1.ambient() != D2.ambient())
    throw InvalidInput("dimension_product: sorts live over different groups");
  if (x1 >= D1.size || x2 >= D2.size)
    throw InvalidInput("dimension_product: coordinate out of range");
  Natural size;
  mpz_lcm(size.get_mpz_t(), D1.size.get_mpz_t(), D2.size.get_mpz_t());
  DimensionSort D3{D1.ambient() / size, size};
  Natural x3;
  Natural prod = x1 * x2;
  mpz_mod(x3.get_mpz_t(), prod.get_mpz_t(), size.get_mpz_t());
  return {D3, x3};
}

}  // namespace fflab
