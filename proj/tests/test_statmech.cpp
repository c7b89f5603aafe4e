#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "fflab/statmech.hpp"
#include "oracles.hpp"

using namespace fflab;

namespace {

ModelSpec gas(unsigned N, Rational c, Boundary b = Boundary::OPEN) {
  return {ModelKind::LATTICE_GAS_1D, N, std::move(c), b};
}

ModelSpec ising(unsigned N, Rational c, Boundary b = Boundary::OPEN) {
  return {ModelKind::ISING_1D, N, std::move(c), b};
}

ModelSpec free_model(unsigned N) { return {ModelKind::FREE, N, Rational(1), Boundary::OPEN}; }

void check_against_enumeration(const ModelSpec& m) {
  PartitionPoly mine = grand_partition(m);
  PartitionPoly ref = oracle::clear_enumerated(oracle::enumerate_partition(m));
  REQUIRE(mine.coeffs.size() == ref.coeffs.size());
  CHECK(mine.cleared_denominator == ref.cleared_denominator);
  for (std::size_t k = 0; k < ref.coeffs.size(); ++k) CHECK(mine.coeffs[k] == ref.coeffs[k]);
}

}  // namespace

TEST_CASE("free sites count subsets: binomial coefficients") {
  PartitionPoly p = grand_partition(free_model(3));
  REQUIRE(p.coeffs.size() == 4);
  CHECK(p.coeffs[0] == 1);
  CHECK(p.coeffs[1] == 3);
  CHECK(p.coeffs[2] == 3);
  CHECK(p.coeffs[3] == 1);
  CHECK(p.cleared_denominator == 1);
  for (unsigned N = 1; N <= 12; ++N)
    CHECK(partition_sum_at_one(grand_partition(free_model(N))) == pow_nat(Natural(2), N));
}

TEST_CASE("open gas chain, three sites, coupling two") {
  PartitionPoly p = grand_partition(gas(3, Rational(2)));
  REQUIRE(p.coeffs.size() == 4);
  CHECK(p.coeffs[0] == 1);
  CHECK(p.coeffs[1] == 3);
  CHECK(p.coeffs[2] == 5);  // pairs {1,2},{2,3} carry c=2, {1,3} does not
  CHECK(p.coeffs[3] == 4);  // c^2
  CHECK(partition_sum_at_one(p) == 13);
}

TEST_CASE("open gas chain, five sites, coupling two") {
  CHECK(partition_sum_at_one(grand_partition(gas(5, Rational(2)))) == 89);
}

TEST_CASE("transfer recursion equals subset enumeration everywhere it can be checked") {
  for (unsigned N = 1; N <= 10; ++N) {
    check_against_enumeration(free_model(N));
    for (Rational c : {Rational(2), Rational(3), Rational(5, 2)}) {
      check_against_enumeration(gas(N, c));
      check_against_enumeration(ising(N, c));
      if (N >= 2) {
        check_against_enumeration(gas(N, c, Boundary::PERIODIC));
        check_against_enumeration(ising(N, c, Boundary::PERIODIC));
      }
    }
  }
}

TEST_CASE("ring of two gas sites double-counts its single edge") {
  PartitionPoly p = grand_partition(gas(2, Rational(2), Boundary::PERIODIC));
  REQUIRE(p.coeffs.size() == 3);
  CHECK(p.coeffs[0] == 1);
  CHECK(p.coeffs[1] == 2);
  CHECK(p.coeffs[2] == 4);  // both directions around the ring
}

TEST_CASE("open ising pair weights alignment on both ends") {
  PartitionPoly p = grand_partition(ising(2, Rational(2)));
  REQUIRE(p.coeffs.size() == 3);
  CHECK(p.coeffs[0] == 2);  // both down, aligned
  CHECK(p.coeffs[1] == 2);  // two mixed states
  CHECK(p.coeffs[2] == 2);  // both up, aligned
}

TEST_CASE("fractional couplings clear to the recorded denominator") {
  PartitionPoly p = grand_partition(gas(3, Rational(5, 2)));
  // p_3 = c^2 = 25/4 forces the clearing factor 4
  CHECK(p.cleared_denominator == 4);
  CHECK(p.coeffs[0] == 4);
  CHECK(p.coeffs[3] == 25);
}

TEST_CASE("integral couplings keep the empty-state anchor at one") {
  for (const ModelSpec& m : {gas(4, Rational(3)), gas(4, Rational(3), Boundary::PERIODIC), free_model(6)}) {
    PartitionPoly p = grand_partition(m);
    CHECK(p.cleared_denominator == 1);
    CHECK(p.coeffs[0] == 1);
  }
}

TEST_CASE("model validation bounds") {
  CHECK_THROWS_AS(grand_partition(gas(0, Rational(2))), InvalidInput);
  CHECK_THROWS_AS(grand_partition(gas(31, Rational(2))), ResourceLimit);
  CHECK_THROWS_AS(grand_partition(gas(3, Rational(-1))), InvalidInput);
  CHECK_THROWS_AS(grand_partition(gas(3, Rational(0))), InvalidInput);
  CHECK_THROWS_AS(grand_partition(gas(1, Rational(2), Boundary::PERIODIC)), InvalidInput);
  CHECK_NOTHROW(grand_partition(free_model(30)));
}

TEST_CASE("normalized ring gas is palindromic and sits on the unit circle") {
  PartitionPoly q = activity_normalized(gas(3, Rational(2), Boundary::PERIODIC));
  REQUIRE(q.coeffs.size() == 4);
  CHECK(q.coeffs[0] == 2);
  CHECK(q.coeffs[1] == 3);
  CHECK(q.coeffs[2] == 3);
  CHECK(q.coeffs[3] == 2);
  CHECK(q.cleared_denominator == 2);

  ZeroSet zs = partition_zeros(q);
  CircleCheck cc = circle_check(zs, 1e-9);
  CHECK(cc.on_circle);
  CHECK(cc.max_deviation <= 1e-9);
  CHECK(cc.min_distance_to_one > 0.5);  // strictly away from the physical point
}

TEST_CASE("normalized ring polynomials are palindromes for a sweep of sizes") {
  for (unsigned N = 2; N <= 10; ++N)
    for (Rational c : {Rational(2), Rational(3), Rational(5)}) {
      PartitionPoly q = activity_normalized(gas(N, c, Boundary::PERIODIC));
      REQUIRE(q.coeffs.size() == N + 1);
      for (std::size_t k = 0; k <= N; ++k) CHECK(q.coeffs[k] == q.coeffs[N - k]);
    }
}

TEST_CASE("ferromagnetic ring zeros all land on the unit circle") {
  for (unsigned N = 2; N <= 12; ++N)
    for (Rational c : {Rational(2), Rational(3), Rational(5)}) {
      ZeroSet zs = partition_zeros(activity_normalized(gas(N, c, Boundary::PERIODIC)));
      CircleCheck cc = circle_check(zs, 1e-9);
      CHECK(cc.on_circle);
    }
}

TEST_CASE("the circle needs the ring: open chains escape it") {
  // open two-site gas normalizes to [1, 2/c, 1/c]; at c=2 the roots have
  // modulus sqrt(2)
  ZeroSet zs = partition_zeros(activity_normalized(gas(2, Rational(2))));
  CircleCheck cc = circle_check(zs, 1e-9);
  CHECK_FALSE(cc.on_circle);
  CHECK(cc.max_deviation > 0.2);
  for (const auto& z : zs.zeros) CHECK(std::abs(std::abs(z) - std::sqrt(2.0)) < 1e-9);
}

TEST_CASE("root finder pins the double root of a perfect square") {
  PartitionPoly sq;
  sq.coeffs = {Natural(1), Natural(2), Natural(1)};  // (1+y)^2
  ZeroSet zs = partition_zeros(sq);
  REQUIRE(zs.zeros.size() == 2);
  CHECK(std::abs(zs.zeros[0] - std::complex<double>(-1.0, 0.0)) < 1e-6);
  CHECK(std::abs(zs.zeros[1] - std::complex<double>(-1.0, 0.0)) < 1e-6);
  CHECK(zs.max_residual <= 1e-9);
}

TEST_CASE("free models put an N-fold root at minus one, within cluster scatter") {
  for (unsigned N : {4u, 8u, 12u}) {
    ZeroSet zs = partition_zeros(grand_partition(free_model(N)));
    REQUIRE(zs.zeros.size() == N);
    // an N-fold root perturbed at machine precision scatters like eps^(1/N)
    double cluster_tol = 3.0 * std::pow(1e-12, 1.0 / N);
    std::complex<double> mean(0.0, 0.0);
    for (const auto& z : zs.zeros) {
      CHECK(std::abs(z - std::complex<double>(-1.0, 0.0)) < cluster_tol);
      mean += z;
    }
    mean /= static_cast<double>(N);
    // members scatter symmetrically, so the centroid cancels most of the
    // spread; the per-root polish breaks exact cancellation, leaving roughly
    // one factor of the scatter radius
    CHECK(std::abs(mean - std::complex<double>(-1.0, 0.0)) < cluster_tol / 3.0);
    // conjugate pairing survives the polish exactly for even N
    CHECK(std::abs(mean.imag()) < 1e-15);
    CHECK(zs.max_residual <= 1e-9);
  }
}

TEST_CASE("degenerate polynomials have no zero set") {
  PartitionPoly zero;
  zero.coeffs = {Natural(0), Natural(0)};
  CHECK_THROWS_AS(partition_zeros(zero), InvalidInput);
  PartitionPoly constant;
  constant.coeffs = {Natural(7)};
  CHECK_THROWS_AS(partition_zeros(constant), InvalidInput);
}

TEST_CASE("zeros off the circle are reported, not hidden") {
  PartitionPoly p;
  p.coeffs = {Natural(1), Natural(0), Natural(0), Natural(8)};  // 1 + 8y^3
  ZeroSet zs = partition_zeros(p);
  CircleCheck cc = circle_check(zs, 1e-9);
  CHECK_FALSE(cc.on_circle);
  CHECK(cc.max_deviation > 0.2);  // all roots have modulus 1/2
  for (const auto& z : zs.zeros) CHECK(std::abs(std::abs(z) - 0.5) < 1e-9);
}

TEST_CASE("field scan finds the roots of the cleared polynomial") {
  PartitionPoly p = grand_partition(gas(3, Rational(2)));  // [1,3,5,4], P(1)=13
  auto roots13 = crit_mod_p(p, Natural(13));
  REQUIRE(!roots13.empty());
  bool has_one = false;
  for (const auto& r : roots13) has_one = has_one || r == 1;
  CHECK(has_one);

  // free N=3: (1+y)^3 over F_13 vanishes only at y = -1 = 12
  auto roots_free = crit_mod_p(grand_partition(free_model(3)), Natural(13));
  REQUIRE(roots_free.size() == 1);
  CHECK(roots_free[0] == 12);

  // no roots at all over F_7
  CHECK(crit_mod_p(p, Natural(7)).empty());

  CHECK_THROWS_AS(crit_mod_p(p, Natural(12)), InvalidInput);
  CHECK_THROWS_AS(crit_mod_p(p, Natural(10000019)), ResourceLimit);
}

TEST_CASE("field scan agrees with the gcd root count") {
  std::vector<PartitionPoly> polys;
  for (unsigned N = 3; N <= 6; ++N) {
    polys.push_back(grand_partition(gas(N, Rational(2))));
    polys.push_back(grand_partition(gas(N, Rational(3), Boundary::PERIODIC)));
    polys.push_back(grand_partition(free_model(N)));
  }
  for (const auto& poly : polys)
    for (std::uint64_t p : {13ull, 89ull, 997ull})
      CHECK(crit_mod_p(poly, Natural(static_cast<unsigned long>(p))).size() ==
            oracle::distinct_roots_mod_p(poly, p));
}

TEST_CASE("prime search factors the physical point") {
  auto primes = crit_prime_search(grand_partition(gas(3, Rational(2))));
  REQUIRE(primes.size() == 1);
  CHECK(primes[0] == 13);

  auto free5 = crit_prime_search(grand_partition(free_model(5)));  // P(1) = 32
  REQUIRE(free5.size() == 1);
  CHECK(free5[0] == 2);

  auto ring = crit_prime_search(grand_partition(gas(4, Rational(3), Boundary::PERIODIC)));
  // p = [1, 4, 14, 36, 81], P(1) = 136 = 2^3 * 17
  REQUIRE(ring.size() == 2);
  CHECK(ring[0] == 2);
  CHECK(ring[1] == 17);

  PartitionPoly unit;
  unit.coeffs = {Natural(1)};
  CHECK_THROWS_AS(crit_prime_search(unit), NoSolution);
}

TEST_CASE("every reported prime divides the physical point and admits y=1 checks") {
  for (const ModelSpec& m :
       {gas(3, Rational(2)), gas(5, Rational(2)), gas(4, Rational(3), Boundary::PERIODIC), free_model(5)}) {
    PartitionPoly poly = grand_partition(m);
    Natural s = partition_sum_at_one(poly);
    for (const Natural& p : crit_prime_search(poly)) {
      CHECK(divides(p, s));
      CHECK(is_prime(p));
      auto roots = crit_mod_p(poly, p);
      bool has_one = false;
      for (const auto& r : roots) has_one = has_one || r == 1;
      CHECK(has_one);
    }
  }
}

TEST_CASE("size bounds read the same inequality from both sides") {
  BoundsReport ok = bounds_report(10, Natural(13));
  CHECK(ok.upper_ok);
  CHECK(ok.lower_ok);
  CHECK(ok.consistent);

  BoundsReport small = bounds_report(3, Natural(13));
  CHECK_FALSE(small.upper_ok);
  CHECK_FALSE(small.lower_ok);
  CHECK(small.consistent);

  // equivalence sweep across sizes and primes, boundary cases included
  std::vector<Natural> ps = {Natural(2),  Natural(3),   Natural(5),     Natural(7),
                             Natural(13), Natural(127), Natural(131071)};
  ps.push_back(pow_nat(Natural(2), 31) - 1);
  for (unsigned N = 1; N <= 30; ++N)
    for (const auto& p : ps) {
      BoundsReport r = bounds_report(N, p);
      CHECK(r.consistent);
      CHECK(r.upper_ok == r.lower_ok);
      CHECK(r.upper_ok == (p < pow_nat(Natural(2), N)));
    }
}

TEST_CASE("the 23-site consistency example") {
  // P(1) = 2^23 for the free model; its only prime factor is 2 and the
  // bounds agree at every admissible prime below 2^23
  PartitionPoly poly = grand_partition(free_model(23));
  Natural s = partition_sum_at_one(poly);
  CHECK(s == pow_nat(Natural(2), 23));
  auto primes = crit_prime_search(poly);
  REQUIRE(primes.size() == 1);
  CHECK(primes[0] == 2);
  CHECK(bounds_report(23, primes[0]).consistent);
  CHECK(bounds_report(23, primes[0]).upper_ok);
}
