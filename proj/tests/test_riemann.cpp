#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <sstream>

#include "fflab/riemann.hpp"
#include "oracles.hpp"

using namespace fflab;
using std::numbers::pi;

TEST_CASE("coarsest mesh sum is a five-term hand calculation") {
  std::complex<double> s = truncated_sum({Rational(1), 3, 1, GaussScale::U_SCALE});
  double want = 1.0 + 2 * std::exp(-pi) + 2 * std::exp(-4 * pi) + 2 * std::exp(-9 * pi);
  CHECK(std::abs(s.real() - want) < 1e-15);
  CHECK(s.imag() == 0.0);  // damped terms are strictly real
}

TEST_CASE("fine mesh reproduces the full-line damped integral") {
  std::complex<double> s = truncated_sum({Rational(1), 3, 10000, GaussScale::U_SCALE});
  CHECK(std::abs(s.real() - 1.0) < 1e-3);
  double want = gaussian_oracle(Rational(1), 3);
  CHECK(std::abs(s.real() - want) < 1e-3);
}

TEST_CASE("fine mesh reproduces the oscillatory integral") {
  std::complex<double> s = truncated_sum({Rational(1), 10, 10000, GaussScale::V_SCALE});
  std::complex<double> want = fresnel_oracle(Rational(1), 10);
  CHECK(std::abs(s - want) < 1e-2);
}

TEST_CASE("bad sum specs are rejected") {
  CHECK_THROWS_AS(truncated_sum({Rational(-1), 3, 1, GaussScale::U_SCALE}), InvalidInput);
  CHECK_THROWS_AS(truncated_sum({Rational(0), 3, 1, GaussScale::U_SCALE}), InvalidInput);
  CHECK_THROWS_AS(truncated_sum({Rational(1), 0, 1, GaussScale::U_SCALE}), InvalidInput);
  CHECK_THROWS_AS(truncated_sum({Rational(1), 3, 0, GaussScale::U_SCALE}), InvalidInput);
}

TEST_CASE("sum is symmetric: doubling the half line matches the full window") {
  Rational a(1);
  unsigned long l = 2, mu = 37;
  std::complex<double> full = truncated_sum({a, l, mu, GaussScale::U_SCALE});
  KahanSum half;
  for (unsigned long n = 1; n <= l * mu; ++n) {
    double x = static_cast<double>(n) / static_cast<double>(mu);
    half.add(std::exp(-to_double(a) * pi * x * x));
  }
  double rebuilt = (2 * half.value() + 1.0) / static_cast<double>(mu);
  CHECK(std::abs(full.real() - rebuilt) < 1e-14);
}

TEST_CASE("damped quadrature against the error function") {
  // integral over [-l, l] of e^{-a pi x^2} equals erf(l sqrt(a pi)) / sqrt(a)
  for (double ad : {0.5, 1.0, 2.0, 4.0}) {
    Rational a(Natural(static_cast<unsigned long>(ad * 2)), Natural(2));
    for (unsigned long l : {1ul, 2ul, 5ul}) {
      double want = std::erf(static_cast<double>(l) * std::sqrt(ad * pi)) / std::sqrt(ad);
      CHECK(std::abs(gaussian_oracle(a, l) - want) < 1e-10);
    }
  }
  CHECK(std::abs(gaussian_oracle(Rational(4), 10) - 0.5) < 1e-9);
  CHECK(gaussian_oracle(Rational(1), 0) == 0.0);
  CHECK_THROWS_AS(gaussian_oracle(Rational(-1), 1), InvalidInput);
}

TEST_CASE("damped quadrature is monotone in the window and bounded by the limit") {
  double prev = 0.0;
  for (unsigned long l = 1; l <= 6; ++l) {
    double val = gaussian_oracle(Rational(1), l);
    CHECK(val >= prev - 5e-13);
    CHECK(val <= 1.0 + 5e-13);
    prev = val;
  }
}

TEST_CASE("oscillatory quadrature against the power series at l=1") {
  std::complex<double> mine = fresnel_oracle(Rational(1), 1);
  std::complex<double> want = 2.0 * oracle::fresnel_series(1.0, 1.0);
  CHECK(std::abs(mine - want) < 1e-8);
  CHECK(fresnel_oracle(Rational(1), 0) == std::complex<double>(0.0, 0.0));
  CHECK_THROWS_AS(fresnel_oracle(Rational(0), 1), InvalidInput);
}

TEST_CASE("oscillatory quadrature approaches the stationary-phase limit") {
  std::complex<double> limit = std::polar(1.0, -pi / 4);
  double d10 = std::abs(fresnel_oracle(Rational(1), 10) - limit);
  double d20 = std::abs(fresnel_oracle(Rational(1), 20) - limit);
  double d40 = std::abs(fresnel_oracle(Rational(1), 40) - limit);
  CHECK(d10 < 0.05);
  CHECK(d20 < d10);
  CHECK(d40 < d20);
}

TEST_CASE("convergence study rows shrink at first order in the mesh") {
  auto rows = convergence_study(Rational(1), GaussScale::U_SCALE, 1, {10, 100, 1000});
  REQUIRE(rows.size() == 3);
  // the window cutoff at l=1 leaves an O(1/mu) defect; each decade should
  // shave close to a factor ten, and at least a factor eight
  CHECK(rows[0].abs_error > rows[1].abs_error);
  CHECK(rows[1].abs_error > rows[2].abs_error);
  CHECK(rows[1].abs_error < rows[0].abs_error / 8.0);
  CHECK(rows[2].abs_error < rows[1].abs_error / 8.0);
}

TEST_CASE("oscillatory study shrinks too") {
  auto rows = convergence_study(Rational(1), GaussScale::V_SCALE, 5, {100, 1000});
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].abs_error < rows[0].abs_error);
}

TEST_CASE("study input validation") {
  CHECK_THROWS_AS(convergence_study(Rational(1), GaussScale::U_SCALE, 1, {}), InvalidInput);
  CHECK_THROWS_AS(convergence_study(Rational(1), GaussScale::U_SCALE, 1, {100, 100}), InvalidInput);
  CHECK_THROWS_AS(convergence_study(Rational(1), GaussScale::U_SCALE, 1, {100, 10}), InvalidInput);
}

TEST_CASE("csv output is stable and round-trips binary64") {
  auto rows = convergence_study(Rational(1), GaussScale::U_SCALE, 1, {10, 100});
  std::ostringstream os;
  write_convergence_csv(os, 1, rows);
  std::string text = os.str();
  CHECK(text.rfind("mu,l,re_sum,im_sum,re_oracle,im_oracle,abs_error\n", 0) == 0);

  // parse the first data line back and compare bit patterns
  std::istringstream is(text);
  std::string header, line;
  std::getline(is, header);
  std::getline(is, line);
  std::vector<std::string> fields;
  std::stringstream fs(line);
  std::string f;
  while (std::getline(fs, f, ',')) fields.push_back(f);
  REQUIRE(fields.size() == 7);
  double re = std::stod(fields[2]);
  double orig = rows[0].sum_value.real();
  CHECK(re == orig);
  CHECK(std::memcmp(&re, &orig, sizeof(double)) == 0);

  // writing again gives the identical string
  std::ostringstream os2;
  write_convergence_csv(os2, 1, rows);
  CHECK(os2.str() == text);
}

TEST_CASE("truncated sums are bit-identical across worker counts") {
  for (auto scale : {GaussScale::U_SCALE, GaussScale::V_SCALE}) {
    std::complex<double> s1 = truncated_sum({Rational(1), 2, 997, scale}, ExecPolicy{1});
    std::complex<double> s3 = truncated_sum({Rational(1), 2, 997, scale}, ExecPolicy{3});
    CHECK(std::memcmp(&s1, &s3, sizeof s1) == 0);
  }
}

TEST_CASE("tail cancellation: damped default window") {
  const UniverseParams& P = fixtures::tuple577();
  TailReport rep = tail_cancellation_report(P, Rational(1), GaussScale::U_SCALE);
  CHECK(rep.gauss.match);
  CHECK_FALSE(rep.conjugated);
  CHECK(rep.l_cut == 3);
  CHECK(rep.mesh_mu == 10000);
  CHECK(std::abs(rep.full_image - std::complex<double>(1.0, 0.0)) < 1e-12);
  CHECK(rep.tail_estimate < 1e-2);
}

TEST_CASE("tail cancellation: oscillatory default window conjugates the image") {
  const UniverseParams& P = fixtures::tuple577();
  TailReport rep = tail_cancellation_report(P, Rational(1), GaussScale::V_SCALE);
  CHECK(rep.gauss.match);
  CHECK(rep.conjugated);
  CHECK(std::abs(rep.full_image - std::polar(1.0, -pi / 4)) < 1e-12);
  CHECK(rep.tail_estimate < 1e-1);
}

TEST_CASE("tail report with an empty window reports the whole image as tail") {
  const UniverseParams& P = fixtures::tuple577();
  TailReport rep = tail_cancellation_report(P, Rational(1), GaussScale::U_SCALE, 0, 100);
  CHECK(rep.truncated == std::complex<double>(0.0, 0.0));
  CHECK(std::abs(rep.tail_estimate - 1.0) < 1e-12);
}

TEST_CASE("tail report refuses scales the lattice cannot represent") {
  const UniverseParams& P = fixtures::tuple577();
  CHECK_THROWS_AS(tail_cancellation_report(P, Rational(1, 4), GaussScale::U_SCALE), InvalidInput);
}

TEST_CASE("rotating the exponent reproduces the oscillatory term pointwise") {
  CHECK(wick_rotation_check(Rational(1), 1, 10) < 1e-12);
  CHECK(wick_rotation_check(Rational(1), 3, 100) < 1e-12);
  CHECK(wick_rotation_check(Rational(1, 4), 2, 50) < 1e-12);
  // n=0 alone
  CHECK(wick_rotation_check(Rational(1), 0, 5) == 0.0);
  // underflowing terms are skipped, not NaN'd
  double big = wick_rotation_check(Rational(1000000), 3, 10);
  CHECK(std::isfinite(big));
  CHECK(big < 1e-12);
  CHECK_THROWS_AS(wick_rotation_check(Rational(-1), 1, 1), InvalidInput);
}

TEST_CASE("the two individual terms at x=1: damped e^{-pi}, rotated to -1ish") {
  // at a=1, x=1 the damped term is e^{-pi} and the rotated term is e^{-i pi}
  double term_u = std::exp(-pi);
  std::complex<double> rotated = std::exp(std::complex<double>(0.0, std::log(term_u)));
  CHECK(std::abs(rotated - std::complex<double>(-1.0, 0.0)) < 1e-12);
}
