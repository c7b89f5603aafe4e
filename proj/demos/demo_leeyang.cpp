// Lee-Yang circle at desk scale: exact partition coefficients for small
// ferromagnetic rings, their zeros, and the finite-field criterion that the
// physical point y = 1 hits a root mod every critical prime.

#include <cstdio>

#include "fflab/report.hpp"
#include "fflab/statmech.hpp"

using namespace fflab;

int main() {
  std::printf("normalized lattice-gas rings, coupling c = 2:\n");
  for (unsigned N = 2; N <= 10; ++N) {
    ModelSpec m{ModelKind::LATTICE_GAS_1D, N, Rational(2), Boundary::PERIODIC};
    PartitionPoly poly = activity_normalized(m);
    ZeroSet zs = partition_zeros(poly);
    CircleCheck cc = circle_check(zs, 1e-9);
    std::printf("  N = %2u : deg %zu, max | |z|-1 | = %s, gap to y=1 %s -> %s\n", N,
                poly.coeffs.size() - 1, format_g17(cc.max_deviation).c_str(),
                format_g17(cc.min_distance_to_one).c_str(), cc.on_circle ? "on circle" : "OFF CIRCLE");
  }

  std::printf("\nopen chain for contrast (zeros leave the circle):\n");
  ModelSpec open{ModelKind::LATTICE_GAS_1D, 2, Rational(2), Boundary::OPEN};
  for (const auto& z : partition_zeros(activity_normalized(open)).zeros)
    std::printf("  zero at %s, |z| = %s\n", format_complex(z).c_str(), format_g17(std::abs(z)).c_str());

  std::printf("\nfinite-field criterion, gas chain N = 3, c = 2:\n");
  ModelSpec m{ModelKind::LATTICE_GAS_1D, 3, Rational(2), Boundary::OPEN};
  PartitionPoly poly = grand_partition(m);
  std::printf("  coefficients:");
  for (const auto& c : poly.coeffs) std::printf(" %s", c.get_str().c_str());
  Natural p1 = partition_sum_at_one(poly);
  std::printf("\n  P(1) = %s\n", p1.get_str().c_str());
  for (const Natural& p : crit_prime_search(poly)) {
    auto roots = crit_mod_p(poly, p);
    std::printf("  p = %s : roots of P mod p at {", p.get_str().c_str());
    for (std::size_t k = 0; k < roots.size(); ++k)
      std::printf("%s%s", k ? ", " : "", roots[k].get_str().c_str());
    BoundsReport b = bounds_report(m.N, p);
    std::printf("}  (y = 1 included), p < 2^N: %s\n", b.upper_ok ? "yes" : "no");
  }
  return 0;
}
