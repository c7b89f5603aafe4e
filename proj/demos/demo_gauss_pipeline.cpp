// End-to-end tour of the p = 577 universe: search, exact quadratic sums for
// each admissible nu, then the scaled sums next to the continuum values they
// land on. Run with no arguments.

#include <cstdio>
#include <numbers>

#include "fflab/gauss.hpp"
#include "fflab/polar.hpp"
#include "fflab/report.hpp"

using namespace fflab;

int main() {
  UniverseConfig cfg;
  cfg.B = 2;
  cfg.K = 1;
  cfg.mode = UniverseMode::B;
  cfg.extra_divisors = {Natural(288)};
  UniverseParams P = search_universe(cfg);

  std::printf("universe: p = %s  l = %s  i = %s  mu = %s  iota = %s  epsilon = %s\n",
              P.p.get_str().c_str(), P.l.get_str().c_str(), P.i.get_str().c_str(),
              P.mu.get_str().c_str(), P.iota.get_str().c_str(),
              P.epsilon.residue.get_str().c_str());

  std::printf("\nexact quadratic sums (brute force vs nu * omega):\n");
  for (const Natural& nu : admissible_nus(P)) {
    GaussSumReport g = gauss_sum_check(P, nu);
    std::printf("  nu = %2s : sum = %3s  closed = %3s  %s  place image = %s\n", nu.get_str().c_str(),
                g.exact_sum.residue.get_str().c_str(), g.closed_form.residue.get_str().c_str(),
                g.match ? "match" : "MISMATCH", format_complex(g.place_image.value).c_str());
  }

  std::printf("\nscaled sums (normalized by 1/mu, target 1/sqrt(a) up to phase):\n");
  struct {
    const char* label;
    Rational a;
    GaussScale scale;
  } cases[] = {{"a = 1,   u", Rational(1), GaussScale::U_SCALE},
               {"a = 1,   v", Rational(1), GaussScale::V_SCALE},
               {"a = 1/4, v", Rational(1, 4), GaussScale::V_SCALE},
               {"a = 4,   u", Rational(4), GaussScale::U_SCALE}};
  for (const auto& c : cases) {
    ScaledGaussReport r = scaled_gauss_sum(P, c.a, c.scale);
    std::printf("  %s : nu = %2s  image = %s  (1/sqrt(a) = %s)\n", c.label, r.nu.get_str().c_str(),
                format_complex(r.place_image.value).c_str(), format_complex(r.inv_sqrt_a).c_str());
  }

  std::printf("\nsame amplitude through the rotation: u and v images differ by e^{i pi/4}\n");
  return 0;
}
