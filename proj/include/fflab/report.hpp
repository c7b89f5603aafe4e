#pragma once

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fflab/riemann.hpp"
#include "fflab/statmech.hpp"

// Run reporting: a flat list of named checks with operand detail, printed as
// one "[PASS]/[FAIL] name: detail" line each, plus JSON builders for the
// statmech records the leeyang command emits. Failures always carry the
// operands that violated the invariant; a bare "failed" is useless in a log.

namespace fflab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::vector<CheckResult> checks;

  void add(const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline void print_report(std::ostream& os, const RunReport& r) {
  for (const auto& c : r.checks) os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
}

inline std::string format_complex(std::complex<double> z) {
  return format_g17(z.real()) + (z.imag() < 0 ? "" : "+") + format_g17(z.imag()) + "i";
}

// --- statmech JSON records -----------------------------------------------------

inline nlohmann::ordered_json model_to_json(const ModelSpec& m) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(m.kind);
  j["N"] = m.N;
  j["coupling"] = m.coupling.get_str();
  j["boundary"] = to_string(m.boundary);
  return j;
}

inline nlohmann::ordered_json poly_to_json(const PartitionPoly& p) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
  for (const auto& c : p.coeffs) coeffs.push_back(c.get_str());
  j["coeffs"] = std::move(coeffs);
  j["cleared_denominator"] = p.cleared_denominator.get_str();
  return j;
}

inline nlohmann::ordered_json zeros_to_json(const ZeroSet& zs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& z : zs.zeros) {
    nlohmann::ordered_json pair = nlohmann::ordered_json::array();
    pair.push_back(format_g17(z.real()));
    pair.push_back(format_g17(z.imag()));
    arr.push_back(std::move(pair));
  }
  return arr;
}

inline nlohmann::ordered_json primes_to_json(const std::vector<Natural>& primes) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : primes) arr.push_back(p.get_str());
  return arr;
}

}  // namespace fflab
