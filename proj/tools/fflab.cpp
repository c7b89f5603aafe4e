// Command-line front end: parameter search with caching, Gauss-sum
// verification, Riemann convergence studies, Wick-rotation checks, lattice
// statmech experiments, and a summary reader for previously produced output.
//
// Exit codes: 0 all checks pass, 1 check failure, 2 config error,
// 3 search/factorization found no solution. File outputs (cache JSONL,
// study CSV, statmech JSONL) are byte-identical across reruns of the same
// config; wall-clock timing goes to stderr so streams stay reproducible.

#include <chrono>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fflab/cache.hpp"
#include "fflab/config.hpp"
#include "fflab/gauss.hpp"
#include "fflab/report.hpp"
#include "fflab/riemann.hpp"
#include "fflab/statmech.hpp"
#include "fflab/universe.hpp"

namespace {

using namespace fflab;

constexpr double kPi = std::numbers::pi;

std::string cache_path(const std::string& out_dir) { return out_dir + "/universe_cache.jsonl"; }

UniverseConfig universe_config_from(const Config& cfg) {
  UniverseConfig uc;
  if (!cfg.sections.count("universe")) throw InvalidInput("config: missing [universe] section");
  uc.mode = universe_mode_from_string(cfg.get_or("universe", "mode", "B"));
  uc.B = static_cast<unsigned>(to_u64(parse_natural(cfg.get_or("universe", "B", "2"))));
  uc.K = static_cast<unsigned>(to_u64(parse_natural(cfg.get_or("universe", "K", "1"))));
  uc.p_min = parse_natural(cfg.get_or("universe", "p_min", "3"));
  uc.p_max = parse_natural(cfg.get_or("universe", "p_max", "100000"));
  if (cfg.has("universe", "iota")) uc.iota = config_natural(cfg, "universe", "iota");
  if (cfg.has("universe", "l")) uc.l_override = config_natural(cfg, "universe", "l");
  if (cfg.has("universe", "extra_divisors"))
    for (const auto& s : config_list(cfg, "universe", "extra_divisors")) uc.extra_divisors.push_back(parse_natural(s));
  return uc;
}

// Resolve the universe a command works in: an explicit --universe key looks
// up the cache only; otherwise the [universe] block is hashed, the cache is
// consulted, and a miss triggers the search (and a cache write).
UniverseParams resolve_universe(const Config& cfg, const std::string& out_dir, const std::string& universe_key,
                                std::ostream& log) {
  if (!universe_key.empty()) {
    auto hit = load_cached_universe(cache_path(out_dir), universe_key);
    if (!hit) throw InvalidInput("universe key '" + universe_key + "' not found in " + cache_path(out_dir));
    log << "universe " << universe_key << ": cache hit, p = " << hit->p.get_str() << "\n";
    return *hit;
  }
  std::string key = section_hash(cfg, "universe");
  auto hit = load_cached_universe(cache_path(out_dir), key);
  if (hit) {
    log << "universe " << key << ": cache hit, p = " << hit->p.get_str() << "\n";
    return *hit;
  }
  UniverseParams P = search_universe(universe_config_from(cfg));
  store_universe(cache_path(out_dir), key, P);
  log << "universe " << key << ": searched, p = " << P.p.get_str() << "\n";
  return P;
}

std::string tuple_line(const UniverseParams& P) {
  std::ostringstream os;
  os << "p=" << P.p.get_str() << " l=" << P.l.get_str() << " i=" << P.i.get_str() << " mu=" << P.mu.get_str()
     << " iota=" << P.iota.get_str() << " u=" << P.u.get_str() << " v=" << P.v.get_str()
     << " epsilon=" << P.epsilon.residue.get_str();
  return os.str();
}

int finish(const RunReport& report) {
  print_report(std::cout, report);
  std::cout << (report.all_pass() ? "all checks passed" : "CHECK FAILURE") << "\n";
  return report.all_pass() ? 0 : 1;
}

int cmd_search(const Config& cfg, const std::string& out_dir) {
  std::string key = section_hash(cfg, "universe");
  auto hit = load_cached_universe(cache_path(out_dir), key);
  if (hit) {
    std::cout << "universe " << key << " (cached): " << tuple_line(*hit) << "\n";
    return 0;
  }
  UniverseParams P = search_universe(universe_config_from(cfg));
  store_universe(cache_path(out_dir), key, P);
  std::cout << "universe " << key << " (new): " << tuple_line(P) << "\n";
  return 0;
}

int cmd_verify_gauss(const Config& cfg, const std::string& out_dir, const std::string& universe_key,
                     ExecPolicy policy) {
  UniverseParams P = resolve_universe(cfg, out_dir, universe_key, std::cout);
  RunReport report;
  for (const Natural& nu : admissible_nus(P)) {
    GaussSumReport g = gauss_sum_check(P, nu, policy);
    std::ostringstream os;
    os << "sum = " << g.exact_sum.residue.get_str() << ", nu*omega = " << g.closed_form.residue.get_str()
       << " (omega = " << g.omega.residue.get_str() << ", xi = " << g.xi.residue.get_str() << ")";
    report.add("gauss nu=" + nu.get_str(), g.match, os.str());
    report.add("gauss periodicity nu=" + nu.get_str(), periodicity_window_check(P, nu, policy),
               "window shifts leave the complete sum unchanged");
  }
  return finish(report);
}

int cmd_riemann(const Config& cfg, const std::string& out_dir, const std::string& universe_key, ExecPolicy policy) {
  if (!cfg.sections.count("riemann")) throw InvalidInput("config: missing [riemann] section");
  Rational a = parse_rational(cfg.get_or("riemann", "a", "1"));
  std::string scale_s = cfg.get_or("riemann", "scale", "U");
  GaussScale scale = (scale_s == "V" || scale_s == "V_SCALE") ? GaussScale::V_SCALE : GaussScale::U_SCALE;
  unsigned long l = to_u64(parse_natural(cfg.get_or("riemann", "l", "3")));

  std::string csv_file = out_dir + "/riemann_study.csv";
  std::ofstream csv(csv_file);
  if (!csv) throw InvalidInput("cannot write " + csv_file);

  if (l == 0) {  // empty window: emit the header so downstream readers see a table
    csv << "mu,l,re_sum,im_sum,re_oracle,im_oracle,abs_error\n";
    std::cout << "empty window (l = 0), wrote header-only " << csv_file << "\n";
    return 0;
  }

  std::vector<unsigned long> mu_list;
  if (cfg.has("riemann", "mu_list"))
    for (const auto& s : config_list(cfg, "riemann", "mu_list")) mu_list.push_back(to_u64(parse_natural(s)));
  else
    mu_list = {100, 1000, 10000};

  RunReport report;
  auto rows = convergence_study(a, scale, l, mu_list, policy);
  write_convergence_csv(csv, l, rows);
  csv.close();
  std::cout << "wrote " << csv_file << "\n";

  bool shrinking = true;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k)
    if (rows[k + 1].abs_error > 2.0 * rows[k].abs_error) shrinking = false;
  std::ostringstream errs;
  for (const auto& r : rows) errs << " " << format_g17(r.abs_error);
  report.add("errors non-increasing (factor-2 slack)", shrinking, "abs_error per mu:" + errs.str());

  // Finite-field tail comparison at the default windows, when the scaled sum
  // is admissible in this universe.
  UniverseParams P = resolve_universe(cfg, out_dir, universe_key, std::cout);
  try {
    TailReport tail = tail_cancellation_report(P, a, scale, policy);
    double bound = (scale == GaussScale::U_SCALE) ? 1e-2 : 1e-1;
    std::ostringstream os;
    os << "|image - sum| = " << format_g17(tail.tail_estimate) << " at l=" << tail.l_cut << " mu=" << tail.mesh_mu
       << (tail.conjugated ? " (image conjugated to summand orientation)" : "");
    report.add("tail cancellation <= " + format_g17(bound), tail.tail_estimate <= bound, os.str());
  } catch (const InvalidInput& e) {
    std::cout << "tail comparison skipped: " << e.what() << "\n";
  }
  return finish(report);
}

int cmd_wick(const Config& cfg, const std::string& out_dir, const std::string& universe_key, ExecPolicy policy) {
  Rational a = cfg.sections.count("wick") ? parse_rational(cfg.get_or("wick", "a", "1")) : Rational(1);
  unsigned long l = cfg.sections.count("wick") ? to_u64(parse_natural(cfg.get_or("wick", "l", "3"))) : 3;
  unsigned long mu = cfg.sections.count("wick") ? to_u64(parse_natural(cfg.get_or("wick", "mu", "100"))) : 100;

  RunReport report;
  double residual = wick_rotation_check(a, l, mu);
  report.add("rotation identity residual <= 1e-12", residual <= 1e-12,
             "max |e^{i log term_U} - term_V| = " + format_g17(residual) + " over |n| <= " + std::to_string(l * mu));

  // Side-by-side finite-field images of the same scale change.
  UniverseParams P = resolve_universe(cfg, out_dir, universe_key, std::cout);
  double inv_sqrt_a = 1.0 / std::sqrt(to_double(a));
  try {
    ScaledGaussReport gu = scaled_gauss_sum(P, a, GaussScale::U_SCALE, policy);
    report.add("u-scale image = 1/sqrt(a)", std::abs(gu.place_image.value - std::complex<double>(inv_sqrt_a, 0)) <= 1e-12,
               "image = " + format_complex(gu.place_image.value));
    ScaledGaussReport gv = scaled_gauss_sum(P, a, GaussScale::V_SCALE, policy);
    bool ok = std::abs(std::abs(gv.place_image.value) - inv_sqrt_a) <= 1e-12 &&
              std::abs(std::arg(gv.place_image.value) - kPi / 4) <= 1e-12;
    report.add("v-scale image = e^{i pi/4}/sqrt(a)", ok, "image = " + format_complex(gv.place_image.value));
  } catch (const InvalidInput& e) {
    std::cout << "scaled-sum comparison skipped: " << e.what() << "\n";
  }
  return finish(report);
}

nlohmann::ordered_json instance_record(const ModelSpec& m) {
  PartitionPoly poly = grand_partition(m);
  nlohmann::ordered_json rec;
  rec["record"] = "instance";
  rec["model"] = model_to_json(m);
  rec["poly"] = poly_to_json(poly);
  Natural p1 = partition_sum_at_one(poly);
  rec["P1"] = p1.get_str();
  std::vector<Natural> primes = crit_prime_search(poly);
  rec["primes"] = primes_to_json(primes);
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const Natural& p : primes) {
    nlohmann::ordered_json c;
    c["p"] = p.get_str();
    c["divides_P1"] = divides(p, p1);
    if (p <= 10000000) {
      std::vector<Natural> roots = crit_mod_p(poly, p);
      bool has_one = false;
      for (const auto& r : roots) has_one = has_one || (r == 1);
      c["root_at_one"] = has_one;
      c["root_count"] = roots.size();
    } else {
      c["root_at_one"] = nullptr;  // beyond the scan bound
    }
    BoundsReport b = bounds_report(m.N, p);
    c["upper_ok"] = b.upper_ok;
    c["lower_ok"] = b.lower_ok;
    c["bounds_consistent"] = b.consistent;
    checks.push_back(std::move(c));
  }
  rec["prime_checks"] = std::move(checks);
  return rec;
}

int cmd_leeyang(const Config& cfg, const std::string& out_dir) {
  if (!cfg.sections.count("leeyang")) throw InvalidInput("config: missing [leeyang] section");
  ModelSpec inst;
  std::string kind = cfg.get_or("leeyang", "kind", "LATTICE_GAS_1D");
  if (kind == "FREE") inst.kind = ModelKind::FREE;
  else if (kind == "LATTICE_GAS_1D") inst.kind = ModelKind::LATTICE_GAS_1D;
  else if (kind == "ISING_1D") inst.kind = ModelKind::ISING_1D;
  else throw InvalidInput("config: unknown model kind '" + kind + "'");
  inst.N = static_cast<unsigned>(to_u64(parse_natural(cfg.get_or("leeyang", "N", "3"))));
  inst.coupling = parse_rational(cfg.get_or("leeyang", "coupling", "2"));
  inst.boundary = cfg.get_or("leeyang", "boundary", "OPEN") == "PERIODIC" ? Boundary::PERIODIC : Boundary::OPEN;

  unsigned n_min = static_cast<unsigned>(to_u64(parse_natural(cfg.get_or("leeyang", "sweep_n_min", "2"))));
  unsigned n_max = static_cast<unsigned>(to_u64(parse_natural(cfg.get_or("leeyang", "sweep_n_max", "12"))));
  std::vector<Rational> couplings;
  if (cfg.has("leeyang", "couplings"))
    for (const auto& s : config_list(cfg, "leeyang", "couplings")) couplings.push_back(parse_rational(s));
  else
    couplings = {Rational(2), Rational(3), Rational(5)};

  std::string jsonl_file = out_dir + "/leeyang.jsonl";
  std::ofstream jsonl(jsonl_file);
  if (!jsonl) throw InvalidInput("cannot write " + jsonl_file);

  RunReport report;

  nlohmann::ordered_json rec = instance_record(inst);
  jsonl << rec.dump() << '\n';
  report.add("P(1) = " + rec["P1"].get<std::string>() + " has prime divisors", !rec["primes"].empty(),
             "primes: " + rec["primes"].dump());
  for (const auto& c : rec["prime_checks"]) {
    std::string p = c["p"].get<std::string>();
    bool ok = c["divides_P1"].get<bool>() && (!c["root_at_one"].is_boolean() || c["root_at_one"].get<bool>()) &&
              c["bounds_consistent"].get<bool>();
    report.add("criterion at p=" + p, ok,
               "divides=" + c["divides_P1"].dump() + " root_at_one=" + c["root_at_one"].dump() +
                   " bounds_consistent=" + c["bounds_consistent"].dump());
  }

  // Ferromagnetic ring sweep in the rescaled activity: every zero must sit
  // on the unit circle.
  for (unsigned N = n_min; N <= n_max; ++N) {
    for (const Rational& c : couplings) {
      ModelSpec m{ModelKind::LATTICE_GAS_1D, N, c, Boundary::PERIODIC};
      PartitionPoly norm = activity_normalized(m);
      ZeroSet zs = partition_zeros(norm);
      CircleCheck cc = circle_check(zs, 1e-9);
      nlohmann::ordered_json srec;
      srec["record"] = "circle_sweep";
      srec["model"] = model_to_json(m);
      srec["normalized_poly"] = poly_to_json(norm);
      srec["zeros"] = zeros_to_json(zs);
      srec["max_deviation"] = format_g17(cc.max_deviation);
      srec["min_distance_to_one"] = format_g17(cc.min_distance_to_one);
      srec["on_circle"] = cc.on_circle;
      jsonl << srec.dump() << '\n';
      report.add("circle N=" + std::to_string(N) + " c=" + c.get_str(), cc.on_circle,
                 "max | |z|-1 | = " + format_g17(cc.max_deviation));
    }
  }
  jsonl.close();
  std::cout << "wrote " << jsonl_file << "\n";
  return finish(report);
}

int cmd_report(const std::string& out_dir) {
  RunReport report;
  bool any = false;

  for (auto& [key, j] : read_cache_records(cache_path(out_dir))) {
    any = true;
    try {
      UniverseParams P = record_to_universe(j);
      report.add("cached universe " + key, true, tuple_line(P));
    } catch (const InvalidInput& e) {
      report.add("cached universe " + key, false, e.what());
    }
  }

  std::ifstream csv(out_dir + "/riemann_study.csv");
  if (csv) {
    any = true;
    std::string line;
    std::getline(csv, line);  // header
    std::vector<double> errors;
    std::vector<std::string> mus;
    while (std::getline(csv, line)) {
      std::stringstream ss(line);
      std::string field;
      std::vector<std::string> fields;
      while (std::getline(ss, field, ',')) fields.push_back(field);
      if (fields.size() != 7) {
        report.add("riemann_study.csv", false, "malformed row: " + line);
        break;
      }
      mus.push_back(fields[0]);
      errors.push_back(std::stod(fields[6]));
    }
    bool shrinking = true;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k)
      if (errors[k + 1] > 2.0 * errors[k]) shrinking = false;
    report.add("riemann study (" + std::to_string(errors.size()) + " rows)", shrinking,
               errors.empty() ? "empty table" : "errors non-increasing within factor 2");
  }

  std::ifstream jsonl(out_dir + "/leeyang.jsonl");
  if (jsonl) {
    any = true;
    std::string line;
    std::size_t n = 0, circles = 0, circle_pass = 0;
    while (std::getline(jsonl, line)) {
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        report.add("leeyang.jsonl", false, "malformed record on line " + std::to_string(n + 1));
        break;
      }
      ++n;
      if (j.value("record", "") == "circle_sweep") {
        ++circles;
        if (j.value("on_circle", false)) ++circle_pass;
      }
    }
    report.add("statmech records (" + std::to_string(n) + ")", circles == circle_pass,
               std::to_string(circle_pass) + "/" + std::to_string(circles) + " circle sweeps on the unit circle");
  }

  if (!any) {
    std::cout << "nothing to report in " << out_dir << "\n";
    return 0;
  }
  return finish(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-field laboratory: parameter search, exact Gauss sums, Riemann studies, lattice models"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", universe_key;
  unsigned workers = 1;
  app.add_option("--config", config_path, "config file (key=value with [sections])");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--workers", workers, "worker threads for partitionable loops")->capture_default_str();
  app.add_option("--universe", universe_key, "cached universe key (hex, prefix ok)");

  auto* search = app.add_subcommand("search", "find and cache an admissible parameter tuple");
  auto* verify_gauss = app.add_subcommand("verify-gauss", "brute force vs closed form for all admissible sum lengths");
  auto* riemann = app.add_subcommand("riemann", "convergence study and finite-field tail comparison");
  auto* wick = app.add_subcommand("wick", "rotation identity sweep plus both-scale image comparison");
  auto* leeyang = app.add_subcommand("leeyang", "partition polynomials, zeros, circle and mod-p criteria");
  auto* report_cmd = app.add_subcommand("report", "summarize cached output in the out directory");
  for (auto* sub : {search, verify_gauss, riemann, wick, leeyang, report_cmd})
    sub->fallthrough();  // accept the global flags after the subcommand name too

  CLI11_PARSE(app, argc, argv);

  auto started = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    std::filesystem::create_directories(out_dir);
    Config cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    else if (!report_cmd->parsed()) throw InvalidInput("--config is required for this command");
    ExecPolicy policy{workers == 0 ? 1u : workers};

    if (search->parsed()) rc = cmd_search(cfg, out_dir);
    else if (verify_gauss->parsed()) rc = cmd_verify_gauss(cfg, out_dir, universe_key, policy);
    else if (riemann->parsed()) rc = cmd_riemann(cfg, out_dir, universe_key, policy);
    else if (wick->parsed()) rc = cmd_wick(cfg, out_dir, universe_key, policy);
    else if (leeyang->parsed()) rc = cmd_leeyang(cfg, out_dir);
    else if (report_cmd->parsed()) rc = cmd_report(out_dir);
  } catch (const NoSolution& e) {
    std::cerr << "no solution: " << e.what() << "\n";
    rc = 3;
  } catch (const InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    rc = 2;
  } catch (const ResourceLimit& e) {
    std::cerr << "config error (resource limit): " << e.what() << "\n";
    rc = 2;
  } catch (const std::exception& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    rc = 1;
  }
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::fprintf(stderr, "elapsed: %.3fs\n", elapsed);
  return rc;
}
