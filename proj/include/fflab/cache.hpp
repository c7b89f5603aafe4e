#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fflab/universe.hpp"

// Append-only JSON-lines cache of solved parameter tuples, keyed by the hash
// of the [universe] config block. A key is written at most once; repeat runs
// find the record and leave the file byte-identical. Every load re-validates
// the tuple from scratch, so a corrupted or hand-edited record fails loudly
// before any experiment trusts it.

namespace fflab {

inline nlohmann::ordered_json universe_to_record(const std::string& key, const UniverseParams& P) {
  nlohmann::ordered_json j;
  j["key"] = key;
  j["mode"] = to_string(P.mode);
  j["B"] = P.divisibility_bound;
  j["K"] = P.gap_exponent;
  j["p"] = P.p.get_str();
  j["l"] = P.l.get_str();
  j["i"] = P.i.get_str();
  j["mu"] = P.mu.get_str();
  j["iota"] = P.iota.get_str();
  j["epsilon"] = P.epsilon.residue.get_str();
  return j;
}

inline UniverseParams record_to_universe(const nlohmann::json& j) {
  UniverseParams P;
  P.mode = universe_mode_from_string(j.at("mode").get<std::string>());
  P.divisibility_bound = j.at("B").get<unsigned>();
  P.gap_exponent = j.at("K").get<unsigned>();
  P.p = parse_natural(j.at("p").get<std::string>());
  P.l = parse_natural(j.at("l").get<std::string>());
  P.i = parse_natural(j.at("i").get<std::string>());
  P.mu = parse_natural(j.at("mu").get<std::string>());
  P.iota = parse_natural(j.at("iota").get<std::string>());
  P.u = (P.p - 1) / P.i;
  P.v = P.p - 1;
  P.epsilon = ModElem(parse_natural(j.at("epsilon").get<std::string>()), P.p);
  validate_universe(P);
  return P;
}

// All records in file order. Malformed lines are an error, not a skip: the
// cache is an artifact of this tool and must stay machine-consistent.
inline std::vector<std::pair<std::string, nlohmann::json>> read_cache_records(const std::string& path) {
  std::vector<std::pair<std::string, nlohmann::json>> out;
  std::ifstream f(path);
  if (!f) return out;  // no cache yet
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("key"))
      throw InvalidInput("cache: bad record at " + path + ":" + std::to_string(lineno));
    out.emplace_back(j.at("key").get<std::string>(), std::move(j));
  }
  return out;
}

// Lookup by exact key, or by unique prefix (at least 4 hex chars) so the
// --universe flag stays typeable.
inline std::optional<UniverseParams> load_cached_universe(const std::string& path, const std::string& key) {
  if (key.size() < 4) throw InvalidInput("cache: universe key needs at least 4 characters");
  std::optional<nlohmann::json> hit;
  for (auto& [k, j] : read_cache_records(path)) {
    if (k == key || (k.size() > key.size() && k.compare(0, key.size(), key) == 0)) {
      if (hit && (*hit).at("key").get<std::string>() != k)
        throw InvalidInput("cache: key prefix '" + key + "' is ambiguous");
      hit = j;
    }
  }
  if (!hit) return std::nullopt;
  return record_to_universe(*hit);
}

// Returns true when the record was appended, false when an identical record
// was already present. A colliding key with different content is corruption.
inline bool store_universe(const std::string& path, const std::string& key, const UniverseParams& P) {
  nlohmann::ordered_json record = universe_to_record(key, P);
  for (auto& [k, j] : read_cache_records(path)) {
    if (k != key) continue;
    if (nlohmann::json(record) != j)
      throw InvalidInput("cache: key " + key + " already present with different content");
    return false;
  }
  std::ofstream f(path, std::ios::app);
  if (!f) throw InvalidInput("cache: cannot open " + path + " for append");
  f << record.dump() << '\n';
  return true;
}

}  // namespace fflab
