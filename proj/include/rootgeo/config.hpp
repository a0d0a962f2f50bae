#pragma once
// Flat key-value run configuration (INI-like, "key = value" lines, '#'
// comments) and the descriptor -> object builders used by the CLI.

#include <map>
#include <optional>
#include <string>

#include "rootgeo/autos.hpp"
#include "rootgeo/geometry.hpp"

namespace rootgeo {

struct RunConfig {
  std::map<std::string, std::string> kv;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text);

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string get(const std::string& key, const std::string& dflt = "") const;
  int64_t get_int(const std::string& key, int64_t dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
};

GeomKind parse_kind(const std::string& s);
std::shared_ptr<const Geometry> geometry_from_config(const RunConfig& c);
Automorphism automorphism_from_config(const RunConfig& c, std::shared_ptr<const Geometry> g);

Mat parse_matrix(const std::string& text, int q);  // rows split by ';', entries by spaces
Vec parse_vector(const std::string& text, int* len = nullptr);

}  // namespace rootgeo
