#include "rootgeo/config.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rootgeo {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected 'key = value', got: " + line);
    c.kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

std::string RunConfig::get(const std::string& key, const std::string& dflt) const {
  auto it = kv.find(key);
  return it == kv.end() ? dflt : it->second;
}

int64_t RunConfig::get_int(const std::string& key, int64_t dflt) const {
  auto it = kv.find(key);
  return it == kv.end() ? dflt : std::stoll(it->second);
}

bool RunConfig::get_bool(const std::string& key, bool dflt) const {
  auto it = kv.find(key);
  if (it == kv.end()) return dflt;
  return it->second == "1" || it->second == "true" || it->second == "yes";
}

GeomKind parse_kind(const std::string& s) {
  if (s == "projective" || s == "pg") return GeomKind::Projective;
  if (s == "hyperbolic" || s == "hyperbolic_quadric") return GeomKind::HyperbolicQuadric;
  if (s == "parabolic" || s == "parabolic_quadric") return GeomKind::ParabolicQuadric;
  throw std::invalid_argument("config: unknown geometry kind '" + s + "'");
}

std::shared_ptr<const Geometry> geometry_from_config(const RunConfig& c) {
  GeomKind kind = parse_kind(c.get("kind", "projective"));
  int n = (int)c.get_int("n", 3);
  int q = (int)c.get_int("q", 2);
  int q_cap = (int)c.get_int("cap_q", DEFAULT_Q_CAP);
  return build_geometry(kind, n, q, q_cap);
}

Mat parse_matrix(const std::string& text, int q) {
  std::vector<std::vector<int>> rows;
  std::stringstream ss(text);
  std::string rowtext;
  while (std::getline(ss, rowtext, ';')) {
    std::istringstream rs(rowtext);
    std::vector<int> row;
    int x;
    while (rs >> x) row.push_back(((x % q) + q) % q);
    if (!row.empty()) rows.push_back(row);
  }
  if (rows.empty()) throw std::invalid_argument("config: empty matrix");
  Mat m = Mat::zero((int)rows.size(), (int)rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::invalid_argument("config: ragged matrix");
    for (size_t j = 0; j < rows[i].size(); ++j) m.at((int)i, (int)j) = (uint8_t)rows[i][j];
  }
  return m;
}

Vec parse_vector(const std::string& text, int* len) {
  Vec v{};
  std::istringstream in(text);
  int x, i = 0;
  while (in >> x && i < MAT_MAX_C) v[i++] = (uint8_t)x;
  if (len) *len = i;
  return v;
}

Automorphism automorphism_from_config(const RunConfig& c, std::shared_ptr<const Geometry> g) {
  std::string kind = c.get("auto.kind", "identity");
  if (kind == "identity") return identity_automorphism(g);
  if (kind == "symplectic_polarity") return symplectic_polarity(g);
  if (kind == "spread_collineation") return spread_collineation(g);
  if (kind == "baer_collineation") return baer_collineation(g);
  if (kind == "central_elation_quadric") return central_elation_quadric(g);
  if (kind == "quadric_spread_collineation") return quadric_spread_collineation(g);
  if (kind == "quadric_reflection") {
    if (c.has("auto.vector")) return quadric_reflection(g, parse_vector(c.get("auto.vector")));
    return quadric_reflection_default(g);
  }
  if (kind == "central_collineation") {
    const GF& F = *g->F;
    Mat cm = Mat::zero(1, g->vdim);
    Vec cv = parse_vector(c.get("auto.center"));
    std::memcpy(cm.row(0), cv.data(), g->vdim);
    rref(F, cm);
    Mat am = parse_matrix(c.get("auto.axis"), g->field.q);  // basis rows of the hyperplane
    rref(F, am);
    return central_collineation(g, g->id_of(cm), g->id_of(am),
                                (uint8_t)c.get_int("auto.data", 1));
  }
  if (kind == "random") return random_automorphism(g, (uint64_t)c.get_int("auto.seed", 1));
  if (kind == "matrix") {
    Mat m = parse_matrix(c.get("auto.matrix"), g->field.q);
    int frob = (int)c.get_int("auto.frobenius", 0);
    if (c.get_bool("auto.duality", false)) {
      Mat corr = c.has("auto.corr") ? parse_matrix(c.get("auto.corr"), g->field.q)
                                    : Mat::identity(g->vdim);
      return make_duality(g, m, corr, frob);
    }
    return make_collineation(g, m, frob);
  }
  throw std::invalid_argument("config: unknown automorphism kind '" + kind + "'");
}

}  // namespace rootgeo
