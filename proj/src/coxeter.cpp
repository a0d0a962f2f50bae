#include "rootgeo/coxeter.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rootgeo {

namespace {

struct TypeSpec {
  CoxFamily family;
  int rank;
};

TypeSpec parse_label(const std::string& label) {
  if (label.size() < 2) throw std::invalid_argument("coxeter: bad type label " + label);
  char f = label[0];
  int n = std::stoi(label.substr(1));
  switch (f) {
    case 'A':
      if (n < 1 || n > 7)
        throw std::invalid_argument("coxeter: A" + std::to_string(n) +
                                    " unsupported (supported: A1..A7)");
      return {CoxFamily::A, n};
    case 'B':
      if (n < 2 || n > 6)
        throw std::invalid_argument("coxeter: B" + std::to_string(n) +
                                    " unsupported (supported: B2..B6)");
      return {CoxFamily::B, n};
    case 'D':
      if (n < 4 || n > 6)
        throw std::invalid_argument("coxeter: D" + std::to_string(n) +
                                    " unsupported (supported: D4..D6; use A3 for D3)");
      return {CoxFamily::D, n};
    case 'E':
      if (n < 6 || n > 8)
        throw std::invalid_argument("coxeter: E" + std::to_string(n) +
                                    " unsupported (supported: E6, E7, E8)");
      return {CoxFamily::E, n};
    default:
      throw std::invalid_argument("coxeter: unknown family in " + label);
  }
}

std::vector<std::pair<int, int>> edges_of(CoxFamily f, int n) {
  std::vector<std::pair<int, int>> e;
  switch (f) {
    case CoxFamily::A:
    case CoxFamily::B:
      for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
      break;
    case CoxFamily::D:
      for (int i = 0; i + 2 < n; ++i) e.push_back({i, i + 1});
      e.push_back({n - 3, n - 1});
      break;
    case CoxFamily::E:
      // Bourbaki: 1-3-4-5-6(-7(-8)), 2 attached to 4.  0-based below.
      e = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 3}};
      if (n >= 7) e.push_back({5, 6});
      if (n >= 8) e.push_back({6, 7});
      break;
  }
  return e;
}

uint64_t factorial(int n) {
  uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

size_t expected_pos_roots(CoxFamily f, int n) {
  switch (f) {
    case CoxFamily::A: return (size_t)n * (n + 1) / 2;
    case CoxFamily::B: return (size_t)n * n;
    case CoxFamily::D: return (size_t)n * (n - 1);
    case CoxFamily::E: return n == 6 ? 36 : n == 7 ? 63 : 120;
  }
  return 0;
}

WMat wmat_identity(int rank) {
  if (rank < 1 || rank > COX_MAX_RANK) throw std::logic_error("coxeter: rank out of range");
  WMat m;
  for (int i = 0; i < rank; ++i) m.at(i, i) = 1;
  return m;
}

WMat wmat_mul(const WMat& A, const WMat& B, int rank) {
  WMat C;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      int acc = 0;
      for (int k = 0; k < rank; ++k) acc += (int)A.at(i, k) * B.at(k, j);
      if (acc < -127 || acc > 127) throw std::overflow_error("coxeter: matrix entry overflow");
      C.at(i, j) = (int8_t)acc;
    }
  return C;
}

std::array<int, COX_MAX_RANK> wmat_apply(const WMat& M, const std::array<int8_t, COX_MAX_RANK>& x,
                                         int rank) {
  std::array<int, COX_MAX_RANK> y{};
  for (int i = 0; i < rank; ++i) {
    int acc = 0;
    for (int j = 0; j < rank; ++j) acc += (int)M.at(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

// all roots have uniformly signed coordinates in the simple basis
bool is_negative_image(const std::array<int, COX_MAX_RANK>& y, int rank) {
  for (int i = 0; i < rank; ++i) {
    if (y[i] > 0) return false;
    if (y[i] < 0) return true;
  }
  throw std::logic_error("coxeter: zero image of a root");
}

struct UnionFind {
  std::vector<uint32_t> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  uint32_t find(uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

DiagramAutomorphism DiagramAutomorphism::compose(const DiagramAutomorphism& o) const {
  DiagramAutomorphism r;
  r.rank = rank;
  for (int i = 0; i < rank; ++i) r.perm[i] = perm[o.perm[i]];
  return r;
}

std::string DiagramAutomorphism::str() const {
  if (is_identity()) return "id";
  std::string s;
  for (int i = 0; i < rank; ++i) {
    if (perm[i] == i) continue;
    if (!s.empty()) s += " ";
    s += std::to_string(i + 1) + ">" + std::to_string(perm[i] + 1);
  }
  return s;
}

WeylElement CoxeterSystem::identity() const { return {wmat_identity(rank), this}; }

WeylElement CoxeterSystem::gen(int i) const { return {gens.at(i), this}; }

std::shared_ptr<const CoxeterSystem> build_coxeter(const std::string& type_label, bool allow_e8) {
  auto [family, n] = parse_label(type_label);
  if (family == CoxFamily::E && n == 8 && !allow_e8)
    throw std::invalid_argument(
        "coxeter: E8 is gated behind an explicit opt-in flag (|W| = 696729600)");

  auto sys = std::make_shared<CoxeterSystem>();
  sys->family = family;
  sys->rank = n;
  sys->label = type_label;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sys->cox[i][j] = (i == j) ? 1 : 2;
  for (auto [i, j] : edges_of(family, n)) sys->cox[i][j] = sys->cox[j][i] = 3;
  if (family == CoxFamily::B) sys->cox[n - 2][n - 1] = sys->cox[n - 1][n - 2] = 4;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j)
        sys->cartan[i][j] = 2;
      else if (sys->cox[i][j] == 3)
        sys->cartan[i][j] = -1;
      else
        sys->cartan[i][j] = 0;
    }
  if (family == CoxFamily::B) {
    // node n is the short root: <alpha_{n-1}^vee, alpha_n> = -1, <alpha_n^vee, alpha_{n-1}> = -2
    sys->cartan[n - 2][n - 1] = -1;
    sys->cartan[n - 1][n - 2] = -2;
  }

  // generator matrices: s_i(alpha_j) = alpha_j - cartan[i][j] alpha_i
  sys->gens.resize(n);
  for (int i = 0; i < n; ++i) {
    WMat m = wmat_identity(n);
    for (int j = 0; j < n; ++j) m.at(i, j) = (int8_t)((j == i ? 1 : 0) - sys->cartan[i][j]);
    sys->gens[i] = m;
  }

  // positive roots by closure from the simple ones
  {
    std::vector<std::array<int8_t, COX_MAX_RANK>> all;
    std::vector<std::string> seen;
    auto try_add = [&](const std::array<int8_t, COX_MAX_RANK>& r) {
      std::string k((const char*)r.data(), n);
      if (std::find(seen.begin(), seen.end(), k) != seen.end()) return false;
      seen.push_back(k);
      all.push_back(r);
      return true;
    };
    for (int i = 0; i < n; ++i) {
      std::array<int8_t, COX_MAX_RANK> r{};
      r[i] = 1;
      try_add(r);
    }
    for (size_t head = 0; head < all.size(); ++head) {
      auto cur = all[head];
      for (int i = 0; i < n; ++i) {
        auto y = wmat_apply(sys->gens[i], cur, n);
        std::array<int8_t, COX_MAX_RANK> r{};
        for (int j = 0; j < n; ++j) {
          if (y[j] < -127 || y[j] > 127) throw std::overflow_error("coxeter: root overflow");
          r[j] = (int8_t)y[j];
        }
        try_add(r);
      }
    }
    for (auto& r : all) {
      bool pos = false, neg = false;
      for (int j = 0; j < n; ++j) {
        if (r[j] > 0) pos = true;
        if (r[j] < 0) neg = true;
      }
      if (pos && neg) throw std::logic_error("coxeter: mixed-sign root");
      if (pos) sys->pos_roots.push_back(r);
    }
    if (sys->pos_roots.size() != expected_pos_roots(family, n))
      throw std::logic_error("coxeter: positive root count mismatch for " + type_label);
  }

  // diagram automorphisms: all node permutations preserving the Coxeter matrix
  {
    std::array<uint8_t, COX_MAX_RANK> p{};
    std::iota(p.begin(), p.begin() + n, 0);
    std::vector<DiagramAutomorphism> autos;
    do {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        for (int j = 0; j < n && ok; ++j)
          if (sys->cox[p[i]][p[j]] != sys->cox[i][j]) ok = false;
      if (ok) {
        DiagramAutomorphism d;
        d.rank = n;
        for (int i = 0; i < n; ++i) d.perm[i] = p[i];
        autos.push_back(d);
      }
    } while (std::next_permutation(p.begin(), p.begin() + n));
    std::sort(autos.begin(), autos.end(), [n](const auto& a, const auto& b) {
      for (int i = 0; i < n; ++i)
        if (a.perm[i] != b.perm[i]) return a.perm[i] < b.perm[i];
      return false;
    });
    sys->diagram_autos = autos;
  }

  switch (family) {
    case CoxFamily::A: sys->order = factorial(n + 1); break;
    case CoxFamily::B: sys->order = factorial(n) << n; break;
    case CoxFamily::D: sys->order = factorial(n) << (n - 1); break;
    case CoxFamily::E:
      sys->order = (n == 6) ? 51840ull : (n == 7) ? 2903040ull : 696729600ull;
      break;
  }
  return sys;
}

WeylElement multiply(const WeylElement& w, const WeylElement& v) {
  if (w.sys != v.sys) throw std::invalid_argument("coxeter: elements of different systems");
  return {wmat_mul(w.mat, v.mat, w.sys->rank), w.sys};
}

WeylElement inverse(const WeylElement& w) {
  // finite order: the reflection matrices have small order, but inverting
  // directly via the reduced word is simplest and cheap
  auto word = reduced_word(w);
  WeylElement r = w.sys->identity();
  for (auto it = word.rbegin(); it != word.rend(); ++it) r = multiply(r, w.sys->gen(*it));
  return r;
}

int length(const WeylElement& w) {
  int inv = 0;
  for (const auto& root : w.sys->pos_roots) {
    auto y = wmat_apply(w.mat, root, w.sys->rank);
    if (is_negative_image(y, w.sys->rank)) ++inv;
  }
  return inv;
}

bool is_identity(const WeylElement& w) { return w.mat == wmat_identity(w.sys->rank); }

WeylElement longest_element(const CoxeterSystem& sys) {
  WeylElement w = sys.identity();
  int len = 0;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int i = 0; i < sys.rank; ++i) {
      WeylElement ws = multiply(w, sys.gen(i));
      int l = length(ws);
      if (l > len) {
        w = ws;
        len = l;
        grew = true;
        break;
      }
    }
  }
  if ((size_t)len != sys.pos_roots.size())
    throw std::logic_error("coxeter: longest element length mismatch");
  return w;
}

DiagramAutomorphism opposition_involution(const CoxeterSystem& sys) {
  WeylElement w0 = longest_element(sys);
  DiagramAutomorphism s0;
  s0.rank = sys.rank;
  for (int i = 0; i < sys.rank; ++i) {
    WMat m = wmat_mul(wmat_mul(w0.mat, sys.gens[i], sys.rank), w0.mat, sys.rank);
    int found = -1;
    for (int j = 0; j < sys.rank; ++j)
      if (m == sys.gens[j]) found = j;
    if (found < 0) throw std::logic_error("coxeter: w0 conjugation is not a diagram map");
    s0.perm[i] = (uint8_t)found;
  }
  return s0;
}

WeylElement apply_diagram(const WeylElement& w, const DiagramAutomorphism& sigma) {
  int n = w.sys->rank;
  if (n < 1 || n > COX_MAX_RANK) throw std::logic_error("coxeter: rank out of range");
  if (sigma.rank != n) throw std::invalid_argument("coxeter: diagram map of wrong rank");
  WMat P{}, Pt{};
  for (int i = 0; i < n; ++i) {
    if (sigma.perm[i] >= n) throw std::invalid_argument("coxeter: diagram map out of range");
    P.at(sigma.perm[i], i) = 1;
    Pt.at(i, sigma.perm[i]) = 1;
  }
  return {wmat_mul(wmat_mul(P, w.mat, n), Pt, n), w.sys};
}

std::vector<int> reduced_word(const WeylElement& w) {
  std::vector<int> word;
  WeylElement cur = w;
  int len = length(cur);
  while (len > 0) {
    bool found = false;
    for (int i = 0; i < w.sys->rank; ++i) {
      WeylElement sw = multiply(w.sys->gen(i), cur);
      int l = length(sw);
      if (l < len) {
        word.push_back(i);
        cur = sw;
        len = l;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("coxeter: no descent on nontrivial element");
  }
  return word;
}

std::string word_str(const WeylElement& w) {
  auto word = reduced_word(w);
  std::string s;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) s += " ";
    s += "s" + std::to_string(word[i] + 1);
  }
  return s;
}

WeylElement parse_word(const CoxeterSystem& sys, const std::string& s) {
  WeylElement w = sys.identity();
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == 's') tok = tok.substr(1);
    int i = std::stoi(tok) - 1;
    if (i < 0 || i >= sys.rank) throw std::invalid_argument("coxeter: bad letter s" + tok);
    w = multiply(w, sys.gen(i));
  }
  return w;
}

uint64_t coxeter_order(const std::string& type_label) {
  auto [family, n] = parse_label(type_label);
  switch (family) {
    case CoxFamily::A: return factorial(n + 1);
    case CoxFamily::B: return factorial(n) << n;
    case CoxFamily::D: return factorial(n) << (n - 1);
    case CoxFamily::E: return n == 6 ? 51840ull : n == 7 ? 2903040ull : 696729600ull;
  }
  return 0;
}

std::shared_ptr<const WeylTable> enumerate_weyl(std::shared_ptr<const CoxeterSystem> sys,
                                                uint64_t cap) {
  if (sys->order > cap)
    throw std::length_error("coxeter: |W(" + sys->label + ")| = " + std::to_string(sys->order) +
                            " exceeds enumeration cap " + std::to_string(cap));
  auto table = std::make_shared<WeylTable>();
  table->sys = sys;
  int n = sys->rank;
  size_t N = (size_t)sys->order;
  table->elems.reserve(N);
  table->len.reserve(N);
  table->index.reserve(N * 2);

  auto push = [&](const WMat& m, uint8_t l) -> uint32_t {
    uint32_t id = (uint32_t)table->elems.size();
    table->elems.push_back(m);
    table->len.push_back(l);
    table->index.emplace(m, id);
    return id;
  };

  push(wmat_identity(n), 0);
  std::deque<uint32_t> frontier{0};
  while (!frontier.empty()) {
    uint32_t cur = frontier.front();
    frontier.pop_front();
    WMat m = table->elems[cur];
    for (int i = 0; i < n; ++i) {
      WMat nm = wmat_mul(m, sys->gens[i], n);
      if (table->index.find(nm) == table->index.end()) {
        uint32_t id = push(nm, (uint8_t)(table->len[cur] + 1));
        frontier.push_back(id);
      }
    }
  }
  if (table->elems.size() != N) throw std::logic_error("coxeter: enumeration size mismatch");

  table->id_e = 0;
  uint8_t maxlen = 0;
  for (size_t i = 0; i < N; ++i)
    if (table->len[i] > maxlen) {
      maxlen = table->len[i];
      table->id_w0 = (uint32_t)i;
    }

  // multiplication tables only at sizes where the memory is obviously fine
  if (N <= 200000) {
    table->rmul.resize(N);
    table->lmul.resize(N);
    for (size_t id = 0; id < N; ++id)
      for (int i = 0; i < n; ++i) {
        table->rmul[id][i] = table->index.at(wmat_mul(table->elems[id], sys->gens[i], n));
        table->lmul[id][i] = table->index.at(wmat_mul(sys->gens[i], table->elems[id], n));
      }
  }
  return table;
}

SigmaPartition sigma_conjugacy_classes(std::shared_ptr<const WeylTable> table,
                                       const DiagramAutomorphism& sigma) {
  const auto& sys = *table->sys;
  int n = sys.rank;
  size_t N = table->size();
  UnionFind uf(N);
  if (!table->rmul.empty()) {
    for (size_t id = 0; id < N; ++id)
      for (int s = 0; s < n; ++s) uf.unite((uint32_t)id, table->lmul[table->rmul[id][sigma.perm[s]]][s]);
  } else {
    for (size_t id = 0; id < N; ++id)
      for (int s = 0; s < n; ++s) {
        WMat m = wmat_mul(wmat_mul(sys.gens[s], table->elems[id], n), sys.gens[sigma.perm[s]], n);
        uf.unite((uint32_t)id, table->index.at(m));
      }
  }
  SigmaPartition part;
  part.table = table;
  part.sigma = sigma;
  part.class_of.assign(N, UINT32_MAX);
  for (size_t id = 0; id < N; ++id) {
    uint32_t root = uf.find((uint32_t)id);
    if (part.class_of[root] == UINT32_MAX) {
      part.class_of[root] = (uint32_t)part.classes.size();
      part.classes.push_back({});
    }
    part.class_of[id] = part.class_of[root];
    part.classes[part.class_of[id]].push_back((uint32_t)id);
  }
  return part;
}

SigmaPartition sigma_conjugacy_classes(std::shared_ptr<const CoxeterSystem> sys,
                                       const DiagramAutomorphism& sigma, uint64_t cap) {
  return sigma_conjugacy_classes(enumerate_weyl(sys, cap), sigma);
}

bool same_class(const WeylElement& w, const WeylElement& v, const DiagramAutomorphism& sigma,
                const SigmaPartition& part) {
  (void)sigma;
  uint32_t a = part.table->id_of(w.mat);
  uint32_t b = part.table->id_of(v.mat);
  return part.class_of[a] == part.class_of[b];
}

}  // namespace rootgeo
