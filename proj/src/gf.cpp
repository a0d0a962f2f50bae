#include "rootgeo/gf.hpp"

#include <map>
#include <mutex>

namespace rootgeo {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Monic irreducible polynomials over GF(p), coefficients of x^0..x^(k-1)
// (the x^k coefficient is 1).  Enough for every q <= GF_MAX_Q.
std::vector<int> modulus_poly(int p, int k) {
  if (p == 2 && k == 2) return {1, 1};        // x^2+x+1
  if (p == 2 && k == 3) return {1, 1, 0};     // x^3+x+1
  if (p == 2 && k == 4) return {1, 1, 0, 0};  // x^4+x+1
  if (p == 3 && k == 2) return {1, 0};        // x^2+1
  throw std::invalid_argument("GF: no modulus for p=" + std::to_string(p) +
                              " k=" + std::to_string(k));
}

// digits base p <-> element index
std::vector<int> digits(int a, int p, int k) {
  std::vector<int> d(k);
  for (int i = 0; i < k; ++i) {
    d[i] = a % p;
    a /= p;
  }
  return d;
}

int undigits(const std::vector<int>& d, int p) {
  int a = 0;
  for (int i = (int)d.size() - 1; i >= 0; --i) a = a * p + d[i];
  return a;
}

}  // namespace

GF::GF(int qq) {
  q = qq;
  if (q < 2 || q > GF_MAX_Q) throw std::invalid_argument("GF: q out of range");
  p = q;
  k = 1;
  if (!is_prime(q)) {
    for (int pp = 2; pp <= q; ++pp) {
      if (!is_prime(pp)) continue;
      int e = 0, m = 1;
      while (m < q) m *= pp, ++e;
      if (m == q) {
        p = pp;
        k = e;
        break;
      }
    }
    if (p == q) throw std::invalid_argument("GF: q not a prime power");
  }

  if (k == 1) {
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        add_[a * GF_MAX_Q + b] = (uint8_t)((a + b) % p);
        mul_[a * GF_MAX_Q + b] = (uint8_t)((a * b) % p);
      }
      neg_[a] = (uint8_t)((p - a) % p);
      frob_[a] = (uint8_t)a;
    }
  } else {
    auto mod = modulus_poly(p, k);
    for (int a = 0; a < q; ++a) {
      auto da = digits(a, p, k);
      for (int b = 0; b < q; ++b) {
        auto db = digits(b, p, k);
        std::vector<int> s(k);
        for (int i = 0; i < k; ++i) s[i] = (da[i] + db[i]) % p;
        add_[a * GF_MAX_Q + b] = (uint8_t)undigits(s, p);
        // polynomial product, reduced by x^k = -mod
        std::vector<int> prod(2 * k - 1, 0);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        for (int d = 2 * k - 2; d >= k; --d) {
          int c = prod[d];
          if (c == 0) continue;
          prod[d] = 0;
          for (int i = 0; i < k; ++i)
            prod[d - k + i] = ((prod[d - k + i] - c * mod[i]) % p + p) % p;
        }
        prod.resize(k);
        mul_[a * GF_MAX_Q + b] = (uint8_t)undigits(prod, p);
      }
      std::vector<int> n(k);
      for (int i = 0; i < k; ++i) n[i] = (p - da[i]) % p;
      neg_[a] = (uint8_t)undigits(n, p);
    }
    for (int a = 0; a < q; ++a) {
      uint8_t r = (uint8_t)a;
      for (int i = 1; i < p; ++i) r = mul(r, (uint8_t)a);
      frob_[a] = r;
    }
  }

  inv_[0] = 0;
  for (int a = 1; a < q; ++a)
    for (int b = 1; b < q; ++b)
      if (mul((uint8_t)a, (uint8_t)b) == 1) inv_[a] = (uint8_t)b;
  for (int a = 1; a < q; ++a)
    if (mul((uint8_t)a, inv_[a]) != 1) throw std::logic_error("GF: inverse table broken");
}

const GF& gf(int q) {
  static std::mutex m;
  static std::map<int, GF> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, GF(q)).first;
  return it->second;
}

}  // namespace rootgeo
