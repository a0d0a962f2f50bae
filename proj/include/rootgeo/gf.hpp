#pragma once
// Small finite fields GF(p^k), table driven.  Elements are 0..q-1; for
// prime fields the value is the residue, for extensions it is the
// coefficient vector of the polynomial representative in base p
// (lowest degree digit first).  q is capped small: these fields only
// ever coordinatise desk-scale geometries.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rootgeo {

constexpr int GF_MAX_Q = 16;

struct GF {
  int p = 2;  // characteristic
  int k = 1;  // degree
  int q = 2;  // p^k

  std::array<uint8_t, GF_MAX_Q * GF_MAX_Q> add_{};
  std::array<uint8_t, GF_MAX_Q * GF_MAX_Q> mul_{};
  std::array<uint8_t, GF_MAX_Q> neg_{};
  std::array<uint8_t, GF_MAX_Q> inv_{};
  std::array<uint8_t, GF_MAX_Q> frob_{};  // x -> x^p

  explicit GF(int q);

  uint8_t add(uint8_t a, uint8_t b) const { return add_[a * GF_MAX_Q + b]; }
  uint8_t sub(uint8_t a, uint8_t b) const { return add_[a * GF_MAX_Q + neg_[b]]; }
  uint8_t mul(uint8_t a, uint8_t b) const { return mul_[a * GF_MAX_Q + b]; }
  uint8_t neg(uint8_t a) const { return neg_[a]; }
  uint8_t inv(uint8_t a) const {
    if (a == 0) throw std::domain_error("GF: inverse of zero");
    return inv_[a];
  }
  uint8_t div(uint8_t a, uint8_t b) const { return mul(a, inv(b)); }
  // x -> x^(p^e)
  uint8_t frob(uint8_t a, int e) const {
    uint8_t r = a;
    for (int i = 0; i < ((e % k) + k) % k; ++i) r = frob_[r];
    return r;
  }
};

// Shared instances; fields are immutable so one per q suffices.
const GF& gf(int q);

}  // namespace rootgeo
