#pragma once

// Counter-based site randomness. Every value is a pure function of
// (seed, site coordinates, stream tag).
//
//   mix64(z):  z += 0x9e3779b97f4a7c15
//              z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//              z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//              return z ^ (z >> 31)
//
//   h = mix64(seed)
//   coordinates are taken three at a time; each is offset by 2^20 and
//   placed in a 21-bit field (coordinate j of the group at bit 21*j):
//       h = mix64(h ^ word)
//   h = mix64(h ^ tag)
//   u = (h >> 11) * 2^-53

#include <cstdint>
#include <span>

#include "perc/lattice.hpp"

namespace perc {

std::uint64_t mix64(std::uint64_t z);

struct SiteField {
  std::uint64_t seed = 0;
  double p = 0.0;  // closed probability
};

// Coordinates must satisfy |c| < 2^20.
double uniform_at(std::uint64_t seed, std::span<const Coord> coords, std::uint64_t tag);

inline double uniform_at(const SiteField& field, const Site& x, std::uint64_t tag) {
  return uniform_at(field.seed, x.span(), tag);
}

// Tag 0 is reserved for the closed/open decision.
inline bool is_closed(const SiteField& field, std::span<const Coord> coords) {
  return uniform_at(field.seed, coords, 0) < field.p;
}

inline bool is_closed(const SiteField& field, const Site& x) { return is_closed(field, x.span()); }

}  // namespace perc
