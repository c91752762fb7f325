#include "perc/percolation.hpp"

#include <string>

namespace perc {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform_at(std::uint64_t seed, std::span<const Coord> coords, std::uint64_t tag) {
  constexpr Coord kOffset = Coord{1} << 20;
  constexpr std::uint64_t kMask = (std::uint64_t{1} << 21) - 1;
  std::uint64_t h = mix64(seed);
  for (std::size_t i = 0; i < coords.size(); i += 3) {
    std::uint64_t word = 0;
    for (std::size_t j = 0; j < 3 && i + j < coords.size(); ++j) {
      const Coord c = coords[i + j];
      if (c <= -kOffset || c >= kOffset) {
        throw Error(ErrorCode::kInvalidSite, "coordinate " + std::to_string(c) + " outside the packable range");
      }
      word |= (static_cast<std::uint64_t>(c + kOffset) & kMask) << (21 * j);
    }
    h = mix64(h ^ word);
  }
  h = mix64(h ^ tag);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace perc
