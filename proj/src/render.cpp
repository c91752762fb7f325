#include <fstream>

#include "perc/game.hpp"

namespace perc {

std::string render_ppm_bytes(const OutcomeField& field) {
  const Region& r = *field.region;
  if (r.shape() != RegionShape::kTriangle2D) {
    throw Error(ErrorCode::kInvalidConfig, "images are only drawn for Triangle2D regions");
  }
  const int n = r.depth();
  const int side = n + 1;
  std::string header = "P6\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
  std::string pixels(static_cast<std::size_t>(side) * side * 3, static_cast<char>(255));
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Site& x = r.site(i);
    unsigned char rgb[3];
    if (field.closed[i]) {
      rgb[0] = rgb[1] = rgb[2] = 0;
    } else if (field.values[i] == Symbol3::kZero) {
      rgb[0] = 0, rgb[1] = 0, rgb[2] = 255;
    } else if (field.values[i] == Symbol3::kOne) {
      rgb[0] = 0, rgb[1] = 160, rgb[2] = 0;
    } else {
      rgb[0] = 220, rgb[1] = 0, rgb[2] = 0;
    }
    const std::size_t row = static_cast<std::size_t>(n - x[1]);
    const std::size_t col = static_cast<std::size_t>(x[0]);
    const std::size_t at = (row * side + col) * 3;
    for (int c = 0; c < 3; ++c) pixels[at + c] = static_cast<char>(rgb[c]);
  }
  return header + pixels;
}

void render_outcomes(const OutcomeField& field, const std::string& path) {
  const std::string bytes = render_ppm_bytes(field);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace perc
