#include "parlab/funcdist/grid.hpp"

#include "parlab/common/digest.hpp"
#include "parlab/common/error.hpp"
#include "parlab/common/rng.hpp"

namespace parlab {

GridImage grid_image(std::vector<std::uint8_t> cells) {
  int parity = 0;
  for (auto c : cells) {
    if (c > 1) throw InvalidArgument("grid cells must be 0 or 1");
    parity ^= c;
  }
  return {std::move(cells), parity};
}

std::vector<GridImage> grid_dataset(const GridDatasetSpec& spec) {
  if (spec.side < 1) throw InvalidArgument("grid side must be positive");
  Rng rng(spec.seed);
  const auto cells = static_cast<std::size_t>(spec.side) * spec.side;
  std::vector<GridImage> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    std::vector<std::uint8_t> c(cells);
    for (auto& v : c) v = static_cast<std::uint8_t>(rng.next_u64() >> 63);
    out.push_back(grid_image(std::move(c)));
  }
  return out;
}

std::string grid_csv(const std::vector<GridImage>& images) {
  std::string body;
  const std::size_t cells = images.empty() ? 0 : images.front().cells.size();
  for (std::size_t i = 0; i < cells; ++i) body += "c" + std::to_string(i) + ",";
  body += "label\n";
  for (const auto& img : images) {
    for (auto c : img.cells) {
      body.push_back(static_cast<char>('0' + c));
      body.push_back(',');
    }
    body.push_back(static_cast<char>('0' + img.label_bit));
    body.push_back('\n');
  }
  return with_digest_line(std::move(body));
}

}  // namespace parlab
