#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace parlab {

struct GridDatasetSpec {
  int side = 5;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
};

// Cells are 0 (white) or 1 (black); label is the XOR of all cells.
struct GridImage {
  std::vector<std::uint8_t> cells;
  int label_bit = 0;
};

GridImage grid_image(std::vector<std::uint8_t> cells);
std::vector<GridImage> grid_dataset(const GridDatasetSpec& spec);

// CSV with header c0..c{k^2-1},label and a trailing digest line.
std::string grid_csv(const std::vector<GridImage>& images);

}  // namespace parlab
