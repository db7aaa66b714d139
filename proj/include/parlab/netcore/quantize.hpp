#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace parlab {

// Symmetric signed fixed-point lattice: codes in [-(2^(b-1)-1), 2^(b-1)-1]
// scaled by 2^-f.
struct QuantizationSpec {
  int total_bits = 8;
  int fractional_bits = 4;

  double step() const;
  std::int64_t max_code() const;
  double max_value() const;
  friend bool operator==(const QuantizationSpec&, const QuantizationSpec&) = default;
};

void validate(const QuantizationSpec& spec);

// Nearest lattice code (ties to even), saturating at the extremes.
std::int64_t quantize_code(double w, const QuantizationSpec& spec);
double dequantize(std::int64_t code, const QuantizationSpec& spec);
double quantize(double w, const QuantizationSpec& spec);
std::vector<double> quantize(const std::vector<double>& w, const QuantizationSpec& spec);

// Exact decimal expansion of code * 2^-fractional_bits, e.g. "0.3125".
std::string exact_decimal(std::int64_t code, int fractional_bits);

}  // namespace parlab
