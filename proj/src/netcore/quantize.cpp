#include "parlab/netcore/quantize.hpp"

#include <cmath>

#include "parlab/common/error.hpp"

namespace parlab {

void validate(const QuantizationSpec& spec) {
  if (spec.total_bits < 2 || spec.total_bits > 64) {
    throw InvalidArgument("quantization total_bits must be in [2, 64]");
  }
  if (spec.fractional_bits < 0 || spec.fractional_bits > 62) {
    throw InvalidArgument("quantization fractional_bits must be in [0, 62]");
  }
}

double QuantizationSpec::step() const { return std::ldexp(1.0, -fractional_bits); }

std::int64_t QuantizationSpec::max_code() const {
  return total_bits == 64 ? INT64_MAX : (std::int64_t{1} << (total_bits - 1)) - 1;
}

double QuantizationSpec::max_value() const {
  return std::ldexp(static_cast<double>(max_code()), -fractional_bits);
}

std::int64_t quantize_code(double w, const QuantizationSpec& spec) {
  const std::int64_t top = spec.max_code();
  if (std::isnan(w)) return 0;
  // Default FE_TONEAREST rounding gives ties-to-even.
  const double scaled = std::nearbyint(std::ldexp(w, spec.fractional_bits));
  if (scaled >= static_cast<double>(top)) return top;
  if (scaled <= -static_cast<double>(top)) return -top;
  return static_cast<std::int64_t>(scaled);
}

double dequantize(std::int64_t code, const QuantizationSpec& spec) {
  return std::ldexp(static_cast<double>(code), -spec.fractional_bits);
}

double quantize(double w, const QuantizationSpec& spec) {
  return dequantize(quantize_code(w, spec), spec);
}

std::vector<double> quantize(const std::vector<double>& w, const QuantizationSpec& spec) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = quantize(w[i], spec);
  return out;
}

std::string exact_decimal(std::int64_t code, int fractional_bits) {
  using u128 = unsigned __int128;
  const bool negative = code < 0;
  const u128 mag = negative ? u128(-(code + 1)) + 1 : u128(code);
  const u128 mask = (u128(1) << fractional_bits) - 1;
  u128 whole = mag >> fractional_bits;
  u128 frac = mag & mask;

  std::string digits;
  if (whole == 0) digits = "0";
  while (whole > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
    whole /= 10;
  }
  std::string out = (negative && mag != 0 ? "-" : "") + digits;
  if (frac != 0) {
    out.push_back('.');
    while (frac != 0) {
      frac *= 10;
      out.push_back(static_cast<char>('0' + static_cast<int>(frac >> fractional_bits)));
      frac &= mask;
    }
  }
  return out;
}

}  // namespace parlab
