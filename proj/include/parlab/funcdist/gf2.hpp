#pragma once

#include <array>
#include <span>

#include "parlab/funcdist/source.hpp"

namespace parlab {

enum class Gf2Status { Recovered, NotIdentifiable, Inconsistent };

struct Gf2Result {
  Gf2Status status = Gf2Status::NotIdentifiable;
  Mask subset = 0;  // meaningful when Recovered
  int rank = 0;
};

// Incremental GF(2) system <a, s> = b over n <= 63 unknowns, kept as an XOR
// basis keyed by leading bit.
class Gf2System {
 public:
  explicit Gf2System(int n);

  // Returns false if the row was already in the span (no rank increase).
  bool add(Mask row, int rhs_bit);

  int n() const { return n_; }
  int rank() const { return rank_; }
  bool inconsistent() const { return inconsistent_; }

  // Some solution (free unknowns set to 0). Requires consistency.
  Mask solve() const;

  // Predicted label bit for a row, assuming free unknowns are 0.
  int predict_bit(Mask row) const { return parity_bit(row & solve()); }

  Gf2Result result() const;

 private:
  int n_;
  int rank_ = 0;
  bool inconsistent_ = false;
  std::array<Mask, 64> rows_{};
  std::array<int, 64> rhs_{};
};

// Converts +-1 to GF(2) via b = (1 - v) / 2 and eliminates [X | y].
// Inconsistency takes precedence over rank deficiency.
Gf2Result gf2_recover(std::span<const LabeledSample> samples, int n);

}  // namespace parlab
