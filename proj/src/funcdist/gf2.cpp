#include "parlab/funcdist/gf2.hpp"

#include <bit>

#include "parlab/common/error.hpp"

namespace parlab {

Gf2System::Gf2System(int n) : n_(n) {
  if (n < 0 || n > 63) throw InvalidArgument("GF(2) systems support n <= 63");
}

bool Gf2System::add(Mask row, int rhs_bit) {
  row &= low_mask(n_);
  int b = rhs_bit & 1;
  while (row != 0) {
    const int lead = 63 - std::countl_zero(row);
    if (rows_[lead] == 0) {
      rows_[lead] = row;
      rhs_[lead] = b;
      ++rank_;
      return true;
    }
    row ^= rows_[lead];
    b ^= rhs_[lead];
  }
  if (b != 0) inconsistent_ = true;
  return false;
}

Mask Gf2System::solve() const {
  // Rows keyed by leading bit only involve lower bits besides the lead, so
  // fix unknowns from the lowest lead upwards.
  Mask s = 0;
  for (int lead = 0; lead < n_; ++lead) {
    const Mask r = rows_[lead];
    if (r == 0) continue;
    const int rest = parity_bit(r & ~(Mask{1} << lead) & s);
    if ((rhs_[lead] ^ rest) != 0) s |= Mask{1} << lead;
  }
  return s;
}

Gf2Result Gf2System::result() const {
  Gf2Result out;
  out.rank = rank_;
  if (inconsistent_) {
    out.status = Gf2Status::Inconsistent;
  } else if (rank_ < n_) {
    out.status = Gf2Status::NotIdentifiable;
  } else {
    out.status = Gf2Status::Recovered;
    out.subset = solve();
  }
  return out;
}

Gf2Result gf2_recover(std::span<const LabeledSample> samples, int n) {
  Gf2System sys(n);
  for (const auto& z : samples) {
    if (z.x & ~low_mask(n)) throw DimensionMismatch("sample point outside the cube");
    if (z.y != 1 && z.y != -1) throw InvalidArgument("labels must be +1 or -1");
    sys.add(z.x, (1 - z.y) / 2);
  }
  return sys.result();
}

}  // namespace parlab
