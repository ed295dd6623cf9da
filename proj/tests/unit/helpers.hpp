#pragma once

#include <cmath>

#include "latstab/group.hpp"

namespace testutil {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

inline latstab::CMatrix pauli(int k) {
  using latstab::Complex;
  latstab::CMatrix s(2, 2);
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

}  // namespace testutil
