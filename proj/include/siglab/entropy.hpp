#pragma once

#include <cmath>

namespace siglab {

// Shannon entropy terms in bits, with 0 log 0 = 0.
inline double entropy_term(double p) {
  return p > 0.0 ? -p * std::log2(p) : 0.0;
}

inline double binary_entropy(double p) {
  return entropy_term(p) + entropy_term(1.0 - p);
}

}  // namespace siglab
