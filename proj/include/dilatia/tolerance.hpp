#pragma once

#include <cstdint>

#include "dilatia/error.hpp"

namespace dilatia {

struct ToleranceConfig {
  double abs_tol = 1e-9;     // additive slack for sampled identities
  double exact_tol = 1e-12;  // slack for analytically exact identities
  int grid_size = 64;        // points per parameter grid
  int sample_pairs = 1000;   // random pairs/triples per sweep
  std::uint64_t seed = 20240601;

  void validate() const {
    if (!(abs_tol > 0.0) || !(exact_tol > 0.0))
      throw SpecError("tolerances must be positive");
    if (grid_size < 2) throw SpecError("grid_size must be at least 2");
    if (sample_pairs < 1) throw SpecError("sample_pairs must be positive");
  }
};

}  // namespace dilatia
