#pragma once

#include <stdexcept>

namespace efk {

/// A numerical sanity check failed (non-finite state, spectral residue, SVD breakdown).
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace efk
