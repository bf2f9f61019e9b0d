#ifndef OTDD_SYNTH_HPP
#define OTDD_SYNTH_HPP

#include <cstdint>

#include "otdd/dataset.hpp"

namespace otdd {

/// Synthetic Gaussian-mixture dataset: k classes, one Gaussian blob each.
struct MixtureSpec {
  std::size_t n = 100;
  std::size_t d = 2;
  std::size_t k = 2;
  double separation = 4.0;  // center spread
  double noise = 1.0;       // within-class standard deviation scale
  bool axis_centers = false;  // centers on scaled coordinate axes instead of random
};

/// Deterministic for a fixed (spec, seed). Classes are balanced up to
/// remainder and rows are shuffled.
LabeledDataset gaussian_mixture(const MixtureSpec& spec, std::uint64_t seed);

}  // namespace otdd

#endif  // OTDD_SYNTH_HPP
