#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vc/matrix.hpp"

namespace vc {

// Named reference to one parameter tensor participating in a check.
struct TensorRef {
  std::string name;
  DenseMatrix* tensor = nullptr;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  size_t coords_checked = 0;
  bool passed(double tolerance) const { return max_rel_error < tolerance; }
};

// Coordinate to probe: (tensor index within the list, flat element index).
using CheckCoord = std::pair<size_t, size_t>;

// Compares analytic gradients against central finite differences of `loss`.
// `analytic` holds d(loss)/d(tensor) in the same order as `tensors`. The
// loss function must be deterministic (stochastic inputs frozen). If
// `coords` is empty every coordinate is probed.
GradCheckReport gradient_check(const std::vector<TensorRef>& tensors,
                               const std::vector<const DenseMatrix*>& analytic,
                               const std::function<double()>& loss,
                               const std::vector<CheckCoord>& coords = {}, double h = 1e-5);

}  // namespace vc
