#include "vc/gradcheck.hpp"

#include <cmath>

#include "vc/errors.hpp"

namespace vc {

GradCheckReport gradient_check(const std::vector<TensorRef>& tensors,
                               const std::vector<const DenseMatrix*>& analytic,
                               const std::function<double()>& loss,
                               const std::vector<CheckCoord>& coords, double h) {
  if (tensors.size() != analytic.size())
    throw ShapeError("gradient_check: tensor/gradient list size mismatch");
  for (size_t t = 0; t < tensors.size(); ++t) {
    if (analytic[t]->rows != tensors[t].tensor->rows ||
        analytic[t]->cols != tensors[t].tensor->cols)
      throw ShapeError("gradient_check: gradient shape mismatch for " + tensors[t].name);
  }

  std::vector<CheckCoord> all;
  const std::vector<CheckCoord>* probe = &coords;
  if (coords.empty()) {
    for (size_t t = 0; t < tensors.size(); ++t)
      for (size_t k = 0; k < tensors[t].tensor->data.size(); ++k) all.emplace_back(t, k);
    probe = &all;
  }

  GradCheckReport report;
  for (const auto& [t, k] : *probe) {
    double& slot = tensors[t].tensor->data[k];
    const double saved = slot;
    slot = saved + h;
    const double lp = loss();
    slot = saved - h;
    const double lm = loss();
    slot = saved;

    const double numeric = (lp - lm) / (2.0 * h);
    const double analytic_v = analytic[t]->data[k];
    const double denom = std::max({std::abs(numeric), std::abs(analytic_v), 1e-4});
    const double rel = std::abs(numeric - analytic_v) / denom;
    ++report.coords_checked;
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_tensor = tensors[t].name;
      report.worst_index = k;
      report.worst_analytic = analytic_v;
      report.worst_numeric = numeric;
    }
  }
  return report;
}

}  // namespace vc
