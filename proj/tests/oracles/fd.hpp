#pragma once

// Central finite-difference gradient oracle. Independent of the tape: it only
// re-evaluates a scalar loss closure under parameter perturbations.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "moss/nn/graph.hpp"

namespace oracles {

inline double rel_err(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

struct GradCheck {
  double max_rel = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_ad = 0.0;
  double worst_fd = 0.0;
  std::size_t checked = 0;
};

// Assumes p->grad already holds the analytic gradient for every parameter.
// loss() must be a deterministic pure function of the parameter values.
inline GradCheck fd_check(const std::vector<moss::nn::Parameter*>& params,
                          const std::function<double()>& loss, double eps = 1e-4) {
  GradCheck r;
  for (moss::nn::Parameter* p : params) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double orig = p->value.data[i];
      p->value.data[i] = orig + eps;
      const double up = loss();
      p->value.data[i] = orig - eps;
      const double down = loss();
      p->value.data[i] = orig;
      const double fd = (up - down) / (2.0 * eps);
      const double ad = p->grad.data[i];
      const double e = rel_err(ad, fd);
      ++r.checked;
      if (e > r.max_rel) {
        r.max_rel = e;
        r.worst_param = p->name;
        r.worst_index = i;
        r.worst_ad = ad;
        r.worst_fd = fd;
      }
    }
  }
  return r;
}

}  // namespace oracles
