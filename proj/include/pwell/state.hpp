#pragma once

#include <vector>

namespace pwell {

/// Nodal displacement and velocity on the free nodes at time t.
struct State {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

inline State zero_state(std::size_t n_free) {
  State s;
  s.u.assign(n_free, 0.0);
  s.v.assign(n_free, 0.0);
  return s;
}

} // namespace pwell
