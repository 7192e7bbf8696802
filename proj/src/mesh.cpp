#include "pwell/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace pwell {

Mesh1D build_mesh(std::size_t n_elements, double grading) {
  if (n_elements < 2) {
    throw std::invalid_argument("build_mesh: n_elements must be >= 2");
  }
  if (!(grading >= 1.0) || !std::isfinite(grading)) {
    throw std::invalid_argument("build_mesh: grading must be >= 1");
  }

  Mesh1D mesh;
  mesh.element_sizes.resize(n_elements);
  if (grading == 1.0) {
    const double h = 1.0 / static_cast<double>(n_elements);
    for (auto& s : mesh.element_sizes) s = h;
  } else {
    // Sizes h, h/g, h/g^2, ... summing to 1.
    const double q = 1.0 / grading;
    const double sum = (1.0 - std::pow(q, static_cast<double>(n_elements))) / (1.0 - q);
    double h = 1.0 / sum;
    for (std::size_t e = 0; e < n_elements; ++e) {
      mesh.element_sizes[e] = h;
      h *= q;
    }
  }

  mesh.nodes.resize(n_elements + 1);
  mesh.nodes[0] = 0.0;
  for (std::size_t e = 0; e < n_elements; ++e) {
    mesh.nodes[e + 1] = mesh.nodes[e] + mesh.element_sizes[e];
  }
  mesh.nodes.back() = 1.0; // absorb rounding in the last node
  mesh.element_sizes.back() = mesh.nodes[n_elements] - mesh.nodes[n_elements - 1];
  return mesh;
}

} // namespace pwell
