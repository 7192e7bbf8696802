#pragma once

#include <cstddef>
#include <vector>

namespace pwell {

/// Partition of the interval (0,1). The Dirichlet boundary is the node
/// at x = 0, the dynamic boundary is the node at x = 1.
struct Mesh1D {
  std::vector<double> nodes;         ///< strictly increasing, nodes[0]=0, nodes.back()=1
  std::vector<double> element_sizes; ///< element_sizes[e] = nodes[e+1] - nodes[e]

  std::size_t n_elements() const { return element_sizes.size(); }
  /// Nodes carrying unknowns (x = 0 is eliminated).
  std::size_t n_free() const { return nodes.size() - 1; }
};

/// grading = 1 gives the uniform mesh; grading g > 1 shrinks elements
/// geometrically toward x = 1 with ratio g between adjacent sizes.
/// Throws std::invalid_argument for n_elements < 2 or grading < 1.
Mesh1D build_mesh(std::size_t n_elements, double grading = 1.0);

} // namespace pwell
