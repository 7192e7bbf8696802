#pragma once

#include "pwell/integrator.hpp"

#include <string>

namespace pwell {

/// Four stacked line charts (E, I, ||grad u||_2, theta) over time.
/// Self-contained SVG, no external renderer; the CSV stays the
/// authoritative artifact.
void write_trajectory_svg(const Trajectory& trajectory, const std::string& path);

} // namespace pwell
