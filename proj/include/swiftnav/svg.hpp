#pragma once

#include <string>
#include <vector>

#include "swiftnav/env.hpp"
#include "swiftnav/world.hpp"

namespace swiftnav {

// 960x540 dual-axis learning-curve chart: per-episode return (left axis) and
// steps (right axis), raw points plus 15-episode trailing means. The smoothed
// polylines carry ids "ma-return" and "ma-steps" and full-precision
// coordinates, so the plotted values can be recovered exactly from the
// documented linear axis mapping (see the <desc> element in the output).
std::string svg_learning_curves(const std::vector<EpisodeRow>& rows);

// 960x540 top-down map: world bounds, obstacle discs, start/goal markers, and
// each trajectory drawn as mode-colored segments (class "traj").
std::string svg_trajectory_map(const World& world,
                               const std::vector<std::vector<TrajectoryPoint>>& paths);

// Curves stacked above the map in one 960x1080 document.
std::string svg_combined(const std::vector<EpisodeRow>& rows, const World& world,
                         const std::vector<std::vector<TrajectoryPoint>>& paths);

}  // namespace swiftnav
