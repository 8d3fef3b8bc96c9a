#pragma once

#include <string>
#include <vector>

#include "swiftnav/config.hpp"
#include "swiftnav/env.hpp"

namespace swiftnav {

// Episode log CSV: header `episode,steps,return,success,switches,outcome`,
// one row per finished episode. Doubles are written so they read back
// bit-identical; identical runs therefore produce byte-identical files.
std::string episode_log_csv(const std::vector<EpisodeRow>& rows);
void write_episode_log(const std::string& path, const std::vector<EpisodeRow>& rows);

// Parses an episode log. Throws ConfigError naming the 1-based line number on
// any malformed row; IOError when the file is unreadable.
std::vector<EpisodeRow> read_episode_log(const std::string& path);
std::vector<EpisodeRow> parse_episode_log_text(const std::string& text);

// Trajectory CSV: header `t,x,y,z,mode`, one row per sample.
std::string trajectory_csv(const std::vector<TrajectoryPoint>& points);
void write_trajectory(const std::string& path, const std::vector<TrajectoryPoint>& points);
std::vector<TrajectoryPoint> read_trajectory(const std::string& path);
std::vector<TrajectoryPoint> parse_trajectory_text(const std::string& text);

// Writes `content` to `path`, creating parent directories. Throws IOError.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace swiftnav
