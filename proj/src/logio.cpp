#include "swiftnav/logio.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace swiftnav {

namespace {

// Shortest decimal form that parses back to the identical double.
std::string round_trip_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

[[noreturn]] void row_error(std::size_t lineno, const std::string& why) {
    throw ConfigError("malformed CSV row at line " + std::to_string(lineno) + ": " + why);
}

double cell_double(const std::string& cell, std::size_t lineno) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size())
        row_error(lineno, "'" + cell + "' is not a number");
    return v;
}

long long cell_int(const std::string& cell, std::size_t lineno) {
    char* end = nullptr;
    const long long v = std::strtoll(cell.c_str(), &end, 10);
    if (cell.empty() || end != cell.c_str() + cell.size())
        row_error(lineno, "'" + cell + "' is not an integer");
    return v;
}

Outcome outcome_from_name(const std::string& name, std::size_t lineno) {
    for (Outcome o : {Outcome::success, Outcome::crash, Outcome::out_of_bounds,
                      Outcome::no_progress, Outcome::step_limit})
        if (name == outcome_name(o)) return o;
    row_error(lineno, "unknown outcome '" + name + "'");
}

Mode mode_from_name(const std::string& name, std::size_t lineno) {
    for (Mode m : {Mode::Travel, Mode::RL, Mode::Landing})
        if (name == mode_name(m)) return m;
    row_error(lineno, "unknown mode '" + name + "'");
}

}  // namespace

std::string episode_log_csv(const std::vector<EpisodeRow>& rows) {
    std::ostringstream out;
    out << "episode,steps,return,success,switches,outcome\n";
    for (const auto& r : rows) {
        out << r.episode << ',' << r.steps << ',' << round_trip_double(r.episode_return) << ','
            << (r.success ? 1 : 0) << ',' << r.switches << ',' << outcome_name(r.outcome)
            << '\n';
    }
    return out.str();
}

void write_episode_log(const std::string& path, const std::vector<EpisodeRow>& rows) {
    write_text_file(path, episode_log_csv(rows));
}

std::vector<EpisodeRow> parse_episode_log_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<EpisodeRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != "episode,steps,return,success,switches,outcome")
                row_error(lineno, "unexpected header '" + line + "'");
            continue;
        }
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 6) row_error(lineno, "expected 6 columns, found " +
                                                     std::to_string(cells.size()));
        EpisodeRow r;
        r.episode = static_cast<std::size_t>(cell_int(cells[0], lineno));
        r.steps = static_cast<std::size_t>(cell_int(cells[1], lineno));
        r.episode_return = cell_double(cells[2], lineno);
        const long long succ = cell_int(cells[3], lineno);
        if (succ != 0 && succ != 1) row_error(lineno, "success must be 0 or 1");
        r.success = succ == 1;
        r.switches = static_cast<std::size_t>(cell_int(cells[4], lineno));
        r.outcome = outcome_from_name(cells[5], lineno);
        rows.push_back(r);
    }
    return rows;
}

std::vector<EpisodeRow> read_episode_log(const std::string& path) {
    return parse_episode_log_text(read_text_file(path));
}

std::string trajectory_csv(const std::vector<TrajectoryPoint>& points) {
    std::ostringstream out;
    out << "t,x,y,z,mode\n";
    for (const auto& p : points) {
        out << round_trip_double(p.t) << ',' << round_trip_double(p.position.x) << ','
            << round_trip_double(p.position.y) << ',' << round_trip_double(p.z) << ','
            << mode_name(p.mode) << '\n';
    }
    return out.str();
}

void write_trajectory(const std::string& path, const std::vector<TrajectoryPoint>& points) {
    write_text_file(path, trajectory_csv(points));
}

std::vector<TrajectoryPoint> parse_trajectory_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<TrajectoryPoint> points;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != "t,x,y,z,mode") row_error(lineno, "unexpected header '" + line + "'");
            continue;
        }
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 5) row_error(lineno, "expected 5 columns, found " +
                                                     std::to_string(cells.size()));
        TrajectoryPoint p;
        p.t = cell_double(cells[0], lineno);
        p.position.x = cell_double(cells[1], lineno);
        p.position.y = cell_double(cells[2], lineno);
        p.z = cell_double(cells[3], lineno);
        p.mode = mode_from_name(cells[4], lineno);
        points.push_back(p);
    }
    return points;
}

std::vector<TrajectoryPoint> read_trajectory(const std::string& path) {
    return parse_trajectory_text(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot write: " + path);
    out << content;
    out.flush();
    if (!out) throw IOError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot read: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace swiftnav
