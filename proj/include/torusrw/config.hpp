#pragma once

// Experiment configuration, read from a key = value text file:
//
//   # comment
//   N = 8, 12, 16, 20
//   d = 3
//   u = 1
//   windows = 0,0,0 ; 0,0,0        # one window per center, ';' between windows
//   centers = separated            # or explicit points: 0,0,0 10,10,10
//   trials = 100000
//   seed = 1
//   workers = 1
//   threshold = 0.03
//   capacity_radius = 48
//   output = results.csv
//
// Points are comma-separated coordinates; the points of one window are separated
// by whitespace.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "torusrw/lattice.hpp"

namespace torusrw {

enum class CenterRule { separated, explicit_list };

struct ExperimentConfig {
  std::vector<Coord> sides{8, 12, 16, 20};
  int dim = 3;
  double u = 1.0;
  std::vector<PointSet> windows{PointSet({Point{0, 0, 0}})};
  CenterRule center_rule = CenterRule::separated;
  std::vector<Point> centers;  ///< used with CenterRule::explicit_list
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double threshold = 0.03;
  Coord capacity_radius = 48;
  std::string output;

  std::size_t window_count() const { return windows.size(); }

  /// x_i = round(i N / M) (1, ..., 1) for the separated rule, else the explicit list
  /// reduced mod N.
  std::vector<Point> centers_for(Coord side) const;

  /// B = union of project(x_i + K_i).
  PointSet target_for(Coord side) const;

  /// Throws ConfigError unless trials >= 100, u > 0, every window is nonempty and
  /// matches d, and the centers agree with the windows.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace torusrw
