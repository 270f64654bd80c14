#pragma once

// Weight files: JSON with a format tag and version, the training seed, the
// power levels the output layer indexes, and for each network its layer
// widths and per-layer parameter arrays (kernel row-major [in][out], then
// bias). Doubles are written in shortest round-trip form, so a read-back
// model reproduces forward passes bit for bit.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "d2d/power_control.hpp"

namespace d2d {

inline constexpr int kModelFormatVersion = 1;

struct SavedModel {
  DqnModel model;
  std::vector<double> power_levels_dbm;
};

void write_model(std::ostream& out, const SavedModel& saved);
void write_model(const SavedModel& saved, const std::filesystem::path& path);
SavedModel read_model(std::istream& in, const std::string& source = "<model>");
SavedModel read_model(const std::filesystem::path& path);

}  // namespace d2d
