#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "kschemo/grid.hpp"
#include "kschemo/solver.hpp"

namespace kschemo::harness {

/// Header `x,y,u,v` (`x,u,v` on intervals), one row per cell in storage order,
/// every value in shortest round-trip decimal form.
void write_field_csv(std::ostream& out, const Grid& grid, const FieldState& state);

struct HeatmapRange {
    double min = 0.0;
    double max = 0.0;
};

/// Binary P5 PGM with maxval 255, linear min -> 0, max -> 255 (all zero for a
/// flat field). Image rows run from the top (largest y) down; intervals give
/// a single row.
HeatmapRange write_pgm(std::ostream& out, const Grid& grid, const std::vector<double>& field);

/// Writes `<stem>.pgm` and the sidecar `<stem>.range.txt` holding "min max".
/// Returns the image path.
std::filesystem::path write_heatmap(const std::filesystem::path& dir, const std::string& stem, const Grid& grid,
                                    const std::vector<double>& field);

/// Monitor series as CSV: t,step,min_u,max_u,mass_u,mass_v,rate,steady_residual.
void write_monitor_csv(std::ostream& out, const RunReport& report);

/// Time formatted for file names (%g, six significant digits).
std::string time_label(double t);

}  // namespace kschemo::harness
