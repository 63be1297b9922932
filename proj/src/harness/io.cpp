#include "kschemo/harness/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "kschemo/errors.hpp"
#include "kschemo/harness/config.hpp"

namespace kschemo::harness {

void write_field_csv(std::ostream& out, const Grid& grid, const FieldState& state) {
    if (state.u.size() != grid.size() || state.v.size() != grid.size()) {
        throw ShapeError("field state does not match the grid");
    }
    const bool two_d = grid.dims() == 2;
    out << (two_d ? "x,y,u,v\n" : "x,u,v\n");
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            const std::size_t k = grid.index(i, j);
            out << format_double(grid.x(i)) << ',';
            if (two_d) out << format_double(grid.y(j)) << ',';
            out << format_double(state.u[k]) << ',' << format_double(state.v[k]) << '\n';
        }
    }
}

HeatmapRange write_pgm(std::ostream& out, const Grid& grid, const std::vector<double>& field) {
    if (field.size() != grid.size()) throw ShapeError("heatmap field does not match the grid");
    const auto [lo, hi] = std::minmax_element(field.begin(), field.end());
    const HeatmapRange range{*lo, *hi};
    const double span = range.max - range.min;
    out << "P5\n" << grid.nx() << ' ' << grid.ny() << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(grid.nx()));
    for (int j = grid.ny() - 1; j >= 0; --j) {
        for (int i = 0; i < grid.nx(); ++i) {
            const double x = field[grid.index(i, j)];
            const double level = span > 0.0 && std::isfinite(span) ? (x - range.min) / span * 255.0 : 0.0;
            row[static_cast<std::size_t>(i)] =
                static_cast<unsigned char>(std::clamp(std::lround(level), 0L, 255L));
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    return range;
}

std::filesystem::path write_heatmap(const std::filesystem::path& dir, const std::string& stem, const Grid& grid,
                                    const std::vector<double>& field) {
    const std::filesystem::path image = dir / (stem + ".pgm");
    std::ofstream out(image, std::ios::binary);
    if (!out) throw Error("cannot open " + image.string());
    const HeatmapRange range = write_pgm(out, grid, field);
    std::ofstream side(dir / (stem + ".range.txt"));
    if (!side) throw Error("cannot open range file for " + image.string());
    side << format_double(range.min) << ' ' << format_double(range.max) << '\n';
    return image;
}

void write_monitor_csv(std::ostream& out, const RunReport& report) {
    out << "t,step,min_u,max_u,mass_u,mass_v,rate,steady_residual\n";
    for (const MonitorSample& s : report.samples) {
        out << format_double(s.t) << ',' << s.step << ',' << format_double(s.min_u) << ','
            << format_double(s.max_u) << ',' << format_double(s.mass_u) << ',' << format_double(s.mass_v) << ','
            << format_double(s.rate) << ',' << format_double(s.steady_residual) << '\n';
    }
}

std::string time_label(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

}  // namespace kschemo::harness
