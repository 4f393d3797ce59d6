#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace radon {

/// Uniform midpoint grid on a box: axis i has res cells of width (hi-lo)/res,
/// nodes at cell centers. Midpoint nodes never hit coordinate axes.
struct GridAxis {
    double lo = -1.0;
    double hi = 1.0;
    int res = 64;

    double h() const { return (hi - lo) / res; }
    double node(int i) const { return lo + (i + 0.5) * h(); }

    bool operator==(const GridAxis&) const = default;
};

struct GridSpec {
    std::vector<GridAxis> axes;

    int dims() const { return static_cast<int>(axes.size()); }
    std::size_t size() const;
    double cell_volume() const;

    /// Row-major flat index of the node with per-axis indices `idx`.
    std::size_t flat(const std::vector<int>& idx) const;
    std::vector<int> unflat(std::size_t flat_idx) const;
    std::vector<double> node(std::size_t flat_idx) const;

    bool contains(const std::vector<double>& p) const;

    bool operator==(const GridSpec&) const = default;
};

/// Sampled function on a grid.
struct GridFn {
    GridSpec spec;
    std::vector<double> v;

    static GridFn zeros(const GridSpec& s) { return GridFn{s, std::vector<double>(s.size(), 0.0)}; }

    /// Multilinear interpolation; clamps to the boundary cell.
    double interp(const std::vector<double>& p) const;

    /// Adjoint of interp: scatter weight w onto the interpolation stencil at p.
    void scatter(const std::vector<double>& p, double w);
};

/// Self-describing text dump shared by kernels and grid functions.
/// Header lines are "key value" pairs; the header ends with "values <count>"
/// followed by whitespace-separated samples in row-major order.
struct GridDump {
    std::string kind = "function";          // "function" or "kernel"
    std::map<std::string, std::string> meta;  // N, nu, e, a, J for kernels
    GridSpec spec;
    std::vector<double> values;
};

void write_grid_dump(std::ostream& os, const GridDump& dump);
GridDump read_grid_dump(std::istream& is);
void write_grid_dump_file(const std::string& path, const GridDump& dump);
GridDump read_grid_dump_file(const std::string& path);

}  // namespace radon
