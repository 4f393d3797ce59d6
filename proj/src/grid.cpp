#include "radon/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace radon {

std::size_t GridSpec::size() const {
    std::size_t s = 1;
    for (const auto& a : axes) s *= static_cast<std::size_t>(a.res);
    return s;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (const auto& a : axes) v *= a.h();
    return v;
}

std::size_t GridSpec::flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (std::size_t d = 0; d < axes.size(); ++d)
        f = f * static_cast<std::size_t>(axes[d].res) + static_cast<std::size_t>(idx[d]);
    return f;
}

std::vector<int> GridSpec::unflat(std::size_t flat_idx) const {
    std::vector<int> idx(axes.size());
    for (std::size_t d = axes.size(); d-- > 0;) {
        idx[d] = static_cast<int>(flat_idx % static_cast<std::size_t>(axes[d].res));
        flat_idx /= static_cast<std::size_t>(axes[d].res);
    }
    return idx;
}

std::vector<double> GridSpec::node(std::size_t flat_idx) const {
    std::vector<int> idx = unflat(flat_idx);
    std::vector<double> p(axes.size());
    for (std::size_t d = 0; d < axes.size(); ++d) p[d] = axes[d].node(idx[d]);
    return p;
}

bool GridSpec::contains(const std::vector<double>& p) const {
    for (std::size_t d = 0; d < axes.size(); ++d)
        if (p[d] < axes[d].lo || p[d] > axes[d].hi) return false;
    return true;
}

double GridFn::interp(const std::vector<double>& p) const {
    const auto& axes = spec.axes;
    std::size_t dims = axes.size();
    // per-axis cell pair and weight
    std::vector<int> i0(dims);
    std::vector<double> w1(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        double u = (p[d] - axes[d].lo) / axes[d].h() - 0.5;
        double fl = std::floor(u);
        int i = static_cast<int>(fl);
        double frac = u - fl;
        if (i < 0) {
            i = 0;
            frac = 0.0;
        }
        if (i >= axes[d].res - 1) {
            i = axes[d].res - 2;
            frac = 1.0;
            if (axes[d].res == 1) {
                i = 0;
                frac = 0.0;
            }
        }
        i0[d] = i;
        w1[d] = frac;
    }
    double acc = 0.0;
    std::size_t corners = static_cast<std::size_t>(1) << dims;
    std::vector<int> idx(dims);
    for (std::size_t c = 0; c < corners; ++c) {
        double w = 1.0;
        for (std::size_t d = 0; d < dims; ++d) {
            bool hi = (c >> d) & 1;
            if (axes[d].res == 1 && hi) {
                w = 0.0;
                break;
            }
            idx[d] = i0[d] + (hi ? 1 : 0);
            w *= hi ? w1[d] : (1.0 - w1[d]);
        }
        if (w != 0.0) acc += w * v[spec.flat(idx)];
    }
    return acc;
}

void GridFn::scatter(const std::vector<double>& p, double weight) {
    const auto& axes = spec.axes;
    std::size_t dims = axes.size();
    std::vector<int> i0(dims);
    std::vector<double> w1(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        double u = (p[d] - axes[d].lo) / axes[d].h() - 0.5;
        double fl = std::floor(u);
        int i = static_cast<int>(fl);
        double frac = u - fl;
        if (i < 0) {
            i = 0;
            frac = 0.0;
        }
        if (i >= axes[d].res - 1) {
            i = axes[d].res - 2;
            frac = 1.0;
            if (axes[d].res == 1) {
                i = 0;
                frac = 0.0;
            }
        }
        i0[d] = i;
        w1[d] = frac;
    }
    std::size_t corners = static_cast<std::size_t>(1) << dims;
    std::vector<int> idx(dims);
    for (std::size_t c = 0; c < corners; ++c) {
        double w = weight;
        for (std::size_t d = 0; d < dims; ++d) {
            bool hi = (c >> d) & 1;
            if (axes[d].res == 1 && hi) {
                w = 0.0;
                break;
            }
            idx[d] = i0[d] + (hi ? 1 : 0);
            w *= hi ? w1[d] : (1.0 - w1[d]);
        }
        if (w != 0.0) v[spec.flat(idx)] += w;
    }
}

void write_grid_dump(std::ostream& os, const GridDump& dump) {
    os << "radon-grid v1\n";
    os << "kind " << dump.kind << "\n";
    for (const auto& [k, val] : dump.meta) os << k << " " << val << "\n";
    os << "axes " << dump.spec.axes.size() << "\n";
    os.precision(17);
    for (const auto& a : dump.spec.axes) os << "axis " << a.lo << " " << a.hi << " " << a.res << "\n";
    os << "values " << dump.values.size() << "\n";
    for (std::size_t i = 0; i < dump.values.size(); ++i) {
        os << dump.values[i];
        os << (((i + 1) % 8 == 0) ? '\n' : ' ');
    }
    if (dump.values.size() % 8 != 0) os << '\n';
}

GridDump read_grid_dump(std::istream& is) {
    GridDump dump;
    std::string line;
    if (!std::getline(is, line) || line != "radon-grid v1")
        throw std::runtime_error("grid dump: bad magic line");
    std::size_t nvalues = 0;
    bool have_values = false;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key.empty()) continue;
        if (key == "kind") {
            ls >> dump.kind;
        } else if (key == "axes") {
            std::size_t n;
            ls >> n;
            dump.spec.axes.reserve(n);
        } else if (key == "axis") {
            GridAxis a;
            ls >> a.lo >> a.hi >> a.res;
            if (!ls || a.res <= 0) throw std::runtime_error("grid dump: bad axis line");
            dump.spec.axes.push_back(a);
        } else if (key == "values") {
            ls >> nvalues;
            have_values = true;
            break;
        } else {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
            dump.meta[key] = rest;
        }
    }
    if (!have_values) throw std::runtime_error("grid dump: missing values section");
    if (nvalues != dump.spec.size()) throw std::runtime_error("grid dump: value count mismatch");
    dump.values.resize(nvalues);
    for (std::size_t i = 0; i < nvalues; ++i)
        if (!(is >> dump.values[i])) throw std::runtime_error("grid dump: truncated values");
    return dump;
}

void write_grid_dump_file(const std::string& path, const GridDump& dump) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_grid_dump(os, dump);
}

GridDump read_grid_dump_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_grid_dump(is);
}

}  // namespace radon
