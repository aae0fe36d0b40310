#include "ymflow/grid.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <vector>

namespace ymflow {

void RadialGrid::validate() const {
    if (dimension < 3) throw std::invalid_argument("RadialGrid: dimension must be >= 3");
    if (nodes.size() < 3) throw std::invalid_argument("RadialGrid: need at least 3 nodes");
    if (nodes[0] != 0.0) throw std::invalid_argument("RadialGrid: first node must be 0");
    for (int i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("RadialGrid: nodes must be strictly increasing");
}

RadialGrid RadialGrid::graded(int dimension, double r_core, double h0,
                              double stretch, double r_max) {
    if (!(h0 > 0.0) || !(stretch >= 1.0) || !(r_max > r_core) || !(r_core > 0.0))
        throw std::invalid_argument("RadialGrid::graded: bad parameters");
    std::vector<double> pts{0.0};
    double r = 0.0, h = h0;
    while (r < r_core) {
        r += h0;
        pts.push_back(r);
    }
    while (r < r_max) {
        h *= stretch;
        r += h;
        pts.push_back(r);
    }
    pts.back() = r_max;
    RadialGrid g;
    g.dimension = dimension;
    g.nodes = Eigen::Map<const Eigen::ArrayXd>(pts.data(), pts.size());
    g.validate();
    return g;
}

RadialGrid RadialGrid::uniform(int dimension, int count, double r_max) {
    RadialGrid g;
    g.dimension = dimension;
    g.nodes = Eigen::ArrayXd::LinSpaced(count, 0.0, r_max);
    g.validate();
    return g;
}

double RadialProfile::interpolate(double r) const {
    const auto& x = grid.nodes;
    const int n = grid.size();
    if (r <= x[0]) return values[0];
    if (r >= x[n - 1]) return values[n - 1];
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (x[mid] <= r ? lo : hi) = mid;
    }
    const double w = (r - x[lo]) / (x[lo + 1] - x[lo]);
    return (1.0 - w) * values[lo] + w * values[lo + 1];
}

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void RadialProfile::write_csv(std::ostream& os) const {
    os << "r,value\n";
    for (int i = 0; i < grid.size(); ++i)
        os << format_full(grid.nodes[i]) << ',' << format_full(values[i]) << '\n';
}

void RadialProfile::write_csv_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_csv(os);
}

}  // namespace ymflow
