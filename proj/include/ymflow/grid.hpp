#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace ymflow {

// Radial mesh in n dimensions: strictly increasing nodes starting at 0,
// uniform near the origin, geometrically stretched outward.
struct RadialGrid {
    int dimension = 6;
    Eigen::ArrayXd nodes;

    int size() const { return static_cast<int>(nodes.size()); }
    double r_max() const { return nodes[nodes.size() - 1]; }

    void validate() const;

    // Uniform spacing h0 on [0, r_core], then spacing grows by `stretch`
    // per interval until r_max is reached.
    static RadialGrid graded(int dimension, double r_core, double h0,
                             double stretch, double r_max);

    // Uniform grid with `count` nodes on [0, r_max].
    static RadialGrid uniform(int dimension, int count, double r_max);
};

// Scalar field sampled on a RadialGrid at a given flow time.
struct RadialProfile {
    RadialGrid grid;
    Eigen::ArrayXd values;
    double time = 0.0;

    RadialProfile() = default;
    RadialProfile(RadialGrid g, double t = 0.0)
        : grid(std::move(g)), values(Eigen::ArrayXd::Zero(grid.size())), time(t) {}

    template <class F>
    static RadialProfile sample(RadialGrid g, const F& f, double t = 0.0) {
        RadialProfile p(std::move(g), t);
        for (int i = 0; i < p.grid.size(); ++i) p.values[i] = f(p.grid.nodes[i]);
        return p;
    }

    // Linear interpolation; clamps outside the grid range.
    double interpolate(double r) const;

    // CSV with header `r,value`, 17 significant digits.
    void write_csv(std::ostream& os) const;
    void write_csv_file(const std::string& path) const;
};

// 17-significant-digit decimal form that round-trips a double exactly.
std::string format_full(double x);

}  // namespace ymflow
