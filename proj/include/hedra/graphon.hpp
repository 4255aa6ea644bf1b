#ifndef HEDRA_GRAPHON_HPP
#define HEDRA_GRAPHON_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hedra/hypergraph.hpp"

namespace hedra {

// Symmetric edge-probability function on the unit square: a uniform step
// function on an m x m grid, or a registered named callable.
class Graphon {
public:
    static Graphon step(int grid, std::vector<double> values);
    static Graphon callable(std::function<double(double, double)> fn, std::string name = "callable");
    static Graphon named(const std::string& name);   // zero | one | half | complete-bipartite
    static const std::vector<std::string>& named_list();

    double operator()(double x, double y) const;
    bool is_step() const { return grid_ > 0; }
    int grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::string& name() const { return name_; }

private:
    int grid_ = 0;
    std::vector<double> values_;
    std::function<double(double, double)> fn_;
    std::string name_;
};

struct GraphonSample {
    std::vector<double> colors;    // one uniform color per vertex
    Hypergraph graph;              // undirected {0,1}_2
};

GraphonSample sample_graphon_graph(const Graphon& p, int n, std::uint64_t seed);

struct DensityEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

// Monte Carlo estimate of the triangle density integral
DensityEstimate triangle_density(const Graphon& p, std::uint64_t sample_count, std::uint64_t seed);

std::uint64_t count_triangles(const Hypergraph& g);

// N equal cells with one representative each; sigma is the repair threshold
struct CellAssignment {
    int cell_count = 0;
    std::vector<double> zeta;      // zeta[i] in [i/N, (i+1)/N)
    double sigma = 0.0;
};

// sum over ordered distinct vertex triples of p(z_u,z_v) p(z_v,z_w) p(z_w,z_u)
double zeta_triangle_sum(const Graphon& p, const CellAssignment& cells,
                         const std::vector<int>& cell_of);

struct TriangleRepairResult {
    Hypergraph repaired;
    CellAssignment cells;
    std::vector<int> cell_of;
    double edit_fraction = 0.0;
    std::uint64_t residual_triangles = 0;
    double zeta_sum = 0.0;
    std::array<std::uint64_t, 5> clause_counts{};   // keep, drop, add, stay, diagonal
};

// cell-based triangle-free repair: keep a present edge iff the cells differ
// and p(z_i,z_j) >= sigma, add an absent edge iff the cells differ and
// p(z_i,z_j) > 1 - sigma, drop everything else including within-cell edges
TriangleRepairResult repair_triangle_free(const Hypergraph& g, const std::vector<double>& colors,
                                          const Graphon& p, int cell_count, double sigma,
                                          std::uint64_t seed);

// GWN v1 step-function files: `GWN 1`, `m <grid>`, then m rows of m reals
void write_gwn(std::ostream& os, const Graphon& p);
Graphon read_gwn(std::istream& is);
void save_gwn(const std::string& path, const Graphon& p);
Graphon load_gwn(const std::string& path);

} // namespace hedra

#endif
