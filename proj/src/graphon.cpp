#include "hedra/graphon.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hedra/io.hpp"
#include "hedra/property.hpp"
#include "hedra/random.hpp"

namespace hedra {

Graphon Graphon::step(int grid, std::vector<double> values) {
    if (grid < 1) throw std::invalid_argument("Graphon: grid must be positive");
    if (static_cast<std::size_t>(grid) * grid != values.size())
        throw std::invalid_argument("Graphon: value count does not match grid");
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("Graphon: value outside [0,1]");
    for (int i = 0; i < grid; ++i)
        for (int l = i + 1; l < grid; ++l)
            if (values[static_cast<std::size_t>(i) * grid + l] !=
                values[static_cast<std::size_t>(l) * grid + i])
                throw std::invalid_argument("Graphon: step grid not symmetric");
    Graphon g;
    g.grid_ = grid;
    g.values_ = std::move(values);
    g.name_ = "step";
    return g;
}

Graphon Graphon::callable(std::function<double(double, double)> fn, std::string name) {
    Graphon g;
    g.fn_ = std::move(fn);
    g.name_ = std::move(name);
    return g;
}

Graphon Graphon::named(const std::string& name) {
    if (name == "zero") return callable([](double, double) { return 0.0; }, name);
    if (name == "one") return callable([](double, double) { return 1.0; }, name);
    if (name == "half") return callable([](double, double) { return 0.5; }, name);
    if (name == "complete-bipartite")
        return callable([](double x, double y) { return (x < 0.5) != (y < 0.5) ? 1.0 : 0.0; },
                        name);
    throw std::invalid_argument("unknown named graphon: " + name);
}

const std::vector<std::string>& Graphon::named_list() {
    static const std::vector<std::string> names = {"zero", "one", "half", "complete-bipartite"};
    return names;
}

double Graphon::operator()(double x, double y) const {
    if (grid_ == 0) return fn_(x, y);
    auto cell = [&](double t) {
        int c = static_cast<int>(t * grid_);
        if (c < 0) c = 0;
        if (c >= grid_) c = grid_ - 1;     // half-open cells, 1.0 maps to the last
        return c;
    };
    return values_[static_cast<std::size_t>(cell(x)) * grid_ + cell(y)];
}

GraphonSample sample_graphon_graph(const Graphon& p, int n, std::uint64_t seed) {
    Rng rng(seed);
    GraphonSample s;
    s.colors.resize(n);
    for (auto& c : s.colors) c = rng.unit();
    s.graph = Hypergraph(Palette::monochromatic(2), n, Storage::Undirected);
    for (int v = 0; v < n; ++v)
        for (int w = v + 1; w < n; ++w)
            if (rng.bernoulli(p(s.colors[v], s.colors[w]))) s.graph.set_pair_color(v, w, 1);
    return s;
}

DensityEstimate triangle_density(const Graphon& p, std::uint64_t sample_count,
                                 std::uint64_t seed) {
    if (sample_count < 1) throw std::invalid_argument("triangle_density: no samples");
    Rng rng(seed);
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t i = 0; i < sample_count; ++i) {
        const double x = rng.unit(), y = rng.unit(), z = rng.unit();
        const double t = p(x, y) * p(y, z) * p(z, x);
        sum += t;
        sumsq += t * t;
    }
    const double mean = sum / static_cast<double>(sample_count);
    double var = sumsq / static_cast<double>(sample_count) - mean * mean;
    if (var < 0.0) var = 0.0;
    return {mean, std::sqrt(var / static_cast<double>(sample_count)), sample_count};
}

std::uint64_t count_triangles(const Hypergraph& g) {
    const int n = g.size();
    const int words = (n + 63) / 64;
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(n) * words, 0);
    for (int v = 0; v < n; ++v)
        for (int w = v + 1; w < n; ++w)
            if (g.pair_color(v, w) != 0 || g.pair_color(w, v) != 0) {
                adj[static_cast<std::size_t>(v) * words + w / 64] |= 1ull << (w % 64);
                adj[static_cast<std::size_t>(w) * words + v / 64] |= 1ull << (v % 64);
            }
    std::uint64_t count = 0;
    for (int v = 0; v < n; ++v)
        for (int w = v + 1; w < n; ++w) {
            if (!(adj[static_cast<std::size_t>(v) * words + w / 64] >> (w % 64) & 1)) continue;
            // common neighbours above w
            for (int k = w / 64; k < words; ++k) {
                std::uint64_t bits = adj[static_cast<std::size_t>(v) * words + k] &
                                     adj[static_cast<std::size_t>(w) * words + k];
                if (k == w / 64) bits &= ~((2ull << (w % 64)) - 1);
                count += __builtin_popcountll(bits);
            }
        }
    return count;
}

double zeta_triangle_sum(const Graphon& p, const CellAssignment& cells,
                         const std::vector<int>& cell_of) {
    const int nc = cells.cell_count;
    if (static_cast<int>(cells.zeta.size()) != nc)
        throw std::invalid_argument("zeta_triangle_sum: malformed cell assignment");
    std::vector<double> cnt(nc, 0.0);
    for (int c : cell_of) {
        if (c < 0 || c >= nc) throw std::invalid_argument("zeta_triangle_sum: cell out of range");
        cnt[c] += 1.0;
    }
    std::vector<double> pm(static_cast<std::size_t>(nc) * nc);
    for (int i = 0; i < nc; ++i)
        for (int l = 0; l < nc; ++l)
            pm[static_cast<std::size_t>(i) * nc + l] = p(cells.zeta[i], cells.zeta[l]);
    auto f = [&](int i, int j, int k) {
        return pm[static_cast<std::size_t>(i) * nc + j] * pm[static_cast<std::size_t>(j) * nc + k] *
               pm[static_cast<std::size_t>(k) * nc + i];
    };
    // ordered distinct triples via inclusion-exclusion over coincidences
    double all = 0.0, b1 = 0.0, b2 = 0.0, b3 = 0.0, eq = 0.0;
    for (int i = 0; i < nc; ++i) {
        if (cnt[i] == 0.0) continue;
        for (int j = 0; j < nc; ++j) {
            if (cnt[j] == 0.0) continue;
            b1 += cnt[i] * cnt[j] * f(i, i, j);
            b2 += cnt[i] * cnt[j] * f(i, j, i);
            b3 += cnt[i] * cnt[j] * f(i, j, j);
            for (int k = 0; k < nc; ++k) {
                if (cnt[k] == 0.0) continue;
                all += cnt[i] * cnt[j] * cnt[k] * f(i, j, k);
            }
        }
        eq += cnt[i] * f(i, i, i);
    }
    return all - b1 - b2 - b3 + 2.0 * eq;
}

TriangleRepairResult repair_triangle_free(const Hypergraph& g, const std::vector<double>& colors,
                                          const Graphon& p, int cell_count, double sigma,
                                          std::uint64_t seed) {
    if (!(sigma > 0.0 && sigma < 0.5))
        throw std::invalid_argument("repair_triangle_free: sigma outside (0, 1/2)");
    if (cell_count < 1) throw std::invalid_argument("repair_triangle_free: no cells");
    const int n = g.size();
    if (static_cast<int>(colors.size()) != n)
        throw std::invalid_argument("repair_triangle_free: one color per vertex required");

    Rng rng(seed);
    TriangleRepairResult res;
    res.cells.cell_count = cell_count;
    res.cells.sigma = sigma;
    res.cells.zeta.resize(cell_count);
    for (int i = 0; i < cell_count; ++i)
        res.cells.zeta[i] = (i + rng.unit()) / cell_count;
    res.cell_of.resize(n);
    for (int v = 0; v < n; ++v) {
        int c = static_cast<int>(colors[v] * cell_count);
        res.cell_of[v] = std::min(std::max(c, 0), cell_count - 1);
    }

    res.repaired = Hypergraph(g.palette(), n, Storage::Undirected);
    for (int v = 0; v < n; ++v)
        for (int w = v + 1; w < n; ++w) {
            const bool present = g.pair_color(v, w) != 0;
            const int ci = res.cell_of[v], cj = res.cell_of[w];
            if (ci == cj) {
                ++res.clause_counts[4];            // diagonal: always excluded
                continue;
            }
            const double pv = p(res.cells.zeta[ci], res.cells.zeta[cj]);
            if (present) {
                if (pv >= sigma) {
                    res.repaired.set_pair_color(v, w, 1);
                    ++res.clause_counts[0];
                } else {
                    ++res.clause_counts[1];
                }
            } else {
                if (pv > 1.0 - sigma) {
                    res.repaired.set_pair_color(v, w, 1);
                    ++res.clause_counts[2];
                } else {
                    ++res.clause_counts[3];
                }
            }
        }
    res.edit_fraction = distance(res.repaired, g);
    res.residual_triangles = count_triangles(res.repaired);
    res.zeta_sum = zeta_triangle_sum(p, res.cells, res.cell_of);
    return res;
}

// ---- GWN ---------------------------------------------------------------------

void write_gwn(std::ostream& os, const Graphon& p) {
    if (!p.is_step()) throw std::invalid_argument("GWN: only step graphons are serializable");
    os << "GWN 1\n";
    os << "m " << p.grid() << "\n";
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int i = 0; i < p.grid(); ++i) {
        for (int l = 0; l < p.grid(); ++l) {
            if (l) os << ' ';
            os << p.values()[static_cast<std::size_t>(i) * p.grid() + l];
        }
        os << "\n";
    }
}

Graphon read_gwn(std::istream& is) {
    std::string line;
    auto next = [&](std::string& out) -> bool {
        while (std::getline(is, line)) {
            std::string s = line;
            if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
            while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
            if (!s.empty()) { out = s; return true; }
        }
        return false;
    };
    std::string cur;
    if (!next(cur) || cur != "GWN 1") throw FormatError("GWN: bad magic line");
    if (!next(cur)) throw FormatError("GWN: missing grid line");
    std::istringstream ms(cur);
    std::string key;
    int grid = 0;
    ms >> key >> grid;
    if (key != "m" || grid < 1) throw FormatError("GWN: bad grid line");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(grid) * grid);
    for (int i = 0; i < grid; ++i) {
        if (!next(cur)) throw FormatError("GWN: truncated grid");
        std::istringstream rs(cur);
        for (int l = 0; l < grid; ++l) {
            double v;
            if (!(rs >> v)) throw FormatError("GWN: short row");
            values.push_back(v);
        }
    }
    try {
        return Graphon::step(grid, std::move(values));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("GWN: ") + e.what());
    }
}

void save_gwn(const std::string& path, const Graphon& p) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open for writing: " + path);
    write_gwn(os, p);
}

Graphon load_gwn(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open for reading: " + path);
    return read_gwn(is);
}

} // namespace hedra
