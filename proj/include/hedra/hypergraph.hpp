#ifndef HEDRA_HYPERGRAPH_HPP
#define HEDRA_HYPERGRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hedra/morphism.hpp"
#include "hedra/palette.hpp"

namespace hedra {

// ---- combinatorics helpers ----------------------------------------------

std::uint64_t binom(std::uint64_t n, int k);
std::uint64_t falling_factorial(std::uint64_t n, int k);        // n!/(n-k)!

// Ordered j-tuples of distinct vertices of 0..n-1, lexicographic on the tuple.
// Visitor receives a span valid only during the call.
template <class F>
void for_each_injection(int j, int n, F&& fn) {
    if (j > n) return;
    std::vector<int> t(j);
    std::vector<char> used(n, 0);
    // recursive lexicographic enumeration, j is small
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == j) {
            fn(std::span<const int>(t.data(), t.size()));
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            t[pos] = v;
            self(self, pos + 1);
            used[v] = 0;
        }
    };
    rec(rec, 0);
}

std::vector<std::vector<int>> all_injections(int j, int n);

// k-subsets of 0..n-1 in combinatorial-rank (colex) order.
template <class F>
void for_each_subset(int n, int k, F&& fn) {
    if (k > n || k < 0) return;
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    while (true) {
        fn(std::span<const int>(c.data(), c.size()));
        int i = 0;
        while (i < k) {
            int limit = (i + 1 < k) ? c[i + 1] : n;
            if (c[i] + 1 < limit) break;
            ++i;
        }
        if (i == k) return;
        ++c[i];
        for (int l = 0; l < i; ++l) c[l] = l;
    }
}

std::uint64_t subset_rank(std::span<const int> sorted_subset);   // colex rank
int permutation_rank(std::span<const int> tuple);                // Lehmer index among orderings

// ---- hypergraph -----------------------------------------------------------

enum class Storage { Directed, Undirected };

// Assignment of a K_j color to every ordered j-tuple of distinct vertices,
// 0 <= j <= order.  Level-j colors are stored per unordered subset in a block
// of j! slots indexed by permutation rank; undirected storage shares one slot
// per subset behind the same interface.  Treat as immutable once filled.
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(Palette palette, int n, Storage storage = Storage::Directed);

    const Palette& palette() const { return palette_; }
    int size() const { return n_; }
    Storage storage() const { return storage_; }
    bool undirected_storage() const { return storage_ == Storage::Undirected; }

    Color color0() const { return color0_; }
    void set_color0(Color c);

    Color color(std::span<const int> tuple) const;
    void set_color(std::span<const int> tuple, Color c);
    Color color(int v, int w) const { int t[2] = {v, w}; return color(t); }
    Color color(int u, int v, int w) const { int t[3] = {u, v, w}; return color(t); }

    // single slot of an unordered subset; valid for undirected storage
    Color subset_color(std::span<const int> sorted_subset) const;

    // unchecked fast paths for hot loops (distinct in-range vertices assumed)
    Color pair_color(int v, int w) const {
        const auto& d = levels_[1];
        std::uint64_t r = (v < w) ? pair_rank(v, w) : pair_rank(w, v);
        if (storage_ == Storage::Undirected) return d[r];
        return d[r * 2 + (v > w ? 1 : 0)];
    }
    void set_pair_color(int v, int w, Color c) {
        auto& d = levels_[1];
        std::uint64_t r = (v < w) ? pair_rank(v, w) : pair_rank(w, v);
        if (storage_ == Storage::Undirected) { d[r] = c; return; }
        d[r * 2 + (v > w ? 1 : 0)] = c;
    }
    Color triple_color(int u, int v, int w) const {
        if (storage_ == Storage::Undirected) return levels_[2][triple_rank(u, v, w)];
        int t[3] = {u, v, w};
        return levels_[2][slot_index(t)];
    }
    void set_triple_color(int u, int v, int w, Color c) {
        if (storage_ == Storage::Undirected) { levels_[2][triple_rank(u, v, w)] = c; return; }
        int t[3] = {u, v, w};
        levels_[2][slot_index(t)] = c;
    }

    static std::uint64_t pair_rank(int lo, int hi) {
        return static_cast<std::uint64_t>(hi) * (hi - 1) / 2 + lo;
    }
    static std::uint64_t triple_rank(int a, int b, int c) {
        // sorts its arguments
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        std::uint64_t hb = b, hc = c;
        return static_cast<std::uint64_t>(a) + hb * (hb - 1) / 2 + hc * (hc - 1) * (hc - 2) / 6;
    }

    bool is_undirected() const;                 // all orderings agree everywhere

    Hypergraph pullback(const Morphism& phi) const;
    Hypergraph restrict_to(std::vector<int> vertices) const;

    bool operator==(const Hypergraph& o) const;
    bool operator!=(const Hypergraph& o) const { return !(*this == o); }

    // colors in (j, subset rank, permutation rank) order; storage-independent
    std::string canonical_key() const;

    // raw level access (serialization / fast paths)
    const std::vector<Color>& level_data(int j) const { return levels_[j - 1]; }
    std::vector<Color>& level_data(int j) { return levels_[j - 1]; }
    std::size_t slot_index(std::span<const int> tuple) const;

private:
    void check_tuple(std::span<const int> tuple) const;

    Palette palette_;
    int n_ = 0;
    Storage storage_ = Storage::Directed;
    Color color0_ = 0;
    std::vector<std::vector<Color>> levels_;   // levels_[j-1] for j = 1..order
};

// pointwise color meet per the palette's semilattices
Hypergraph meet(const Hypergraph& a, const Hypergraph& b);

// G_1 injective on the tuple's vertices
bool is_partite_edge(const Hypergraph& g, std::span<const int> tuple);

// equal vertex colors and equal colors on every partite edge
bool partite_equivalent(const Hypergraph& a, const Hypergraph& b);

} // namespace hedra

#endif
