#include "hedra/repairs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hedra/property.hpp"
#include "hedra/random.hpp"
#include "hedra/rules.hpp"

namespace hedra {

OrderRepairResult repair_total_order(const Hypergraph& g, int train_size, std::uint64_t seed) {
    if (g.palette().order() != 2)
        throw std::invalid_argument("repair_total_order: expects a directed graph");
    const int n = g.size();
    if (train_size < 1 || train_size > n)
        throw std::invalid_argument("repair_total_order: training size out of range");

    Rng rng(seed);
    OrderRepairResult res;
    res.anchors = rng.sample_distinct(n, train_size);
    const auto& anchors = res.anchors;
    const int nt = train_size;

    // rank the training set by its clean below-counts; ties resolved by vertex
    // id so heavily corrupted draws still produce a usable ranking
    std::vector<int> wins(nt, 0);
    bool tournament = true;
    for (int i = 0; i < nt; ++i)
        for (int l = i + 1; l < nt; ++l) {
            const bool il = g.pair_color(anchors[i], anchors[l]) == 1;
            const bool li = g.pair_color(anchors[l], anchors[i]) == 1;
            if (il == li) tournament = false;
            if (il && !li) ++wins[l];
            if (li && !il) ++wins[i];
        }
    {
        std::vector<int> sorted_wins = wins;
        std::sort(sorted_wins.begin(), sorted_wins.end());
        bool distinct = true;
        for (int i = 0; i + 1 < nt; ++i)
            if (sorted_wins[i] == sorted_wins[i + 1]) distinct = false;
        // a tournament with distinct scores 0..nt-1 is a strict total order
        res.training_total_order = tournament && distinct && sorted_wins.front() == 0 &&
                                   sorted_wins.back() == nt - 1;
    }
    std::vector<int> ranked(nt);
    std::iota(ranked.begin(), ranked.end(), 0);
    std::sort(ranked.begin(), ranked.end(), [&](int a, int b) {
        if (wins[a] != wins[b]) return wins[a] < wins[b];
        return anchors[a] < anchors[b];
    });

    std::vector<char> is_anchor(n, 0);
    for (int a : anchors) is_anchor[a] = 1;

    // bucket i collects the vertices the anchors predict between ranked
    // anchor i and i+1; the two indicator families vote and are averaged
    std::vector<std::vector<int>> buckets(nt + 1);
    res.exact_bucket_count = 0;
    for (int v = 0; v < n; ++v) {
        if (is_anchor[v]) continue;
        int below = 0, above = 0;
        for (int a : anchors) {
            if (g.pair_color(a, v) == 1) ++below;
            if (g.pair_color(v, a) == 1) ++above;
        }
        int i = static_cast<int>(std::llround((below + (nt - above)) / 2.0));
        i = std::clamp(i, 0, nt);
        buckets[i].push_back(v);

        // exact membership per the two displayed set equations
        bool exact = true;
        for (int pos = 0; pos < nt && exact; ++pos) {
            const int a = anchors[ranked[pos]];
            const bool av = g.pair_color(a, v) == 1;
            const bool va = g.pair_color(v, a) == 1;
            if (pos < i) exact = av && !va;
            else exact = va && !av;
        }
        if (exact) ++res.exact_bucket_count;
    }

    res.bucket_sizes.reserve(nt + 1);
    for (auto& b : buckets) res.bucket_sizes.push_back(static_cast<int>(b.size()));
    res.leftover_count = 0;                      // count buckets place every vertex
    for (auto& b : buckets) res.order.insert(res.order.end(), b.begin(), b.end());

    // assemble the induced total-order graph on V \ anchors, ascending labels
    const int m = n - nt;
    std::vector<int> kept;
    kept.reserve(m);
    for (int v = 0; v < n; ++v)
        if (!is_anchor[v]) kept.push_back(v);
    std::vector<int> rep_of(n, -1);
    for (int i = 0; i < m; ++i) rep_of[kept[i]] = i;
    std::vector<int> pos(m, 0);
    for (int i = 0; i < m; ++i) pos[rep_of[res.order[i]]] = i;

    Hypergraph out(Palette::monochromatic(2), m, Storage::Directed);
    std::uint64_t diff = 0;
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            if (x == y) continue;
            const Color c = pos[x] < pos[y] ? 1 : 0;
            if (c) out.set_pair_color(x, y, 1);
            if (c != g.pair_color(kept[x], kept[y])) ++diff;
        }
    res.repaired = std::move(out);
    res.edit_fraction =
        m > 1 ? static_cast<double>(diff) / (static_cast<double>(m) * (m - 1)) : 0.0;
    return res;
}

BipartiteRepairResult repair_bipartite(const Hypergraph& g, int a_size, std::uint64_t seed) {
    if (g.palette().order() != 2)
        throw std::invalid_argument("repair_bipartite: expects a graph");
    const int n = g.size();
    if (a_size < 0 || a_size > n)
        throw std::invalid_argument("repair_bipartite: training size out of range");

    Rng rng(seed);
    BipartiteRepairResult res;
    res.anchors = rng.sample_distinct(n, a_size);
    LocalRule rule = rule_bipartite_majority(a_size, mix_seed(seed, 0x9a));
    res.repaired = apply_rule(rule, g, Morphism(n, res.anchors));

    std::vector<char> is_anchor(n, 0);
    for (int a : res.anchors) is_anchor[a] = 1;
    std::vector<int> kept;
    for (int v = 0; v < n; ++v)
        if (!is_anchor[v]) kept.push_back(v);
    res.edit_fraction = distance(res.repaired, g.restrict_to(kept));
    return res;
}

} // namespace hedra
