#ifndef HEDRA_REPAIRS_HPP
#define HEDRA_REPAIRS_HPP

#include <cstdint>
#include <vector>

#include "hedra/hypergraph.hpp"

namespace hedra {

// Non-local repair of a corrupted total ordering: sample a training set,
// rank it, bucket every remaining vertex by the anchors' prediction, and read
// off the induced total order.
struct OrderRepairResult {
    std::vector<int> anchors;            // sampled training vertices, draw order
    std::vector<int> order;              // kept vertices (original ids), smallest first
    Hypergraph repaired;                 // total-order graph on V \ anchors
    double edit_fraction = 0.0;          // ordered pairs where repaired differs from the input
    std::vector<int> bucket_sizes;       // one per bucket 0..N'
    int leftover_count = 0;              // vertices in no bucket
    int exact_bucket_count = 0;          // vertices matching the exact membership equations
    bool training_total_order = false;   // sampled restriction was a strict total order
};

OrderRepairResult repair_total_order(const Hypergraph& g, int train_size, std::uint64_t seed);

struct BipartiteRepairResult {
    std::vector<int> anchors;
    Hypergraph repaired;
    double edit_fraction = 0.0;          // distance to the input restriction
};

BipartiteRepairResult repair_bipartite(const Hypergraph& g, int a_size, std::uint64_t seed);

} // namespace hedra

#endif
