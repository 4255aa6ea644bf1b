#ifndef HEDRA_PROPERTY_HPP
#define HEDRA_PROPERTY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hedra/hypergraph.hpp"
#include "hedra/random.hpp"

namespace hedra {

// Hereditary property: a finite forbidden induced subhypergraph family, or an
// opaque predicate with a declared hereditary contract (audited, not proven).
class Property {
public:
    static Property forbidden_family(Palette palette, std::string name,
                                     std::vector<Hypergraph> members);
    static Property predicate(Palette palette, std::string name,
                              std::function<bool(const Hypergraph&)> fn);

    const Palette& palette() const { return palette_; }
    const std::string& name() const { return name_; }
    bool is_predicate() const { return static_cast<bool>(fn_); }
    const std::vector<Hypergraph>& family() const { return members_; }

    bool obeys(const Hypergraph& g) const;

private:
    Palette palette_;
    std::string name_;
    std::vector<Hypergraph> members_;   // sorted largest first
    std::function<bool(const Hypergraph&)> fn_;
};

bool obeys(const Property& p, const Hypergraph& g);

// G contains an induced copy of f (pullback along some injection equals f)
bool contains_induced(const Hypergraph& g, const Hypergraph& f);

struct TesterParams {
    int sample_size = 1;            // the N of the local test
    double delta = 0.0;
    double epsilon = 0.0;
    std::uint64_t sample_count = 1; // Monte Carlo repetitions
    std::uint64_t seed = 0;
};

struct SatisfactionEstimate {
    double value = 0.0;
    double std_error = 0.0;         // 0 in exact mode
    std::uint64_t samples = 0;
};

// Fraction of N-vertex subsets whose restriction obeys p.  Exact mode
// enumerates subsets in combinatorial-rank order; Monte Carlo mode draws
// uniform subsets by partial Fisher-Yates shuffle.  thread_count > 1 shards
// the samples deterministically (fixed shard layout, summed counts).
SatisfactionEstimate local_satisfaction_exact(const Property& p, const Hypergraph& g, int N);
SatisfactionEstimate local_satisfaction_mc(const Property& p, const Hypergraph& g, int N,
                                           std::uint64_t sample_count, std::uint64_t seed,
                                           int thread_count = 1);

// Fraction of k-subsets (k = palette order) on which the restrictions differ.
double distance(const Hypergraph& a, const Hypergraph& b);

// Subset of size n_target on which all level-1 colors agree and all level-2
// colors agree; first witness in combinatorial-rank order.
std::optional<std::vector<int>> find_monochromatic(const Hypergraph& g, int n_target);

struct MeetClosedResult {
    std::optional<std::pair<Hypergraph, Hypergraph>> counterexample;
    std::uint64_t pairs_checked = 0;
    bool exhaustive = false;
};

// Search for g, g' obeying p whose meet violates p, on up to `bound` vertices.
// Exhaustive when the obeying-graph count stays within `cap`, otherwise seeded
// random sampling.  undirected_only restricts the searched instances.
MeetClosedResult check_meet_closed(const Property& p, int bound, bool undirected_only,
                                   std::uint64_t seed = 0, std::uint64_t cap = 1u << 26);

// randomized audit of the hereditary contract for predicate properties;
// returns a violating (G, W) restriction if one is found
std::optional<std::pair<Hypergraph, std::vector<int>>>
audit_hereditary(const Property& p, int n, int trials, std::uint64_t seed);

// code-registered properties, addressable by name
const std::vector<std::string>& builtin_property_names();
Property builtin_property(const std::string& name);

// HGP v1: header with palette sizes, then `forbid`/`end` blocks holding
// inline HGR bodies.
void write_hgp(std::ostream& os, const Property& p);
Property read_hgp(std::istream& is);
void save_hgp(const std::string& path, const Property& p);
Property load_hgp(const std::string& path);

// uniform random hypergraph over the palette (every slot independent)
Hypergraph random_hypergraph(const Palette& pal, int n, Rng& rng,
                             Storage storage = Storage::Directed);

// size of the hypergraph space on n vertices, clamped to cap+1 when larger
std::uint64_t hypergraph_space_size(const Palette& pal, int n, Storage storage,
                                    std::uint64_t cap);

// enumerate every hypergraph on n vertices (slot odometer order)
void for_each_hypergraph(const Palette& pal, int n, Storage storage,
                         const std::function<void(const Hypergraph&)>& fn);

} // namespace hedra

#endif
