#ifndef HEDRA_RULES_HPP
#define HEDRA_RULES_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hedra/hypergraph.hpp"
#include "hedra/property.hpp"

namespace hedra {

// Local modification rule: training-set size |A| plus one recoloring function
// per edge order.  Each f_j receives the restriction of the input to
// A u (edge vertices), with the training vertices at indices 0..|A|-1 and the
// edge vertices last, ordered as queried.  Because every ordering of an edge
// is recolored from its own pulled-back view, the induced modification map is
// equivariant under vertex relabeling by construction.
class LocalRule {
public:
    using Recolor = std::function<Color(const Hypergraph& view)>;

    LocalRule(Palette palette, int a_size, std::string name);

    const Palette& palette() const { return palette_; }
    int a_size() const { return a_size_; }
    const std::string& name() const { return name_; }

    void set_recolor(int level, Recolor fn);
    Color recolor(int level, const Hypergraph& view) const;

    // optional whole-graph implementation, cross-checked against the generic
    // path in tests; used for large instances
    void set_fast_apply(std::function<Hypergraph(const Hypergraph&)> fn);
    bool has_fast_apply() const { return static_cast<bool>(fast_apply_); }
    Hypergraph fast_apply(const Hypergraph& g) const { return fast_apply_(g); }

private:
    Palette palette_;
    int a_size_;
    std::string name_;
    std::vector<Recolor> recolor_;
    std::function<Hypergraph(const Hypergraph&)> fast_apply_;
};

// T^(V): input on A u V with training vertices first; output on V.
// memoize caches recolor results keyed by the view's canonical encoding.
Hypergraph modification_map(const LocalRule& rule, const Hypergraph& g, bool memoize = true);

// T_phi(G): relabel so phi(A) comes first, apply the modification map; the
// output lives on V \ phi(A) with ascending canonical labels.
Hypergraph apply_rule(const LocalRule& rule, const Hypergraph& g, const Morphism& phi);

struct EntailmentResult {
    std::optional<Hypergraph> counterexample;   // input on A u V
    int counterexample_v = -1;                  // |V| at which it was found
    std::uint64_t checked = 0;
    bool refused = false;                       // enumeration above the ceiling
    std::uint64_t refused_count = 0;
};

// Exhaustively enumerate (or sample) inputs on A u V for |V| = 0..n_max and
// test whether the modified output always obeys p.
EntailmentResult verify_entailment_upto(const LocalRule& rule, const Property& p, int n_max,
                                        std::uint64_t ceiling = 1ull << 26);
EntailmentResult verify_entailment_mc(const LocalRule& rule, const Property& p, int n_max,
                                      std::uint64_t samples, std::uint64_t seed);

// ---- builtin rules ----------------------------------------------------------

// copies every edge color of the input restriction
LocalRule rule_identity_copy(const Palette& palette, int a_size = 0);
// recolors everything to color 0
LocalRule rule_constant_zero(const Palette& palette, int a_size = 0);
// keeps directed edge (v,w) iff G(v,w)=G(w,t)=1 and G(v,t)=0 for training vertex t
LocalRule rule_bipartite_delete();
// best complete-bipartite fit on the training set, then majority classification
LocalRule rule_bipartite_majority(int a_size = 30, std::uint64_t seed = 0);

// order-flavored rules for the obstruction experiments
LocalRule rule_order_rank_majority(int a_size);   // orient by anchor-rank comparison
LocalRule rule_order_edge_vote(int a_size);       // orient by per-pair indicator vote

const std::vector<std::string>& builtin_rule_names();
LocalRule builtin_rule(const std::string& name, const Palette* palette_hint = nullptr,
                       int a_size = 0);

// HGT v1: explicit lookup-table materialization for tiny instances, one line
// per (level, canonical view encoding, output color)
void write_hgt(std::ostream& os, const LocalRule& rule);
LocalRule read_hgt(std::istream& is);
void save_hgt(const std::string& path, const LocalRule& rule);
LocalRule load_hgt(const std::string& path);

} // namespace hedra

#endif
