#ifndef HEDRA_OBSTRUCTIONS_HPP
#define HEDRA_OBSTRUCTIONS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hedra/hypergraph.hpp"
#include "hedra/property.hpp"
#include "hedra/rules.hpp"

namespace hedra {

struct CorruptionSpec {
    int m = 2;                  // uncorrupted instance size parameter
    double sigma = 0.0;         // per-edge flip probability
    std::uint64_t seed = 0;

    void validate() const;
};

struct ObstructionReport {
    enum class Kind { Pair, Quad, Nine };
    Kind kind = Kind::Pair;
    std::vector<int> witness;               // vertex ids in the input graph
    std::vector<int> anchors;               // phi(A)
    std::vector<std::string> checked_conditions;
};

std::string to_text(const ObstructionReport& report);

struct SearchOutcome {
    std::optional<ObstructionReport> report;
    std::uint64_t probes = 0;
    bool budget_exhausted = false;
};

// ---- generators (deterministic functions of m, sigma, seed) ----------------

// directed total ordering on [m] plus its corruption; G encodes v<w by
// G_2(v,w)=1, each ordered indicator flipped independently with prob sigma
std::pair<Hypergraph, Hypergraph> gen_corrupted_order(const CorruptionSpec& spec);

// palette (pt,{0,1},{0,1},{0,1}) on [m], m even: first m/2 vertices blue,
// uniform random 2-edges, 3-edges from the like/prefer clauses; only the
// 3-subsets are corrupted
std::pair<Hypergraph, Hypergraph> gen_leq3(const CorruptionSpec& spec);

// 3-uniform encoding on [2m]: greens on top of the leq3 instance
std::pair<Hypergraph, Hypergraph> gen_3uniform(const CorruptionSpec& spec);

// ---- searches ---------------------------------------------------------------

// distinct v1,v2 outside the anchors whose joint view with the anchors is
// invariant under swapping them; bucket by anchor signature, scan in index order
std::optional<std::pair<int, int>> find_indistinguishable_pair(const Hypergraph& g,
                                                               const std::vector<int>& anchors);

struct DefeatReport {
    ObstructionReport obstruction;
    Color output_forward = 0;           // rule output on the pair, both orders
    Color output_backward = 0;
    bool output_symmetric = false;
    bool violates_total_order = false;  // confirmed on the repaired graph
};

// find an indistinguishable pair, apply the rule, confirm the repaired graph
// cannot be a total order
std::optional<DefeatReport> defeat_rule_order(const Hypergraph& g, const LocalRule& rule,
                                              const Morphism& phi);

// inconsistent quadruplet (r1,r2,b1,b2) per the leq3 construction; g is the
// corrupted input on V, repaired the rule output on V \ anchors (ascending
// relabel).  Bucketing by anchor connectivity, seeded sampling, probe budget.
SearchOutcome find_inconsistent_quad(const Hypergraph& g, const Hypergraph& repaired,
                                     const std::vector<int>& anchors, std::uint64_t budget,
                                     std::uint64_t seed);

// inconsistent 9-tuple (r1,r2,r3,b1,b2,g1,g2,g3,g4) for the 3-uniform encoding
SearchOutcome find_inconsistent_nine(const Hypergraph& g, const Hypergraph& repaired,
                                     const std::vector<int>& anchors, std::uint64_t budget,
                                     std::uint64_t seed);

// independent clause checkers used to validate every reported witness
bool check_quad_clauses(const Hypergraph& g, const Hypergraph& repaired,
                        const std::vector<int>& anchors, const std::vector<int>& quad,
                        std::vector<std::string>* satisfied = nullptr);
bool check_nine_clauses(const Hypergraph& g, const Hypergraph& repaired,
                        const std::vector<int>& anchors, const std::vector<int>& nine,
                        std::vector<std::string>* satisfied = nullptr);

// ---- derived vertex relations (3-uniform encoding) ---------------------------

struct DerivedRelations {
    std::vector<char> green;                  // has a completing tetrahedron
    std::vector<char> nongreen;               // excluded by some green pair
    std::vector<std::vector<char>> likes;     // symmetric
    std::vector<std::vector<char>> dislikes;  // symmetric
    std::vector<std::vector<char>> similar;
    std::vector<char> ranker;                 // is in some 3-edge with a similar pair
    bool prefers(const Hypergraph& g, int r, int b, int b2) const;
    // b ranks above b' through r's eyes: either r prefers b and the triple is
    // present, or r prefers b' and it is absent.  The absent-triple clause
    // only counts for vertices that rank some similar pair at all; without
    // that, vertices on the ranked side would impose arbitrary orderings on
    // the ranking side purely through edges that never occur.
    bool ranks_above(const Hypergraph& g, int r, int b, int b2) const;
};

DerivedRelations derive_relations(const Hypergraph& g);

struct OrderabilityResult {
    bool orderable = false;
    std::vector<int> order;        // total order witness, greatest first
    std::vector<int> cycle;        // constraint cycle witness when not orderable
};

// constraint digraph from the ranking relations; topological order or cycle
OrderabilityResult is_consistently_orderable(const Hypergraph& g);

// ranking constraints b > b' extracted from either supported encoding
std::vector<std::pair<int, int>> ranking_constraints(const Hypergraph& g);

// builtin-property factories (registered by name in the property module)
Property consistent_order_leq3_property();
Property consistent_order_3uniform_property();

// palettes of the two encodings
Palette leq3_palette();        // (pt, {0,1}, {0,1}, {0,1})
Palette uniform3_palette();    // {0,1}_3

} // namespace hedra

#endif
