#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "hedra/hypergraph.hpp"
#include "hedra/property.hpp"
#include "hedra/random.hpp"

using namespace hedra;

namespace {

Palette order3_palette() { return Palette({1, 3, 2, 2}); }

Hypergraph random_graph(const Palette& pal, int n, std::uint64_t seed,
                        Storage st = Storage::Directed) {
    Rng rng(seed);
    return random_hypergraph(pal, n, rng, st);
}

// brute-force pullback working straight off color queries, independent of
// Hypergraph::pullback
Hypergraph naive_pullback(const Hypergraph& g, const Morphism& phi) {
    Hypergraph out(g.palette(), phi.source_size, Storage::Directed);
    out.set_color0(g.color0());
    for (int j = 1; j <= g.palette().order(); ++j) {
        if (g.palette().size(j) == 1) continue;
        for (const auto& t : all_injections(j, phi.source_size)) {
            std::vector<int> mapped(j);
            for (int i = 0; i < j; ++i) mapped[i] = phi(t[i]);
            out.set_color(t, g.color(mapped));
        }
    }
    return out;
}

} // namespace

TEST_CASE("injection enumeration counts and order") {
    // oracle: filter all n^j tuples for distinctness, lexicographic
    for (int n : {0, 1, 3, 5, 7}) {
        for (int j = 0; j <= 3; ++j) {
            std::vector<std::vector<int>> expect;
            std::vector<int> t(j);
            auto rec = [&](auto&& self, int pos) -> void {
                if (pos == j) {
                    std::set<int> s(t.begin(), t.end());
                    if (static_cast<int>(s.size()) == j) expect.push_back(t);
                    return;
                }
                for (int v = 0; v < n; ++v) {
                    t[pos] = v;
                    self(self, pos + 1);
                }
            };
            rec(rec, 0);
            std::sort(expect.begin(), expect.end());
            auto got = all_injections(j, n);
            CHECK(got == expect);
            CHECK(got.size() == (j <= n ? falling_factorial(n, j) : 0));
        }
    }
    CHECK(all_injections(0, 5).size() == 1);               // the unique empty tuple
    CHECK(all_injections(2, 3).size() == 6);
    CHECK(all_injections(3, 7).size() == 210);             // 7*6*5 by direct enumeration
    CHECK(all_injections(4, 3).empty());                   // j > n is empty, not an error
}

TEST_CASE("subset enumeration matches combinatorial rank") {
    int expected_rank = 0;
    for_each_subset(7, 3, [&](std::span<const int> s) {
        CHECK(subset_rank(s) == static_cast<std::uint64_t>(expected_rank));
        ++expected_rank;
    });
    CHECK(expected_rank == 35);
}

TEST_CASE("storage round trip") {
    // shadow-map oracle: directed writes touch exactly one ordered tuple
    Palette pal = order3_palette();
    Hypergraph g(pal, 6);
    Rng rng(7);
    std::map<std::vector<int>, Color> shadow;
    for (int step = 0; step < 500; ++step) {
        int j = 1 + rng.below_int(3);
        auto tuples = all_injections(j, 6);
        const auto& t = tuples[rng.below_int(static_cast<int>(tuples.size()))];
        Color c = static_cast<Color>(rng.below(pal.size(j)));
        g.set_color(t, c);
        shadow[t] = c;
        for (int jj = 1; jj <= 3; ++jj)
            for (const auto& q : all_injections(jj, 6)) {
                auto it = shadow.find(q);
                CHECK(g.color(q) == (it == shadow.end() ? 0 : it->second));
            }
    }
}

TEST_CASE("pullback functoriality, exhaustive at small sizes") {
    Palette pal = order3_palette();
    Hypergraph g = random_graph(pal, 6, 42);
    // pullback along identity is the identity
    CHECK(g.pullback(Morphism::identity(6)) == g);
    for (int m1 : {3, 4, 5}) {
        Rng rng(m1);
        std::vector<int> img = rng.sample_distinct(6, m1);
        Morphism phi(6, img);
        Hypergraph step1 = g.pullback(phi);
        CHECK(step1 == naive_pullback(g, phi));
        for (int m2 = 0; m2 <= std::min(m1, 4); ++m2) {
            for (const auto& t : all_injections(m2, m1)) {
                Morphism psi(m1, t);
                CHECK(step1.pullback(psi) == g.pullback(phi.compose(psi)));
            }
        }
    }
}

TEST_CASE("restriction nesting") {
    Palette pal = order3_palette();
    Hypergraph g = random_graph(pal, 6, 9);
    std::vector<int> all{0, 1, 2, 3, 4, 5};
    CHECK(g.restrict_to(all) == g);
    // empty restriction keeps only the level-0 color
    Hypergraph empty = g.restrict_to({});
    CHECK(empty.size() == 0);
    CHECK(empty.color0() == g.color0());
    // restrict(restrict(G,W), W' relabeled) == restrict(G, W')
    for (unsigned wmask = 0; wmask < 64; ++wmask) {
        std::vector<int> w;
        for (int v = 0; v < 6; ++v)
            if (wmask >> v & 1) w.push_back(v);
        Hypergraph gw = g.restrict_to(w);
        for (unsigned smask = 0; smask < (1u << w.size()); ++smask) {
            std::vector<int> inner, outer;
            for (std::size_t i = 0; i < w.size(); ++i)
                if (smask >> i & 1) {
                    inner.push_back(static_cast<int>(i));
                    outer.push_back(w[i]);
                }
            CHECK(gw.restrict_to(inner) == g.restrict_to(outer));
        }
    }
}

TEST_CASE("undirectedness is detected and preserved") {
    Palette pal({1, 1, 2});
    Hypergraph dir(pal, 4);
    dir.set_pair_color(0, 1, 1);
    CHECK_FALSE(dir.is_undirected());           // G(0,1) != G(1,0)
    dir.set_pair_color(1, 0, 1);
    CHECK(dir.is_undirected());

    // palettes with one color per level above 1 are trivially undirected
    Hypergraph trivial(Palette({1, 4, 1, 1}), 5);
    CHECK(trivial.is_undirected());

    // symmetrizing to the lexicographically-least ordering's color
    Hypergraph g = random_graph(order3_palette(), 6, 3);
    Hypergraph sym(g.palette(), 6);
    for (int j = 1; j <= 3; ++j) {
        if (g.palette().size(j) == 1) continue;
        for (const auto& t : all_injections(j, 6)) {
            std::vector<int> sorted(t);
            std::sort(sorted.begin(), sorted.end());
            sym.set_color(t, g.color(sorted));
        }
    }
    CHECK(sym.is_undirected());
    CHECK(sym.pullback(Morphism(6, {2, 0, 5})).is_undirected());
    CHECK(sym.restrict_to({1, 3, 4}).is_undirected());
}

TEST_CASE("meet follows the palette semilattices") {
    // boolean palette 0 < 1: meet is AND of the indicators
    Palette pal = Palette::boolean_graph_ordered();
    Rng rng(11);
    Hypergraph a = random_hypergraph(pal, 6, rng);
    Hypergraph b = random_hypergraph(pal, 6, rng);
    Hypergraph m = meet(a, b);
    for (const auto& t : all_injections(2, 6))
        CHECK(m.color(t) == (a.color(t) & b.color(t)));

    CHECK(meet(a, a) == a);                     // idempotent
    CHECK(meet(a, b) == meet(b, a));            // commutative
    Hypergraph c = random_hypergraph(pal, 6, rng);
    CHECK(meet(meet(a, b), c) == meet(a, meet(b, c)));

    // palette without an order specification is rejected
    Hypergraph x(Palette::monochromatic(2), 3), y(Palette::monochromatic(2), 3);
    CHECK_THROWS_AS(meet(x, y), std::invalid_argument);
}

TEST_CASE("meet-semilattice validation at palette construction") {
    // chain 0 < 1 < 2 is fine
    Palette ok({1, 1, 3});
    ok.set_level_order(2, {{0, 1}, {1, 2}});
    CHECK(ok.fully_ordered());
    CHECK(ok.meet(2, 1, 2) == 1);
    CHECK(ok.meet(2, 0, 2) == 0);

    // diamond with two incomparable lower bounds of the top pair: 2 and 3
    // are both below 0 and 1, so {0,1} has no unique meet
    Palette bad({1, 1, 4});
    CHECK_THROWS_AS(
        bad.set_level_order(2, {{2, 0}, {2, 1}, {3, 0}, {3, 1}}),
        std::invalid_argument);

    // cyclic cover relation is not antisymmetric
    Palette cyc({1, 1, 2});
    CHECK_THROWS_AS(cyc.set_level_order(2, {{0, 1}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("partite edges and partite equivalence") {
    Palette pal({1, 2, 2});
    Hypergraph g(pal, 4);
    // all vertices share one vertex color: only tuples of size <= 1 are partite
    int t1[1] = {2};
    CHECK(is_partite_edge(g, std::span<const int>(t1, 1)));
    int t2[2] = {0, 1};
    CHECK_FALSE(is_partite_edge(g, std::span<const int>(t2, 2)));

    // colour two vertices apart; now (0,1) is partite
    int v0[1] = {0};
    g.set_color(std::span<const int>(v0, 1), 1);
    CHECK(is_partite_edge(g, std::span<const int>(t2, 2)));

    // recoloring a non-partite edge preserves partite equivalence
    Hypergraph h = g;
    int t23[2] = {2, 3};                        // both colour 0: not partite
    h.set_color(std::span<const int>(t23, 2), 1);
    CHECK(partite_equivalent(g, h));
    // changing the vertex colouring breaks it
    Hypergraph k = g;
    int v3[1] = {3};
    k.set_color(std::span<const int>(v3, 1), 1);
    CHECK_FALSE(partite_equivalent(g, k));
}

TEST_CASE("mixed-storage equality and canonical keys") {
    Palette pal({1, 1, 2});
    Hypergraph u(pal, 4, Storage::Undirected);
    u.set_pair_color(1, 2, 1);
    Hypergraph d(pal, 4, Storage::Directed);
    d.set_pair_color(1, 2, 1);
    CHECK(u != d);                              // directed copy misses (2,1)
    d.set_pair_color(2, 1, 1);
    CHECK(u == d);
    CHECK(u.canonical_key() == d.canonical_key());
}
