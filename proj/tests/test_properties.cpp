#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hedra/obstructions.hpp"
#include "hedra/property.hpp"
#include "hedra/random.hpp"

using namespace hedra;

namespace {

// direct color-query oracle for induced containment, independent of the
// pruned search in the library
bool brute_contains_induced(const Hypergraph& g, const Hypergraph& f) {
    bool found = false;
    for (const auto& img : all_injections(f.size(), g.size())) {
        bool match = f.color0() == g.color0();
        for (int j = 1; j <= f.palette().order() && match; ++j) {
            if (f.palette().size(j) == 1) continue;
            for (const auto& t : all_injections(j, f.size())) {
                std::vector<int> mapped(t.size());
                for (std::size_t i = 0; i < t.size(); ++i) mapped[i] = img[t[i]];
                if (f.color(t) != g.color(mapped)) {
                    match = false;
                    break;
                }
            }
        }
        if (match) { found = true; break; }
    }
    return found;
}

Hypergraph undirected_triangle() {
    Hypergraph f(Palette::monochromatic(2), 3, Storage::Undirected);
    f.set_pair_color(0, 1, 1);
    f.set_pair_color(1, 2, 1);
    f.set_pair_color(0, 2, 1);
    return f;
}

} // namespace

TEST_CASE("obeys matches brute-force containment") {
    Palette pal({1, 2, 2});
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        Hypergraph g = random_hypergraph(pal, 7, rng);
        Hypergraph f = random_hypergraph(pal, 3, rng);
        Property p = Property::forbidden_family(pal, "one-member", {f});
        CHECK(p.obeys(g) == !brute_contains_induced(g, f));
    }
}

TEST_CASE("obeys basics") {
    Palette pal = Palette::monochromatic(2);
    Property empty_family = Property::forbidden_family(pal, "anything-goes", {});
    Rng rng(3);
    for (int t = 0; t < 10; ++t)
        CHECK(empty_family.obeys(random_hypergraph(pal, 5, rng)));

    // complete undirected graph on 3 vertices contains the triangle
    Property no_triangle = Property::forbidden_family(pal, "triangle-free", {undirected_triangle()});
    Hypergraph k3(pal, 3, Storage::Undirected);
    k3.set_pair_color(0, 1, 1);
    k3.set_pair_color(1, 2, 1);
    k3.set_pair_color(0, 2, 1);
    CHECK_FALSE(no_triangle.obeys(k3));
    CHECK(builtin_property("triangle-free").obeys(Hypergraph(pal, 3)));

    // palette mismatch is rejected
    CHECK_THROWS_AS(no_triangle.obeys(Hypergraph(Palette({1, 2, 2}), 3)),
                    std::invalid_argument);
}

TEST_CASE("one-sided soundness and heredity audit") {
    Palette pal = Palette::monochromatic(2);
    Property p = Property::forbidden_family(pal, "triangle-free", {undirected_triangle()});
    Rng rng(17);
    int obeying_checked = 0;
    for (int trial = 0; trial < 60 && obeying_checked < 8; ++trial) {
        Hypergraph g = random_hypergraph(pal, 7, rng, Storage::Undirected);
        if (!p.obeys(g)) continue;
        ++obeying_checked;
        for (int N = 1; N <= 7; ++N)
            CHECK(local_satisfaction_exact(p, g, N).value == 1.0);
        // heredity: every restriction obeys
        for (unsigned mask = 0; mask < 128; ++mask) {
            std::vector<int> w;
            for (int v = 0; v < 7; ++v)
                if (mask >> v & 1) w.push_back(v);
            CHECK(p.obeys(g.restrict_to(w)));
        }
    }
    CHECK(obeying_checked > 0);
}

TEST_CASE("local satisfaction exact matches direct subset count, n=N degenerate") {
    Palette pal = Palette::monochromatic(2);
    Rng rng(23);
    Hypergraph g = random_hypergraph(pal, 8, rng, Storage::Undirected);
    Property p = Property::forbidden_family(pal, "triangle-free", {undirected_triangle()});
    // independent oracle: count by hand over all 4-subsets
    std::uint64_t good = 0, total = 0;
    for_each_subset(8, 4, [&](std::span<const int> w) {
        ++total;
        if (p.obeys(g.restrict_to(std::vector<int>(w.begin(), w.end())))) ++good;
    });
    auto est = local_satisfaction_exact(p, g, 4);
    CHECK(est.value == doctest::Approx(double(good) / double(total)));
    CHECK(est.samples == total);

    auto full = local_satisfaction_exact(p, g, 8);
    CHECK(full.value == (p.obeys(g) ? 1.0 : 0.0));
    CHECK_THROWS_AS(local_satisfaction_exact(p, g, 9), std::invalid_argument);
}

TEST_CASE("monte carlo satisfaction is an unbiased estimator") {
    Palette pal = Palette::monochromatic(2);
    Rng rng(29);
    Hypergraph g = random_hypergraph(pal, 10, rng, Storage::Undirected);
    Property p = Property::forbidden_family(pal, "triangle-free", {undirected_triangle()});
    const double exact = local_satisfaction_exact(p, g, 4).value;
    const int seeds = 1000;
    double sum = 0.0, sumsq = 0.0;
    for (int s = 0; s < seeds; ++s) {
        double v = local_satisfaction_mc(p, g, 4, 40, 1000 + s).value;
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / seeds;
    const double sd = std::sqrt(std::max(sumsq / seeds - mean * mean, 1e-12));
    const double se_of_mean = sd / std::sqrt(double(seeds));
    CHECK(std::abs(mean - exact) <= 3.0 * se_of_mean + 1e-9);

    // identical seeds reproduce identical estimates; thread sharding agrees
    auto a = local_satisfaction_mc(p, g, 4, 5000, 77, 1);
    auto b = local_satisfaction_mc(p, g, 4, 5000, 77, 2);
    CHECK(a.value == b.value);
}

TEST_CASE("distance against brute force, pseudometric") {
    Palette pal = Palette::monochromatic(2);
    Rng rng(31);
    Hypergraph a = random_hypergraph(pal, 7, rng);
    Hypergraph b = random_hypergraph(pal, 7, rng);
    // oracle over all 21 pair-subsets
    int bad = 0;
    for (int v = 0; v < 7; ++v)
        for (int w = v + 1; w < 7; ++w)
            if (a.pair_color(v, w) != b.pair_color(v, w) ||
                a.pair_color(w, v) != b.pair_color(w, v))
                ++bad;
    CHECK(distance(a, b) == doctest::Approx(bad / 21.0));

    CHECK(distance(a, a) == 0.0);
    // one flipped ordered pair out of n(n-1): exactly one 2-subset disagrees
    Hypergraph c = a;
    c.set_pair_color(0, 1, 1 - c.pair_color(0, 1));
    CHECK(distance(a, c) == doctest::Approx(1.0 / 21.0));

    for (int trial = 0; trial < 25; ++trial) {
        Hypergraph x = random_hypergraph(pal, 8, rng);
        Hypergraph y = random_hypergraph(pal, 8, rng);
        Hypergraph z = random_hypergraph(pal, 8, rng);
        CHECK(distance(x, y) == doctest::Approx(distance(y, x)));
        CHECK(distance(x, z) <= distance(x, y) + distance(y, z) + 1e-12);
    }
}

TEST_CASE("monochromatic subsets") {
    Palette pal = Palette::monochromatic(2);
    // a single-coloured graph: the first subset in rank order comes back
    Hypergraph flat(pal, 6, Storage::Undirected);
    auto w = find_monochromatic(flat, 3);
    REQUIRE(w.has_value());
    CHECK(*w == std::vector<int>{0, 1, 2});

    // pentagon / pentagram split of K_5 has no monochromatic triangle;
    // verified here against a direct scan of all 10 triangles
    Hypergraph k5(pal, 5, Storage::Undirected);
    for (int v = 0; v < 5; ++v) k5.set_pair_color(v, (v + 1) % 5, 1);
    int mono = 0;
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b)
            for (int c = b + 1; c < 5; ++c) {
                Color x = k5.pair_color(a, b), y = k5.pair_color(b, c), z = k5.pair_color(a, c);
                if (x == y && y == z) ++mono;
            }
    CHECK(mono == 0);
    CHECK_FALSE(find_monochromatic(k5, 3).has_value());

    CHECK_FALSE(find_monochromatic(flat, 7).has_value());   // n_target > n
    // random two-colourings of K_6 always contain a monochromatic triangle
    Rng rng(37);
    for (int t = 0; t < 300; ++t) {
        Hypergraph g(pal, 6, Storage::Undirected);
        for (int v = 0; v < 6; ++v)
            for (int u = v + 1; u < 6; ++u)
                if (rng.bernoulli(0.5)) g.set_pair_color(v, u, 1);
        CHECK(find_monochromatic(g, 3).has_value());
    }
}

TEST_CASE("meet-closure search") {
    // triangle-free is monotone, hence weakly monotone: no counterexample
    auto tf = check_meet_closed(builtin_property("triangle-free"), 5, true, 0);
    CHECK_FALSE(tf.counterexample.has_value());
    CHECK(tf.exhaustive);

    // complete graphs: complete meet complete is complete
    auto comp = check_meet_closed(builtin_property("complete"), 4, true, 0);
    CHECK_FALSE(comp.counterexample.has_value());

    // total orderings meet to the empty relation at two vertices already
    auto tot = check_meet_closed(builtin_property("total-order"), 2, false, 0);
    REQUIRE(tot.counterexample.has_value());
    Hypergraph m = meet(tot.counterexample->first, tot.counterexample->second);
    CHECK_FALSE(builtin_property("total-order").obeys(m));

    // unordered palette is rejected
    Property plain = Property::predicate(Palette::monochromatic(2), "anything",
                                         [](const Hypergraph&) { return true; });
    CHECK_THROWS_AS(check_meet_closed(plain, 3, true, 0), std::invalid_argument);
}

TEST_CASE("builtin predicates behave and pass a hereditary audit") {
    Palette pal = Palette::monochromatic(2);
    Hypergraph order3(pal, 3);
    order3.set_pair_color(0, 1, 1);
    order3.set_pair_color(0, 2, 1);
    order3.set_pair_color(1, 2, 1);
    CHECK(builtin_property("total-order").obeys(order3));
    Hypergraph cyc = order3;
    cyc.set_pair_color(0, 2, 0);
    cyc.set_pair_color(2, 0, 1);               // 3-cycle: not an order
    CHECK_FALSE(builtin_property("total-order").obeys(cyc));

    Hypergraph empty(pal, 4, Storage::Undirected);
    CHECK(builtin_property("complete-bipartite").obeys(empty));   // one empty side
    Hypergraph cb(pal, 4, Storage::Undirected);
    cb.set_pair_color(0, 2, 1);
    cb.set_pair_color(0, 3, 1);
    cb.set_pair_color(1, 2, 1);
    cb.set_pair_color(1, 3, 1);
    CHECK(builtin_property("complete-bipartite").obeys(cb));
    cb.set_pair_color(0, 1, 1);
    CHECK_FALSE(builtin_property("complete-bipartite").obeys(cb));

    // no violations found by the randomized hereditary audit
    for (const char* name : {"total-order", "bipartite", "complete-bipartite", "triangle-free"}) {
        auto bad = audit_hereditary(builtin_property(name), 6, 40, 13);
        CHECK_FALSE(bad.has_value());
    }
}
