#include "hedra/obstructions.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "hedra/random.hpp"

namespace hedra {

void CorruptionSpec::validate() const {
    if (m < 2) throw std::invalid_argument("CorruptionSpec: m must be at least 2");
    if (sigma < 0.0 || sigma > 1.0)
        throw std::invalid_argument("CorruptionSpec: sigma outside [0,1]");
}

Palette leq3_palette() { return Palette({1, 2, 2, 2}); }
Palette uniform3_palette() { return Palette::monochromatic(3); }

// ---- generators -------------------------------------------------------------

std::pair<Hypergraph, Hypergraph> gen_corrupted_order(const CorruptionSpec& spec) {
    spec.validate();
    const int m = spec.m;
    Hypergraph g0(Palette::monochromatic(2), m, Storage::Directed);
    for (int v = 0; v < m; ++v)
        for (int w = v + 1; w < m; ++w) g0.set_pair_color(v, w, 1);
    Hypergraph g = g0;
    Rng rng(spec.seed);
    if (spec.sigma > 0.0) {
        for (int v = 0; v < m; ++v)
            for (int w = 0; w < m; ++w) {
                if (v == w) continue;
                if (rng.bernoulli(spec.sigma))
                    g.set_pair_color(v, w, 1 - g.pair_color(v, w));
            }
    }
    return {std::move(g0), std::move(g)};
}

namespace {

// uncorrupted 3-edge membership for a sorted blue/blue/red triple:
// in unless the red likes only the smaller blue
inline bool leq3_triple_in(bool likes_small, bool likes_large) {
    return !(likes_small && !likes_large);
}

} // namespace

std::pair<Hypergraph, Hypergraph> gen_leq3(const CorruptionSpec& spec) {
    spec.validate();
    if (spec.m % 2 != 0) throw std::invalid_argument("gen_leq3: m must be even");
    const int m = spec.m;
    const int blues = m / 2;
    Rng rng(spec.seed);

    Hypergraph g0(leq3_palette(), m, Storage::Undirected);
    for (int v = 0; v < blues; ++v) {
        int t[1] = {v};
        g0.set_color(std::span<const int>(t, 1), 1);    // color 1 = blue
    }
    for (int v = 0; v < m; ++v)
        for (int w = v + 1; w < m; ++w)
            if (rng.bernoulli(0.5)) g0.set_pair_color(v, w, 1);

    // sorted triple (v1 < v2 < v3) qualifies only as blue,blue,red
    auto& e3 = g0.level_data(3);
    std::size_t idx = 0;
    for (int v3 = 2; v3 < m; ++v3)
        for (int v2 = 1; v2 < v3; ++v2)
            for (int v1 = 0; v1 < v2; ++v1, ++idx) {
                if (v2 >= blues || v3 < blues) continue;
                const bool l1 = g0.pair_color(v3, v1) == 1;
                const bool l2 = g0.pair_color(v3, v2) == 1;
                if (leq3_triple_in(l1, l2)) e3[idx] = 1;
            }

    Hypergraph g = g0;
    if (spec.sigma > 0.0) {
        auto& data = g.level_data(3);
        for (auto& c : data)
            if (rng.bernoulli(spec.sigma)) c = 1 - c;
    }
    return {std::move(g0), std::move(g)};
}

std::pair<Hypergraph, Hypergraph> gen_3uniform(const CorruptionSpec& spec) {
    spec.validate();
    const int m = spec.m;
    const int n = 2 * m;
    const int blues = m / 2;     // floor for odd m
    Rng rng(spec.seed);

    // internal 2-edge layer of the leq3 instance on [m]
    std::vector<char> e2(static_cast<std::size_t>(m) * m, 0);
    for (int v = 0; v < m; ++v)
        for (int w = v + 1; w < m; ++w)
            if (rng.bernoulli(0.5))
                e2[static_cast<std::size_t>(v) * m + w] = e2[static_cast<std::size_t>(w) * m + v] = 1;
    auto likes = [&](int red, int blue) {
        return e2[static_cast<std::size_t>(red) * m + blue] != 0;
    };

    Hypergraph g1(uniform3_palette(), n, Storage::Undirected);
    auto& e = g1.level_data(3);
    std::size_t idx = 0;
    for (int v3 = 2; v3 < n; ++v3)
        for (int v2 = 1; v2 < v3; ++v2)
            for (int v1 = 0; v1 < v2; ++v1, ++idx) {
                const int greens = (v1 >= m) + (v2 >= m) + (v3 >= m);
                if (greens == 3) {
                    e[idx] = 1;
                } else if (greens == 1) {
                    // ascending order puts the single green at v3; in iff the
                    // two remaining vertices are a liking red/blue pair
                    if (v1 < blues && v2 >= blues && likes(v2, v1)) e[idx] = 1;
                } else if (greens == 0) {
                    if (v2 < blues && v3 >= blues) {
                        const bool l1 = likes(v3, v1);
                        const bool l2 = likes(v3, v2);
                        if (leq3_triple_in(l1, l2)) e[idx] = 1;
                    }
                }
            }

    Hypergraph g = g1;
    if (spec.sigma > 0.0) {
        auto& data = g.level_data(3);
        for (auto& c : data)
            if (rng.bernoulli(spec.sigma)) c = 1 - c;
    }
    return {std::move(g1), std::move(g)};
}

// ---- indistinguishable pairs -------------------------------------------------

std::optional<std::pair<int, int>> find_indistinguishable_pair(const Hypergraph& g,
                                                               const std::vector<int>& anchors) {
    const int n = g.size();
    if (static_cast<int>(anchors.size()) > 32)
        throw std::invalid_argument("find_indistinguishable_pair: too many anchors");
    std::vector<char> is_anchor(n, 0);
    for (int a : anchors) is_anchor[a] = 1;

    std::unordered_map<std::uint64_t, std::vector<int>> buckets;
    std::vector<std::uint64_t> sig(n, 0);
    for (int v = 0; v < n; ++v) {
        if (is_anchor[v]) continue;
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < anchors.size(); ++i) {
            s = (s << 1) | (g.pair_color(v, anchors[i]) != 0);
            s = (s << 1) | (g.pair_color(anchors[i], v) != 0);
        }
        sig[v] = s;
        buckets[s].push_back(v);    // members stay in ascending vertex order
    }
    for (int v = 0; v < n; ++v) {
        if (is_anchor[v]) continue;
        const auto& list = buckets[sig[v]];
        for (int w : list) {
            if (w <= v) continue;
            if (g.pair_color(v, w) == g.pair_color(w, v)) return std::make_pair(v, w);
        }
    }
    return std::nullopt;
}

std::optional<DefeatReport> defeat_rule_order(const Hypergraph& g, const LocalRule& rule,
                                              const Morphism& phi) {
    if (g.palette().order() != 2)
        throw std::invalid_argument("defeat_rule_order: expects a directed graph");
    auto pair = find_indistinguishable_pair(g, phi.image);
    if (!pair) return std::nullopt;

    Hypergraph repaired = apply_rule(rule, g, phi);
    // relabel the witness into the repaired graph's ascending coordinates
    std::vector<char> is_anchor(g.size(), 0);
    for (int a : phi.image) is_anchor[a] = 1;
    auto position = [&](int v) {
        int p = 0;
        for (int u = 0; u < v; ++u)
            if (!is_anchor[u]) ++p;
        return p;
    };
    const int p1 = position(pair->first), p2 = position(pair->second);

    DefeatReport rep;
    rep.obstruction.kind = ObstructionReport::Kind::Pair;
    rep.obstruction.witness = {pair->first, pair->second};
    rep.obstruction.anchors = phi.image;
    rep.output_forward = repaired.pair_color(p1, p2);
    rep.output_backward = repaired.pair_color(p2, p1);
    rep.output_symmetric = rep.output_forward == rep.output_backward;
    if (!rep.output_symmetric)
        throw std::logic_error("defeat_rule_order: rule output broke the locality invariant");
    rep.violates_total_order = !builtin_property("total-order").obeys(repaired);
    rep.obstruction.checked_conditions = {"anchor-signatures-equal", "mutual-indicators-equal",
                                          "output-symmetric", "output-not-total-order"};
    return rep;
}

// ---- quadruplet obstructions ----------------------------------------------------

namespace {

struct RepMap {
    std::vector<int> to_rep;     // -1 for anchors
    std::vector<char> is_anchor;
};

RepMap make_rep_map(int n, const std::vector<int>& anchors) {
    RepMap m;
    m.is_anchor.assign(n, 0);
    for (int a : anchors) m.is_anchor[a] = 1;
    m.to_rep.assign(n, -1);
    int p = 0;
    for (int v = 0; v < n; ++v)
        if (!m.is_anchor[v]) m.to_rep[v] = p++;
    return m;
}

std::vector<std::pair<int, int>> anchor_pairs(const std::vector<int>& anchors) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < anchors.size(); ++i)
        for (std::size_t l = i + 1; l < anchors.size(); ++l)
            out.push_back({anchors[i], anchors[l]});
    return out;
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
    return mix_seed(a ^ 0x6a09e667f3bcc909ULL, b);
}

} // namespace

bool check_quad_clauses(const Hypergraph& g, const Hypergraph& repaired,
                        const std::vector<int>& anchors, const std::vector<int>& quad,
                        std::vector<std::string>* satisfied) {
    if (quad.size() != 4) return false;
    const int r1 = quad[0], r2 = quad[1], b1 = quad[2], b2 = quad[3];
    std::set<int> distinct(quad.begin(), quad.end());
    if (distinct.size() != 4) return false;
    for (int v : quad)
        for (int a : anchors)
            if (v == a) return false;

    RepMap rm = make_rep_map(g.size(), anchors);
    auto rep = [&](int v) { return rm.to_rep[v]; };
    auto blue_in = [](const Hypergraph& h, int v) {
        int t[1] = {v};
        return h.color(std::span<const int>(t, 1)) == 1;
    };
    std::vector<std::string> conds;
    auto pass = [&](const char* c) { conds.push_back(c); };

    // (i) colour agreement in both graphs
    if (!( !blue_in(g, r1) && !blue_in(g, r2) && blue_in(g, b1) && blue_in(g, b2))) return false;
    if (!( !blue_in(repaired, rep(r1)) && !blue_in(repaired, rep(r2)) &&
           blue_in(repaired, rep(b1)) && blue_in(repaired, rep(b2)))) return false;
    pass("i-colors");

    // (ii) crossed preferences in the repaired graph
    auto likes_rep = [&](int r, int b) { return repaired.pair_color(rep(r), rep(b)) == 1; };
    if (!(likes_rep(r1, b1) && !likes_rep(r1, b2))) return false;
    if (!(likes_rep(r2, b2) && !likes_rep(r2, b1))) return false;
    pass("ii-crossed-preferences");

    // (iii) invariance of the input view under swapping (r1,r2) and (b1,b2)
    for (int a : anchors) {
        if (g.pair_color(b1, a) != g.pair_color(b2, a)) return false;
        if (g.pair_color(r1, a) != g.pair_color(r2, a)) return false;
    }
    pass("iii-e2-anchor-symmetries");
    if (g.pair_color(r1, b1) != g.pair_color(r2, b2)) return false;
    if (g.pair_color(r1, b2) != g.pair_color(r2, b1)) return false;
    pass("iii-e2-quad-symmetries");
    if (g.triple_color(r1, r2, b1) != g.triple_color(r1, r2, b2)) return false;
    pass("iii-e3-line1");
    if (g.triple_color(b1, b2, r1) != g.triple_color(b1, b2, r2)) return false;
    pass("iii-e3-line2");
    for (int a : anchors) {
        if (g.triple_color(r1, b1, a) != g.triple_color(r2, b2, a)) return false;
        if (g.triple_color(r1, b2, a) != g.triple_color(r2, b1, a)) return false;
    }
    pass("iii-e3-lines34");
    for (auto [a, a2] : anchor_pairs(anchors)) {
        if (g.triple_color(r1, a, a2) != g.triple_color(r2, a, a2)) return false;
        if (g.triple_color(b1, a, a2) != g.triple_color(b2, a, a2)) return false;
    }
    pass("iii-e3-lines56");

    if (satisfied) *satisfied = std::move(conds);
    return true;
}

SearchOutcome find_inconsistent_quad(const Hypergraph& g, const Hypergraph& repaired,
                                     const std::vector<int>& anchors, std::uint64_t budget,
                                     std::uint64_t seed) {
    SearchOutcome out;
    const int n = g.size();
    if (static_cast<int>(anchors.size()) > 11)
        throw std::invalid_argument("find_inconsistent_quad: too many anchors for bucketing");
    RepMap rm = make_rep_map(n, anchors);
    const auto apairs = anchor_pairs(anchors);

    auto blue_in = [](const Hypergraph& h, int v) {
        int t[1] = {v};
        return h.color(std::span<const int>(t, 1)) == 1;
    };

    // both-colour pools
    std::vector<int> reds, blues;
    for (int v = 0; v < n; ++v) {
        if (rm.is_anchor[v]) continue;
        const bool bg = blue_in(g, v), br = blue_in(repaired, rm.to_rep[v]);
        if (bg && br) blues.push_back(v);
        else if (!bg && !br) reds.push_back(v);
    }
    if (reds.size() < 2 || blues.size() < 2) return out;

    // anchor-connectivity signatures and anchor-pair 3-edge bits
    auto e2_sig = [&](int v) {
        std::uint64_t s = 0;
        for (int a : anchors) s = (s << 1) | (g.pair_color(v, a) != 0);
        return s;
    };
    auto e3_aa_bits = [&](int v) {
        std::uint64_t s = 0;
        for (auto [a, a2] : apairs) s = (s << 1) | (g.triple_color(v, a, a2) != 0);
        return s;
    };
    std::unordered_map<std::uint64_t, std::vector<int>> blue_buckets;
    for (int b : blues) blue_buckets[mix_key(e2_sig(b), e3_aa_bits(b))].push_back(b);
    const std::vector<int>* largest = nullptr;
    for (auto& [key, list] : blue_buckets)
        if (!largest || list.size() > largest->size()) largest = &list;

    Rng rng(seed);
    struct REntry {
        int v;
        std::uint64_t key;     // sig, aa bits, line-2 bit, crossed bits
        std::uint64_t swapped; // the key a matching partner must carry
    };
    std::vector<REntry> role1;                                   // prefers b1 over b2
    std::unordered_map<std::uint64_t, std::vector<int>> role2;   // prefers b2 over b1

    while (out.probes < budget) {
        // draw a blue pair, mostly from the largest bucket
        const std::vector<int>& pool =
            (largest && largest->size() >= 2 && (rng.next() & 3) != 0) ? *largest : blues;
        if (pool.size() < 2) break;
        int b1 = pool[rng.below_int(static_cast<int>(pool.size()))];
        int b2 = pool[rng.below_int(static_cast<int>(pool.size()))];
        if (b1 == b2) { ++out.probes; continue; }
        if (b1 > b2) std::swap(b1, b2);
        out.probes += 2;
        if (e2_sig(b1) != e2_sig(b2) || e3_aa_bits(b1) != e3_aa_bits(b2)) continue;

        role1.clear();
        role2.clear();
        for (int r : reds) {
            ++out.probes;
            const bool p1 = repaired.pair_color(rm.to_rep[r], rm.to_rep[b1]) == 1;
            const bool p2 = repaired.pair_color(rm.to_rep[r], rm.to_rep[b2]) == 1;
            if (p1 == p2) continue;
            std::uint64_t sig = e2_sig(r);
            std::uint64_t aa = e3_aa_bits(r);
            std::uint64_t e = g.triple_color(b1, b2, r);
            std::uint64_t cb1 = 0, cb2 = 0, i21 = g.pair_color(r, b1), i22 = g.pair_color(r, b2);
            for (int a : anchors) {
                cb1 = (cb1 << 1) | (g.triple_color(r, b1, a) != 0);
                cb2 = (cb2 << 1) | (g.triple_color(r, b2, a) != 0);
            }
            std::uint64_t key = mix_key(mix_key(sig, aa), mix_key(e, (cb1 << 20) ^ (cb2 << 8) ^ (i21 << 1) ^ i22));
            std::uint64_t swapped = mix_key(mix_key(sig, aa), mix_key(e, (cb2 << 20) ^ (cb1 << 8) ^ (i22 << 1) ^ i21));
            if (p1) role1.push_back({r, key, swapped});
            else role2[key].push_back(r);
        }
        for (const auto& entry : role1) {
            auto it = role2.find(entry.swapped);
            if (it == role2.end()) continue;
            for (int r2 : it->second) {
                ++out.probes;
                if (g.triple_color(entry.v, r2, b1) != g.triple_color(entry.v, r2, b2)) continue;
                std::vector<int> quad = {entry.v, r2, b1, b2};
                std::vector<std::string> conds;
                if (check_quad_clauses(g, repaired, anchors, quad, &conds)) {
                    ObstructionReport rep;
                    rep.kind = ObstructionReport::Kind::Quad;
                    rep.witness = quad;
                    rep.anchors = anchors;
                    rep.checked_conditions = std::move(conds);
                    out.report = std::move(rep);
                    return out;
                }
                if (out.probes >= budget) break;
            }
            if (out.probes >= budget) break;
        }
    }
    out.budget_exhausted = out.probes >= budget;
    return out;
}

// ---- 9-tuple obstructions ---------------------------------------------------------

bool check_nine_clauses(const Hypergraph& g, const Hypergraph& repaired,
                        const std::vector<int>& anchors, const std::vector<int>& nine,
                        std::vector<std::string>* satisfied) {
    if (nine.size() != 9) return false;
    std::set<int> distinct(nine.begin(), nine.end());
    if (distinct.size() != 9) return false;
    for (int v : nine)
        for (int a : anchors)
            if (v == a) return false;
    const int r1 = nine[0], r2 = nine[1], r3 = nine[2];
    const int b1 = nine[3], b2 = nine[4];
    const int g1 = nine[5], g2 = nine[6], g3 = nine[7], g4 = nine[8];

    RepMap rm = make_rep_map(g.size(), anchors);
    auto ep = [&](int x, int y, int z) {
        return repaired.triple_color(rm.to_rep[x], rm.to_rep[y], rm.to_rep[z]) != 0;
    };
    std::vector<std::string> conds;

    // (i) the greens span a tetrahedron in the repaired graph
    if (!(ep(g1, g2, g3) && ep(g1, g2, g4) && ep(g1, g3, g4) && ep(g2, g3, g4))) return false;
    conds.push_back("i-green-tetrahedron");
    // (ii) every non-green member is excluded by the first green pair
    for (int x : {r1, r2, r3, b1, b2})
        if (ep(x, g1, g2)) return false;
    conds.push_back("ii-nongreen-exclusion");
    // (iii) like pattern through g1
    for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 2; ++l) {
            const int r = nine[i], b = nine[3 + l];
            const bool expect = !((i == 0 && l == 0) || (i == 1 && l == 1));
            if (ep(r, b, g1) != expect) return false;
        }
    conds.push_back("iii-like-pattern");
    // (iv) input symmetries under swapping (r1,r2) and (b1,b2)
    if (g.triple_color(r1, r2, b1) != g.triple_color(r1, r2, b2)) return false;
    conds.push_back("iv-line1");
    if (g.triple_color(b1, b2, r1) != g.triple_color(b1, b2, r2)) return false;
    conds.push_back("iv-line2");
    for (int a : anchors) {
        if (g.triple_color(r1, b1, a) != g.triple_color(r2, b2, a)) return false;
        if (g.triple_color(r1, b2, a) != g.triple_color(r2, b1, a)) return false;
    }
    conds.push_back("iv-lines34");
    for (auto [a, a2] : anchor_pairs(anchors)) {
        if (g.triple_color(r1, a, a2) != g.triple_color(r2, a, a2)) return false;
        if (g.triple_color(b1, a, a2) != g.triple_color(b2, a, a2)) return false;
    }
    conds.push_back("iv-lines56");

    if (satisfied) *satisfied = std::move(conds);
    return true;
}

SearchOutcome find_inconsistent_nine(const Hypergraph& g, const Hypergraph& repaired,
                                     const std::vector<int>& anchors, std::uint64_t budget,
                                     std::uint64_t seed) {
    SearchOutcome out;
    const int n = g.size();
    if (static_cast<int>(anchors.size()) > 11)
        throw std::invalid_argument("find_inconsistent_nine: too many anchors for bucketing");
    RepMap rm = make_rep_map(n, anchors);
    const auto apairs = anchor_pairs(anchors);
    auto ep = [&](int x, int y, int z) {
        return repaired.triple_color(rm.to_rep[x], rm.to_rep[y], rm.to_rep[z]) != 0;
    };

    std::vector<int> others;
    for (int v = 0; v < n; ++v)
        if (!rm.is_anchor[v]) others.push_back(v);
    if (others.size() < 9) return out;

    Rng rng(seed);
    auto e3_aa_bits = [&](int v) {
        std::uint64_t s = 0;
        for (auto [a, a2] : apairs) s = (s << 1) | (g.triple_color(v, a, a2) != 0);
        return s;
    };

    struct REntry {
        int v;
        std::uint64_t key, swapped;
    };
    std::vector<REntry> role1;
    std::unordered_map<std::uint64_t, std::vector<int>> role2;
    std::vector<int> role3;
    std::vector<int> greens, pool;

    // rounds: pick a green-looking pair, complete its tetrahedron, then
    // sample blue pairs from the excluded pool; re-roll the greens if a round
    // stays dry
    while (out.probes < budget) {
        // stage 1: a pair (g1,g2) whose 3-edge neighbourhood is large
        int g1 = -1, g2 = -1;
        for (int attempt = 0; attempt < 50 && out.probes < budget; ++attempt) {
            int c1 = others[rng.below_int(static_cast<int>(others.size()))];
            int c2 = others[rng.below_int(static_cast<int>(others.size()))];
            if (c1 == c2) continue;
            greens.clear();
            pool.clear();
            for (int x : others) {
                if (x == c1 || x == c2) continue;
                ++out.probes;
                if (ep(x, c1, c2)) greens.push_back(x);
                else pool.push_back(x);
            }
            if (static_cast<int>(greens.size()) >= n / 5 && pool.size() >= 5) {
                g1 = c1;
                g2 = c2;
                break;
            }
        }
        if (g1 < 0) break;

        // stage 2: complete the tetrahedron
        int g3 = -1, g4 = -1;
        for (std::size_t i = 0; i < greens.size() && g3 < 0; ++i) {
            for (std::size_t l = i + 1; l < greens.size(); ++l) {
                ++out.probes;
                if (ep(g1, greens[i], greens[l]) && ep(g2, greens[i], greens[l])) {
                    g3 = greens[i];
                    g4 = greens[l];
                    break;
                }
                if (out.probes >= budget) break;
            }
        }
        if (g3 < 0) continue;

        // the pool already satisfies clause (ii) for (g1,g2)
        std::vector<int> cand;
        for (int x : pool)
            if (x != g3 && x != g4) cand.push_back(x);
        if (cand.size() < 5) continue;
        std::unordered_map<std::uint64_t, std::vector<int>> by_aa;
        for (int x : cand) by_aa[e3_aa_bits(x)].push_back(x);
        const std::vector<int>* largest = nullptr;
        for (auto& [key, list] : by_aa)
            if (!largest || list.size() > largest->size()) largest = &list;

        const int round_attempts = std::max(64, n / 2);
        for (int attempt = 0; attempt < round_attempts && out.probes < budget; ++attempt) {
            const std::vector<int>& bpool =
                (largest && largest->size() >= 2 && (rng.next() & 3) != 0) ? *largest : cand;
            if (bpool.size() < 2) break;
            int b1 = bpool[rng.below_int(static_cast<int>(bpool.size()))];
            int b2 = bpool[rng.below_int(static_cast<int>(bpool.size()))];
            if (b1 == b2) { ++out.probes; continue; }
            if (b1 > b2) std::swap(b1, b2);
            out.probes += 2;
            if (e3_aa_bits(b1) != e3_aa_bits(b2)) continue;

            role1.clear();
            role2.clear();
            role3.clear();
            for (int x : cand) {
                if (x == b1 || x == b2) continue;
                ++out.probes;
                const bool lx1 = ep(x, b1, g1);
                const bool lx2 = ep(x, b2, g1);
                if (lx1 && lx2) { role3.push_back(x); continue; }
                if (lx1 == lx2) continue;
                std::uint64_t aa = e3_aa_bits(x);
                std::uint64_t e = g.triple_color(b1, b2, x);
                std::uint64_t cb1 = 0, cb2 = 0;
                for (int a : anchors) {
                    cb1 = (cb1 << 1) | (g.triple_color(x, b1, a) != 0);
                    cb2 = (cb2 << 1) | (g.triple_color(x, b2, a) != 0);
                }
                std::uint64_t key = mix_key(aa, mix_key(e, (cb1 << 16) ^ cb2));
                std::uint64_t swapped = mix_key(aa, mix_key(e, (cb2 << 16) ^ cb1));
                // role 1 is the vertex that likes b2 but not b1
                if (!lx1) role1.push_back({x, key, swapped});
                else role2[key].push_back(x);
            }
            if (role3.empty()) continue;
            for (const auto& entry : role1) {
                auto it = role2.find(entry.swapped);
                if (it == role2.end()) continue;
                for (int r2 : it->second) {
                    ++out.probes;
                    if (g.triple_color(entry.v, r2, b1) != g.triple_color(entry.v, r2, b2))
                        continue;
                    for (int r3 : role3) {
                        if (r3 == entry.v || r3 == r2) continue;
                        std::vector<int> nine = {entry.v, r2, r3, b1, b2, g1, g2, g3, g4};
                        std::vector<std::string> conds;
                        if (check_nine_clauses(g, repaired, anchors, nine, &conds)) {
                            ObstructionReport rep;
                            rep.kind = ObstructionReport::Kind::Nine;
                            rep.witness = nine;
                            rep.anchors = anchors;
                            rep.checked_conditions = std::move(conds);
                            out.report = std::move(rep);
                            return out;
                        }
                        break;   // failures here are independent of the r3 choice
                    }
                    if (out.probes >= budget) break;
                }
                if (out.probes >= budget) break;
            }
        }
    }
    out.budget_exhausted = out.probes >= budget;
    return out;
}

// ---- derived relations and consistent orderability -----------------------------

DerivedRelations derive_relations(const Hypergraph& g) {
    if (!g.palette().same_colors(uniform3_palette()))
        throw std::invalid_argument("derive_relations: expects a 3-uniform hypergraph");
    const int n = g.size();
    DerivedRelations rel;
    rel.green.assign(n, 0);
    rel.nongreen.assign(n, 0);

    auto e = [&](int x, int y, int z) { return g.triple_color(x, y, z) != 0; };

    for (int v = 0; v < n && n >= 4; ++v) {
        bool found = false;
        for (int a = 0; a < n && !found; ++a) {
            if (a == v) continue;
            for (int b = a + 1; b < n && !found; ++b) {
                if (b == v || !e(v, a, b)) continue;
                for (int c = b + 1; c < n; ++c) {
                    if (c == v) continue;
                    if (e(v, a, c) && e(v, b, c) && e(a, b, c)) {
                        found = true;
                        break;
                    }
                }
            }
        }
        rel.green[v] = found;
    }
    std::vector<int> greens;
    for (int v = 0; v < n; ++v)
        if (rel.green[v]) greens.push_back(v);

    for (int v = 0; v < n; ++v) {
        bool found = false;
        for (std::size_t i = 0; i < greens.size() && !found; ++i) {
            if (greens[i] == v) continue;
            for (std::size_t l = i + 1; l < greens.size(); ++l) {
                if (greens[l] == v) continue;
                if (!e(v, greens[i], greens[l])) {
                    found = true;
                    break;
                }
            }
        }
        rel.nongreen[v] = found;
    }

    rel.likes.assign(n, std::vector<char>(n, 0));
    rel.dislikes.assign(n, std::vector<char>(n, 0));
    for (int x = 0; x < n; ++x) {
        if (!rel.nongreen[x]) continue;
        for (int y = x + 1; y < n; ++y) {
            if (!rel.nongreen[y]) continue;
            bool like = false, dislike = false;
            for (int gg : greens) {
                if (gg == x || gg == y) continue;
                if (e(x, y, gg)) like = true;
                else dislike = true;
                if (like && dislike) break;
            }
            rel.likes[x][y] = rel.likes[y][x] = like;
            rel.dislikes[x][y] = rel.dislikes[y][x] = dislike;
        }
    }
    rel.similar.assign(n, std::vector<char>(n, 0));
    for (int x = 0; x < n; ++x)
        for (int x2 = x + 1; x2 < n; ++x2) {
            bool sim = false;
            for (int y = 0; y < n; ++y)
                if (y != x && y != x2 && rel.likes[x][y] && rel.likes[x2][y]) {
                    sim = true;
                    break;
                }
            rel.similar[x][x2] = rel.similar[x2][x] = sim;
        }
    rel.ranker.assign(n, 0);
    for (int r = 0; r < n; ++r) {
        bool found = false;
        for (int u = 0; u < n && !found; ++u) {
            if (u == r) continue;
            for (int v = u + 1; v < n; ++v) {
                if (v == r || !rel.similar[u][v]) continue;
                if (e(r, u, v)) {
                    found = true;
                    break;
                }
            }
        }
        rel.ranker[r] = found;
    }
    return rel;
}

bool DerivedRelations::prefers(const Hypergraph& g, int r, int b, int b2) const {
    (void)g;
    if (r == b || r == b2 || b == b2) return false;
    return nongreen[r] && nongreen[b] && nongreen[b2] && similar[b][b2] && likes[r][b] &&
           dislikes[r][b2];
}

bool DerivedRelations::ranks_above(const Hypergraph& g, int r, int b, int b2) const {
    const bool in = g.triple_color(r, b, b2) != 0;
    if (prefers(g, r, b, b2) && in) return true;
    if (prefers(g, r, b2, b) && !in && ranker[r]) return true;
    return false;
}

std::vector<std::pair<int, int>> ranking_constraints(const Hypergraph& g) {
    std::set<std::pair<int, int>> cons;
    const int n = g.size();
    if (g.palette().same_colors(leq3_palette())) {
        auto blue = [&](int v) {
            int t[1] = {v};
            return g.color(std::span<const int>(t, 1)) == 1;
        };
        auto likes = [&](int r, int b) { return !blue(r) && blue(b) && g.pair_color(r, b) == 1; };
        std::vector<int> reds, blues;
        for (int v = 0; v < n; ++v) (blue(v) ? blues : reds).push_back(v);
        for (int r : reds)
            for (std::size_t i = 0; i < blues.size(); ++i)
                for (std::size_t l = i + 1; l < blues.size(); ++l) {
                    const int b = blues[i], b2 = blues[l];
                    const bool p1 = likes(r, b) && !likes(r, b2);
                    const bool p2 = likes(r, b2) && !likes(r, b);
                    if (!p1 && !p2) continue;
                    const bool in = g.triple_color(r, b, b2) != 0;
                    if (p1) cons.insert(in ? std::make_pair(b, b2) : std::make_pair(b2, b));
                    else cons.insert(in ? std::make_pair(b2, b) : std::make_pair(b, b2));
                }
    } else if (g.palette().same_colors(uniform3_palette())) {
        DerivedRelations rel = derive_relations(g);
        for (int r = 0; r < n; ++r) {
            if (!rel.nongreen[r]) continue;
            for (int b = 0; b < n; ++b)
                for (int b2 = b + 1; b2 < n; ++b2) {
                    if (b == r || b2 == r) continue;
                    if (rel.ranks_above(g, r, b, b2)) cons.insert({b, b2});
                    if (rel.ranks_above(g, r, b2, b)) cons.insert({b2, b});
                }
        }
    } else {
        throw std::invalid_argument("ranking_constraints: unsupported palette");
    }
    return {cons.begin(), cons.end()};
}

OrderabilityResult is_consistently_orderable(const Hypergraph& g) {
    OrderabilityResult res;
    const int n = g.size();
    auto cons = ranking_constraints(g);

    // arcs b -> b' mean "b above b'"
    std::vector<std::vector<int>> adj(n);
    std::vector<int> indeg(n, 0);
    std::set<std::pair<int, int>> seen(cons.begin(), cons.end());
    for (auto [b, b2] : cons) {
        if (seen.count({b2, b})) {          // antisymmetry violation
            res.orderable = false;
            res.cycle = {b, b2};
            return res;
        }
        adj[b].push_back(b2);
        ++indeg[b2];
    }
    std::vector<int> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push_back(v);
    std::vector<int> order;
    std::vector<int> indeg_work = indeg;
    // smallest-vertex-first tie break keeps the witness deterministic
    std::set<int> frontier(ready.begin(), ready.end());
    while (!frontier.empty()) {
        int v = *frontier.begin();
        frontier.erase(frontier.begin());
        order.push_back(v);
        for (int w : adj[v])
            if (--indeg_work[w] == 0) frontier.insert(w);
    }
    if (static_cast<int>(order.size()) == n) {
        res.orderable = true;
        res.order = std::move(order);
        return res;
    }
    // extract a cycle among the unfinished vertices
    std::vector<int> state(n, 0), stack;
    std::vector<int> parent(n, -1);
    res.orderable = false;
    for (int s = 0; s < n && res.cycle.empty(); ++s) {
        if (state[s] || indeg_work[s] == 0) continue;
        stack.assign(1, s);
        while (!stack.empty() && res.cycle.empty()) {
            int v = stack.back();
            if (state[v] == 0) {
                state[v] = 1;
                for (int w : adj[v]) {
                    if (state[w] == 1) {
                        // walk back from v to w
                        res.cycle.push_back(w);
                        for (int x = v; x != w; x = parent[x]) res.cycle.push_back(x);
                        std::reverse(res.cycle.begin(), res.cycle.end());
                        break;
                    }
                    if (state[w] == 0) {
                        parent[w] = v;
                        stack.push_back(w);
                    }
                }
            } else {
                state[v] = 2;
                stack.pop_back();
            }
        }
    }
    return res;
}

Property consistent_order_leq3_property() {
    return Property::predicate(leq3_palette(), "consistent-order-leq3",
                               [](const Hypergraph& g) {
                                   return is_consistently_orderable(g).orderable;
                               });
}

Property consistent_order_3uniform_property() {
    return Property::predicate(uniform3_palette(), "consistent-order-3",
                               [](const Hypergraph& g) {
                                   return is_consistently_orderable(g).orderable;
                               });
}

// ---- report text ------------------------------------------------------------------

std::string to_text(const ObstructionReport& report) {
    std::ostringstream os;
    const char* kind = report.kind == ObstructionReport::Kind::Pair
                           ? "pair"
                           : report.kind == ObstructionReport::Kind::Quad ? "quad" : "nine";
    os << "obstruction " << kind << "\n";
    os << "anchors";
    for (int a : report.anchors) os << ' ' << a;
    os << "\n";
    os << "witness";
    for (int v : report.witness) os << ' ' << v;
    os << "\n";
    os << "conditions";
    for (const auto& c : report.checked_conditions) os << ' ' << c;
    os << "\n";
    return os.str();
}

} // namespace hedra
