#include "hedra/property.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hedra/io.hpp"
#include "hedra/obstructions.hpp"

namespace hedra {

// ---- Property -------------------------------------------------------------

Property Property::forbidden_family(Palette palette, std::string name,
                                    std::vector<Hypergraph> members) {
    for (const auto& m : members)
        if (!m.palette().same_colors(palette))
            throw std::invalid_argument("Property: family member palette mismatch");
    Property p;
    p.palette_ = std::move(palette);
    p.name_ = std::move(name);
    p.members_ = std::move(members);
    // largest member first; its embeddings are the rarest
    std::stable_sort(p.members_.begin(), p.members_.end(),
                     [](const Hypergraph& a, const Hypergraph& b) { return a.size() > b.size(); });
    return p;
}

Property Property::predicate(Palette palette, std::string name,
                             std::function<bool(const Hypergraph&)> fn) {
    Property p;
    p.palette_ = std::move(palette);
    p.name_ = std::move(name);
    p.fn_ = std::move(fn);
    return p;
}

namespace {

// depth-first search for an injection with pullback equal to f; assignments
// are checked incrementally, pruning on level-1 colors first
bool embed_from(const Hypergraph& g, const Hypergraph& f, std::vector<int>& map,
                std::vector<char>& used, int placed) {
    const int m = f.size();
    if (placed == m) return true;
    const int k = f.palette().order();
    const bool vertex_colors = k >= 1 && f.palette().size(1) > 1;
    for (int u = 0; u < g.size(); ++u) {
        if (used[u]) continue;
        if (vertex_colors) {
            int a[1] = {placed}, b[1] = {u};
            if (f.color(std::span<const int>(a, 1)) != g.color(std::span<const int>(b, 1)))
                continue;
        }
        map[placed] = u;
        used[u] = 1;
        bool ok = true;
        std::vector<int> ft, gt;
        for (int j = 2; j <= k && ok; ++j) {
            if (f.palette().size(j) == 1) continue;
            // all ordered j-tuples over 0..placed that involve `placed`
            for_each_injection(j, placed + 1, [&](std::span<const int> t) {
                if (!ok) return;
                bool touches = false;
                for (int x : t)
                    if (x == placed) { touches = true; break; }
                if (!touches) return;
                ft.assign(t.begin(), t.end());
                gt.resize(t.size());
                for (std::size_t i = 0; i < t.size(); ++i) gt[i] = map[t[i]];
                if (f.color(ft) != g.color(gt)) ok = false;
            });
        }
        if (ok && embed_from(g, f, map, used, placed + 1)) return true;
        used[u] = 0;
    }
    return false;
}

} // namespace

bool contains_induced(const Hypergraph& g, const Hypergraph& f) {
    if (f.size() > g.size()) return false;
    if (f.size() == 0) return f.color0() == g.color0();
    if (f.color0() != g.color0()) return false;
    // level-1 color counts must fit
    const int k = f.palette().order();
    if (k >= 1 && f.palette().size(1) > 1) {
        std::vector<int> cf(f.palette().size(1), 0), cg(cf.size(), 0);
        for (int v = 0; v < f.size(); ++v) { int t[1] = {v}; ++cf[f.color(std::span<const int>(t, 1))]; }
        for (int v = 0; v < g.size(); ++v) { int t[1] = {v}; ++cg[g.color(std::span<const int>(t, 1))]; }
        for (std::size_t c = 0; c < cf.size(); ++c)
            if (cf[c] > cg[c]) return false;
    }
    std::vector<int> map(f.size(), -1);
    std::vector<char> used(g.size(), 0);
    return embed_from(g, f, map, used, 0);
}

bool Property::obeys(const Hypergraph& g) const {
    if (!g.palette().same_colors(palette_))
        throw std::invalid_argument("Property: palette mismatch");
    if (fn_) return fn_(g);
    for (const auto& f : members_)
        if (contains_induced(g, f)) return false;
    return true;
}

bool obeys(const Property& p, const Hypergraph& g) { return p.obeys(g); }

// ---- local satisfaction ----------------------------------------------------

SatisfactionEstimate local_satisfaction_exact(const Property& p, const Hypergraph& g, int N) {
    if (N < 1 || N > g.size())
        throw std::invalid_argument("local_satisfaction: N out of range");
    std::uint64_t total = 0, good = 0;
    for_each_subset(g.size(), N, [&](std::span<const int> w) {
        ++total;
        if (p.obeys(g.restrict_to(std::vector<int>(w.begin(), w.end())))) ++good;
    });
    return {static_cast<double>(good) / static_cast<double>(total), 0.0, total};
}

SatisfactionEstimate local_satisfaction_mc(const Property& p, const Hypergraph& g, int N,
                                           std::uint64_t sample_count, std::uint64_t seed,
                                           int thread_count) {
    if (N < 1 || N > g.size())
        throw std::invalid_argument("local_satisfaction: N out of range");
    if (sample_count < 1) throw std::invalid_argument("local_satisfaction: no samples");
    // fixed shard layout so the estimate depends only on (seed, sample_count)
    const int shards = sample_count >= 4096 ? 16 : 1;
    std::vector<std::uint64_t> quota(shards, sample_count / shards);
    for (std::uint64_t r = 0; r < sample_count % shards; ++r) ++quota[r];
    std::vector<std::uint64_t> good(shards, 0);

    auto run_shard = [&](int s) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
        std::uint64_t local = 0;
        for (std::uint64_t i = 0; i < quota[s]; ++i) {
            std::vector<int> w = rng.sample_distinct(g.size(), N);
            std::sort(w.begin(), w.end());
            if (p.obeys(g.restrict_to(std::move(w)))) ++local;
        }
        good[s] = local;
    };

    if (thread_count <= 1 || shards == 1) {
        for (int s = 0; s < shards; ++s) run_shard(s);
    } else {
        const int workers = std::min(thread_count, shards);
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (int s = next.fetch_add(1); s < shards; s = next.fetch_add(1)) run_shard(s);
            });
        for (auto& th : pool) th.join();
    }

    std::uint64_t total_good = 0;
    for (auto v : good) total_good += v;
    const double phat = static_cast<double>(total_good) / static_cast<double>(sample_count);
    const double se = std::sqrt(std::max(phat * (1.0 - phat), 0.0) /
                                static_cast<double>(sample_count));
    return {phat, se, sample_count};
}

// ---- distance ---------------------------------------------------------------

namespace {

// restrictions to the same subset differ?
bool subsets_differ(const Hypergraph& a, const Hypergraph& b, std::span<const int> w) {
    const int k = a.palette().order();
    const int kk = static_cast<int>(w.size());
    std::vector<int> pick;
    for (unsigned mask = 1; mask < (1u << kk); ++mask) {
        const int j = __builtin_popcount(mask);
        if (j > k || a.palette().size(j) == 1) continue;
        pick.clear();
        for (int i = 0; i < kk; ++i)
            if (mask & (1u << i)) pick.push_back(w[i]);
        if (a.undirected_storage() && b.undirected_storage()) {
            if (a.color(pick) != b.color(pick)) return true;
        } else {
            std::sort(pick.begin(), pick.end());
            do {
                if (a.color(pick) != b.color(pick)) return true;
            } while (std::next_permutation(pick.begin(), pick.end()));
        }
    }
    return false;
}

} // namespace

double distance(const Hypergraph& a, const Hypergraph& b) {
    if (!a.palette().same_colors(b.palette()) || a.size() != b.size())
        throw std::invalid_argument("distance: incompatible hypergraphs");
    const int k = a.palette().order();
    const int n = a.size();
    if (k == 0) return a.color0() == b.color0() ? 0.0 : 1.0;
    if (n < k) return 0.0;                       // no k-subsets to compare
    if (a.color0() != b.color0()) return 1.0;    // every restriction differs
    std::uint64_t total = binom(static_cast<std::uint64_t>(n), k), bad = 0;
    for_each_subset(n, k, [&](std::span<const int> w) {
        if (subsets_differ(a, b, w)) ++bad;
    });
    return static_cast<double>(bad) / static_cast<double>(total);
}

// ---- monochromatic subsets ---------------------------------------------------

std::optional<std::vector<int>> find_monochromatic(const Hypergraph& g, int n_target) {
    if (g.palette().order() > 2)
        throw std::invalid_argument("find_monochromatic: palette order above 2");
    if (!g.is_undirected())
        throw std::invalid_argument("find_monochromatic: hypergraph must be undirected");
    if (n_target > g.size() || n_target < 0) return std::nullopt;
    const int k = g.palette().order();
    const bool vertex_colors = k >= 1 && g.palette().size(1) > 1;
    const bool edge_colors = k >= 2 && g.palette().size(2) > 1;
    std::optional<std::vector<int>> hit;
    for_each_subset(g.size(), n_target, [&](std::span<const int> w) {
        if (hit) return;
        if (vertex_colors) {
            int t0[1] = {w[0]};
            Color c = g.color(std::span<const int>(t0, 1));
            for (int i = 1; i < n_target; ++i) {
                int t[1] = {w[i]};
                if (g.color(std::span<const int>(t, 1)) != c) return;
            }
        }
        if (edge_colors && n_target >= 2) {
            Color c = g.pair_color(w[0], w[1]);
            for (int i = 0; i < n_target; ++i)
                for (int l = i + 1; l < n_target; ++l)
                    if (g.pair_color(w[i], w[l]) != c) return;
        }
        hit = std::vector<int>(w.begin(), w.end());
    });
    return hit;
}

// ---- meet-closure search -------------------------------------------------------

Hypergraph random_hypergraph(const Palette& pal, int n, Rng& rng, Storage storage) {
    Hypergraph g(pal, n, storage);
    g.set_color0(static_cast<Color>(rng.below(pal.size(0))));
    for (int j = 1; j <= pal.order(); ++j) {
        if (pal.size(j) == 1) continue;
        auto& data = g.level_data(j);
        for (auto& c : data) c = static_cast<Color>(rng.below(pal.size(j)));
    }
    return g;
}

// number of hypergraphs on n vertices, clamped to cap+1 on overflow
std::uint64_t hypergraph_space_size(const Palette& pal, int n, Storage storage,
                                    std::uint64_t cap) {
    long double log_total = std::log(static_cast<long double>(pal.size(0)));
    for (int j = 1; j <= pal.order(); ++j) {
        if (pal.size(j) == 1) continue;
        std::uint64_t slots = binom(static_cast<std::uint64_t>(n), j);
        if (storage == Storage::Directed) slots *= falling_factorial(j, j);
        log_total += static_cast<long double>(slots) *
                     std::log(static_cast<long double>(pal.size(j)));
    }
    if (log_total > std::log(static_cast<long double>(cap)) + 0.5) return cap + 1;
    return static_cast<std::uint64_t>(std::llround(std::exp(static_cast<double>(log_total))));
}

void for_each_hypergraph(const Palette& pal, int n, Storage storage,
                         const std::function<void(const Hypergraph&)>& fn) {
    Hypergraph g(pal, n, storage);
    std::vector<std::pair<int, std::size_t>> digits;   // (level, index); level 0 = color0
    if (pal.size(0) > 1) digits.push_back({0, 0});
    for (int j = 1; j <= pal.order(); ++j) {
        if (pal.size(j) == 1) continue;
        for (std::size_t i = 0; i < g.level_data(j).size(); ++i) digits.push_back({j, i});
    }
    while (true) {
        fn(const_cast<const Hypergraph&>(g));
        std::size_t d = 0;
        for (; d < digits.size(); ++d) {
            auto [lvl, idx] = digits[d];
            Color cur = lvl == 0 ? g.color0() : g.level_data(lvl)[idx];
            if (cur + 1 < pal.size(lvl)) {
                if (lvl == 0) g.set_color0(cur + 1);
                else g.level_data(lvl)[idx] = cur + 1;
                break;
            }
            if (lvl == 0) g.set_color0(0);
            else g.level_data(lvl)[idx] = 0;
        }
        if (d == digits.size()) return;
    }
}

MeetClosedResult check_meet_closed(const Property& p, int bound, bool undirected_only,
                                   std::uint64_t seed, std::uint64_t cap) {
    if (!p.palette().fully_ordered())
        throw std::invalid_argument("check_meet_closed: palette has no order specification");
    const Storage st = undirected_only ? Storage::Undirected : Storage::Directed;
    MeetClosedResult res;
    res.exhaustive = true;
    for (int n = 1; n <= bound; ++n) {
        const std::uint64_t count = hypergraph_space_size(p.palette(), n, st, cap);
        if (count <= cap) {
            std::vector<Hypergraph> obeying;
            for_each_hypergraph(p.palette(), n, st, [&](const Hypergraph& g) {
                if (p.obeys(g)) obeying.push_back(g);
            });
            const std::uint64_t pairs = static_cast<std::uint64_t>(obeying.size()) * obeying.size();
            if (pairs <= cap) {
                for (std::size_t i = 0; i < obeying.size() && !res.counterexample; ++i)
                    for (std::size_t l = i; l < obeying.size(); ++l) {
                        ++res.pairs_checked;
                        Hypergraph m = meet(obeying[i], obeying[l]);
                        if (!p.obeys(m)) {
                            res.counterexample = {obeying[i], obeying[l]};
                            break;
                        }
                    }
                if (res.counterexample) return res;
                continue;
            }
            // too many pairs: sample within the enumerated list
            res.exhaustive = false;
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n)));
            for (std::uint64_t t = 0; t < cap / 4 && !obeying.empty(); ++t) {
                const auto& a = obeying[rng.below(obeying.size())];
                const auto& b = obeying[rng.below(obeying.size())];
                ++res.pairs_checked;
                if (!p.obeys(meet(a, b))) {
                    res.counterexample = {a, b};
                    return res;
                }
            }
            continue;
        }
        // graph space itself too large: rejection-sample obeying pairs
        res.exhaustive = false;
        Rng rng(mix_seed(seed, 1000 + static_cast<std::uint64_t>(n)));
        const std::uint64_t tries = 20000;
        std::vector<Hypergraph> pool;
        for (std::uint64_t t = 0; t < tries && pool.size() < 256; ++t) {
            Hypergraph g = random_hypergraph(p.palette(), n, rng, st);
            if (p.obeys(g)) pool.push_back(std::move(g));
        }
        for (std::size_t i = 0; i < pool.size() && !res.counterexample; ++i)
            for (std::size_t l = i; l < pool.size(); ++l) {
                ++res.pairs_checked;
                if (!p.obeys(meet(pool[i], pool[l]))) {
                    res.counterexample = {pool[i], pool[l]};
                    return res;
                }
            }
    }
    return res;
}

std::optional<std::pair<Hypergraph, std::vector<int>>>
audit_hereditary(const Property& p, int n, int trials, std::uint64_t seed) {
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        Hypergraph g = random_hypergraph(p.palette(), n, rng);
        if (!p.obeys(g)) continue;
        for (int size = 0; size <= n; ++size) {
            bool bad = false;
            std::vector<int> witness;
            for_each_subset(n, size, [&](std::span<const int> w) {
                if (bad) return;
                std::vector<int> ww(w.begin(), w.end());
                if (!p.obeys(g.restrict_to(ww))) {
                    bad = true;
                    witness = std::move(ww);
                }
            });
            if (bad) return std::make_pair(g, witness);
        }
    }
    return std::nullopt;
}

// ---- builtin properties ----------------------------------------------------------

namespace {

bool support_edge(const Hypergraph& g, int v, int w) {
    return g.pair_color(v, w) != 0 || g.pair_color(w, v) != 0;
}

bool is_total_order_graph(const Hypergraph& g) {
    const int n = g.size();
    std::vector<int> below(n, 0);
    for (int v = 0; v < n; ++v)
        for (int w = v + 1; w < n; ++w) {
            const bool vw = g.pair_color(v, w) != 0;
            const bool wv = g.pair_color(w, v) != 0;
            if (vw == wv) return false;           // needs exactly one direction
            if (vw) ++below[w];
            else ++below[v];
        }
    // a tournament is transitive iff its score sequence is 0..n-1
    std::vector<char> seen(n, 0);
    for (int v = 0; v < n; ++v) {
        if (below[v] >= n || seen[below[v]]) return false;
        seen[below[v]] = 1;
    }
    return true;
}

bool is_bipartite_graph(const Hypergraph& g) {
    const int n = g.size();
    std::vector<int> side(n, -1);
    std::vector<int> queue;
    for (int s = 0; s < n; ++s) {
        if (side[s] >= 0) continue;
        side[s] = 0;
        queue.assign(1, s);
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int w = 0; w < n; ++w) {
                if (w == v || !support_edge(g, v, w)) continue;
                if (side[w] < 0) {
                    side[w] = 1 - side[v];
                    queue.push_back(w);
                } else if (side[w] == side[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool is_complete_bipartite_graph(const Hypergraph& g) {
    const int n = g.size();
    for (int v = 0; v < n; ++v)
        for (int w = v + 1; w < n; ++w)
            if (g.pair_color(v, w) != g.pair_color(w, v)) return false;
    // complement must be a disjoint union of at most two cliques
    std::vector<int> comp(n, -1);
    int comps = 0;
    std::vector<int> queue;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        if (++comps > 2) return false;
        comp[s] = comps - 1;
        queue.assign(1, s);
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int w = 0; w < n; ++w)
                if (w != v && !support_edge(g, v, w) && comp[w] < 0) {
                    comp[w] = comp[v];
                    queue.push_back(w);
                }
        }
    }
    for (int v = 0; v < n; ++v)
        for (int w = v + 1; w < n; ++w) {
            const bool same = comp[v] == comp[w];
            const bool edge = support_edge(g, v, w);
            if (same && edge) return false;       // complement component not a clique
            if (!same && !edge) return false;     // missing cross edge
        }
    return true;
}

bool is_triangle_free_graph(const Hypergraph& g) {
    const int n = g.size();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (!support_edge(g, u, v)) continue;
            for (int w = v + 1; w < n; ++w)
                if (support_edge(g, u, w) && support_edge(g, v, w)) return false;
        }
    return true;
}

bool is_complete_graph(const Hypergraph& g) {
    const int n = g.size();
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w)
            if (v != w && g.pair_color(v, w) == 0) return false;
    return true;
}

using Factory = Property (*)();

const std::map<std::string, Factory>& registry() {
    static const std::map<std::string, Factory> reg = {
        {"total-order",
         [] { return Property::predicate(Palette::boolean_graph_ordered(), "total-order",
                                         is_total_order_graph); }},
        {"bipartite",
         [] { return Property::predicate(Palette::monochromatic(2), "bipartite",
                                         is_bipartite_graph); }},
        {"complete-bipartite",
         [] { return Property::predicate(Palette::monochromatic(2), "complete-bipartite",
                                         is_complete_bipartite_graph); }},
        {"triangle-free",
         [] { return Property::predicate(Palette::boolean_graph_ordered(), "triangle-free",
                                         is_triangle_free_graph); }},
        {"complete",
         [] { return Property::predicate(Palette::boolean_graph_ordered(), "complete",
                                         is_complete_graph); }},
        {"consistent-order-leq3", [] { return consistent_order_leq3_property(); }},
        {"consistent-order-3", [] { return consistent_order_3uniform_property(); }},
    };
    return reg;
}

} // namespace

const std::vector<std::string>& builtin_property_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, _] : registry()) v.push_back(name);
        return v;
    }();
    return names;
}

Property builtin_property(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end())
        throw std::invalid_argument("unknown builtin property: " + name);
    return it->second();
}

// ---- HGP ------------------------------------------------------------------------

void write_hgp(std::ostream& os, const Property& p) {
    if (p.is_predicate())
        throw std::invalid_argument("HGP: predicate properties are code-registered only");
    os << "HGP 1\n";
    os << "palette";
    for (int s : p.palette().sizes()) os << ' ' << s;
    os << "\n";
    os << "name " << p.name() << "\n";
    for (const auto& f : p.family()) {
        os << "forbid\n";
        write_hgr(os, f);
        os << "end\n";
    }
}

Property read_hgp(std::istream& is) {
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
    if (!next(cur) || cur != "HGP 1") throw FormatError("HGP: bad magic line");
    std::vector<int> sizes;
    std::string name = "property";
    std::vector<Hypergraph> members;
    while (next(cur)) {
        std::istringstream ls(cur);
        std::string key;
        ls >> key;
        if (key == "palette") {
            long v;
            while (ls >> v) sizes.push_back(static_cast<int>(v));
        } else if (key == "name") {
            ls >> name;
        } else if (key == "forbid") {
            std::ostringstream body;
            bool closed = false;
            while (next(cur)) {
                if (cur == "end") { closed = true; break; }
                body << cur << "\n";
            }
            if (!closed) throw FormatError("HGP: forbid block without end");
            members.push_back(parse_hgr(body.str()));
        } else {
            throw FormatError("HGP: unexpected line: " + cur);
        }
    }
    if (sizes.empty()) throw FormatError("HGP: missing palette");
    return Property::forbidden_family(Palette(sizes), name, std::move(members));
}

void save_hgp(const std::string& path, const Property& p) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open for writing: " + path);
    write_hgp(os, p);
}

Property load_hgp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open for reading: " + path);
    return read_hgp(is);
}

} // namespace hedra
