#include "hedra/rules.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "hedra/io.hpp"
#include "hedra/random.hpp"

namespace hedra {

LocalRule::LocalRule(Palette palette, int a_size, std::string name)
    : palette_(std::move(palette)), a_size_(a_size), name_(std::move(name)),
      recolor_(palette_.order() + 1) {
    if (a_size < 0) throw std::invalid_argument("LocalRule: negative training size");
}

void LocalRule::set_recolor(int level, Recolor fn) {
    if (level < 0 || level > palette_.order())
        throw std::invalid_argument("LocalRule: bad level");
    recolor_[level] = std::move(fn);
}

Color LocalRule::recolor(int level, const Hypergraph& view) const {
    if (palette_.size(level) == 1) return 0;
    if (!recolor_[level]) throw std::logic_error("LocalRule: level has no recoloring function");
    return recolor_[level](view);
}

void LocalRule::set_fast_apply(std::function<Hypergraph(const Hypergraph&)> fn) {
    fast_apply_ = std::move(fn);
}

Hypergraph modification_map(const LocalRule& rule, const Hypergraph& g, bool memoize) {
    if (!g.palette().same_colors(rule.palette()))
        throw std::invalid_argument("modification_map: palette mismatch");
    const int a = rule.a_size();
    if (g.size() < a)
        throw std::invalid_argument("modification_map: input smaller than training set");
    const int m = g.size() - a;
    const int k = rule.palette().order();
    Hypergraph out(g.palette(), m, Storage::Directed);

    std::vector<int> training(a);
    for (int i = 0; i < a; ++i) training[i] = i;
    if (rule.palette().size(0) > 1)
        out.set_color0(rule.recolor(0, g.restrict_to(training)));

    std::unordered_map<std::string, Color> memo;
    std::vector<int> view_image(a);
    for (int i = 0; i < a; ++i) view_image[i] = i;
    for (int j = 1; j <= k; ++j) {
        if (rule.palette().size(j) == 1) continue;
        view_image.resize(a + j);
        for_each_injection(j, m, [&](std::span<const int> t) {
            for (int i = 0; i < j; ++i) view_image[a + i] = a + t[i];
            Hypergraph view = g.pullback(Morphism(g.size(), view_image));
            Color c;
            if (memoize) {
                std::string key;
                key.push_back(static_cast<char>(j));
                key += view.canonical_key();
                auto it = memo.find(key);
                if (it != memo.end()) {
                    c = it->second;
                } else {
                    c = rule.recolor(j, view);
                    memo.emplace(std::move(key), c);
                }
            } else {
                c = rule.recolor(j, view);
            }
            out.set_color(t, c);
        });
    }
    return out;
}

Hypergraph apply_rule(const LocalRule& rule, const Hypergraph& g, const Morphism& phi) {
    if (phi.target_size != g.size() || phi.source_size != rule.a_size())
        throw std::invalid_argument("apply_rule: morphism does not match rule and input");
    const int n = g.size();
    std::vector<char> in_a(n, 0);
    for (int v : phi.image) in_a[v] = 1;
    std::vector<int> order(phi.image);
    for (int v = 0; v < n; ++v)
        if (!in_a[v]) order.push_back(v);           // canonical ascending tail
    Hypergraph relabeled = g.pullback(Morphism(n, order));
    if (rule.has_fast_apply()) return rule.fast_apply(relabeled);
    return modification_map(rule, relabeled);
}

// ---- entailment -------------------------------------------------------------

namespace {

EntailmentResult entailment_scan(const LocalRule& rule, const Property& p, int n_max,
                                 std::uint64_t ceiling, std::uint64_t samples,
                                 std::uint64_t seed, bool exhaustive) {
    EntailmentResult res;
    for (int v = 0; v <= n_max && !res.counterexample; ++v) {
        const int n = rule.a_size() + v;
        if (exhaustive) {
            const std::uint64_t count =
                hypergraph_space_size(rule.palette(), n, Storage::Directed, ceiling);
            if (count > ceiling) {
                res.refused = true;
                res.refused_count = count;
                return res;
            }
            for_each_hypergraph(rule.palette(), n, Storage::Directed, [&](const Hypergraph& g) {
                if (res.counterexample) return;
                ++res.checked;
                Hypergraph out = modification_map(rule, g, false);
                if (!p.obeys(out)) {
                    res.counterexample = g;
                    res.counterexample_v = v;
                }
            });
        } else {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(v)));
            for (std::uint64_t s = 0; s < samples && !res.counterexample; ++s) {
                Hypergraph g = random_hypergraph(rule.palette(), n, rng);
                ++res.checked;
                Hypergraph out = modification_map(rule, g, false);
                if (!p.obeys(out)) {
                    res.counterexample = g;
                    res.counterexample_v = v;
                }
            }
        }
    }
    return res;
}

} // namespace

EntailmentResult verify_entailment_upto(const LocalRule& rule, const Property& p, int n_max,
                                        std::uint64_t ceiling) {
    return entailment_scan(rule, p, n_max, ceiling, 0, 0, true);
}

EntailmentResult verify_entailment_mc(const LocalRule& rule, const Property& p, int n_max,
                                      std::uint64_t samples, std::uint64_t seed) {
    return entailment_scan(rule, p, n_max, 0, samples, seed, false);
}

// ---- builtin rules -------------------------------------------------------------

LocalRule rule_identity_copy(const Palette& palette, int a_size) {
    LocalRule rule(palette, a_size, "identity-copy");
    const int k = palette.order();
    if (palette.size(0) > 1)
        rule.set_recolor(0, [](const Hypergraph& view) { return view.color0(); });
    for (int j = 1; j <= k; ++j) {
        if (palette.size(j) == 1) continue;
        rule.set_recolor(j, [j](const Hypergraph& view) {
            std::vector<int> t(j);
            const int a = view.size() - j;
            for (int i = 0; i < j; ++i) t[i] = a + i;
            return view.color(t);
        });
    }
    rule.set_fast_apply([a_size](const Hypergraph& g) {
        std::vector<int> tail(g.size() - a_size);
        for (std::size_t i = 0; i < tail.size(); ++i) tail[i] = a_size + static_cast<int>(i);
        return g.restrict_to(tail);
    });
    return rule;
}

LocalRule rule_constant_zero(const Palette& palette, int a_size) {
    LocalRule rule(palette, a_size, "constant-zero");
    for (int j = 0; j <= palette.order(); ++j) {
        if (palette.size(j) == 1) continue;
        rule.set_recolor(j, [](const Hypergraph&) { return Color(0); });
    }
    rule.set_fast_apply([palette, a_size](const Hypergraph& g) {
        return Hypergraph(palette, g.size() - a_size, Storage::Undirected);
    });
    return rule;
}

LocalRule rule_bipartite_delete() {
    Palette pal = Palette::monochromatic(2);
    LocalRule rule(pal, 1, "bipartite-delete");
    rule.set_recolor(2, [](const Hypergraph& view) {
        // training vertex at 0, edge (v,w) at (1,2)
        return Color(view.pair_color(1, 2) == 1 && view.pair_color(2, 0) == 1 &&
                             view.pair_color(1, 0) == 0
                         ? 1
                         : 0);
    });
    rule.set_fast_apply([pal](const Hypergraph& g) {
        const int m = g.size() - 1;
        Hypergraph out(pal, m, Storage::Directed);
        for (int v = 0; v < m; ++v)
            for (int w = 0; w < m; ++w) {
                if (v == w) continue;
                if (g.pair_color(v + 1, w + 1) == 1 && g.pair_color(w + 1, 0) == 1 &&
                    g.pair_color(v + 1, 0) == 0)
                    out.set_pair_color(v, w, 1);
            }
        return out;
    });
    return rule;
}

// ---- bipartite majority rule -----------------------------------------------------

namespace {

struct BipartitionFit {
    std::vector<char> side;    // 1 = A_1, 0 = A_2
};

bool lex_less(const std::vector<char>& a, const std::vector<char>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// symmetric difference between the training graph and the complete bipartite
// graph induced by `side`
int bipartition_score(const std::vector<std::vector<char>>& adj, const std::vector<char>& side) {
    const int a = static_cast<int>(side.size());
    int score = 0;
    for (int i = 0; i < a; ++i)
        for (int l = i + 1; l < a; ++l) {
            const bool cross = side[i] != side[l];
            if (adj[i][l] != static_cast<char>(cross)) ++score;
        }
    return score;
}

std::vector<char> mask_to_side(std::uint64_t mask, int a) {
    std::vector<char> side(a);
    for (int i = 0; i < a; ++i) side[i] = static_cast<char>((mask >> i) & 1);
    return side;
}

// best complete-bipartite fit on the training restriction: exact for
// |A| <= 20, otherwise a capped seeded random search; ties resolved toward the
// lexicographically least side-indicator vector.  Training vertex 0 is pinned
// to A_2, which removes the redundant complement of every bipartition.
BipartitionFit fit_bipartition(const Hypergraph& training, std::uint64_t seed) {
    const int a = training.size();
    std::vector<std::vector<char>> adj(a, std::vector<char>(a, 0));
    for (int i = 0; i < a; ++i)
        for (int l = i + 1; l < a; ++l) {
            char e = (training.pair_color(i, l) != 0 || training.pair_color(l, i) != 0) ? 1 : 0;
            adj[i][l] = adj[l][i] = e;
        }
    BipartitionFit best;
    best.side.assign(a, 0);
    if (a <= 1) return best;
    int best_score = bipartition_score(adj, best.side);

    auto consider = [&](std::uint64_t mask) {
        std::vector<char> side = mask_to_side(mask, a);
        int score = bipartition_score(adj, side);
        if (score < best_score || (score == best_score && lex_less(side, best.side))) {
            best_score = score;
            best.side = std::move(side);
        }
    };

    if (a <= 20) {
        for (std::uint64_t mask = 0; mask < (1ull << a); mask += 2) consider(mask);
    } else {
        std::uint64_t h = std::hash<std::string>{}(training.canonical_key());
        Rng rng(mix_seed(seed, h));
        const std::uint64_t mask_bits = (a >= 64) ? ~0ull : ((1ull << a) - 1);
        for (int t = 0; t < 100000; ++t)
            consider(rng.next() & mask_bits & ~1ull);   // vertex 0 stays in A_2
    }
    return best;
}

// majority classification against the fitted training bipartition;
// class 1 iff strictly more connections into A_2 than into A_1
int classify_against(const Hypergraph& g, const std::vector<char>& side, int vertex, int a) {
    int to_a1 = 0, to_a2 = 0;
    for (int i = 0; i < a; ++i) {
        const bool e = g.pair_color(vertex, i) != 0 || g.pair_color(i, vertex) != 0;
        if (!e) continue;
        if (side[i]) ++to_a1;
        else ++to_a2;
    }
    return to_a2 > to_a1 ? 1 : 2;
}

struct FitCache {
    std::mutex mu;
    std::unordered_map<std::string, BipartitionFit> map;
};

} // namespace

LocalRule rule_bipartite_majority(int a_size, std::uint64_t seed) {
    Palette pal = Palette::monochromatic(2);
    LocalRule rule(pal, a_size, "bipartite-majority");
    auto cache = std::make_shared<FitCache>();

    auto fit_for = [cache, seed, a_size](const Hypergraph& g) -> BipartitionFit {
        std::vector<int> tr(a_size);
        for (int i = 0; i < a_size; ++i) tr[i] = i;
        Hypergraph training = g.restrict_to(tr);
        std::string key = training.canonical_key();
        {
            std::lock_guard<std::mutex> lock(cache->mu);
            auto it = cache->map.find(key);
            if (it != cache->map.end()) return it->second;
        }
        BipartitionFit fit = fit_bipartition(training, seed);
        std::lock_guard<std::mutex> lock(cache->mu);
        return cache->map.emplace(std::move(key), std::move(fit)).first->second;
    };

    rule.set_recolor(2, [fit_for, a_size](const Hypergraph& view) {
        BipartitionFit fit = fit_for(view);
        const int cv = classify_against(view, fit.side, a_size, a_size);
        const int cw = classify_against(view, fit.side, a_size + 1, a_size);
        return Color(cv != cw ? 1 : 0);
    });
    rule.set_fast_apply([fit_for, a_size, pal](const Hypergraph& g) {
        const int m = g.size() - a_size;
        BipartitionFit fit = fit_for(g);
        std::vector<int> cls(m);
        for (int v = 0; v < m; ++v) cls[v] = classify_against(g, fit.side, a_size + v, a_size);
        Hypergraph out(pal, m, Storage::Undirected);
        for (int v = 0; v < m; ++v)
            for (int w = v + 1; w < m; ++w)
                if (cls[v] != cls[w]) out.set_pair_color(v, w, 1);
        return out;
    });
    return rule;
}

// ---- order-flavored rules ---------------------------------------------------------

namespace {

// clean anchor-rank: anchors strictly below the vertex with no reverse edge
int anchor_rank(const Hypergraph& g, int vertex, int a) {
    int r = 0;
    for (int t = 0; t < a; ++t)
        if (g.pair_color(t, vertex) == 1 && g.pair_color(vertex, t) == 0) ++r;
    return r;
}

} // namespace

LocalRule rule_order_rank_majority(int a_size) {
    Palette pal = Palette::monochromatic(2);
    LocalRule rule(pal, a_size, "order-rank-majority");
    rule.set_recolor(2, [a_size](const Hypergraph& view) {
        const int rv = anchor_rank(view, a_size, a_size);
        const int rw = anchor_rank(view, a_size + 1, a_size);
        if (rv != rw) return Color(rv < rw ? 1 : 0);
        return view.pair_color(a_size, a_size + 1);   // tie: copy the input edge
    });
    rule.set_fast_apply([pal, a_size](const Hypergraph& g) {
        const int m = g.size() - a_size;
        std::vector<int> rank(m);
        for (int v = 0; v < m; ++v) rank[v] = anchor_rank(g, a_size + v, a_size);
        Hypergraph out(pal, m, Storage::Directed);
        for (int v = 0; v < m; ++v)
            for (int w = 0; w < m; ++w) {
                if (v == w) continue;
                Color c = rank[v] != rank[w] ? Color(rank[v] < rank[w] ? 1 : 0)
                                             : g.pair_color(a_size + v, a_size + w);
                if (c) out.set_pair_color(v, w, c);
            }
        return out;
    });
    return rule;
}

LocalRule rule_order_edge_vote(int a_size) {
    Palette pal = Palette::monochromatic(2);
    LocalRule rule(pal, a_size, "order-edge-vote");
    auto vote = [a_size](const Hypergraph& g, int v, int w) {
        int forward = 2 * (g.pair_color(v, w) == 1);
        int backward = 2 * (g.pair_color(w, v) == 1);
        for (int t = 0; t < a_size; ++t) {
            if (g.pair_color(v, t) == 1 && g.pair_color(t, w) == 1) ++forward;
            if (g.pair_color(w, t) == 1 && g.pair_color(t, v) == 1) ++backward;
        }
        return Color(forward > backward ? 1 : 0);
    };
    rule.set_recolor(2, [vote, a_size](const Hypergraph& view) {
        return vote(view, a_size, a_size + 1);
    });
    rule.set_fast_apply([pal, a_size, vote](const Hypergraph& g) {
        const int m = g.size() - a_size;
        Hypergraph out(pal, m, Storage::Directed);
        for (int v = 0; v < m; ++v)
            for (int w = 0; w < m; ++w) {
                if (v == w) continue;
                Color c = vote(g, a_size + v, a_size + w);
                if (c) out.set_pair_color(v, w, c);
            }
        return out;
    });
    return rule;
}

// ---- registry ------------------------------------------------------------------

const std::vector<std::string>& builtin_rule_names() {
    static const std::vector<std::string> names = {
        "identity-copy",       "constant-zero",       "bipartite-delete",
        "bipartite-majority",  "order-rank-majority", "order-edge-vote",
    };
    return names;
}

LocalRule builtin_rule(const std::string& name, const Palette* palette_hint, int a_size) {
    Palette fallback = Palette::monochromatic(2);
    const Palette& pal = palette_hint ? *palette_hint : fallback;
    if (name == "identity-copy") return rule_identity_copy(pal, a_size);
    if (name == "constant-zero") return rule_constant_zero(pal, a_size);
    if (name == "bipartite-delete") return rule_bipartite_delete();
    if (name == "bipartite-majority") return rule_bipartite_majority(a_size > 0 ? a_size : 30);
    if (name == "order-rank-majority") return rule_order_rank_majority(a_size > 0 ? a_size : 5);
    if (name == "order-edge-vote") return rule_order_edge_vote(a_size > 0 ? a_size : 5);
    throw std::invalid_argument("unknown builtin rule: " + name);
}

// ---- HGT -----------------------------------------------------------------------

namespace {

std::string hex_encode(const std::string& raw) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(raw.size() * 2);
    for (unsigned char c : raw) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 15]);
    }
    return out;
}

std::string hex_decode(const std::string& hex) {
    if (hex.size() % 2) throw FormatError("HGT: odd hex length");
    auto val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw FormatError("HGT: bad hex digit");
    };
    std::string out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<char>(val(hex[i]) * 16 + val(hex[i + 1])));
    return out;
}

} // namespace

void write_hgt(std::ostream& os, const LocalRule& rule) {
    const Palette& pal = rule.palette();
    os << "HGT 1\n";
    os << "order " << pal.order() << "\n";
    os << "palette";
    for (int s : pal.sizes()) os << ' ' << s;
    os << "\n";
    os << "a " << rule.a_size() << "\n";
    os << "name " << rule.name() << "\n";
    for (int j = 0; j <= pal.order(); ++j) {
        if (pal.size(j) == 1) continue;
        const std::uint64_t space =
            hypergraph_space_size(pal, rule.a_size() + j, Storage::Directed, 1u << 20);
        if (space > (1u << 20))
            throw std::invalid_argument("HGT: view space too large to materialize");
        for_each_hypergraph(pal, rule.a_size() + j, Storage::Directed,
                            [&](const Hypergraph& view) {
                                os << "map " << j << ' ' << hex_encode(view.canonical_key())
                                   << ' ' << int(rule.recolor(j, view)) << "\n";
                            });
    }
}

LocalRule read_hgt(std::istream& is) {
    std::string line;
    int order = -1, a = -1;
    std::vector<int> sizes;
    std::string name = "table-rule";
    auto table = std::make_shared<std::unordered_map<std::string, Color>>();
    bool header_done = false;
    std::optional<LocalRule> rule;

    auto finish_header = [&] {
        if (order < 0 || a < 0 || static_cast<int>(sizes.size()) != order + 1)
            throw FormatError("HGT: incomplete header");
        rule.emplace(Palette(sizes), a, name);
        header_done = true;
    };

    bool magic = false;
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        if (!magic) {
            if (line != "HGT 1") throw FormatError("HGT: bad magic line");
            magic = true;
            continue;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "order") ls >> order;
        else if (key == "palette") {
            int v;
            while (ls >> v) sizes.push_back(v);
        } else if (key == "a") ls >> a;
        else if (key == "name") ls >> name;
        else if (key == "map") {
            if (!header_done) finish_header();
            int j;
            std::string hex;
            int c;
            if (!(ls >> j >> hex >> c)) throw FormatError("HGT: bad map line");
            std::string k;
            k.push_back(static_cast<char>(j));
            k += hex_decode(hex);
            (*table)[k] = static_cast<Color>(c);
        } else {
            throw FormatError("HGT: unexpected line: " + line);
        }
    }
    if (!header_done) finish_header();
    for (int j = 0; j <= rule->palette().order(); ++j) {
        if (rule->palette().size(j) == 1) continue;
        rule->set_recolor(j, [table, j](const Hypergraph& view) {
            std::string k;
            k.push_back(static_cast<char>(j));
            k += view.canonical_key();
            auto it = table->find(k);
            return it == table->end() ? Color(0) : it->second;   // unlisted views default to 0
        });
    }
    return *rule;
}

void save_hgt(const std::string& path, const LocalRule& rule) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open for writing: " + path);
    write_hgt(os, rule);
}

LocalRule load_hgt(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open for reading: " + path);
    return read_hgt(is);
}

} // namespace hedra
