#include "hedra/hypergraph.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace hedra {

namespace {
constexpr std::array<std::uint64_t, 9> kFactorial = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
}

std::uint64_t binom(std::uint64_t n, int k) {
    if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0;
    switch (k) {
        case 0: return 1;
        case 1: return n;
        case 2: return n * (n - 1) / 2;
        case 3: return n * (n - 1) / 2 * (n - 2) / 3;
        default: {
            std::uint64_t r = 1;
            for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
            return r;
        }
    }
}

std::uint64_t falling_factorial(std::uint64_t n, int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r *= n - i;
    return r;
}

std::vector<std::vector<int>> all_injections(int j, int n) {
    std::vector<std::vector<int>> out;
    for_each_injection(j, n, [&](std::span<const int> t) {
        out.emplace_back(t.begin(), t.end());
    });
    return out;
}

std::uint64_t subset_rank(std::span<const int> s) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        r += binom(static_cast<std::uint64_t>(s[i]), static_cast<int>(i) + 1);
    return r;
}

int permutation_rank(std::span<const int> t) {
    const int j = static_cast<int>(t.size());
    if (j <= 1) return 0;
    if (j == 2) return t[0] < t[1] ? 0 : 1;
    int r = 0;
    for (int i = 0; i < j; ++i) {
        int smaller = 0;
        for (int l = i + 1; l < j; ++l)
            if (t[l] < t[i]) ++smaller;
        r += smaller * static_cast<int>(kFactorial[j - 1 - i]);
    }
    return r;
}

Hypergraph::Hypergraph(Palette palette, int n, Storage storage)
    : palette_(std::move(palette)), n_(n), storage_(storage) {
    if (n < 0) throw std::invalid_argument("Hypergraph: negative vertex count");
    if (palette_.order() > 8) throw std::invalid_argument("Hypergraph: palette order above 8");
    const int k = palette_.order();
    levels_.resize(k >= 1 ? k : 0);
    for (int j = 1; j <= k; ++j) {
        std::uint64_t slots = binom(static_cast<std::uint64_t>(n), j);
        if (storage_ == Storage::Directed) slots *= kFactorial[j];
        levels_[j - 1].assign(slots, 0);
    }
}

void Hypergraph::set_color0(Color c) {
    if (c >= palette_.size(0)) throw std::invalid_argument("Hypergraph: color0 out of range");
    color0_ = c;
}

void Hypergraph::check_tuple(std::span<const int> t) const {
    const int j = static_cast<int>(t.size());
    if (j < 1 || j > palette_.order())
        throw std::invalid_argument("Hypergraph: tuple size outside palette order");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0 || t[i] >= n_) throw std::invalid_argument("Hypergraph: vertex out of range");
        for (std::size_t l = i + 1; l < t.size(); ++l)
            if (t[i] == t[l]) throw std::invalid_argument("Hypergraph: repeated vertex in tuple");
    }
}

std::size_t Hypergraph::slot_index(std::span<const int> t) const {
    const int j = static_cast<int>(t.size());
    std::uint64_t rank;
    if (j == 1) {
        rank = static_cast<std::uint64_t>(t[0]);
    } else {
        // sort a small local copy to rank the underlying subset
        std::array<int, 8> s{};
        std::copy(t.begin(), t.end(), s.begin());
        std::sort(s.begin(), s.begin() + j);
        rank = subset_rank(std::span<const int>(s.data(), j));
    }
    if (storage_ == Storage::Undirected) return rank;
    return rank * kFactorial[j] + permutation_rank(t);
}

Color Hypergraph::color(std::span<const int> t) const {
    if (t.empty()) return color0_;
    check_tuple(t);
    return levels_[t.size() - 1][slot_index(t)];
}

void Hypergraph::set_color(std::span<const int> t, Color c) {
    if (t.empty()) { set_color0(c); return; }
    check_tuple(t);
    if (c >= palette_.size(static_cast<int>(t.size())))
        throw std::invalid_argument("Hypergraph: color out of range");
    levels_[t.size() - 1][slot_index(t)] = c;
}

Color Hypergraph::subset_color(std::span<const int> s) const {
    if (s.empty()) return color0_;
    std::uint64_t rank = s.size() == 1 ? static_cast<std::uint64_t>(s[0]) : subset_rank(s);
    if (storage_ == Storage::Undirected) return levels_[s.size() - 1][rank];
    return levels_[s.size() - 1][rank * kFactorial[s.size()]];
}

bool Hypergraph::is_undirected() const {
    if (storage_ == Storage::Undirected) return true;
    for (int j = 2; j <= palette_.order(); ++j) {
        if (palette_.size(j) == 1) continue;
        const auto& data = levels_[j - 1];
        const std::uint64_t block = kFactorial[j];
        const std::uint64_t subsets = data.size() / block;
        for (std::uint64_t r = 0; r < subsets; ++r) {
            const Color c = data[r * block];
            for (std::uint64_t p = 1; p < block; ++p)
                if (data[r * block + p] != c) return false;
        }
    }
    return true;
}

Hypergraph Hypergraph::pullback(const Morphism& phi) const {
    if (phi.target_size != n_)
        throw std::invalid_argument("pullback: morphism target does not match hypergraph");
    Hypergraph out(palette_, phi.source_size, storage_);
    out.color0_ = color0_;
    std::vector<int> mapped;
    for (int j = 1; j <= palette_.order(); ++j) {
        if (palette_.size(j) == 1) continue;
        mapped.resize(j);
        if (storage_ == Storage::Undirected) {
            for_each_subset(phi.source_size, j, [&](std::span<const int> s) {
                for (int i = 0; i < j; ++i) mapped[i] = phi(s[i]);
                out.set_color(s, color(mapped));
            });
        } else {
            for_each_injection(j, phi.source_size, [&](std::span<const int> t) {
                for (int i = 0; i < j; ++i) mapped[i] = phi(t[i]);
                out.set_color(t, color(mapped));
            });
        }
    }
    return out;
}

Hypergraph Hypergraph::restrict_to(std::vector<int> vertices) const {
    return pullback(Morphism::inclusion(n_, std::move(vertices)));
}

bool Hypergraph::operator==(const Hypergraph& o) const {
    if (!palette_.same_colors(o.palette_) || n_ != o.n_ || color0_ != o.color0_) return false;
    if (storage_ == o.storage_) return levels_ == o.levels_;
    // mixed storage: compare semantically
    for (int j = 1; j <= palette_.order(); ++j) {
        if (palette_.size(j) == 1) continue;
        bool equal = true;
        for_each_injection(j, n_, [&](std::span<const int> t) {
            if (color(t) != o.color(t)) equal = false;
        });
        if (!equal) return false;
    }
    return true;
}

std::string Hypergraph::canonical_key() const {
    std::string key;
    key.push_back(static_cast<char>(color0_));
    for (int j = 1; j <= palette_.order(); ++j) {
        if (palette_.size(j) == 1) continue;
        const auto& data = levels_[j - 1];
        if (storage_ == Storage::Directed) {
            key.append(data.begin(), data.end());
        } else {
            for (Color c : data)
                key.append(kFactorial[j], static_cast<char>(c));
        }
    }
    return key;
}

Hypergraph meet(const Hypergraph& a, const Hypergraph& b) {
    if (!(a.palette() == b.palette()) || a.size() != b.size())
        throw std::invalid_argument("meet: operands must share palette and vertex set");
    if (!a.palette().fully_ordered())
        throw std::invalid_argument("meet: palette has no order specification");
    Storage st = (a.undirected_storage() && b.undirected_storage()) ? Storage::Undirected
                                                                    : Storage::Directed;
    Hypergraph out(a.palette(), a.size(), st);
    out.set_color0(a.palette().meet(0, a.color0(), b.color0()));
    for (int j = 1; j <= a.palette().order(); ++j) {
        if (a.palette().size(j) == 1) continue;
        if (st == Storage::Undirected) {
            auto& dst = out.level_data(j);
            const auto& da = a.level_data(j);
            const auto& db = b.level_data(j);
            for (std::size_t i = 0; i < dst.size(); ++i)
                dst[i] = a.palette().meet(j, da[i], db[i]);
        } else {
            for_each_injection(j, a.size(), [&](std::span<const int> t) {
                out.set_color(t, a.palette().meet(j, a.color(t), b.color(t)));
            });
        }
    }
    return out;
}

bool is_partite_edge(const Hypergraph& g, std::span<const int> tuple) {
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        int vi[1] = {tuple[i]};
        for (std::size_t l = i + 1; l < tuple.size(); ++l) {
            int vl[1] = {tuple[l]};
            if (g.color(std::span<const int>(vi, 1)) == g.color(std::span<const int>(vl, 1)))
                return false;
        }
    }
    return true;
}

bool partite_equivalent(const Hypergraph& a, const Hypergraph& b) {
    if (!a.palette().same_colors(b.palette()) || a.size() != b.size())
        throw std::invalid_argument("partite_equivalent: incompatible hypergraphs");
    if (a.color0() != b.color0()) return false;
    for (int v = 0; v < a.size(); ++v) {
        int t[1] = {v};
        if (a.color(std::span<const int>(t, 1)) != b.color(std::span<const int>(t, 1)))
            return false;
    }
    for (int j = 2; j <= a.palette().order(); ++j) {
        if (a.palette().size(j) == 1) continue;
        bool ok = true;
        for_each_injection(j, a.size(), [&](std::span<const int> t) {
            if (!ok) return;
            if (is_partite_edge(a, t) && a.color(t) != b.color(t)) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

} // namespace hedra
