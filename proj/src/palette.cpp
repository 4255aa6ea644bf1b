#include "hedra/palette.hpp"

#include <sstream>
#include <stdexcept>

namespace hedra {

LevelOrder::LevelOrder(int size, const std::vector<std::pair<Color, Color>>& covers)
    : size_(size), leq_(static_cast<std::size_t>(size) * size, 0),
      meet_(static_cast<std::size_t>(size) * size, 0) {
    if (size < 1 || size > 256)
        throw std::invalid_argument("LevelOrder: size out of range");
    for (int a = 0; a < size; ++a) leq_[idx(Color(a), Color(a))] = 1;
    for (auto [lo, hi] : covers) {
        if (lo >= size || hi >= size)
            throw std::invalid_argument("LevelOrder: cover color out of range");
        leq_[idx(lo, hi)] = 1;
    }
    // transitive closure
    for (int m = 0; m < size; ++m)
        for (int a = 0; a < size; ++a)
            if (leq_[idx(Color(a), Color(m))])
                for (int b = 0; b < size; ++b)
                    if (leq_[idx(Color(m), Color(b))]) leq_[idx(Color(a), Color(b))] = 1;
    // antisymmetry
    for (int a = 0; a < size; ++a)
        for (int b = a + 1; b < size; ++b)
            if (leq_[idx(Color(a), Color(b))] && leq_[idx(Color(b), Color(a))])
                throw std::invalid_argument("LevelOrder: relation is not antisymmetric");
    // every pair must have a unique meet: a greatest common lower bound
    for (int a = 0; a < size; ++a) {
        for (int b = 0; b < size; ++b) {
            int best = -1;
            for (int c = 0; c < size; ++c) {
                if (!leq_[idx(Color(c), Color(a))] || !leq_[idx(Color(c), Color(b))]) continue;
                if (best < 0 || leq_[idx(Color(best), Color(c))]) {
                    if (best >= 0 && !leq_[idx(Color(best), Color(c))]) continue;
                    best = c;
                }
            }
            if (best < 0) throw std::invalid_argument("LevelOrder: pair without meet");
            // verify best dominates every common lower bound
            for (int c = 0; c < size; ++c)
                if (leq_[idx(Color(c), Color(a))] && leq_[idx(Color(c), Color(b))] &&
                    !leq_[idx(Color(c), Color(best))])
                    throw std::invalid_argument("LevelOrder: meet is not unique");
            meet_[idx(Color(a), Color(b))] = static_cast<Color>(best);
        }
    }
}

Palette::Palette(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw std::invalid_argument("Palette: needs at least K_0");
    for (int s : sizes_)
        if (s < 1 || s > 256) throw std::invalid_argument("Palette: level size out of range");
    orders_.resize(sizes_.size());
}

Palette Palette::monochromatic(int order) {
    std::vector<int> s(order + 1, 1);
    s[order] = 2;
    return Palette(std::move(s));
}

Palette Palette::boolean_graph_ordered() {
    Palette p = monochromatic(2);
    p.set_level_order(2, {{Color(0), Color(1)}});
    return p;
}

void Palette::set_level_order(int level, const std::vector<std::pair<Color, Color>>& covers) {
    if (level < 0 || level > order()) throw std::invalid_argument("Palette: bad level");
    orders_[level].emplace(sizes_[level], covers);
}

bool Palette::has_level_order(int level) const {
    return sizes_[level] == 1 || orders_[level].has_value();
}

bool Palette::fully_ordered() const {
    for (int j = 0; j <= order(); ++j)
        if (!has_level_order(j)) return false;
    return true;
}

Color Palette::meet(int level, Color a, Color b) const {
    if (sizes_[level] == 1) return 0;
    if (!orders_[level])
        throw std::invalid_argument("Palette: level has no order specification");
    return orders_[level]->meet(a, b);
}

bool Palette::operator==(const Palette& o) const {
    if (sizes_ != o.sizes_) return false;
    for (std::size_t j = 0; j < orders_.size(); ++j) {
        if (orders_[j].has_value() != o.orders_[j].has_value()) return false;
        if (orders_[j] && !(*orders_[j] == *o.orders_[j])) return false;
    }
    return true;
}

std::string Palette::describe() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t j = 0; j < sizes_.size(); ++j) {
        if (j) os << ",";
        os << sizes_[j];
    }
    os << ")";
    return os.str();
}

} // namespace hedra
