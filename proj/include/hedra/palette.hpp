#ifndef HEDRA_PALETTE_HPP
#define HEDRA_PALETTE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hedra {

using Color = std::uint8_t;

// Partial order on one color set, given by covering pairs.  Construction
// verifies the relation is a partial order under which every pair of colors
// has a unique meet, and materializes the meet table.
class LevelOrder {
public:
    LevelOrder(int size, const std::vector<std::pair<Color, Color>>& covers);

    int size() const { return size_; }
    bool leq(Color a, Color b) const { return leq_[idx(a, b)]; }
    Color meet(Color a, Color b) const { return meet_[idx(a, b)]; }

    bool operator==(const LevelOrder& o) const {
        return size_ == o.size_ && leq_ == o.leq_;
    }

private:
    std::size_t idx(Color a, Color b) const {
        return static_cast<std::size_t>(a) * size_ + b;
    }
    int size_;
    std::vector<char> leq_;
    std::vector<Color> meet_;
};

// Color sets K_0..K_k, one per edge order.  Colors are dense integers
// 0..|K_j|-1.  Levels may carry an order specification (needed for meets);
// singleton levels are trivially ordered.
class Palette {
public:
    Palette() = default;
    explicit Palette(std::vector<int> sizes);

    static Palette monochromatic(int order);              // {0,1}_k
    static Palette boolean_graph_ordered();               // {0,1}_2 with 0 < 1

    int order() const { return static_cast<int>(sizes_.size()) - 1; }
    int size(int level) const { return sizes_[level]; }
    const std::vector<int>& sizes() const { return sizes_; }

    void set_level_order(int level, const std::vector<std::pair<Color, Color>>& covers);
    bool has_level_order(int level) const;
    bool fully_ordered() const;                            // order spec at every level
    Color meet(int level, Color a, Color b) const;

    bool same_colors(const Palette& o) const { return sizes_ == o.sizes_; }
    bool operator==(const Palette& o) const;

    std::string describe() const;

private:
    std::vector<int> sizes_;
    std::vector<std::optional<LevelOrder>> orders_;
};

} // namespace hedra

#endif
