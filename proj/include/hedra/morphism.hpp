#ifndef HEDRA_MORPHISM_HPP
#define HEDRA_MORPHISM_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace hedra {

// Injective map from [m] into [n], m <= n.
struct Morphism {
    int source_size = 0;
    int target_size = 0;
    std::vector<int> image;   // image[i] = where source vertex i goes

    Morphism() = default;
    Morphism(int target_n, std::vector<int> img)
        : source_size(static_cast<int>(img.size())), target_size(target_n), image(std::move(img)) {
        validate();
    }

    static Morphism identity(int n) {
        std::vector<int> img(n);
        for (int i = 0; i < n; ++i) img[i] = i;
        return Morphism(n, std::move(img));
    }

    // inclusion of a vertex subset, canonically sorted ascending
    static Morphism inclusion(int n, std::vector<int> subset) {
        std::sort(subset.begin(), subset.end());
        return Morphism(n, std::move(subset));
    }

    int operator()(int i) const { return image[i]; }

    // this o psi
    Morphism compose(const Morphism& psi) const {
        if (psi.target_size != source_size)
            throw std::invalid_argument("Morphism: composition size mismatch");
        std::vector<int> img(psi.source_size);
        for (int i = 0; i < psi.source_size; ++i) img[i] = image[psi.image[i]];
        return Morphism(target_size, std::move(img));
    }

    void validate() const {
        if (source_size > target_size)
            throw std::invalid_argument("Morphism: source larger than target");
        std::vector<int> seen;
        seen.assign(target_size, 0);
        for (int v : image) {
            if (v < 0 || v >= target_size)
                throw std::invalid_argument("Morphism: image out of range");
            if (seen[v]++)
                throw std::invalid_argument("Morphism: not injective");
        }
    }
};

} // namespace hedra

#endif
