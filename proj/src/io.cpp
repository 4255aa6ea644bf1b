#include "hedra/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace hedra {

namespace {

// strip comment and surrounding whitespace; empty result means skip the line
std::string clean_line(const std::string& raw) {
    std::string s = raw;
    if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t b = s.find_first_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b);
}

long expect_long(std::istringstream& is, const char* what) {
    long v;
    if (!(is >> v)) throw FormatError(std::string("HGR: missing ") + what);
    return v;
}

} // namespace

void write_hgr(std::ostream& os, const Hypergraph& g) {
    const Palette& pal = g.palette();
    os << "HGR 1\n";
    os << "order " << pal.order() << "\n";
    os << "palette";
    for (int s : pal.sizes()) os << ' ' << s;
    os << "\n";
    os << "n " << g.size() << "\n";
    if (g.undirected_storage()) os << "undirected 1\n";
    os << "color0 " << int(g.color0()) << "\n";
    for (int j = 1; j <= pal.order(); ++j) {
        if (pal.size(j) == 1) continue;
        if (g.undirected_storage()) {
            for_each_subset(g.size(), j, [&](std::span<const int> s) {
                Color c = g.subset_color(s);
                if (c == 0) return;
                os << "edge " << j;
                for (int v : s) os << ' ' << v;
                os << ' ' << int(c) << "\n";
            });
        } else {
            // subset rank then permutation rank
            for_each_subset(g.size(), j, [&](std::span<const int> s) {
                std::vector<int> perm(s.begin(), s.end());
                std::sort(perm.begin(), perm.end());
                do {
                    Color c = g.color(std::span<const int>(perm.data(), perm.size()));
                    if (c != 0) {
                        os << "edge " << j;
                        for (int v : perm) os << ' ' << v;
                        os << ' ' << int(c) << "\n";
                    }
                } while (std::next_permutation(perm.begin(), perm.end()));
            });
        }
    }
}

std::string to_hgr(const Hypergraph& g) {
    std::ostringstream os;
    write_hgr(os, g);
    return os.str();
}

Hypergraph read_hgr(std::istream& is) {
    std::string raw;
    auto next = [&](std::string& out) -> bool {
        while (std::getline(is, raw)) {
            out = clean_line(raw);
            if (!out.empty()) return true;
        }
        return false;
    };

    std::string line;
    if (!next(line) || line != "HGR 1") throw FormatError("HGR: bad magic line");

    int order = -1, n = -1;
    std::vector<int> sizes;
    bool undirected = false;
    long color0 = 0;
    bool have_color0 = false;

    // header lines up to and including color0
    while (true) {
        if (!next(line)) throw FormatError("HGR: truncated header");
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "order") {
            order = static_cast<int>(expect_long(ls, "order"));
        } else if (key == "palette") {
            long v;
            while (ls >> v) sizes.push_back(static_cast<int>(v));
        } else if (key == "n") {
            n = static_cast<int>(expect_long(ls, "n"));
        } else if (key == "undirected") {
            undirected = expect_long(ls, "undirected flag") != 0;
        } else if (key == "color0") {
            color0 = expect_long(ls, "color0");
            have_color0 = true;
            break;
        } else {
            throw FormatError("HGR: unexpected header line: " + line);
        }
    }
    if (order < 0 || n < 0 || sizes.empty() || !have_color0)
        throw FormatError("HGR: incomplete header");
    if (static_cast<int>(sizes.size()) != order + 1)
        throw FormatError("HGR: palette size count does not match order");

    Palette pal(sizes);
    Hypergraph g(pal, n, undirected ? Storage::Undirected : Storage::Directed);
    if (color0 < 0 || color0 >= pal.size(0)) throw FormatError("HGR: color0 out of range");
    g.set_color0(static_cast<Color>(color0));

    std::vector<int> tuple;
    while (next(line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key != "edge") throw FormatError("HGR: unexpected line: " + line);
        long j = expect_long(ls, "edge order");
        if (j < 1 || j > order) throw FormatError("HGR: edge order out of range");
        tuple.resize(j);
        for (long i = 0; i < j; ++i)
            tuple[i] = static_cast<int>(expect_long(ls, "edge vertex"));
        long c = expect_long(ls, "edge color");
        if (c < 0 || c >= pal.size(static_cast<int>(j)))
            throw FormatError("HGR: edge color out of range");
        try {
            g.set_color(tuple, static_cast<Color>(c));
        } catch (const std::invalid_argument& e) {
            throw FormatError(std::string("HGR: bad edge tuple: ") + e.what());
        }
    }
    return g;
}

Hypergraph parse_hgr(const std::string& text) {
    std::istringstream is(text);
    return read_hgr(is);
}

void save_hgr(const std::string& path, const Hypergraph& g) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open for writing: " + path);
    write_hgr(os, g);
}

Hypergraph load_hgr(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open for reading: " + path);
    return read_hgr(is);
}

} // namespace hedra
