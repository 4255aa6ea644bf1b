#ifndef HEDRA_IO_HPP
#define HEDRA_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hedra/hypergraph.hpp"

namespace hedra {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// HGR v1: line-oriented text, '#' comments, UTF-8.
//
//   HGR 1
//   order <k>
//   palette <|K_0|> ... <|K_k|>
//   n <n>
//   undirected 1              (optional; shared-slot storage)
//   color0 <c>
//   edge <j> <v_1> ... <v_j> <color>
//
// Unlisted tuples default to color 0.  Writers emit non-zero edges in
// (j, subset rank, permutation rank) order; readers accept any order with
// last write winning.
void write_hgr(std::ostream& os, const Hypergraph& g);
std::string to_hgr(const Hypergraph& g);
Hypergraph read_hgr(std::istream& is);
Hypergraph parse_hgr(const std::string& text);

void save_hgr(const std::string& path, const Hypergraph& g);
Hypergraph load_hgr(const std::string& path);

} // namespace hedra

#endif
