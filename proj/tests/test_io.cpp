#include <doctest.h>

#include <sstream>

#include "hedra/io.hpp"
#include "hedra/property.hpp"
#include "hedra/random.hpp"

using namespace hedra;

TEST_CASE("hgr round trip is byte identical") {
    Rng rng(5);
    for (Storage st : {Storage::Directed, Storage::Undirected}) {
        Hypergraph g = random_hypergraph(Palette({2, 3, 2, 2}), 6, rng, st);
        std::string text = to_hgr(g);
        Hypergraph back = parse_hgr(text);
        CHECK(back == g);
        CHECK(to_hgr(back) == text);
    }
}

TEST_CASE("hgr reader accepts any order, comments, last write wins") {
    std::string text =
        "# a comment\n"
        "HGR 1\n"
        "order 2\n"
        "palette 1 1 2\n"
        "n 3\n"
        "color0 0\n"
        "edge 2 1 0 1\n"
        "edge 2 0 1 1   # trailing comment\n"
        "edge 2 0 1 0\n";     // last write wins
    Hypergraph g = parse_hgr(text);
    CHECK(g.pair_color(0, 1) == 0);
    CHECK(g.pair_color(1, 0) == 1);
}

TEST_CASE("hgr rejects malformed input") {
    CHECK_THROWS_AS(parse_hgr("HGR 2\n"), FormatError);
    CHECK_THROWS_AS(parse_hgr("HGR 1\norder 2\npalette 1 1\nn 2\ncolor0 0\n"), FormatError);
    CHECK_THROWS_AS(
        parse_hgr("HGR 1\norder 2\npalette 1 1 2\nn 2\ncolor0 0\nedge 2 0 1 7\n"),
        FormatError);   // color out of range
    CHECK_THROWS_AS(
        parse_hgr("HGR 1\norder 2\npalette 1 1 2\nn 2\ncolor0 0\nedge 2 0 0 1\n"),
        FormatError);   // repeated vertex
    CHECK_THROWS_AS(
        parse_hgr("HGR 1\norder 2\npalette 1 1 2\nn 2\ncolor0 0\nedge 2 0 5 1\n"),
        FormatError);   // vertex out of range
}

TEST_CASE("hgr unlisted tuples default to zero") {
    Hypergraph g = parse_hgr("HGR 1\norder 2\npalette 1 1 3\nn 4\ncolor0 0\nedge 2 2 3 2\n");
    CHECK(g.pair_color(2, 3) == 2);
    CHECK(g.pair_color(3, 2) == 0);
    CHECK(g.pair_color(0, 1) == 0);
}

TEST_CASE("hgp round trip") {
    Palette pal = Palette::monochromatic(2);
    Hypergraph f(pal, 3, Storage::Undirected);
    f.set_pair_color(0, 1, 1);
    f.set_pair_color(1, 2, 1);
    f.set_pair_color(0, 2, 1);
    Property p = Property::forbidden_family(pal, "no-triangle", {f});
    std::ostringstream os;
    write_hgp(os, p);
    std::istringstream is(os.str());
    Property back = read_hgp(is);
    CHECK(back.name() == "no-triangle");
    CHECK(back.family().size() == 1);
    CHECK(back.family()[0] == f);
    std::ostringstream os2;
    write_hgp(os2, back);
    CHECK(os2.str() == os.str());
}
