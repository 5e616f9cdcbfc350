#include "finloc/json_io.hpp"

#include <gtest/gtest.h>

#include "finloc/export_dot.hpp"
#include "finloc/fixtures.hpp"

using namespace finloc;

TEST(JsonPoset, ClosureAndChecks) {
  json j = {{"elements", {"x", "y", "z"}}, {"leq", {{0, 1}, {1, 2}}}};
  Poset p = parse_poset(j);
  EXPECT_TRUE(p.leq(0, 2));
  json cyc = {{"elements", {"x", "y"}}, {"leq", {{0, 1}, {1, 0}}}};
  EXPECT_THROW(parse_poset(cyc), ParseError);
  EXPECT_THROW(parse_poset(json::object()), ParseError);
}

TEST(JsonLattice, ThreeInputForms) {
  json wrapped = {{"poset", {{"elements", {"a", "b"}}, {"leq", json::array()}}}};
  EXPECT_EQ(parse_lattice(wrapped).size(), 4);
  json bare = {{"elements", {"a", "b"}}, {"leq", json::array()}};
  EXPECT_EQ(parse_lattice(bare).size(), 4);
  json tables = {{"elements", {"0", "1"}},
                 {"join", {{0, 1}, {1, 1}}},
                 {"meet", {{0, 0}, {0, 1}}}};
  Lattice l = parse_lattice(tables);
  EXPECT_EQ(l.size(), 2);
  EXPECT_TRUE(l.is_frame());
}

TEST(JsonModule, MapAndActionForms) {
  json base = {{"poset", {{"elements", {"p"}}, {"leq", json::array()}}}};
  json carrier = {{"poset", {{"elements", {"s", "t"}}, {"leq", json::array()}}}};
  json viamap = {{"base", base}, {"carrier", carrier}, {"pstar", {0, 3}}};
  BModule m = parse_module(viamap);
  EXPECT_TRUE(m.is_etale());

  json viaaction = {{"base", base}, {"carrier", base}, {"action", {{0, 0}, {0, 1}}}};
  BModule m2 = parse_module(viaaction);
  EXPECT_TRUE(m2.is_blocale());

  json broken = {{"base", base}, {"carrier", carrier}, {"pstar", {3, 0}}};
  EXPECT_THROW(parse_module(broken), NotAFrameHom);
}

TEST(JsonMatrix, ParseAndRoundTrip) {
  json base = {{"poset", {{"elements", {"p"}}, {"leq", json::array()}}}};
  json jm = {{"base", base}, {"index", {"s", "t"}}, {"entries", {{1, 0}, {0, 1}}}};
  BMatrix m = parse_matrix(jm);
  EXPECT_TRUE(is_projection_matrix(m).pass);
  BMatrix again = parse_matrix(matrix_to_json(m));
  EXPECT_TRUE(matrix_equal(m, again));
}

TEST(JsonHom, ValidatesShape) {
  json base = {{"poset", {{"elements", {"p"}}, {"leq", json::array()}}}};
  json carrier = {{"poset", {{"elements", {"s", "t"}}, {"leq", json::array()}}}};
  json mod = {{"base", base}, {"carrier", carrier}, {"pstar", {0, 3}}};
  json jh = {{"source", mod}, {"target", mod}, {"table", {0, 2, 1, 3}}};
  ModuleHom h = parse_hom(jh);
  EXPECT_TRUE(is_module_hom(h));
  json bad = {{"source", mod}, {"target", mod}, {"table", {0, 2}}};
  EXPECT_THROW(parse_hom(bad), ParseError);
}

TEST(JsonMap, ParsesAndValidates) {
  json base = {{"poset", {{"elements", {"p"}}, {"leq", json::array()}}}};
  json carrier = {{"poset", {{"elements", {"s", "t"}}, {"leq", json::array()}}}};
  json mod = {{"base", base}, {"carrier", carrier}, {"pstar", {0, 3}}};
  json good = {{"source", mod}, {"target", mod}, {"fstar", {0, 1, 2, 3}}};
  BLocaleMap f = parse_map(good);
  EXPECT_TRUE(check_blocale_map(f).all_pass());
  json bad = {{"source", mod}, {"target", mod}, {"fstar", {3, 3, 3, 3}}};
  EXPECT_THROW(parse_map(bad), NotAFrameHom);
}

TEST(JsonHilbert, DefaultsToSupportInner) {
  json base = {{"poset", {{"elements", {"p"}}, {"leq", json::array()}}}};
  json carrier = {{"poset", {{"elements", {"s", "t"}}, {"leq", json::array()}}}};
  json jm = {{"module", {{"base", base}, {"carrier", carrier}, {"pstar", {0, 3}}}}};
  HilbertModule h = parse_hilbert(jm);
  EXPECT_TRUE(h.axioms.all_pass());
  EXPECT_TRUE(h.flags.nondegenerate);
}

TEST(JsonDump, ModuleRoundTripsThroughActionForm) {
  Fixtures f = fixtures();
  json dump = module_to_json(f.chain3);
  BModule again = parse_module(dump);
  EXPECT_TRUE(again.is_open());
  EXPECT_FALSE(again.is_etale());
  for (int b = 0; b < f.chain3.base().size(); ++b)
    for (int x = 0; x < f.chain3.carrier().size(); ++x)
      EXPECT_EQ(f.chain3.act(b, x), again.act(b, x));
}

TEST(JsonDump, LawReportShape) {
  Fixtures f = fixtures();
  json rep = law_report_to_json(verify_frame(f.m3));
  EXPECT_FALSE(rep.at("pass").get<bool>());
  bool found_witness = false;
  for (const auto& c : rep.at("checks"))
    if (!c.at("pass").get<bool>() && c.contains("witness")) found_witness = true;
  EXPECT_TRUE(found_witness);
}

TEST(DotExport, DiamondHasFourCoverEdges) {
  Fixtures f = fixtures();
  std::string dot = hasse_dot(f.bd, "bd");
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  size_t edges = 0;
  for (size_t pos = dot.find("->"); pos != std::string::npos; pos = dot.find("->", pos + 1))
    ++edges;
  EXPECT_EQ(edges, 4u);  // 0->a, 0->b, a->1, b->1
}
