#include <catch2/catch_amalgamated.hpp>

#include "conekit/demo.hpp"
#include "conekit/workspace.hpp"

using namespace conekit;

TEST_CASE("graph documents parse") {
  std::string text =
      "# toy space\n"
      "points 3\n"
      "edge 0 1 1.0\n"
      "edge 1 2 0.5\n"
      "subspace A: 0 1\n"
      "generator id: 0 1 2\n"
      "boundary: 2\n"
      "rotation 0: subspace=A subgroup=id image_under id=0\n"
      "param r0 1.25\n";
  WorkspaceDocument doc = parse_workspace(text);
  REQUIRE(doc.points == 3);
  REQUIRE(doc.edges.size() == 2);
  REQUIRE(doc.subspaceMembers("A") == std::vector<PointId>{0, 1});
  REQUIRE(doc.boundary == std::vector<PointId>{2});
  REQUIRE(doc.rotations.size() == 1);
  REQUIRE(doc.rotations[0].images.at("id") == 0);
  REQUIRE(doc.param("r0") == 1.25);
  FiniteMetricSpace m = doc.buildMetric();
  REQUIRE(m.distance(0, 2) == Catch::Approx(1.5));
}

TEST_CASE("matrix documents parse and validate") {
  std::string text =
      "points 3\n"
      "dist 0 1 1\n"
      "dist 0 2 1\n"
      "dist 1 2 1\n";
  WorkspaceDocument doc = parse_workspace(text);
  REQUIRE_FALSE(doc.graphMode());
  REQUIRE(doc.buildMetric().distance(1, 2) == 1.0);

  std::string incomplete = "points 3\ndist 0 1 1\n";
  REQUIRE_THROWS_WITH(parse_workspace(incomplete).buildMetric(),
                      Catch::Matchers::ContainsSubstring("incomplete"));
}

TEST_CASE("parser rejects malformed input with line numbers") {
  auto expectError = [](const std::string& text, const std::string& needle) {
    try {
      parse_workspace(text);
      FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
      REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring(needle));
    }
  };
  expectError("points 2\nfrobnicate 1\n", "line 2");
  expectError("points 2\nfrobnicate 1\n", "unknown key");
  expectError("edge 0 1 1\n", "'points' must be declared first");
  expectError("points 2\nedge 0 7 1\n", "out of range");
  expectError("points 2\nedge 0 1 1\ndist 0 1 1\n", "cannot mix");
  expectError("points 2\nparam x 1\nparam x 2\n", "duplicate param");
  expectError("points 3\nsubspace A: 0\nrotation 0: subspace=B subgroup=g\n",
              "unresolved subspace name");
  expectError("points 2\ngenerator g: 0\n", "one image per point");
}

TEST_CASE("demo documents round-trip exactly") {
  WorkspaceDocument circle = demo_circle(16, 0.75);
  REQUIRE(parse_workspace(serialize_workspace(circle)) == circle);

  WorkspaceDocument trees = demo_tree_family(5, {4, 3, 2});
  REQUIRE(parse_workspace(serialize_workspace(trees)) == trees);

  WorkspaceDocument ball = demo_free_group_ball(6, "ababab");
  REQUIRE(parse_workspace(serialize_workspace(ball)) == ball);
}

TEST_CASE("demo generation is deterministic") {
  REQUIRE(serialize_workspace(demo_tree_family(9, {5, 4})) ==
          serialize_workspace(demo_tree_family(9, {5, 4})));
  REQUIRE(serialize_workspace(demo_free_group_ball(4, "abAB")) ==
          serialize_workspace(demo_free_group_ball(4, "abAB")));
}

TEST_CASE("relator validation") {
  REQUIRE_THROWS_AS(demo_free_group_ball(4, "abBa"), std::invalid_argument);  // not reduced
  REQUIRE_THROWS_AS(demo_free_group_ball(4, "abA"), std::invalid_argument);   // not cyclic
  REQUIRE_THROWS_AS(demo_free_group_ball(4, "abc"), std::invalid_argument);   // alphabet
  REQUIRE_THROWS_AS(demo_free_group_ball(4, ""), std::invalid_argument);
  REQUIRE_NOTHROW(demo_free_group_ball(4, "aab"));
}

TEST_CASE("tree demo keeps subtree overlaps small") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    WorkspaceDocument doc = demo_tree_family(seed, {5, 4, 4});
    for (std::size_t i = 0; i < doc.subspaces.size(); ++i)
      for (std::size_t j = i + 1; j < doc.subspaces.size(); ++j) {
        std::vector<PointId> a = doc.subspaces[i].second;
        std::vector<PointId> b = doc.subspaces[j].second;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        std::vector<PointId> common;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
        REQUIRE(common.size() <= 1);
      }
  }
}
