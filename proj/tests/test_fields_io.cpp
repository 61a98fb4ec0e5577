#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "hs/fields.hpp"
#include "hs/io.hpp"

using namespace hs;

namespace fs = std::filesystem;

TEST_CASE("field generators are deterministic and shaped right") {
  Space s = build_cloud(32, 5);
  for (const char* kind :
       {"linear", "bump", "random-lipschitz", "indicator-smoothed"}) {
    ScalarField a = generate_field(s, kind, 3);
    ScalarField b = generate_field(s, kind, 3);
    CHECK(a == b);
    CHECK(int(a.size()) == s.n());
    bool constant = true;
    for (double v : a) constant = constant && v == a[0];
    CHECK_FALSE(constant);
  }
  CHECK(generate_field(s, "bump", 1) != generate_field(s, "bump", 2));
  CHECK_THROWS(generate_field(s, "nope", 1));
}

TEST_CASE("linear is the first coordinate on embedded spaces") {
  Space s = build_grid(3);
  ScalarField f = gen_linear(s);
  for (int i = 0; i < s.n(); ++i) CHECK(f[i] == s.coords()[i][0]);
}

TEST_CASE("space JSON round trip preserves the metric") {
  fs::path tmp = fs::temp_directory_path() / "hs_space_test.json";
  for (int which = 0; which < 2; ++which) {
    Space s = which ? build_cloud(12, 3) : build_path(5, 0.5);
    io::save_space(s, tmp.string());
    Space t = io::load_space(tmp.string());
    REQUIRE(t.n() == s.n());
    for (int i = 0; i < s.n(); ++i) {
      CHECK(t.measure(i) == s.measure(i));
      for (int j = 0; j < s.n(); ++j)
        CHECK(t.dist(i, j) == doctest::Approx(s.dist(i, j)).epsilon(1e-15));
    }
    CHECK(t.edges().size() == s.edges().size());
  }
  fs::remove(tmp);
}

TEST_CASE("matrix-metric space file") {
  io::json j;
  j["n"] = 3;
  j["metric"] = "matrix";
  j["distances"] = {{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}};
  j["measure"] = {1.0, 2.0, 1.0};
  j["edges"] = {{0, 1}, {1, 2}};
  Space s = io::space_from_json(j);
  CHECK(s.n() == 3);
  CHECK(s.dist(0, 2) == 2.0);
  CHECK(s.measure(1) == 2.0);

  j["distances"] = {{0.0, 1.0, 9.0}, {1.0, 0.0, 1.0}, {9.0, 1.0, 0.0}};
  CHECK_THROWS_AS(io::space_from_json(j), ValidationError);  // triangle
}

TEST_CASE("field CSV round trip and validation") {
  fs::path tmp = fs::temp_directory_path() / "hs_field_test.csv";
  ScalarField f = {0.5, -1.25, 3.0, 0.0};
  io::save_field(f, tmp.string());
  ScalarField g = io::load_field(tmp.string(), 4);
  CHECK(g == f);
  CHECK_THROWS(io::load_field(tmp.string(), 5));  // missing id
  fs::remove(tmp);
}
