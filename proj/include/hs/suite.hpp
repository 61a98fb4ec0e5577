#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hs/space.hpp"

namespace hs {

struct FixtureSpec {
  std::string name;
  std::string kind;  // path | cycle | grid | cloud
  int n = 0;         // grid: side length
  std::uint64_t seed = 0;
  double spacing = 1.0;
};

Space build_fixture(const FixtureSpec& spec);

struct SuiteConfig {
  std::vector<FixtureSpec> fixtures;   // the acceptance matrix
  std::vector<FixtureSpec> a2_clouds;  // scaling set for the seminorm ratio
  std::vector<std::string> fields;     // generator names
  std::vector<std::string> criteria;   // subset of A1..A8
  std::uint64_t field_seed = 1;
  int atom_corpus = 20;                // seeded atoms per fixture (A5)

  static SuiteConfig defaults();
  static SuiteConfig from_json(const nlohmann::json& j);
};

struct CheckRow {
  std::string criterion;
  std::string check;
  std::string fixture;
  std::string field;
  double value = 0;
  double ceiling = 0;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  struct Fingerprint {
    std::string fixture;
    int n = 0;
    std::uint64_t seed = 0;
    double q = 0, s = 0, c_d = 0;
  };
  std::vector<CheckRow> rows;
  std::vector<Fingerprint> env;
  std::vector<std::pair<std::string, double>> timings;  // criterion, seconds

  bool all_pass() const;
  int fail_count() const;
};

/// Runs every configured criterion; module errors become failing rows, never
/// aborts the matrix.
SuiteReport run_suite(const SuiteConfig& cfg);

/// report.csv + summary.json are byte-stable given config and seeds; wall
/// times go to the separate timings.json diagnostics file.
void write_report(const SuiteReport& rep, const std::string& dir);

/// Per-check constant-versus-n tables for the cloud fixtures.
void emit_plotdata(const SuiteReport& rep, const std::string& dir);

}  // namespace hs
