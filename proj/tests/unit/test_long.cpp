#include <doctest.h>

#include "anormal/lab.hpp"

using namespace anormal::lab;

TEST_SUITE("long") {

TEST_CASE("registry holds on at least 1000 premise-satisfying instances per row") {
  SuiteConfig cfg;  // dims 2..5, indices up to 4
  cfg.trials = 1800;
  cfg.seed = 20240601;
  const auto summary = run_suite(cfg);
  CHECK(summary.rows.size() == registry().size());
  for (const auto& row : summary.rows) {
    INFO(row.check_id);
    CHECK(row.fail == 0);
    CHECK(row.errors == 0);
    CHECK(row.satisfied >= 1000);
  }
  CHECK(summary.ok());
}

}  // TEST_SUITE
