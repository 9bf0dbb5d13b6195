#include <catch_amalgamated.hpp>
#include "qfkit/audit.hpp"
TEST_CASE("placeholder test_reduction") { REQUIRE(true); }
