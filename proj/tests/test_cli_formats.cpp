// File formats and input validation used by the CLI layer.

#include <doctest.h>

#include <fstream>

#include "qdnls/csvio.hpp"
#include "qdnls/errors.hpp"
#include "qdnls/grid.hpp"

using namespace qdnls;

TEST_CASE("grid function CSV round trip") {
    const GridFunction q = make_gaussian(0.3, 257);
    save_gridfunction_csv(q, "/tmp/qdnls_grid.csv", "roundtrip");
    const GridFunction back = load_gridfunction_csv("/tmp/qdnls_grid.csv");
    REQUIRE(back.size() == q.size());
    CHECK(back.x_min() == doctest::Approx(q.x_min()).epsilon(1e-15));
    for (std::size_t i = 0; i < q.size(); i += 31)
        CHECK(std::abs(back.values()[i] - q.values()[i]) < 1e-16);
}

TEST_CASE("NaN input is rejected") {
    {
        std::ofstream out("/tmp/qdnls_bad.csv");
        out << "x,re_q,im_q\n0,0.1,0\n0.5,nan,0\n1.0,0.1,0\n";
    }
    CHECK_THROWS_AS(load_gridfunction_csv("/tmp/qdnls_bad.csv"), InvalidInputError);
}

TEST_CASE("non-uniform grids are rejected") {
    {
        std::ofstream out("/tmp/qdnls_bad2.csv");
        out << "0,0.1,0\n0.5,0.2,0\n1.2,0.1,0\n";
    }
    CHECK_THROWS_AS(load_gridfunction_csv("/tmp/qdnls_bad2.csv"), InvalidInputError);
}

TEST_CASE("config hash is stable and content-sensitive") {
    const std::string a = "{\"profile\":\"gaussian\",\"amplitude\":0.3}";
    CHECK(io::hash_hex(a) == io::hash_hex(a));
    CHECK(io::hash_hex(a) != io::hash_hex(a + " "));
    CHECK(io::hash_hex("").size() == 16);
}

TEST_CASE("profile windows decay below the tail threshold") {
    CHECK(make_gaussian(0.3).decay_flag());
    CHECK(make_gaussian(0.1).decay_flag());
    CHECK(make_bump(3.0).decay_flag());
    CHECK_THROWS_AS(make_gaussian(-1.0), InvalidInputError);
}
