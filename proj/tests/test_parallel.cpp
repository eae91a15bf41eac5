#include <doctest.h>

#include <cmath>
#include <cstring>

#include "qdnls/par.hpp"
#include "qdnls/scattering.hpp"

using namespace qdnls;

TEST_CASE("parallel map is bitwise identical to the serial reference") {
    auto job = [](std::size_t i) {
        double acc = 0.0;
        for (int m = 1; m <= 500; ++m) acc += std::sin(double(i) * 0.37 + m) / double(m);
        return acc;
    };
    const auto a = par::map_serial<double>(400, job);
    const auto b = par::map<double>(400, job);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);

    // repeated runs are bitwise stable
    const auto c = par::map<double>(400, job);
    CHECK(std::memcmp(b.data(), c.data(), b.size() * sizeof(double)) == 0);
}

TEST_CASE("reflection sweep determinism across parallel and serial paths") {
    const GridFunction q = make_gaussian(0.25);
    const auto kg = scatter::make_spectral_grid(0.1, 3.0, 8);

    auto job = [&](std::size_t i) {
        auto s = scatter::scattering_parts(q, kg[i], false);
        return s.value(0, 1) / s.value(0, 0);
    };
    const auto serial = par::map_serial<cd>(kg.size(), job);
    const auto parallel = par::map<cd>(kg.size(), job);
    CHECK(std::memcmp(serial.data(), parallel.data(), serial.size() * sizeof(cd)) == 0);
}
