// Benchmark: OpenMP parallel map against the serial reference on the two
// hot sweeps (reflection table over the spectral grid, jump-residual grid).
// Also asserts that both paths produce bitwise-identical results.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "qdnls/grid.hpp"
#include "qdnls/par.hpp"
#include "qdnls/rh.hpp"
#include "qdnls/scattering.hpp"

using namespace qdnls;
using hclock = std::chrono::high_resolution_clock;

namespace {

double seconds_since(hclock::time_point t0) {
    return std::chrono::duration<double>(hclock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n_k = 64;
    if (argc > 1) n_k = (std::size_t)std::atoi(argv[1]);

    const GridFunction q = make_gaussian(0.3);
    const std::vector<double> kg = scatter::make_spectral_grid(1e-3, 40.0, n_k);

    std::printf("sweep size: %zu k-points, threads available: %d\n", n_k, par::max_threads());

    auto job = [&](std::size_t i) {
        auto s = scatter::scattering_parts(q, kg[i], false);
        return s.value(0, 1) / s.value(0, 0); // r1(k)
    };

    auto t0 = hclock::now();
    std::vector<cd> serial = par::map_serial<cd>(n_k, job);
    const double ts = seconds_since(t0);

    t0 = hclock::now();
    std::vector<cd> parallel = par::map<cd>(n_k, job);
    const double tp = seconds_since(t0);

    bool identical = serial.size() == parallel.size() &&
                     std::memcmp(serial.data(), parallel.data(), serial.size() * sizeof(cd)) == 0;

    std::printf("reflection sweep: serial %.3fs, parallel %.3fs, speedup %.2fx, bitwise %s\n",
                ts, tp, ts / tp, identical ? "identical" : "DIFFERENT");

    const GridFunction bump = make_bump(0.3);
    const double xs[3] = {-0.5, 0.0, 0.7};
    const double ks[3] = {0.5, 1.0, 3.0};
    auto jump_job = [&](std::size_t i) {
        return rh::verify_jump(bump, 1, xs[i % 3], ks[i / 3]);
    };

    t0 = hclock::now();
    std::vector<double> js = par::map_serial<double>(9, jump_job);
    const double tjs = seconds_since(t0);
    t0 = hclock::now();
    std::vector<double> jp = par::map<double>(9, jump_job);
    const double tjp = seconds_since(t0);
    identical = std::memcmp(js.data(), jp.data(), js.size() * sizeof(double)) == 0;

    std::printf("jump sweep:       serial %.3fs, parallel %.3fs, speedup %.2fx, bitwise %s\n",
                tjs, tjp, tjs / tjp, identical ? "identical" : "DIFFERENT");
    return 0;
}
