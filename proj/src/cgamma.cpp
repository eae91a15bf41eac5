#include "qdnls/cgamma.hpp"

#include <cmath>

#include "qdnls/errors.hpp"

namespace qdnls {

namespace {

constexpr int g = 7;
constexpr double lz[g + 2] = {0.99999999999980993,    676.5203681218851,
                              -1259.1392167224028,    771.32342877765313,
                              -176.61502916214059,    12.507343278686905,
                              -0.13857109526572012,   9.9843695780195716e-6,
                              1.5056327351493116e-7};

} // namespace

std::complex<double> complex_gamma(std::complex<double> z) {
    if (z.real() < 0.5) return M_PI / (std::sin(M_PI * z) * complex_gamma(1.0 - z));
    z -= 1.0;
    std::complex<double> x = lz[0];
    for (int i = 1; i < g + 2; ++i) x += lz[i] / (z + (double)i);
    const std::complex<double> t = z + (g + 0.5);
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

std::complex<double> gamma_imag_axis(double nu) {
    if (!(nu > 0.0) || nu >= 50.0)
        throw DomainError("gamma_imag_axis: nu must lie in (0, 50)");
    return complex_gamma(std::complex<double>(0.0, nu));
}

} // namespace qdnls
