#pragma once

#include <complex>

namespace qdnls {

// Complex Gamma function, Lanczos approximation (g = 7) with the reflection
// formula for Re z < 1/2.
std::complex<double> complex_gamma(std::complex<double> z);

// Gamma(i*nu) for 0 < nu < 50; throws DomainError otherwise. Satisfies
// |Gamma(i nu)|^2 = pi / (nu sinh(pi nu)).
std::complex<double> gamma_imag_axis(double nu);

} // namespace qdnls
