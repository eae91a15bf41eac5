#pragma once

// Long-time leading-order asymptotics on the rays zeta = x/t: the singular
// Stieltjes phase integral, the Gamma-factor amplitude, the negative-zeta
// branch, and an independent reassembly through the d0 / delta machinery
// used as a cross-check oracle.

#include <vector>

#include "qdnls/mat3.hpp"
#include "qdnls/quad.hpp"
#include "qdnls/scattering.hpp"

namespace qdnls::asym {

enum class Branch { positive, negative };

struct AsymptoticState {
    double zeta = 0, t = 0, k0 = 0, nu = 0, phi = 0;
    cd leading{};
    Branch branch = Branch::positive;
};

// Spline view of a scattering table: r1, r2, r2~ and the log-densities
// rho = ln(1 - |r|^2) with derivatives.
class ReflectionData {
  public:
    explicit ReflectionData(const scatter::ScatteringTable& table);

    cd r1(double k) const;      // k > 0
    cd r2(double k) const;      // k < 0
    cd r2_tilde(double k) const;
    double rho1(double s) const;
    double rho1_deriv(double s) const;
    double rho2(double s) const;
    double rho2_deriv(double s) const;
    double k_abs_min() const { return kmin_; }
    double k_abs_max() const { return kmax_; }
    bool zero() const { return zero_; }
    // spline abscissae; the quadrature rules align panels with these
    const std::vector<double>& pos_nodes() const { return kp_; }
    const std::vector<double>& neg_nodes() const { return kn_; }

  private:
    quad::ComplexSpline r1_, r2_, r2t_;
    quad::CubicSpline rho1_, rho2_;
    std::vector<double> kp_, kn_;
    double kmin_ = 0, kmax_ = 0;
    bool zero_ = false;
};

struct PhaseOptions {
    int gl_order = 12;
    int graded_levels = 48;
    double refine_tol = 1e-6; // convergence requirement under refinement
};

// (1/pi) * Int ln|(s-k0)/(s-omega k0)| d ln(1-|r(s)|^2), over (k0, +inf) on
// the positive branch (r = r1) and (-inf, k0) on the negative one (r = r2).
double phase_integral(const ReflectionData& refl, double k0, Branch branch,
                      const PhaseOptions& opt = {});

// chi1(zeta, k) = (1/2 pi i) Int_{k0}^{inf} ln_0(k - s) d ln(1-|r1(s)|^2)
// with the branch arg_0 in [0, 2pi).
cd chi1(const ReflectionData& refl, double k0, cd k, const PhaseOptions& opt = {});

struct LeadingOptions {
    double zeta_min = 0.1;   // usable lower edge of |zeta| (not quantified by theory)
    double nu_epsilon = 1e-8; // below this, use the 1/Gamma(i nu) ~ i nu limit
    PhaseOptions phase;
};

// Theorem-style leading term at (zeta, t). Branch chosen by the sign of zeta.
AsymptoticState leading_term(const ReflectionData& refl, double zeta, double t,
                             const LeadingOptions& opt = {});

struct D0Result {
    cd d0;
    cd leading;
};

// Positive-branch reassembly via d0 = (2 sqrt3 t)^{-i nu} e^{2 chi1} delta3
// delta5 and beta21; agrees with leading_term to quadrature accuracy.
D0Result d0_crosscheck(const ReflectionData& refl, double zeta, double t,
                       const LeadingOptions& opt = {});

// ln_0: log with arg in [0, 2pi).
cd ln0(cd z);

} // namespace qdnls::asym
