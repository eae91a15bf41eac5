#pragma once

// Direct time evolution of i q_t - (1/sqrt3) q_xx + 2 sqrt3 conj(q) conj(q)_x
// = 0 on a periodic window: exact linear propagation per Fourier mode
// (integrating factor) with classical RK4 for the pseudospectral nonlinear
// term, 2/3-rule dealiased. Ground truth for the asymptotic formulas and for
// the isospectrality checks.

#include <string>
#include <vector>

#include "qdnls/asymptotics.hpp"
#include "qdnls/grid.hpp"
#include "qdnls/mat3.hpp"
#include "qdnls/scattering.hpp"

namespace qdnls::pde {

struct EvolveParams {
    double L = 80.0;           // domain [-L, L)
    std::size_t n_modes = 8192; // power of two
    double dt = 1e-3;
    bool dealias = true;
    double boundary_threshold = 1e-8; // wrap-around guard at |x| ~ L
    double blowup_factor = 100.0;
    int check_stride = 200; // steps between boundary/mass checks
};

struct EvolutionRun {
    EvolveParams params;
    std::vector<double> times;              // snapshot times (first is 0)
    std::vector<std::vector<cd>> snapshots; // values on the x grid
    std::vector<double> mass_series;        // integral |q|^2 at snapshot times
    double mass_drift = 0.0;                // max relative deviation from mass(0)
    double boundary_max = 0.0;              // max |q| seen near the edges
    bool valid = true;
    std::string flag_reason;

    std::vector<double> xgrid() const;
    // Snapshot as scattering input, trimmed to where |q| > trim.
    GridFunction snapshot_grid(std::size_t i, double trim = 1e-12) const;
};

// Evolve from q0 to T, storing snapshots at the requested times (each is
// rounded to the nearest step). t=0 is always included.
EvolutionRun evolve(const GridFunction& q0, double T, const EvolveParams& params,
                    std::vector<double> snapshot_times = {});

// Exact solution of the linear part i q_t - (1/sqrt3) q_xx = 0 after time t,
// from the sampled initial data (single Fourier transform round trip).
std::vector<cd> exact_linear_solution(const GridFunction& q0, double t,
                                      const EvolveParams& params);

struct ValidationRow {
    double zeta, t;
    cd q_num, leading;
    double abs_err, rel_err;
};

struct ValidationTable {
    std::vector<ValidationRow> rows;
    // err(t) ~ c * t^p fitted per zeta over the provided t-list.
    std::vector<std::pair<double, double>> decay_exponent; // (zeta, p)
};

// |q_numeric(zeta t, t) - leading(zeta, t)| over the requested grid; a single
// evolution run supplies all snapshot times.
ValidationTable validate_asymptotics(const GridFunction& q0, const std::vector<double>& zetas,
                                     const std::vector<double>& ts,
                                     const asym::ReflectionData& refl,
                                     const EvolveParams& params,
                                     const asym::LeadingOptions& lopt = {});

struct InvarianceRow {
    double k;
    double abs_r1_t0, abs_r1_t1, delta_abs;
    double phase_rate; // (arg r1(k;t) - arg r1(k;0)) / t
};

// Evolve to time t and compare |r1| of the evolved profile against t=0;
// reports the measured phase rotation rate (expected magnitude sqrt3 k^2).
std::vector<InvarianceRow> scattering_invariance(const GridFunction& q0, double t,
                                                 const std::vector<double>& k_grid,
                                                 const EvolveParams& params,
                                                 const scatter::ReflectOptions& ropt = {});

} // namespace qdnls::pde
