#include "qdnls/asymptotics.hpp"

#include <cmath>

#include "qdnls/cgamma.hpp"
#include "qdnls/errors.hpp"
#include "qdnls/lax.hpp"

namespace qdnls::asym {

using lax::omega;
using lax::sqrt3;

cd ln0(cd z) {
    double a = std::arg(z);
    if (a < 0.0) a += 2.0 * M_PI;
    return cd(std::log(std::abs(z)), a);
}

ReflectionData::ReflectionData(const scatter::ScatteringTable& table) {
    std::vector<double> kp, kn;
    std::vector<cd> r1v, r2v, r2tv;
    std::vector<double> rho1v, rho2v;
    for (const auto& row : table.pos) {
        kp.push_back(row.k);
        r1v.push_back(row.r1);
        rho1v.push_back(std::log1p(-std::norm(row.r1)));
    }
    for (const auto& row : table.neg) {
        kn.push_back(row.k);
        r2v.push_back(row.r2);
        r2tv.push_back(row.r2t);
        rho2v.push_back(std::log1p(-std::norm(row.r2)));
    }
    r1_ = quad::ComplexSpline(kp, r1v);
    r2_ = quad::ComplexSpline(kn, r2v);
    r2t_ = quad::ComplexSpline(kn, r2tv);
    rho1_ = quad::CubicSpline(kp, rho1v);
    rho2_ = quad::CubicSpline(kn, rho2v);
    kp_ = kp;
    kn_ = kn;
    kmin_ = kp.front();
    kmax_ = kp.back();
    double mx = 0.0;
    for (const cd& v : r1v) mx = std::max(mx, std::abs(v));
    for (const cd& v : r2v) mx = std::max(mx, std::abs(v));
    zero_ = (mx == 0.0);
}

cd ReflectionData::r1(double k) const {
    if (!(k > 0.0)) throw DomainError("r1 needs k > 0");
    if (k < kmin_ || k > kmax_) return 0.0;
    return r1_(k);
}

cd ReflectionData::r2(double k) const {
    if (!(k < 0.0)) throw DomainError("r2 needs k < 0");
    if (-k < kmin_ || -k > kmax_) return 0.0;
    return r2_(k);
}

cd ReflectionData::r2_tilde(double k) const {
    if (!(k < 0.0)) throw DomainError("r2~ needs k < 0");
    if (-k < kmin_ || -k > kmax_) return 0.0;
    return r2t_(k);
}

double ReflectionData::rho1(double s) const {
    if (s < kmin_ || s > kmax_) return 0.0;
    return rho1_(s);
}

double ReflectionData::rho1_deriv(double s) const {
    if (s < kmin_ || s > kmax_) return 0.0;
    return rho1_.deriv(s);
}

double ReflectionData::rho2(double s) const {
    if (-s < kmin_ || -s > kmax_) return 0.0;
    return rho2_(s);
}

double ReflectionData::rho2_deriv(double s) const {
    if (-s < kmin_ || -s > kmax_) return 0.0;
    return rho2_.deriv(s);
}

namespace {

// Node-aligned composite: the density rho' is a spline derivative, piecewise
// polynomial with kinks at the table nodes, so panel boundaries sit on the
// nodes. The cell adjacent to the singular point s0 uses the graded log rule.
template <class F>
auto singular_node_quadrature(F&& f, double s0, bool singular_on_left, double lo, double hi,
                              const std::vector<double>& nodes, int order, int split,
                              int levels) -> decltype(f(0.0)) {
    decltype(f(0.0)) acc{};
    if (!(hi > lo)) return acc;

    std::vector<double> bs;
    bs.push_back(lo);
    for (double xn : nodes)
        if (xn > lo + 1e-14 && xn < hi - 1e-14) bs.push_back(xn);
    bs.push_back(hi);

    // Nodes hugging the singular endpoint are absorbed into the graded cell;
    // otherwise the near-singularity sits at the edge of a plain GL cell.
    if (singular_on_left) {
        while (bs.size() > 2 && (bs[1] - bs[0]) < 0.25 * (bs[2] - bs[1])) bs.erase(bs.begin() + 1);
    } else {
        std::size_t n = bs.size();
        while (n > 2 && (bs[n - 1] - bs[n - 2]) < 0.25 * (bs[n - 2] - bs[n - 3])) {
            bs.erase(bs.end() - 2);
            n = bs.size();
        }
    }

    for (std::size_t c = 0; c + 1 < bs.size(); ++c) {
        const double a = bs[c], b = bs[c + 1];
        if (singular_on_left && c == 0) {
            acc += quad::integrate_log_left(f, a, b, order, levels);
        } else if (!singular_on_left && c + 2 == bs.size()) {
            acc += quad::integrate_log_right(f, a, b, order, levels);
        } else {
            acc += quad::integrate_gl(f, a, b, split, order);
        }
        (void)s0;
    }
    return acc;
}

// One resolution pass of the positive/negative phase integral.
double phase_integral_pass(const ReflectionData& refl, double k0, Branch branch,
                           const PhaseOptions& opt, int refine) {
    const int order = opt.gl_order + 4 * refine;
    const int split = 1 + refine;
    const cd wk0 = omega * k0;

    if (branch == Branch::positive) {
        const double upper = refl.k_abs_max();
        if (k0 >= upper) return 0.0;
        auto f = [&](double s) {
            const double w =
                std::log(std::abs(s - k0)) - std::log(std::abs(cd(s, 0.0) - wk0));
            return w * refl.rho1_deriv(s);
        };
        return singular_node_quadrature(f, k0, true, k0, upper, refl.pos_nodes(), order,
                                        split, opt.graded_levels) /
               M_PI;
    }

    const double lower = -refl.k_abs_max();
    if (k0 <= lower) return 0.0;
    auto f = [&](double s) {
        const double w = std::log(std::abs(s - k0)) - std::log(std::abs(cd(s, 0.0) - wk0));
        return w * refl.rho2_deriv(s);
    };
    return singular_node_quadrature(f, k0, false, lower, k0, refl.neg_nodes(), order, split,
                                    opt.graded_levels) /
           M_PI;
}

} // namespace

double phase_integral(const ReflectionData& refl, double k0, Branch branch,
                      const PhaseOptions& opt) {
    if (refl.zero()) return 0.0;
    const double coarse = phase_integral_pass(refl, k0, branch, opt, 0);
    const double fine = phase_integral_pass(refl, k0, branch, opt, 1);
    if (std::abs(fine - coarse) > opt.refine_tol)
        throw NumericalError("phase_integral: quadrature did not converge under refinement");
    return fine;
}

cd chi1(const ReflectionData& refl, double k0, cd k, const PhaseOptions& opt) {
    if (refl.zero()) return 0.0;
    const double upper = refl.k_abs_max();
    if (k0 >= upper) return 0.0;
    auto f = [&](double s) { return ln0(k - s) * refl.rho1_deriv(s); };
    return singular_node_quadrature(f, k0, true, k0, upper, refl.pos_nodes(), opt.gl_order + 4,
                                    2, opt.graded_levels) /
           cd(0.0, 2.0 * M_PI);
}

namespace {

constexpr double euler_gamma = 0.57721566490153286;

// e^{i phi} * sqrt(pi) e^{-pi nu/2} / (3^{1/4} sqrt(t) r Gamma(i nu)), with the
// removable nu -> 0 limit 1/Gamma(i nu) ~ i nu (1 + i nu gamma).
cd leading_value(double nu, double phi, double t, cd r, double nu_eps, double sign) {
    if (nu == 0.0 || r == cd(0.0, 0.0)) return 0.0;
    const double pref = std::sqrt(M_PI) * std::exp(-M_PI * nu / 2.0) /
                        (std::pow(3.0, 0.25) * std::sqrt(t));
    const cd phase = std::exp(cd(0.0, phi));
    cd inv_gamma;
    if (nu < nu_eps) {
        const cd inu(0.0, nu);
        inv_gamma = inu * (cd(1.0) + euler_gamma * inu);
    } else {
        inv_gamma = cd(1.0) / gamma_imag_axis(nu);
    }
    return sign * pref * phase * inv_gamma / r;
}

} // namespace

AsymptoticState leading_term(const ReflectionData& refl, double zeta, double t,
                             const LeadingOptions& opt) {
    if (!(t > 0.0)) throw DomainError("leading_term: t must be positive");
    if (zeta == 0.0) throw DomainError("leading_term: zeta must be nonzero");
    if (std::abs(zeta) < opt.zeta_min)
        throw DomainError("leading_term: |zeta| below the configured zeta_min");

    AsymptoticState st;
    st.zeta = zeta;
    st.t = t;
    st.k0 = zeta / 2.0;
    st.branch = (zeta > 0.0) ? Branch::positive : Branch::negative;

    cd r_denom;
    double rho;
    if (st.branch == Branch::positive) {
        r_denom = refl.r1(st.k0);
        rho = std::log1p(-std::norm(r_denom));
    } else {
        const cd r2 = refl.r2(st.k0);
        r_denom = refl.r2_tilde(st.k0);
        rho = std::log1p(-std::norm(r2));
    }
    st.nu = -rho / (2.0 * M_PI);
    if (st.nu < 0.0) st.nu = 0.0;

    // The x -> -x reduction fixes the sign of the Stieltjes term on the
    // negative branch: under s -> -s the differential d ln(1-|r|^2) picks up
    // a minus sign, so the (-inf, k0) integral enters phi with weight -1.
    // (Verified against direct PDE evolution; see the evolve tests.)
    const double integral = phase_integral(refl, st.k0, st.branch, opt.phase);
    const double isign = (st.branch == Branch::positive) ? 1.0 : -1.0;
    st.phi = 11.0 * M_PI / 12.0 + st.nu * std::log(6.0 * sqrt3 * t * st.k0 * st.k0) -
             sqrt3 * st.k0 * st.k0 * t + isign * integral;

    const double sign = (st.branch == Branch::positive) ? 1.0 : -1.0;
    st.leading = leading_value(st.nu, st.phi, t, r_denom, opt.nu_epsilon, sign);
    return st;
}

D0Result d0_crosscheck(const ReflectionData& refl, double zeta, double t,
                       const LeadingOptions& opt) {
    if (!(zeta > 0.0)) throw DomainError("d0_crosscheck: positive branch only");
    if (!(t > 0.0)) throw DomainError("d0_crosscheck: t must be positive");

    const double k0 = zeta / 2.0;
    const cd r = refl.r1(k0);
    const double nu = -std::log1p(-std::norm(r)) / (2.0 * M_PI);

    // chi1 at k0 and the two rotated images of k0.
    const cd c_k0 = chi1(refl, k0, cd(k0, 0.0), opt.phase);
    const cd c_w2 = chi1(refl, k0, lax::omega2 * k0, opt.phase);
    const cd c_w1 = chi1(refl, k0, omega * k0, opt.phase);

    const cd inu(0.0, nu);
    cd expo = -inu * std::log(2.0 * sqrt3 * t);
    expo += 2.0 * c_k0 - c_w2 - c_w1;
    expo += -inu * (ln0((lax::omega2 - 1.0) * k0) + ln0((omega - 1.0) * k0));
    const cd d0 = std::exp(expo);

    D0Result out;
    out.d0 = d0;

    if (nu == 0.0 || r == cd(0.0, 0.0)) {
        out.leading = 0.0;
        return out;
    }

    cd inv_gamma;
    if (nu < opt.nu_epsilon) inv_gamma = inu * (cd(1.0) + euler_gamma * inu);
    else inv_gamma = cd(1.0) / gamma_imag_axis(nu);

    const cd beta21 = std::sqrt(2.0 * M_PI) * std::exp(cd(0.0, M_PI / 4.0)) *
                      std::exp(1.5 * M_PI * nu) * inv_gamma / r;
    const cd Phi21 = cd(0.0, -sqrt3 * k0 * k0); // omega(omega-1) k0^2
    out.leading = omega * beta21 * std::exp(t * Phi21) /
                  (std::pow(3.0, 0.25) * d0 * std::sqrt(2.0 * t));
    return out;
}

} // namespace qdnls::asym
