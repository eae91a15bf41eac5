#pragma once

// Direct scattering: eigenfunctions X, Y, X^A, Y^A of the Lax x-equation as
// ODE initial value problems integrated inward from the normalized end, the
// scattering matrices s, s^A by quadrature of their defining integrals, and
// the reflection coefficients r1, r2, r2~ on a spectral grid.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qdnls/grid.hpp"
#include "qdnls/lax.hpp"
#include "qdnls/mat3.hpp"

namespace qdnls::scatter {

enum class EigKind { X, Y, XA, YA };

// Closed column domain of definition (Proposition-level sector geometry):
// X and Y^A columns live where Re l_j is minimal, Y and X^A columns where it
// is maximal.
bool column_defined(EigKind kind, int j, cd k);

struct Eigenfunction {
    EigKind kind;
    cd k;
    std::vector<double> xs;
    std::vector<Mat3> samples;           // undefined columns hold NaN
    std::array<bool, 3> col_defined{};

    // Checked access; throws DomainError for a column outside its sector.
    Vec3 column(std::size_t node, int j) const;

    Mat3 at(std::size_t node) const { return samples[node]; }
    double det_defect(std::size_t node) const; // |det - 1| (needs all columns)
};

struct SolveOptions {
    double rtol = 1e-10;
    double atol = 1e-13;
    bool force_all_columns = false; // compact data only; unstable at large |k|
};

// Samples on the grid of q. Undefined columns are flagged (NaN-filled)
// unless force_all_columns is set.
Eigenfunction solve_eigenfunction(const GridFunction& q, cd k, EigKind kind,
                                  const SolveOptions& opt = {});

// Value of a single column at x_eval (integrates from the normalized end).
Vec3 eig_column_value(const GridFunction& q, cd k, EigKind kind, int j, double x_eval,
                      const SolveOptions& opt = {});

// 3x3 matrix with possibly-absent entries.
struct PartialMat3 {
    std::array<std::optional<cd>, 9> e;
    std::optional<cd>& operator()(int i, int j) { return e[3 * i + j]; }
    const std::optional<cd>& operator()(int i, int j) const { return e[3 * i + j]; }
    cd value(int i, int j) const; // throws DomainError if absent
    Mat3 dense_or_throw() const;
};

// All entries of s(k) (adjoint=false) or s^A(k) (adjoint=true) that are
// defined at this k, via Boole quadrature of the defining integral along the
// eigenfunction solve. Node density scales with the oscillation rate.
PartialMat3 scattering_parts(const GridFunction& q, cd k, bool adjoint,
                             const SolveOptions& opt = {});

// Both matrices at real k.
std::pair<PartialMat3, PartialMat3> scattering_matrix(const GridFunction& q, double k,
                                                      const SolveOptions& opt = {});

// s_jj (adjoint=false) or s^A_jj (adjoint=true) together with the solved
// column value at x_eval, in one pass. Used by the RH-model assembly where a
// denominator and a column of the same solve are both needed.
struct DiagEntryResult {
    cd diag;
    Vec3 column_at_x;
};
DiagEntryResult diag_entry_with_column(const GridFunction& q, cd k, bool adjoint, int j,
                                       double x_eval, const SolveOptions& opt = {});

// Full matrices for compactly supported data via the endpoint relations
// s = e^{-x_l L^} X(x_l), s^A = e^{x_l L^} X^A(x_l). Exact in exact
// arithmetic for any k, but conditioned like e^{c|k|}; meant for |k| <~ 2.
Mat3 s_route_b(const GridFunction& q, cd k, const SolveOptions& opt = {});
Mat3 sA_route_b(const GridFunction& q, cd k, const SolveOptions& opt = {});

struct PosRow { // k > 0
    double k;
    cd r1, s11, s12, s21, s22, sA33;
};
struct NegRow { // k < 0
    double k;
    cd r2, r2t, sA11, sA12, sA21, sA22, s33;
};

struct ScatteringTable {
    std::vector<PosRow> pos; // ascending k
    std::vector<NegRow> neg; // ascending k (all negative)
    double zero_tolerance = 1e-6;
    double soliton_margin = 0.0; // min |s11|,|sA11| encountered
};

// Log-spaced grid on [kmin, kmax], n points (one half-line).
std::vector<double> make_spectral_grid(double kmin = 1e-3, double kmax = 40.0,
                                       std::size_t n = 400);

struct ReflectOptions {
    SolveOptions solve;
    double zero_tolerance = 1e-6;
};

// r1 on the positive half-grid, r2 / r2~ on the mirrored negative one.
// Throws SolitonAssumptionError if |s11| or |sA11| dips below the tolerance.
ScatteringTable reflection_coefficients(const GridFunction& q,
                                        const std::vector<double>& k_grid_positive,
                                        const ReflectOptions& opt = {});

void save_table_csv(const ScatteringTable& t, const std::string& pos_path,
                    const std::string& neg_path, const std::string& header_comment = "");
ScatteringTable load_table_csv(const std::string& pos_path, const std::string& neg_path);

// First large-k coefficients X1, Y1 assembled from the closed form.
class LargeKCoefficient {
  public:
    LargeKCoefficient(const GridFunction& q);
    Mat3 X1_at(double x) const;
    Mat3 Y1_at(double x) const;

  private:
    GridFunction q_;
    quad::CubicSpline tail_mass_;  // int_x^{xmax} |q|^2
    double total_mass_ = 0.0;
};

} // namespace qdnls::scatter
