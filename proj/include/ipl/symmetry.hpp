#pragma once

#include <cstdint>
#include <vector>

#include "ipl/continuum.hpp"
#include "ipl/grid.hpp"

namespace ipl {

/// Coefficient lists carrying an implicit global factor i (times_i).
struct TaggedSpinor {
    CoeffSpinor coeffs;
    bool times_i = true;
};

/// P = Pi_xi sigma_x. Labels are kept; P commutes with the Hamiltonian.
PolyGaussianSpinor apply_parity_sigma_x(const PolyGaussianSpinor& state);

/// V = i [[g d/dxi, xi], [-xi, -g d/dxi]] in coefficient space. The result
/// holds the real part W and is tagged with the factor i.
TaggedSpinor apply_v_coeff(double g, const PolyGaussianSpinor& state);
TaggedSpinor apply_v_coeff(double g, const CoeffSpinor& coeffs);

/// 0 and +-sqrt(2 g n) for n = 1..n_max, ascending.
std::vector<double> v_spectrum(double g, int n_max);

/// Real symmetric grid form of V, unitarily equivalent to it through a
/// fixed spinor rotation: [[0, C], [C^T, 0]] with C = g d/dxi - xi, the
/// second component on midpoints. Same grid rules as discretize_linear.
GridOperator discretize_partner_operator(double g, double xi_max, int n_points);

/// Pi_xi applied to an eigenstate of the lambda -> -lambda model. The result
/// is an eigenstate of `model` with the opposite energy, leading coefficient
/// made positive. Throws MissingPartner when the map returns the input
/// itself (the n = 0 state), InvalidArgument if the input is not an
/// eigenstate of the flipped model.
PolyGaussianSpinor partner_state(const LinearModel& model, const PolyGaussianSpinor& at_minus_lambda);

/// +1 or -1 if P psi = +-psi to 1e-10 relative, 0 otherwise.
int parity_sign(const PolyGaussianSpinor& state);

/// Residuals of the decoupled second-order equations for psi1 and psi2.
struct OdeResidual {
    double xi = 0.0;
    double psi1 = 0.0;
    double psi2 = 0.0;
};

/// Evaluated with exact polynomial derivatives. Points closer than 1e-3 to
/// xi = energy (psi1 equation) or xi = -energy (psi2 equation) raise
/// SingularPoint.
std::vector<OdeResidual> ode_residual(const LinearModel& model, double energy,
                                      const PolyGaussianSpinor& state,
                                      const std::vector<double>& xi_points);

/// |H P psi - P H psi|_max / |psi|_max.
double commutator_residual_p(const LinearModel& model, const CoeffSpinor& psi);

/// |H V psi + V H psi|_max / |psi|_max, evaluated on the real part of V.
double anticommutator_residual_v(const LinearModel& model, const CoeffSpinor& psi);

/// |sigma_x V sigma_x psi + V psi|_max / |psi|_max.
double sigma_x_chirality_residual(double g, const CoeffSpinor& psi);

/// Deterministic random spinors with coefficients uniform in [-1, 1].
std::vector<CoeffSpinor> random_spinors(int count, int max_degree, std::uint64_t seed);

struct PartnerCheck {
    int level = 0;
    double energy = 0.0;          ///< state at -lambda
    double partner_energy = 0.0;  ///< its partner at +lambda
    double residual = 0.0;        ///< coefficient residual of the partner
};

struct SymmetryReport {
    double commutator_residual_P = 0.0;
    double anticommutator_residual_V = 0.0;
    double sigma_x_chirality_residual = 0.0;
    std::vector<int> parity_signs;  ///< built states in analytic_spectrum order
    std::vector<PartnerCheck> partner_energy_checks;
};

/// Runs the identities on `random_count` random spinors of degree <= 6 and on
/// all built states up to n_max.
SymmetryReport symmetry_report(const LinearModel& model, int n_max, int random_count = 20,
                               std::uint64_t seed = 20240611);

}  // namespace ipl
