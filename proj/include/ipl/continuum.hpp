#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "ipl/polynomial.hpp"

namespace ipl {

enum class Branch { positive, negative };

/// unit_total: int (|psi1|^2 + |psi2|^2) = 1.
/// per_component: each component has unit norm (total 2), e.g. amplitude
/// (1/(pi g))^(1/4) for the ground state.
enum class NormConvention { unit_total, per_component };

constexpr char branch_symbol(Branch b) { return b == Branch::positive ? '+' : '-'; }
constexpr Branch opposite(Branch b) { return b == Branch::positive ? Branch::negative : Branch::positive; }

/// Linearized continuum Hamiltonian
///   [ -xi               lambda - g d/dxi ]
///   [ lambda + g d/dxi            xi     ]
/// lambda may be negative (the lambda -> -lambda partner construction).
struct LinearModel {
    double lambda = 1.0;
    double g = 0.0;

    LinearModel flipped() const { return {-lambda, g}; }

    /// +-sqrt(lambda^2 + 2 g n).
    double energy(int n, Branch sign) const;

    /// Throws InvalidParams unless g > 0 and both fields are finite.
    void require_gaussian() const;
};

/// Coupling, cell length and half span of the linear angle profile, plus
/// the derived lambda = 1 + epsilon and g = pi epsilon a / (2 L).
struct ContinuumParams {
    double epsilon = 0.0;
    double cell_length = 1.0;
    double half_span = 1.0;
    double lambda = 1.0;
    double g = 0.0;

    LinearModel model() const { return {lambda, g}; }

    /// g == 0: the Gaussian ansatz is undefined, only the static two-level
    /// spectrum +-lambda survives.
    bool degenerate() const { return g == 0.0; }
};

/// Throws InvalidArgument for negative or non-finite input. epsilon = 0 or
/// an infinite half span give a degenerate() parameter set.
ContinuumParams derive_params(double epsilon, double cell_length, double half_span);

struct Level {
    int n = 0;
    Branch sign = Branch::positive;
    double energy = 0.0;
};

/// Levels in (n, sign) order: the single n = 0 level with energy lambda,
/// then (n, -), (n, +) for n = 1..n_max. Throws InvalidParams for g <= 0.
std::vector<Level> analytic_spectrum(const LinearModel& model, int n_max);

/// As above; a degenerate parameter set returns static_limit_spectrum.
std::vector<Level> analytic_spectrum(const ContinuumParams& params, int n_max);

/// a/L = 0 limit: constant spinors psi1 = +-psi2 with energies -(1+eps), 1+eps.
std::vector<Level> static_limit_spectrum(double epsilon);

std::vector<Level> sorted_by_energy(std::vector<Level> levels);

/// Polynomial pair times exp(-xi^2/(2g)), labelled with its level.
struct PolyGaussianSpinor {
    double g = 0.0;
    Eigen::VectorXd coeffs_a;  ///< psi1 polynomial, ascending powers of xi
    Eigen::VectorXd coeffs_b;  ///< psi2 polynomial
    double energy = 0.0;
    int level = 0;
    Branch sign = Branch::positive;
    NormConvention norm_convention = NormConvention::unit_total;

    CoeffSpinor coeffs() const { return {coeffs_a, coeffs_b}; }
    /// int (|psi1|^2 + |psi2|^2) dxi, from Gaussian moments.
    double norm_squared() const;
    /// (psi1(xi), psi2(xi)) including the Gaussian.
    Eigen::Vector2d evaluate(double xi) const;
};

/// Rescales to the requested convention.
PolyGaussianSpinor normalized(PolyGaussianSpinor state, NormConvention convention);

/// Flips the global sign so the leading psi1 coefficient is positive.
void canonicalize_sign(PolyGaussianSpinor& state);

/// One step of the four-term recurrence, S_{k+1} = (a_{k+1}, b_{k+1}, a_k, b_k).
struct RecurrenceState {
    int k = 0;
    Eigen::Vector4d s_vector = Eigen::Vector4d::Zero();
};

/// Raw series coefficients a_0..a_K, b_0..b_K generated by the recurrence.
struct RecurrenceRun {
    double energy = 0.0;
    Eigen::VectorXd a;
    Eigen::VectorXd b;

    int last_index() const { return static_cast<int>(a.size()) - 1; }
    /// S_{k+1} for 0 <= k < last_index(), with a_{-1} = b_{-1} = 0.
    RecurrenceState state(int k) const;
};

/// The 4x4 transfer matrix M(k) for a general Gaussian exponent c.
Eigen::Matrix4d recurrence_matrix(const LinearModel& model, double energy, int k, double c);

/// Runs the recurrence from (a_0, b_0) with c = 1/g up to index k_last.
RecurrenceRun run_recurrence(const LinearModel& model, double energy, double a0, double b0,
                             int k_last);

/// Seed (a_0, b_0), unit length, for which the series at energy terminates
/// after degree n: the null vector of the 2x2 map (a_0, b_0) -> (a_{n+1}, b_{n+1}).
/// Throws ConsistencyError if that map is not singular (energy is no level).
Eigen::Vector2d level_seed(const LinearModel& model, double energy, int n);

/// Recurrence coefficients up to index n+1 for level (n, sign).
RecurrenceRun level_recurrence(const LinearModel& model, int n, Branch sign);

/// Eigenstate built from the recurrence, truncated at degree n, leading
/// coefficient positive. Throws MissingState for the absent n = 0 partner
/// (energy -lambda for lambda > 0) and ConsistencyError if the series fails
/// to terminate within 1e-10 of the leading coefficient.
PolyGaussianSpinor build_eigenstate(const LinearModel& model, int n, Branch sign,
                                    NormConvention convention = NormConvention::unit_total);

/// Hard-coded closed forms for n <= 2. Negative branches use the explicit
/// polynomials; positive ones are the parity partners of the
/// negative states of the lambda -> -lambda model.
PolyGaussianSpinor closed_form_state(const LinearModel& model, int n, Branch sign,
                                     NormConvention convention = NormConvention::unit_total);

/// Exact action of the Hamiltonian on the state (one degree higher, same
/// Gaussian, not normalized). Throws GaussianMismatch if state.g != model.g.
CoeffSpinor apply_h_coeff(const LinearModel& model, const PolyGaussianSpinor& state);

/// |H psi - E psi|_max / |psi|_max in coefficient space.
double coefficient_residual(const LinearModel& model, const PolyGaussianSpinor& state);

/// Eigenvalues of M(k). They come as +-sqrt(u) for the two roots u of a
/// quadratic in mu^2; a negative root is an imaginary pair, flagged and
/// reported by magnitude.
struct RecurrenceEigenvalues {
    std::array<double, 2> mu_squared{};  ///< ordered by |u|
    std::array<double, 4> values{};      ///< +-sqrt|u_0|, +-sqrt|u_1|
    std::array<bool, 2> imaginary{};
};

RecurrenceEigenvalues recurrence_matrix_eigs(const LinearModel& model, double energy, int k,
                                             double c);
/// c = 1/g: (0, 0, +-sqrt(lambda^2 + 2g(k+1) - E^2) / (g(k+1))).
RecurrenceEigenvalues recurrence_matrix_eigs(const LinearModel& model, double energy, int k);

/// Gaussian decay length sqrt(4 L eps a / pi) in units of x; the
/// eigenstates decay as exp(-x^2 / l^2).
double localization_length(double epsilon, double cell_length, double half_span);

/// Same length in cells, sqrt(eps / dphi) with dphi the angle step per cell.
double localization_length_cells(double epsilon, double angle_step);

}  // namespace ipl
