#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ipl/continuum.hpp"

namespace ipl {

enum class GridKind { linearized, nonlocal, chiral_partner };

const char* to_string(GridKind kind);

/// Real symmetric banded operator on a uniform xi grid.
///
/// Storage is lower band: lower_band(d, j) = A(j + d, j) for d <= bandwidth.
/// Unknowns are interleaved site-major, component-minor. For the
/// linearized and chiral_partner kinds the second component lives on the
/// midpoints between first-component sites (2 n_points - 1 unknowns), which
/// keeps the operator tridiagonal and free of doubled low-lying modes.
struct GridOperator {
    GridKind kind = GridKind::linearized;
    double xi_min = 0.0;
    double xi_max = 0.0;
    double spacing = 0.0;
    int n_points = 0;     ///< first-component sites, odd, symmetric about 0
    int shift_steps = 0;  ///< nonlocal only: grid steps per cell translation
    Eigen::MatrixXd lower_band;
    std::vector<std::string> warnings;

    Eigen::Index dimension() const { return lower_band.cols(); }
    int bandwidth() const { return static_cast<int>(lower_band.rows()) - 1; }

    /// Symmetric by construction: A(i, j) and A(j, i) read one stored value.
    Eigen::MatrixXd dense() const;

    /// Ascending spectrum; tridiagonal operators take a dedicated O(n^2) path.
    Eigen::VectorXd eigenvalues() const;

    /// xi of the first-component sites.
    Eigen::VectorXd sites() const;
};

/// Linearized Hamiltonian on [-xi_max, xi_max] with Dirichlet truncation.
/// Requires odd n_points >= 201; warns when exp(-xi_max^2/(2g)) > 1e-10.
GridOperator discretize_linear(const LinearModel& model, double xi_max, int n_points);

/// Defaults xi_max = 10 sqrt(g), n_points = 4001.
GridOperator discretize_linear(const LinearModel& model);

/// The nonlocal Hamiltonian with exact translation by pi a / (2 L): diagonal
/// blocks -+sin xi, off-diagonal cos xi plus epsilon times the integer shift.
/// Sites are j h for |j h| <= xi_max with h = (pi a / (2 L)) / steps_per_shift.
GridOperator discretize_nonlocal(double epsilon, double cell_length, double half_span,
                                 double xi_max, int steps_per_shift);

/// As above for an explicitly requested spacing, which must divide the
/// translation length; throws InvalidArgument otherwise.
GridOperator discretize_nonlocal_with_spacing(double epsilon, double cell_length,
                                              double half_span, double xi_max, double spacing);

/// Eigenvalues with the smallest |E|, returned in ascending order of E.
Eigen::VectorXd smallest_magnitude(const Eigen::VectorXd& eigenvalues, int count);

}  // namespace ipl
