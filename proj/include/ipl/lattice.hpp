#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ipl/eig.hpp"

namespace ipl {

/// Cell rotation angles phi_m in radians, one per cell.
struct AngleProfile {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/// N equal steps from pi/8 to 3pi/8 inclusive. Requires n_cells >= 2.
AngleProfile equidistant_angles(int n_cells);

/// Parameters of a finite lattice of 2x2 isospectral cells.
struct LatticeSpec {
    int n_cells = 0;
    double d1 = 1.0;
    double d2 = -1.0;
    double coupling0 = 0.0;         ///< bare inter-cell coupling
    double lattice_constant = 1.0;  ///< cell spacing a
    AngleProfile angles;

    /// Equidistant profile with the default cell spectrum d1 = 1, d2 = -1.
    static LatticeSpec equidistant(int n_cells, double coupling0);

    /// Throws InvalidArgument (or DegenerateCell for d1 == d2).
    void validate() const;

    /// 2 coupling0 / (d1 - d2).
    double reduced_coupling() const;

    /// Angle step between neighbouring cells; requires at least two cells.
    double angle_step() const;
};

/// Hamiltonian in 2x2 block form. Cell m occupies dense rows 2m, 2m+1.
struct BlockTridiagonal {
    int n_cells = 0;
    std::vector<Eigen::Matrix2d> diag_blocks;   ///< N cell blocks
    std::vector<Eigen::Matrix2d> lower_blocks;  ///< N-1 blocks at (m+1, m)
    bool reduced = false;

    int dimension() const { return 2 * n_cells; }
    Eigen::MatrixXd dense() const;
};

/// Cell blocks O(phi) diag(d1, d2) O(phi)^T, couplings [[0, eps0], [0, 0]].
BlockTridiagonal build_full_hamiltonian(const LatticeSpec& spec);

/// Traceless form (full - (d1+d2)/2) * 2/(d1-d2) with coupling 2 eps0/(d1-d2).
BlockTridiagonal build_reduced_hamiltonian(const LatticeSpec& spec);

/// Diagonalizes a block Hamiltonian. Runs of cells joined by non-zero
/// couplings are solved independently, so a fully decoupled lattice yields
/// eigenvectors supported on single cells.
EigenSystem diagonalize(const BlockTridiagonal& h);

}  // namespace ipl
