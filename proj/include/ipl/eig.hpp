#pragma once

#include <Eigen/Dense>

namespace ipl {

/// Eigenvalues in ascending order, eigenvector i in column i.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    double max_residual = 0.0;              ///< max_i |H v_i - E_i v_i|_2
    double max_orthogonality_defect = 0.0;  ///< |V^T V - I|_max
};

/// Largest |A_ij - A_ji| relative to the largest |A_ij|; 0 for a zero matrix.
template <typename Derived>
double relative_symmetry_defect(const Eigen::MatrixBase<Derived>& a) {
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

/// Flips each column so its largest-magnitude entry is positive. Entries
/// within 1e-12 relative of the column maximum count as ties; the lowest
/// index wins.
void apply_sign_convention(Eigen::MatrixXd& vectors);

/// Full eigendecomposition of a dense real symmetric matrix.
///
/// Throws SymmetryViolation when the input deviates from symmetry by more
/// than 1e-12 relative, InvalidArgument on non-finite entries or an empty
/// or non-square matrix. The result is deterministic for identical input.
EigenSystem eig_sym(const Eigen::MatrixXd& matrix);

/// Eigenvalues only; same validation as eig_sym.
Eigen::VectorXd eigvals_sym(const Eigen::MatrixXd& matrix);

/// Recomputes max_i |H v_i - E_i v_i|_2 for a stored system.
double eigen_residuals(const Eigen::MatrixXd& matrix, const EigenSystem& system);

/// |V^T V - I|_max.
double orthogonality_defect(const Eigen::MatrixXd& vectors);

/// Ascending eigenvalues of the symmetric tridiagonal matrix with the given
/// diagonal and sub-diagonal (size n-1).
Eigen::VectorXd tridiagonal_eigenvalues(const Eigen::VectorXd& diagonal,
                                        const Eigen::VectorXd& subdiagonal);

}  // namespace ipl
