#include "ipl/eig.hpp"

#include <cmath>
#include <string>

#include "ipl/errors.hpp"

namespace ipl {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

void validate_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw InvalidArgument("eig_sym: matrix must be square with dimension >= 1, got " +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!m.allFinite()) throw InvalidArgument("eig_sym: matrix has non-finite entries");
    const double defect = relative_symmetry_defect(m);
    if (defect > kSymmetryTolerance) {
        throw SymmetryViolation("eig_sym: relative symmetry defect " + std::to_string(defect));
    }
}

}  // namespace

void apply_sign_convention(Eigen::MatrixXd& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        auto col = vectors.col(j);
        const double peak = col.cwiseAbs().maxCoeff();
        if (peak == 0.0) continue;
        Eigen::Index pick = 0;
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (std::abs(col(i)) >= peak * (1.0 - 1e-12)) {
                pick = i;
                break;
            }
        }
        if (col(pick) < 0.0) col = -col;
    }
}

double orthogonality_defect(const Eigen::MatrixXd& vectors) {
    const Eigen::MatrixXd gram = vectors.transpose() * vectors;
    return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double eigen_residuals(const Eigen::MatrixXd& matrix, const EigenSystem& system) {
    if (matrix.rows() != system.eigenvectors.rows() ||
        system.eigenvectors.cols() != system.eigenvalues.size()) {
        throw DimensionMismatch("eigen_residuals: matrix and eigensystem dimensions disagree");
    }
    const Eigen::MatrixXd hv = matrix * system.eigenvectors;
    const Eigen::MatrixXd ev = system.eigenvectors * system.eigenvalues.asDiagonal();
    return (hv - ev).colwise().norm().maxCoeff();
}

EigenSystem eig_sym(const Eigen::MatrixXd& matrix) {
    validate_symmetric(matrix);
    // Symmetrize so that the solver sees an exactly symmetric input.
    const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw ConsistencyError("eig_sym: solver did not converge");

    EigenSystem out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    apply_sign_convention(out.eigenvectors);
    out.max_residual = eigen_residuals(sym, out);
    out.max_orthogonality_defect = orthogonality_defect(out.eigenvectors);
    return out;
}

Eigen::VectorXd eigvals_sym(const Eigen::MatrixXd& matrix) {
    validate_symmetric(matrix);
    const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConsistencyError("eigvals_sym: solver did not converge");
    return solver.eigenvalues();
}

Eigen::VectorXd tridiagonal_eigenvalues(const Eigen::VectorXd& diagonal,
                                        const Eigen::VectorXd& subdiagonal) {
    if (diagonal.size() == 0 || subdiagonal.size() != diagonal.size() - 1) {
        throw DimensionMismatch("tridiagonal_eigenvalues: sub-diagonal must have size n-1");
    }
    if (!diagonal.allFinite() || !subdiagonal.allFinite()) {
        throw InvalidArgument("tridiagonal_eigenvalues: non-finite entries");
    }
    if (diagonal.size() == 1) return diagonal;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diagonal, subdiagonal, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw ConsistencyError("tridiagonal_eigenvalues: solver did not converge");
    }
    return solver.eigenvalues();
}

}  // namespace ipl
