#include "ipl/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ipl/errors.hpp"

namespace ipl {

AngleProfile equidistant_angles(int n_cells) {
    if (n_cells < 2) {
        throw InvalidArgument("equidistant_angles: need at least 2 cells, got " +
                              std::to_string(n_cells));
    }
    constexpr double pi = std::numbers::pi;
    AngleProfile profile;
    profile.values.resize(static_cast<std::size_t>(n_cells));
    const double steps = n_cells - 1;
    for (int m = 0; m < n_cells; ++m) {
        // Symmetric about the centre so that the middle entry is exactly pi/4.
        const double t = (2.0 * m - steps) / steps;  // in [-1, 1]
        profile.values[static_cast<std::size_t>(m)] = pi / 4.0 + t * (pi / 8.0);
    }
    profile.values.front() = pi / 8.0;
    profile.values.back() = 3.0 * pi / 8.0;
    return profile;
}

LatticeSpec LatticeSpec::equidistant(int n_cells, double coupling0) {
    LatticeSpec spec;
    spec.n_cells = n_cells;
    spec.coupling0 = coupling0;
    spec.angles = equidistant_angles(n_cells);
    return spec;
}

void LatticeSpec::validate() const {
    if (n_cells < 1) throw InvalidArgument("LatticeSpec: n_cells must be positive");
    if (angles.size() != static_cast<std::size_t>(n_cells)) {
        throw InvalidArgument("LatticeSpec: expected " + std::to_string(n_cells) + " angles, got " +
                              std::to_string(angles.size()));
    }
    const bool finite = std::isfinite(d1) && std::isfinite(d2) && std::isfinite(coupling0) &&
                        std::isfinite(lattice_constant) &&
                        std::all_of(angles.values.begin(), angles.values.end(),
                                    [](double v) { return std::isfinite(v); });
    if (!finite) throw InvalidArgument("LatticeSpec: non-finite parameter");
    if (coupling0 < 0.0) throw InvalidArgument("LatticeSpec: coupling0 must be >= 0");
    if (lattice_constant <= 0.0) throw InvalidArgument("LatticeSpec: lattice_constant must be > 0");
    if (d1 == d2) throw DegenerateCell("LatticeSpec: d1 == d2, cell spectrum is degenerate");
}

double LatticeSpec::reduced_coupling() const {
    if (d1 == d2) throw DegenerateCell("reduced_coupling: d1 == d2");
    return 2.0 * coupling0 / (d1 - d2);
}

double LatticeSpec::angle_step() const {
    if (angles.size() < 2) throw InvalidArgument("angle_step: need at least 2 cells");
    return (angles.values.back() - angles.values.front()) / static_cast<double>(angles.size() - 1);
}

Eigen::MatrixXd BlockTridiagonal::dense() const {
    const int n = dimension();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int m = 0; m < n_cells; ++m) out.block<2, 2>(2 * m, 2 * m) = diag_blocks[m];
    for (int m = 0; m + 1 < n_cells; ++m) {
        out.block<2, 2>(2 * (m + 1), 2 * m) = lower_blocks[m];
        out.block<2, 2>(2 * m, 2 * (m + 1)) = lower_blocks[m].transpose();
    }
    return out;
}

namespace {

Eigen::Matrix2d coupling_block(double eps) {
    Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
    c(0, 1) = eps;
    return c;
}

}  // namespace

BlockTridiagonal build_full_hamiltonian(const LatticeSpec& spec) {
    spec.validate();
    BlockTridiagonal h;
    h.n_cells = spec.n_cells;
    h.reduced = false;
    h.diag_blocks.reserve(spec.n_cells);
    const Eigen::Matrix2d d = Eigen::Vector2d(spec.d1, spec.d2).asDiagonal();
    for (double phi : spec.angles.values) {
        Eigen::Matrix2d o;
        o << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
        Eigen::Matrix2d block = o * d * o.transpose();
        block(1, 0) = block(0, 1);
        h.diag_blocks.push_back(block);
    }
    h.lower_blocks.assign(static_cast<std::size_t>(std::max(0, spec.n_cells - 1)),
                          coupling_block(spec.coupling0));
    return h;
}

BlockTridiagonal build_reduced_hamiltonian(const LatticeSpec& spec) {
    spec.validate();
    BlockTridiagonal h;
    h.n_cells = spec.n_cells;
    h.reduced = true;
    h.diag_blocks.reserve(spec.n_cells);
    for (double phi : spec.angles.values) {
        const double c = std::cos(2.0 * phi);
        const double s = std::sin(2.0 * phi);
        Eigen::Matrix2d block;
        block << c, s, s, -c;
        h.diag_blocks.push_back(block);
    }
    h.lower_blocks.assign(static_cast<std::size_t>(std::max(0, spec.n_cells - 1)),
                          coupling_block(spec.reduced_coupling()));
    return h;
}

EigenSystem diagonalize(const BlockTridiagonal& h) {
    const int n = h.dimension();
    if (n == 0) throw InvalidArgument("diagonalize: empty Hamiltonian");

    // Split into runs of cells connected by non-zero couplings.
    std::vector<std::pair<int, int>> runs;  // [first, last] cell
    int start = 0;
    for (int m = 0; m + 1 < h.n_cells; ++m) {
        if (h.lower_blocks[m].isZero(0.0)) {
            runs.emplace_back(start, m);
            start = m + 1;
        }
    }
    runs.emplace_back(start, h.n_cells - 1);

    const Eigen::MatrixXd full = h.dense();
    if (runs.size() == 1) return eig_sym(full);

    Eigen::VectorXd values(n);
    Eigen::MatrixXd vectors = Eigen::MatrixXd::Zero(n, n);
    int col = 0;
    for (auto [first, last] : runs) {
        const int off = 2 * first;
        const int len = 2 * (last - first + 1);
        const EigenSystem part = eig_sym(full.block(off, off, len, len));
        values.segment(col, len) = part.eigenvalues;
        vectors.block(off, col, len, len) = part.eigenvectors;
        col += len;
    }

    // Stable ascending sort; equal eigenvalues keep cell order.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values(a) < values(b); });

    EigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.eigenvalues(i) = values(order[i]);
        out.eigenvectors.col(i) = vectors.col(order[i]);
    }
    out.max_residual = eigen_residuals(full, out);
    out.max_orthogonality_defect = orthogonality_defect(out.eigenvectors);
    return out;
}

}  // namespace ipl
