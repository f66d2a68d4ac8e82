#include "ipl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ipl/eig.hpp"
#include "ipl/errors.hpp"

namespace ipl {

const char* to_string(GridKind kind) {
    switch (kind) {
        case GridKind::linearized: return "linearized";
        case GridKind::nonlocal: return "nonlocal";
        case GridKind::chiral_partner: return "chiral_partner";
    }
    return "unknown";
}

Eigen::MatrixXd GridOperator::dense() const {
    const Eigen::Index n = dimension();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index d = 0; d < lower_band.rows(); ++d) {
        for (Eigen::Index j = 0; j + d < n; ++j) {
            out(j + d, j) = lower_band(d, j);
            out(j, j + d) = lower_band(d, j);
        }
    }
    return out;
}

Eigen::VectorXd GridOperator::eigenvalues() const {
    const Eigen::Index n = dimension();
    if (bandwidth() <= 1) {
        const Eigen::VectorXd diag = lower_band.row(0).transpose();
        const Eigen::VectorXd sub =
            bandwidth() == 1 ? Eigen::VectorXd(lower_band.row(1).head(n - 1).transpose())
                             : Eigen::VectorXd::Zero(n - 1);
        return tridiagonal_eigenvalues(diag, sub);
    }
    return eigvals_sym(dense());
}

Eigen::VectorXd GridOperator::sites() const {
    Eigen::VectorXd xi(n_points);
    const int half = (n_points - 1) / 2;
    for (int j = 0; j < n_points; ++j) xi(j) = (j - half) * spacing;
    return xi;
}

GridOperator discretize_linear(const LinearModel& model, double xi_max, int n_points) {
    model.require_gaussian();
    if (n_points % 2 == 0) throw InvalidArgument("discretize_linear: n_points must be odd");
    if (n_points < 201) throw InvalidArgument("discretize_linear: n_points must be >= 201");
    if (!(xi_max > 0.0) || !std::isfinite(xi_max)) throw InvalidArgument("discretize_linear: xi_max must be > 0");

    GridOperator op;
    op.kind = GridKind::linearized;
    op.xi_min = -xi_max;
    op.xi_max = xi_max;
    op.n_points = n_points;
    op.spacing = 2.0 * xi_max / (n_points - 1);
    if (std::exp(-xi_max * xi_max / (2.0 * model.g)) > 1e-10) {
        op.warnings.push_back("xi_max is small compared with sqrt(g); Gaussian tail exceeds 1e-10 at the boundary");
    }

    const Eigen::VectorXd xi = op.sites();
    const double h = op.spacing;
    const double g_over_h = model.g / h;
    const Eigen::Index dim = 2 * n_points - 1;
    op.lower_band = Eigen::MatrixXd::Zero(2, dim);
    for (int j = 0; j < n_points; ++j) {
        op.lower_band(0, 2 * j) = -xi(j);
        if (j + 1 < n_points) {
            const double mid = 0.5 * (xi(j) + xi(j + 1));
            op.lower_band(0, 2 * j + 1) = mid;
            // (lambda + g d/dxi) psi1 evaluated at the midpoint.
            op.lower_band(1, 2 * j) = 0.5 * model.lambda - g_over_h;
            op.lower_band(1, 2 * j + 1) = 0.5 * model.lambda + g_over_h;
        }
    }
    return op;
}

GridOperator discretize_linear(const LinearModel& model) {
    model.require_gaussian();
    return discretize_linear(model, 10.0 * std::sqrt(model.g), 4001);
}

GridOperator discretize_nonlocal(double epsilon, double cell_length, double half_span,
                                 double xi_max, int steps_per_shift) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("discretize_nonlocal: epsilon must be >= 0");
    if (!(cell_length > 0.0) || !(half_span > 0.0) || !std::isfinite(cell_length) || !std::isfinite(half_span)) {
        throw InvalidArgument("discretize_nonlocal: cell_length and half_span must be finite and > 0");
    }
    if (!(xi_max > 0.0) || !std::isfinite(xi_max)) throw InvalidArgument("discretize_nonlocal: xi_max must be > 0");
    if (steps_per_shift < 1) throw InvalidArgument("discretize_nonlocal: steps_per_shift must be >= 1");

    const double shift = std::numbers::pi * cell_length / (2.0 * half_span);
    const double h = shift / steps_per_shift;
    const int half = static_cast<int>(std::floor(xi_max / h * (1.0 + 1e-12)));
    if (half < 1) throw InvalidArgument("discretize_nonlocal: xi_max smaller than one grid step");

    GridOperator op;
    op.kind = GridKind::nonlocal;
    op.spacing = h;
    op.n_points = 2 * half + 1;
    op.xi_min = -half * h;
    op.xi_max = half * h;
    op.shift_steps = steps_per_shift;

    const Eigen::VectorXd xi = op.sites();
    const int s = steps_per_shift;
    const Eigen::Index dim = 2 * op.n_points;
    op.lower_band = Eigen::MatrixXd::Zero(std::max(2, 2 * s), dim);
    for (int i = 0; i < op.n_points; ++i) {
        op.lower_band(0, 2 * i) = -std::sin(xi(i));
        op.lower_band(0, 2 * i + 1) = std::sin(xi(i));
        op.lower_band(1, 2 * i) = std::cos(xi(i));
        // psi2 at site i couples to psi1 at site i + s: T(+shift) in the
        // lower block, its transpose T(-shift) in the upper one.
        if (i + s < op.n_points) op.lower_band(2 * s - 1, 2 * i + 1) += epsilon;
    }
    return op;
}

GridOperator discretize_nonlocal_with_spacing(double epsilon, double cell_length,
                                              double half_span, double xi_max, double spacing) {
    if (!(spacing > 0.0)) throw InvalidArgument("discretize_nonlocal: spacing must be > 0");
    const double shift = std::numbers::pi * cell_length / (2.0 * half_span);
    const double ratio = shift / spacing;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * ratio) {
        throw InvalidArgument("discretize_nonlocal: spacing " + std::to_string(spacing) +
                              " is not commensurate with the translation " + std::to_string(shift));
    }
    return discretize_nonlocal(epsilon, cell_length, half_span, xi_max, static_cast<int>(steps));
}

Eigen::VectorXd smallest_magnitude(const Eigen::VectorXd& eigenvalues, int count) {
    if (count < 0 || count > eigenvalues.size()) throw InvalidArgument("smallest_magnitude: bad count");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(eigenvalues.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(eigenvalues(a)) < std::abs(eigenvalues(b));
    });
    std::vector<double> picked;
    for (int i = 0; i < count; ++i) picked.push_back(eigenvalues(order[static_cast<std::size_t>(i)]));
    std::sort(picked.begin(), picked.end());
    return Eigen::Map<Eigen::VectorXd>(picked.data(), count);
}

}  // namespace ipl
