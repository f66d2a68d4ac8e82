#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ipl/errors.hpp"
#include "ipl/grid.hpp"
#include "ipl/lattice.hpp"
#include "support/oracles.hpp"

using namespace ipl;
constexpr double pi = std::numbers::pi;

TEST_CASE("linearized grid layout") {
    const LinearModel m{1.5, 0.05};
    const GridOperator op = discretize_linear(m, 10 * std::sqrt(0.05), 401);
    CHECK(op.kind == GridKind::linearized);
    CHECK(op.dimension() == 801);
    CHECK(op.bandwidth() == 1);
    CHECK(op.xi_min == -op.xi_max);
    CHECK(op.sites()(200) == 0.0);
    CHECK(op.warnings.empty());
    const Eigen::MatrixXd d = op.dense();
    CHECK(relative_symmetry_defect(d) == 0.0);
    CHECK(d(0, 0) == doctest::Approx(op.xi_max));
    CHECK(d(1, 1) == doctest::Approx(-op.xi_max + 0.5 * op.spacing));
}

TEST_CASE("tridiagonal eigenvalues agree with the Sturm oracle and the dense solver") {
    const GridOperator op = discretize_linear(LinearModel{1.5, 0.05}, 10 * std::sqrt(0.05), 201);
    const Eigen::VectorXd w = op.eigenvalues();
    const Eigen::VectorXd diag = op.lower_band.row(0).transpose();
    const Eigen::VectorXd sub = op.lower_band.row(1).head(op.dimension() - 1).transpose();
    for (int k : {0, 150, 200, 201, 400}) CHECK(w(k) == doctest::Approx(oracle::sturm_eigenvalue(diag, sub, k)).epsilon(1e-11));
    CHECK((w - eigvals_sym(op.dense())).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("grid levels converge to the analytic spectrum without doubling") {
    const LinearModel m{1.5, 0.05};
    double previous = INFINITY;
    for (int n : {1001, 2001, 4001}) {
        const Eigen::VectorXd low = smallest_magnitude(discretize_linear(m, 10 * std::sqrt(m.g), n).eigenvalues(), 11);
        const std::vector<Level> levels = sorted_by_energy(analytic_spectrum(m, 5));
        double err = 0.0;
        for (int i = 0; i < 11; ++i) err = std::max(err, std::abs(low(i) - levels[i].energy));
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous < 1e-4);
}

TEST_CASE("grid argument checks") {
    const LinearModel m{1.5, 0.05};
    CHECK_THROWS_AS(discretize_linear(m, 2.0, 400), InvalidArgument);
    CHECK_THROWS_AS(discretize_linear(m, 2.0, 101), InvalidArgument);
    CHECK_THROWS_AS(discretize_linear(m, -1.0, 401), InvalidArgument);
    CHECK_THROWS_AS(discretize_linear(LinearModel{1.5, 0.0}, 1.0, 401), InvalidParams);
    CHECK_FALSE(discretize_linear(m, 0.5, 401).warnings.empty());
}

TEST_CASE("nonlocal grid with one step per shift is the reduced lattice") {
    const double eps = 0.5, a = 1.0, L = 5 * pi;
    const GridOperator op = discretize_nonlocal(eps, a, L, 2.0, 1);
    CHECK(op.kind == GridKind::nonlocal);
    CHECK(op.bandwidth() == 1);
    const Eigen::VectorXd xi = op.sites();
    const int n = static_cast<int>(xi.size());
    REQUIRE(n % 2 == 1);
    LatticeSpec spec;
    spec.n_cells = n;
    spec.coupling0 = eps;
    for (int j = 0; j < n; ++j) spec.angles.values.push_back(pi / 4 + xi(j) / 2);
    const Eigen::MatrixXd lattice = build_reduced_hamiltonian(spec).dense();
    const Eigen::MatrixXd grid = op.dense();
    // Cell block [[cos 2phi, sin 2phi], [sin 2phi, -cos 2phi]] at 2phi = pi/2 + xi.
    CHECK((grid - lattice).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("finer nonlocal grids decouple into copies") {
    const double eps = 0.5, L = 5 * pi;
    const Eigen::VectorXd one = discretize_nonlocal(eps, 1.0, L, 1.0, 1).eigenvalues();
    const GridOperator two = discretize_nonlocal(eps, 1.0, L, 1.0, 2);
    CHECK(two.bandwidth() == 3);
    CHECK(relative_symmetry_defect(two.dense()) == 0.0);
    const Eigen::VectorXd w = two.eigenvalues();
    CHECK(w.maxCoeff() == doctest::Approx(one.maxCoeff()).epsilon(1e-3));
    const double h = (pi / (2 * L)) / 2;
    CHECK(discretize_nonlocal_with_spacing(eps, 1.0, L, 1.0, h).shift_steps == 2);
    CHECK_THROWS_AS(discretize_nonlocal_with_spacing(eps, 1.0, L, 1.0, 0.3 * h), InvalidArgument);
}

TEST_CASE("smallest_magnitude") {
    Eigen::VectorXd v(6);
    v << -3, -0.5, 0.1, 0.4, 2, 5;
    const Eigen::VectorXd s = smallest_magnitude(v, 3);
    REQUIRE(s.size() == 3);
    CHECK(s(0) == -0.5);
    CHECK(s(1) == 0.1);
    CHECK(s(2) == 0.4);
    CHECK_THROWS_AS(smallest_magnitude(v, 7), InvalidArgument);
}
