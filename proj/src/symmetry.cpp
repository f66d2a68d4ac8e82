#include "ipl/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ipl/errors.hpp"

namespace ipl {

namespace {

double relative_max(const CoeffSpinor& diff, const CoeffSpinor& scale) {
    const double s = max_abs_coeff(scale);
    return s > 0.0 ? max_abs_coeff(diff) / s : max_abs_coeff(diff);
}

CoeffSpinor sum(const CoeffSpinor& u, const CoeffSpinor& v) { return axpy_difference(u, -1.0, v); }

}  // namespace

PolyGaussianSpinor apply_parity_sigma_x(const PolyGaussianSpinor& state) {
    PolyGaussianSpinor out = state;
    const CoeffSpinor p = parity_sigma_x(state.coeffs());
    out.coeffs_a = p.psi1;
    out.coeffs_b = p.psi2;
    return out;
}

TaggedSpinor apply_v_coeff(double g, const CoeffSpinor& coeffs) {
    return {apply_partner_real(g, coeffs), true};
}

TaggedSpinor apply_v_coeff(double g, const PolyGaussianSpinor& state) {
    if (std::abs(g - state.g) > 1e-14 * std::max(std::abs(g), std::abs(state.g))) {
        throw GaussianMismatch("apply_v_coeff: g mismatch");
    }
    return apply_v_coeff(g, state.coeffs());
}

std::vector<double> v_spectrum(double g, int n_max) {
    if (!(g > 0.0)) throw InvalidParams("v_spectrum: g must be > 0");
    if (n_max < 0) throw InvalidArgument("v_spectrum: n_max must be >= 0");
    std::vector<double> out{0.0};
    for (int n = 1; n <= n_max; ++n) {
        const double e = std::sqrt(2.0 * g * n);
        out.push_back(e);
        out.push_back(-e);
    }
    std::sort(out.begin(), out.end());
    return out;
}

GridOperator discretize_partner_operator(double g, double xi_max, int n_points) {
    if (!(g > 0.0)) throw InvalidParams("discretize_partner_operator: g must be > 0");
    if (n_points % 2 == 0 || n_points < 201) {
        throw InvalidArgument("discretize_partner_operator: n_points must be odd and >= 201");
    }
    if (!(xi_max > 0.0)) throw InvalidArgument("discretize_partner_operator: xi_max must be > 0");

    GridOperator op;
    op.kind = GridKind::chiral_partner;
    op.xi_min = -xi_max;
    op.xi_max = xi_max;
    op.n_points = n_points;
    op.spacing = 2.0 * xi_max / (n_points - 1);
    if (std::exp(-xi_max * xi_max / (2.0 * g)) > 1e-10) {
        op.warnings.push_back("xi_max is small compared with sqrt(g)");
    }
    const Eigen::VectorXd xi = op.sites();
    const double g_over_h = g / op.spacing;
    op.lower_band = Eigen::MatrixXd::Zero(2, 2 * n_points - 1);
    for (int j = 0; j + 1 < n_points; ++j) {
        const double mid = 0.5 * (xi(j) + xi(j + 1));
        // Row of C^T = -g d/dxi - xi at the midpoint.
        op.lower_band(1, 2 * j) = g_over_h - 0.5 * mid;
        op.lower_band(1, 2 * j + 1) = -g_over_h - 0.5 * mid;
    }
    return op;
}

int parity_sign(const PolyGaussianSpinor& state) {
    const CoeffSpinor psi = state.coeffs();
    const CoeffSpinor p = parity_sigma_x(psi);
    const double scale = max_abs_coeff(psi);
    if (max_abs_coeff(axpy_difference(p, 1.0, psi)) <= 1e-10 * scale) return 1;
    if (max_abs_coeff(axpy_difference(p, -1.0, psi)) <= 1e-10 * scale) return -1;
    return 0;
}

PolyGaussianSpinor partner_state(const LinearModel& model, const PolyGaussianSpinor& at_minus_lambda) {
    const LinearModel flipped = model.flipped();
    const double residual = coefficient_residual(flipped, at_minus_lambda);
    if (residual > 1e-9) {
        throw InvalidArgument("partner_state: input is not an eigenstate of the lambda -> -lambda model (residual " +
                              std::to_string(residual) + ")");
    }
    const CoeffSpinor psi = at_minus_lambda.coeffs();
    const CoeffSpinor reflected = reflect_xi(psi);
    const double scale = max_abs_coeff(psi);
    if (max_abs_coeff(axpy_difference(reflected, 1.0, psi)) <= 1e-12 * scale ||
        max_abs_coeff(axpy_difference(reflected, -1.0, psi)) <= 1e-12 * scale) {
        throw MissingPartner("partner_state: Pi_xi maps the state onto itself (level " +
                             std::to_string(at_minus_lambda.level) + "), no new partner");
    }
    PolyGaussianSpinor out = at_minus_lambda;
    out.coeffs_a = reflected.psi1;
    out.coeffs_b = reflected.psi2;
    out.energy = -at_minus_lambda.energy;
    out.sign = opposite(at_minus_lambda.sign);
    canonicalize_sign(out);
    return out;
}

std::vector<OdeResidual> ode_residual(const LinearModel& model, double energy,
                                      const PolyGaussianSpinor& state,
                                      const std::vector<double>& xi_points) {
    model.require_gaussian();
    if (std::abs(model.g - state.g) > 1e-14 * model.g) throw GaussianMismatch("ode_residual: g mismatch");
    constexpr double margin = 1e-3;
    for (double xi : xi_points) {
        if (std::abs(xi - energy) < margin || std::abs(xi + energy) < margin) {
            throw SingularPoint("ode_residual: xi = " + std::to_string(xi) +
                                " within 1e-3 of a singular point +-" + std::to_string(energy));
        }
    }
    const double g = model.g;
    const double lam = model.lambda;
    const auto derivs = [](const Eigen::VectorXd& p) {
        const Eigen::VectorXd d1 = poly::derivative(p);
        return std::pair{d1, Eigen::VectorXd(poly::derivative(d1))};
    };
    const auto [a1, a2] = derivs(state.coeffs_a);
    const auto [b1, b2] = derivs(state.coeffs_b);

    std::vector<OdeResidual> out;
    out.reserve(xi_points.size());
    for (double xi : xi_points) {
        const double e = std::exp(-xi * xi / (2.0 * g));
        const auto values = [&](const Eigen::VectorXd& p, const Eigen::VectorXd& p1, const Eigen::VectorXd& p2) {
            const double v = poly::evaluate(p, xi);
            const double v1 = poly::evaluate(p1, xi);
            const double v2 = poly::evaluate(p2, xi);
            const double f = v * e;
            const double f1 = (v1 - xi * v / g) * e;
            const double f2 = (v2 - 2.0 * xi * v1 / g - v / g + xi * xi * v / (g * g)) * e;
            return std::array<double, 3>{f, f1, f2};
        };
        const auto [u, u1, u2] = values(state.coeffs_a, a1, a2);
        const auto [w, w1, w2] = values(state.coeffs_b, b1, b2);
        const double pot = (energy * energy - xi * xi - lam * lam) / (g * g);
        const double r1 = u2 + u1 / (energy - xi) + (pot + lam / (g * (energy - xi))) * u;
        const double r2 = w2 - w1 / (energy + xi) + (pot + lam / (g * (energy + xi))) * w;
        out.push_back({xi, std::abs(r1), std::abs(r2)});
    }
    return out;
}

double commutator_residual_p(const LinearModel& model, const CoeffSpinor& psi) {
    const CoeffSpinor hp = apply_linear_hamiltonian(model.lambda, model.g, parity_sigma_x(psi));
    const CoeffSpinor ph = parity_sigma_x(apply_linear_hamiltonian(model.lambda, model.g, psi));
    return relative_max(axpy_difference(hp, 1.0, ph), psi);
}

double anticommutator_residual_v(const LinearModel& model, const CoeffSpinor& psi) {
    const CoeffSpinor hv = apply_linear_hamiltonian(model.lambda, model.g, apply_partner_real(model.g, psi));
    const CoeffSpinor vh = apply_partner_real(model.g, apply_linear_hamiltonian(model.lambda, model.g, psi));
    return relative_max(sum(hv, vh), psi);
}

double sigma_x_chirality_residual(double g, const CoeffSpinor& psi) {
    const auto swap = [](const CoeffSpinor& s) { return CoeffSpinor{s.psi2, s.psi1}; };
    const CoeffSpinor conj = swap(apply_partner_real(g, swap(psi)));
    return relative_max(sum(conj, apply_partner_real(g, psi)), psi);
}

std::vector<CoeffSpinor> random_spinors(int count, int max_degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> degree(0, max_degree);
    std::vector<CoeffSpinor> out;
    for (int i = 0; i < count; ++i) {
        const int d1 = degree(rng);
        const int d2 = degree(rng);
        CoeffSpinor s{Eigen::VectorXd(d1 + 1), Eigen::VectorXd(d2 + 1)};
        for (auto& c : s.psi1) c = coeff(rng);
        for (auto& c : s.psi2) c = coeff(rng);
        out.push_back(std::move(s));
    }
    return out;
}

SymmetryReport symmetry_report(const LinearModel& model, int n_max, int random_count, std::uint64_t seed) {
    model.require_gaussian();
    SymmetryReport report;
    for (const CoeffSpinor& psi : random_spinors(random_count, 6, seed)) {
        report.commutator_residual_P = std::max(report.commutator_residual_P, commutator_residual_p(model, psi));
        report.anticommutator_residual_V =
            std::max(report.anticommutator_residual_V, anticommutator_residual_v(model, psi));
        report.sigma_x_chirality_residual =
            std::max(report.sigma_x_chirality_residual, sigma_x_chirality_residual(model.g, psi));
    }
    for (const Level& level : analytic_spectrum(model, n_max)) {
        report.parity_signs.push_back(parity_sign(build_eigenstate(model, level.n, level.sign)));
    }
    const LinearModel flipped = model.flipped();
    for (int n = 1; n <= n_max; ++n) {
        for (Branch b : {Branch::negative, Branch::positive}) {
            const PolyGaussianSpinor source = build_eigenstate(flipped, n, b);
            const PolyGaussianSpinor partner = partner_state(model, source);
            report.partner_energy_checks.push_back(
                {n, source.energy, partner.energy, coefficient_residual(model, partner)});
        }
    }
    return report;
}

}  // namespace ipl
