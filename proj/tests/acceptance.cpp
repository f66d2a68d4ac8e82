// Acceptance checks: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ipl/analysis.hpp"
#include "ipl/continuum.hpp"
#include "ipl/errors.hpp"
#include "ipl/grid.hpp"
#include "ipl/lattice.hpp"
#include "ipl/symmetry.hpp"

using namespace ipl;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

const LinearModel fig_model{1.5, 0.05};

void spectrum_vs_grid(const Eigen::VectorXd& eigs, double seconds) {
    const std::vector<Level> levels = sorted_by_energy(analytic_spectrum(fig_model, 5));
    const Eigen::VectorXd low = smallest_magnitude(eigs, 11);
    double worst = 0.0;
    for (int i = 0; i < 11; ++i) worst = std::max(worst, std::abs(low(i) - levels[i].energy) / std::abs(levels[i].energy));
    report(1, worst <= 1e-4 && seconds <= 60.0,
           "max relative error " + num(worst) + " (tol 1e-4), " + num(seconds) + " s");
}

void missing_state(const Eigen::VectorXd& eigs) {
    int plus = 0, minus = 0;
    for (double e : eigs) {
        plus += std::abs(e - 1.5) <= 1e-4;
        minus += std::abs(e + 1.5) <= 0.01;
    }
    report(2, plus == 1 && minus == 0,
           "levels within 1e-4 of +1.5: " + std::to_string(plus) + ", within 0.01 of -1.5: " + std::to_string(minus));
}

void recurrence_vs_closed_form() {
    double diff = 0.0, termination = 0.0;
    for (NormConvention conv : {NormConvention::per_component, NormConvention::unit_total}) {
        for (int n = 1; n <= 2; ++n) {
            const PolyGaussianSpinor a = build_eigenstate(fig_model, n, Branch::negative, conv);
            const PolyGaussianSpinor b = closed_form_state(fig_model, n, Branch::negative, conv);
            diff = std::max(diff, max_abs_coeff(axpy_difference(a.coeffs(), 1.0, b.coeffs())));
        }
    }
    for (int n = 1; n <= 2; ++n) {
        const RecurrenceRun run = level_recurrence(fig_model, n, Branch::negative);
        const double lead = std::abs(run.a(n));
        termination = std::max({termination, std::abs(run.a(n + 1)) / lead, std::abs(run.b(n + 1)) / lead,
                                std::abs(run.a(n) - run.b(n)) / lead});
    }
    report(3, diff <= 1e-12 && termination <= 1e-10,
           "coefficient difference " + num(diff) + " (tol 1e-12), termination " + num(termination) + " (tol 1e-10)");
}

void exact_residual() {
    double worst = 0.0;
    for (double lam : {1.1, 1.5, 3.0}) {
        for (double g : {0.01, 0.05, 0.5}) {
            const LinearModel m{lam, g};
            for (const Level& l : analytic_spectrum(m, 10)) {
                worst = std::max(worst, coefficient_residual(m, build_eigenstate(m, l.n, l.sign)));
            }
        }
    }
    report(4, worst <= 1e-11, "max coefficient residual " + num(worst) + " (tol 1e-11)");
}

void symmetry_identities() {
    double comm = 0.0, anti = 0.0;
    for (const CoeffSpinor& psi : random_spinors(20, 6, 7)) {
        comm = std::max(comm, commutator_residual_p(fig_model, psi));
        anti = std::max(anti, anticommutator_residual_v(fig_model, psi));
    }
    const double g = fig_model.g;
    const GridOperator v = discretize_partner_operator(g, 10.0 * std::sqrt(g), 4001);
    const std::vector<double> expected = v_spectrum(g, 8);
    const Eigen::VectorXd low = smallest_magnitude(v.eigenvalues(), static_cast<int>(expected.size()));
    double grid = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) grid = std::max(grid, std::abs(low(i) - expected[i]));
    report(5, comm <= 1e-12 && anti <= 1e-12 && grid <= 1e-3,
           "[H,P] " + num(comm) + ", {H,V} " + num(anti) + " (tol 1e-12), V grid " + num(grid) + " (tol 1e-3)");
}

void partner_map() {
    const LinearModel flipped = fig_model.flipped();
    double residual = 0.0, energy = 0.0;
    for (int n = 1; n <= 6; ++n) {
        for (Branch b : {Branch::negative, Branch::positive}) {
            const PolyGaussianSpinor src = build_eigenstate(flipped, n, b);
            const PolyGaussianSpinor dst = partner_state(fig_model, src);
            residual = std::max(residual, coefficient_residual(fig_model, dst));
            energy = std::max(energy, std::abs(dst.energy + src.energy));
        }
    }
    const PolyGaussianSpinor ground = build_eigenstate(flipped, 0, analytic_spectrum(flipped, 0)[0].sign);
    const double self = max_abs_coeff(axpy_difference(reflect_xi(ground.coeffs()), 1.0, ground.coeffs()));
    bool missing = false;
    try {
        partner_state(fig_model, ground);
    } catch (const MissingPartner&) {
        missing = true;
    }
    report(6, residual <= 1e-11 && energy <= 1e-12 && self == 0.0 && missing,
           "partner residual " + num(residual) + " (tol 1e-11), energy mismatch " + num(energy) +
               ", n=0 maps to itself: " + (self == 0.0 ? "yes" : "no"));
}

void appendix_odes() {
    std::vector<double> xs;
    for (int i = 0; i < 10; ++i) xs.push_back(-0.9 + 0.2 * i);
    double worst = 0.0, ground = 0.0;
    for (const Level& l : analytic_spectrum(fig_model, 4)) {
        const PolyGaussianSpinor s = build_eigenstate(fig_model, l.n, l.sign);
        for (const OdeResidual& r : ode_residual(fig_model, s.energy, s, xs)) {
            worst = std::max({worst, r.psi1, r.psi2});
            if (l.n == 0) ground = std::max({ground, r.psi1, r.psi2});
        }
    }
    report(7, worst <= 1e-9 && ground <= 1e-12,
           "max ODE residual " + num(worst) + " (tol 1e-9), ground state " + num(ground));
}

void localization_formula() {
    constexpr int n = 201;
    std::string detail;
    bool ok = true;
    const Eigen::VectorXd cells = Eigen::VectorXd::LinSpaced(n, 1.0, n);
    for (double eps : {0.2, 0.5, 1.0}) {
        const LatticeSpec spec = LatticeSpec::equidistant(n, eps);
        const EigenSystem sys = diagonalize(build_reduced_hamiltonian(spec));
        const double width = gaussian_width(cells, cell_probabilities(sys.eigenvectors.col(0)));
        const double ratio = width / localization_length_cells(eps, spec.angle_step());
        ok = ok && ratio >= 0.8 && ratio <= 1.25;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%seps=%.1f ratio %.3f", detail.empty() ? "" : ", ", eps, ratio);
        detail += buf;
    }
    report(8, ok, detail + " (window [0.8, 1.25])");
}

void degenerate_limit() {
    constexpr int n = 201;
    const EigenSystem sys = diagonalize(build_reduced_hamiltonian(LatticeSpec::equidistant(n, 0.0)));
    double dev = 0.0;
    for (int i = 0; i < 2 * n; ++i) dev = std::max(dev, std::abs(sys.eigenvalues(i) - (i < n ? -1.0 : 1.0)));
    const std::vector<Level> stat =
        analytic_spectrum(derive_params(0.5, 1.0, std::numeric_limits<double>::infinity()), 5);
    const bool static_ok = stat.size() == 2 && std::abs(std::min(stat[0].energy, stat[1].energy) + 1.5) == 0.0 &&
                           std::abs(std::max(stat[0].energy, stat[1].energy) - 1.5) == 0.0;
    report(9, dev <= 1e-12 && static_ok,
           "eps=0 deviation from +-1 " + num(dev) + " (tol 1e-12), a/L=0 levels +-(1+eps): " + (static_ok ? "yes" : "no"));
}

void nonlocal_convergence() {
    const double eps = 0.5;
    std::vector<std::vector<double>> errors;
    for (double L : {5.0 * std::numbers::pi, 10.0 * std::numbers::pi}) {
        const ContinuumParams p = derive_params(eps, 1.0, L);
        const GridOperator op = discretize_nonlocal(eps, 1.0, L, 10.0 * std::sqrt(p.g), 1);
        const Eigen::VectorXd eigs = op.eigenvalues();
        std::vector<double> e;
        for (const Level& l : analytic_spectrum(p, 2)) e.push_back((eigs.array() - l.energy).abs().minCoeff());
        errors.push_back(e);
    }
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < errors[0].size(); ++i) {
        ok = ok && errors[1][i] < errors[0][i];
        detail += (i ? ", " : "") + num(errors[0][i]) + " -> " + num(errors[1][i]);
    }
    report(10, ok, "nearest-level errors 5pi -> 10pi: " + detail);
}

void determinism() {
    const auto tmp = std::filesystem::temp_directory_path();
    const std::vector<std::vector<std::string>> runs = {
        {"ipl", "continuum-spectrum", "--epsilon", "0.5", "--a", "1", "--L", "15.70796", "--n-max", "5"},
        {"ipl", "discrete-spectrum", "--n-cells", "21", "--epsilon", "0.5"},
        {"ipl", "localization-scan", "--n-cells", "41", "--epsilons", "0,0.5,1,5", "--threads", "3"},
        {"ipl", "compare", "--n-cells", "51"},
        {"ipl", "symmetry-check", "--n-max", "4"},
    };
    bool ok = true;
    for (const auto& base : runs) {
        std::string outputs[2];
        for (int k = 0; k < 2; ++k) {
            auto args = base;
            const auto json = tmp / "ipl_acceptance.json";
            args.insert(args.end(), {"--json", json.string()});
            std::ostringstream out, err;
            const int code = cli::main_entry(args, out, err);
            std::ifstream f(json, std::ios::binary);
            std::stringstream ss;
            ss << f.rdbuf();
            outputs[k] = std::to_string(code) + out.str() + err.str() + ss.str();
            std::filesystem::remove(json);
            if (code != 0) ok = false;
        }
        ok = ok && outputs[0] == outputs[1];
    }
    report(11, ok, "repeated CLI runs byte-identical across " + std::to_string(runs.size()) + " commands");
}

template <typename F>
void guarded(int id, F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    Eigen::VectorXd grid_eigs;
    double seconds = 0.0;
    guarded(1, [&] {
        const auto t0 = std::chrono::steady_clock::now();
        grid_eigs = discretize_linear(fig_model).eigenvalues();
        seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        spectrum_vs_grid(grid_eigs, seconds);
    });
    guarded(2, [&] { missing_state(grid_eigs); });
    guarded(3, recurrence_vs_closed_form);
    guarded(4, exact_residual);
    guarded(5, symmetry_identities);
    guarded(6, partner_map);
    guarded(7, appendix_odes);
    guarded(8, localization_formula);
    guarded(9, degenerate_limit);
    guarded(10, nonlocal_convergence);
    guarded(11, determinism);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
