#include "ipl/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ipl/errors.hpp"

namespace ipl {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kTerminationTolerance = 1e-10;

Branch ground_branch(const LinearModel& m) { return m.lambda >= 0.0 ? Branch::positive : Branch::negative; }

void require_level(int n) {
    if (n < 0) throw InvalidArgument("level index must be >= 0, got " + std::to_string(n));
}

void require_same_g(double model_g, double state_g) {
    if (std::abs(model_g - state_g) > 1e-14 * std::max(std::abs(model_g), std::abs(state_g))) {
        throw GaussianMismatch("Gaussian width mismatch: model g = " + std::to_string(model_g) +
                               ", state g = " + std::to_string(state_g));
    }
}

}  // namespace

double LinearModel::energy(int n, Branch sign) const {
    require_level(n);
    const double mag = std::sqrt(lambda * lambda + 2.0 * g * n);
    return sign == Branch::positive ? mag : -mag;
}

void LinearModel::require_gaussian() const {
    if (!std::isfinite(lambda) || !std::isfinite(g)) throw InvalidParams("non-finite lambda or g");
    if (g <= 0.0) {
        throw InvalidParams("g must be > 0 for normalizable Gaussian states, got " + std::to_string(g));
    }
}

ContinuumParams derive_params(double epsilon, double cell_length, double half_span) {
    if (!std::isfinite(epsilon) || epsilon < 0.0) throw InvalidArgument("epsilon must be finite and >= 0");
    if (!std::isfinite(cell_length) || cell_length <= 0.0)
        throw InvalidArgument("cell_length must be finite and > 0");
    if (std::isnan(half_span) || half_span <= 0.0) throw InvalidArgument("half_span must be > 0");
    ContinuumParams p;
    p.epsilon = epsilon;
    p.cell_length = cell_length;
    p.half_span = half_span;
    p.lambda = 1.0 + epsilon;
    p.g = std::isinf(half_span) ? 0.0 : pi * epsilon * cell_length / (2.0 * half_span);
    return p;
}

std::vector<Level> analytic_spectrum(const LinearModel& model, int n_max) {
    model.require_gaussian();
    require_level(n_max);
    std::vector<Level> out;
    out.reserve(static_cast<std::size_t>(2 * n_max + 1));
    out.push_back({0, ground_branch(model), model.lambda});
    for (int n = 1; n <= n_max; ++n) {
        out.push_back({n, Branch::negative, model.energy(n, Branch::negative)});
        out.push_back({n, Branch::positive, model.energy(n, Branch::positive)});
    }
    return out;
}

std::vector<Level> analytic_spectrum(const ContinuumParams& params, int n_max) {
    if (params.degenerate()) return static_limit_spectrum(params.epsilon);
    return analytic_spectrum(params.model(), n_max);
}

std::vector<Level> static_limit_spectrum(double epsilon) {
    const double e = 1.0 + epsilon;
    return {{0, Branch::negative, -e}, {0, Branch::positive, e}};
}

std::vector<Level> sorted_by_energy(std::vector<Level> levels) {
    std::stable_sort(levels.begin(), levels.end(),
                     [](const Level& a, const Level& b) { return a.energy < b.energy; });
    return levels;
}

double PolyGaussianSpinor::norm_squared() const { return spinor_inner(coeffs(), coeffs(), g); }

Eigen::Vector2d PolyGaussianSpinor::evaluate(double xi) const {
    const double envelope = std::exp(-xi * xi / (2.0 * g));
    return {poly::evaluate(coeffs_a, xi) * envelope, poly::evaluate(coeffs_b, xi) * envelope};
}

PolyGaussianSpinor normalized(PolyGaussianSpinor state, NormConvention convention) {
    const double n2 = state.norm_squared();
    if (!(n2 > 0.0)) throw ConsistencyError("cannot normalize a null state");
    const double target = convention == NormConvention::unit_total ? 1.0 : 2.0;
    const double scale = std::sqrt(target / n2);
    state.coeffs_a *= scale;
    state.coeffs_b *= scale;
    state.norm_convention = convention;
    return state;
}

void canonicalize_sign(PolyGaussianSpinor& state) {
    const Eigen::Index top = state.coeffs_a.size() - 1;
    const double lead = top >= 0 ? state.coeffs_a(top) : 0.0;
    if (lead < 0.0) {
        state.coeffs_a = -state.coeffs_a;
        state.coeffs_b = -state.coeffs_b;
    }
}

RecurrenceState RecurrenceRun::state(int k) const {
    if (k < 0 || k >= last_index()) throw InvalidArgument("RecurrenceRun::state: k out of range");
    RecurrenceState s;
    s.k = k;
    s.s_vector << a(k + 1), b(k + 1), a(k), b(k);
    return s;
}

Eigen::Matrix4d recurrence_matrix(const LinearModel& model, double energy, int k, double c) {
    require_level(k);
    const double h = model.g * (k + 1);
    const double gc = c / (k + 1);
    Eigen::Matrix4d m;
    m << -model.lambda / h, energy / h, gc, -1.0 / h,
         -energy / h, model.lambda / h, -1.0 / h, gc,
         1.0, 0.0, 0.0, 0.0,
         0.0, 1.0, 0.0, 0.0;
    return m;
}

RecurrenceRun run_recurrence(const LinearModel& model, double energy, double a0, double b0,
                             int k_last) {
    model.require_gaussian();
    require_level(k_last);
    RecurrenceRun run;
    run.energy = energy;
    run.a = Eigen::VectorXd::Zero(k_last + 1);
    run.b = Eigen::VectorXd::Zero(k_last + 1);
    run.a(0) = a0;
    run.b(0) = b0;
    double a_prev = 0.0;
    double b_prev = 0.0;
    for (int k = 0; k < k_last; ++k) {
        const double h = model.g * (k + 1);
        run.a(k + 1) = (a_prev - b_prev - model.lambda * run.a(k) + energy * run.b(k)) / h;
        run.b(k + 1) = (b_prev - a_prev + model.lambda * run.b(k) - energy * run.a(k)) / h;
        a_prev = run.a(k);
        b_prev = run.b(k);
    }
    return run;
}

Eigen::Vector2d level_seed(const LinearModel& model, double energy, int n) {
    require_level(n);
    const RecurrenceRun from_a = run_recurrence(model, energy, 1.0, 0.0, n + 1);
    const RecurrenceRun from_b = run_recurrence(model, energy, 0.0, 1.0, n + 1);
    Eigen::Matrix2d transfer;
    transfer << from_a.a(n + 1), from_b.a(n + 1),
                from_a.b(n + 1), from_b.b(n + 1);
    const Eigen::JacobiSVD<Eigen::Matrix2d> svd(transfer, Eigen::ComputeFullV);
    const Eigen::Vector2d sigma = svd.singularValues();
    if (sigma(0) == 0.0 || sigma(1) > 1e-7 * sigma(0)) {
        throw ConsistencyError("level_seed: energy " + std::to_string(energy) +
                               " does not terminate the series at degree " + std::to_string(n));
    }
    Eigen::Vector2d seed = svd.matrixV().col(1);
    if (seed(0) < 0.0 || (seed(0) == 0.0 && seed(1) < 0.0)) seed = -seed;
    return seed;
}

RecurrenceRun level_recurrence(const LinearModel& model, int n, Branch sign) {
    model.require_gaussian();
    const double energy = model.energy(n, sign);
    const Eigen::Vector2d seed = level_seed(model, energy, n);
    return run_recurrence(model, energy, seed(0), seed(1), n + 1);
}

PolyGaussianSpinor build_eigenstate(const LinearModel& model, int n, Branch sign,
                                    NormConvention convention) {
    const RecurrenceRun run = level_recurrence(model, n, sign);
    const double lead = std::max(std::abs(run.a(n)), std::abs(run.b(n)));
    const double mismatch = std::abs(run.a(n) - run.b(n));
    if (!(lead > 0.0) || mismatch > kTerminationTolerance * lead) {
        if (n == 0) {
            throw MissingState("no normalizable state at energy " + std::to_string(run.energy) +
                               " (n = 0, branch " + branch_symbol(sign) + ")");
        }
        throw ConsistencyError("leading coefficients differ at level " + std::to_string(n));
    }
    const double tail = std::max(std::abs(run.a(n + 1)), std::abs(run.b(n + 1)));
    if (tail > kTerminationTolerance * lead) {
        throw ConsistencyError("series does not terminate at level " + std::to_string(n) +
                               ": tail/lead = " + std::to_string(tail / lead));
    }

    PolyGaussianSpinor state;
    state.g = model.g;
    state.coeffs_a = run.a.head(n + 1);
    state.coeffs_b = run.b.head(n + 1);
    state.energy = run.energy;
    state.level = n;
    state.sign = sign;
    canonicalize_sign(state);
    return normalized(std::move(state), convention);
}

namespace {

// Explicit negative-branch forms for n = 1, 2, per-component amplitudes.
PolyGaussianSpinor closed_form_negative(const LinearModel& model, int n) {
    const double lam = model.lambda;
    const double g = model.g;
    const double root = std::sqrt(lam * lam + 2.0 * g * n);
    const double offset = 0.5 * (root + lam);
    PolyGaussianSpinor s;
    s.g = g;
    s.level = n;
    s.sign = Branch::negative;
    s.energy = -root;
    s.norm_convention = NormConvention::per_component;
    if (n == 1) {
        const double amp = std::sqrt(2.0 / (std::sqrt(pi * g) * root * (root + lam)));
        s.coeffs_a = amp * Eigen::Vector2d(offset, 1.0);
        s.coeffs_b = amp * Eigen::Vector2d(-offset, 1.0);
    } else {
        const double amp = std::sqrt(4.0 / (g * std::sqrt(g * pi) * root * (root + lam)));
        s.coeffs_a = amp * Eigen::Vector3d(-g / 2.0, offset, 1.0);
        s.coeffs_b = amp * Eigen::Vector3d(-g / 2.0, -offset, 1.0);
    }
    return s;
}

}  // namespace

PolyGaussianSpinor closed_form_state(const LinearModel& model, int n, Branch sign,
                                     NormConvention convention) {
    model.require_gaussian();
    require_level(n);
    if (n > 2) throw Unsupported("closed forms exist for n <= 2; use build_eigenstate");

    PolyGaussianSpinor s;
    if (n == 0) {
        if (sign != ground_branch(model)) {
            throw MissingState("the n = 0 level has a single state at energy lambda");
        }
        const double amp = std::pow(1.0 / (pi * model.g), 0.25);
        s.g = model.g;
        s.coeffs_a = Eigen::VectorXd::Constant(1, amp);
        s.coeffs_b = Eigen::VectorXd::Constant(1, amp);
        s.energy = model.lambda;
        s.level = 0;
        s.sign = sign;
        s.norm_convention = NormConvention::per_component;
    } else if (sign == Branch::negative) {
        s = closed_form_negative(model, n);
    } else {
        // Pi_xi applied to the negative state of the lambda -> -lambda model.
        const PolyGaussianSpinor partner = closed_form_negative(model.flipped(), n);
        const CoeffSpinor reflected = reflect_xi(partner.coeffs());
        s = partner;
        s.coeffs_a = reflected.psi1;
        s.coeffs_b = reflected.psi2;
        s.energy = -partner.energy;
        s.sign = Branch::positive;
        canonicalize_sign(s);
    }
    return normalized(std::move(s), convention);
}

CoeffSpinor apply_h_coeff(const LinearModel& model, const PolyGaussianSpinor& state) {
    require_same_g(model.g, state.g);
    return apply_linear_hamiltonian(model.lambda, model.g, state.coeffs());
}

double coefficient_residual(const LinearModel& model, const PolyGaussianSpinor& state) {
    const CoeffSpinor diff = axpy_difference(apply_h_coeff(model, state), state.energy, state.coeffs());
    return max_abs_coeff(diff) / max_abs_coeff(state.coeffs());
}

namespace {

RecurrenceEigenvalues from_mu_squared(double u0, double u1) {
    if (std::abs(u1) < std::abs(u0)) std::swap(u0, u1);
    RecurrenceEigenvalues out;
    out.mu_squared = {u0, u1};
    for (int i = 0; i < 2; ++i) {
        const double r = std::sqrt(std::abs(out.mu_squared[i]));
        out.values[2 * i] = r;
        out.values[2 * i + 1] = -r;
        out.imaginary[i] = out.mu_squared[i] < 0.0;
    }
    return out;
}

}  // namespace

RecurrenceEigenvalues recurrence_matrix_eigs(const LinearModel& model, double energy, int k,
                                             double c) {
    require_level(k);
    // det(mu^2 I - mu A - B) = u^2 - s u + p with u = mu^2.
    const double h = model.g * (k + 1);
    const double gc = c / (k + 1);
    const double s = 2.0 * gc + (model.lambda * model.lambda - energy * energy) / (h * h);
    const double p = gc * gc - 1.0 / (h * h);
    const double disc = s * s - 4.0 * p;
    if (disc < 0.0) {
        // Complex mu^2: report real parts, all four values flagged.
        RecurrenceEigenvalues out = from_mu_squared(0.5 * s, 0.5 * s);
        out.imaginary = {true, true};
        return out;
    }
    const double big = 0.5 * (s + std::copysign(std::sqrt(disc), s));
    const double small = big != 0.0 ? p / big : 0.0;
    return from_mu_squared(small, big);
}

RecurrenceEigenvalues recurrence_matrix_eigs(const LinearModel& model, double energy, int k) {
    model.require_gaussian();
    require_level(k);
    const double h = model.g * (k + 1);
    const double u = (model.lambda * model.lambda + 2.0 * h - energy * energy) / (h * h);
    return from_mu_squared(0.0, u);
}

double localization_length(double epsilon, double cell_length, double half_span) {
    if (!(epsilon >= 0.0) || !(cell_length > 0.0) || !(half_span > 0.0)) {
        throw InvalidArgument("localization_length: need epsilon >= 0, a > 0, L > 0");
    }
    return std::sqrt(4.0 * half_span * epsilon * cell_length / pi);
}

double localization_length_cells(double epsilon, double angle_step) {
    if (!(epsilon >= 0.0) || !(angle_step > 0.0)) {
        throw InvalidArgument("localization_length_cells: need epsilon >= 0, angle_step > 0");
    }
    return std::sqrt(epsilon / angle_step);
}

}  // namespace ipl
