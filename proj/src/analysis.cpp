#include "ipl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "ipl/continuum.hpp"
#include "ipl/errors.hpp"

namespace ipl {

double participation_ratio(const Eigen::VectorXd& amplitudes) {
    if (amplitudes.size() == 0) throw InvalidArgument("participation_ratio: empty vector");
    const Eigen::ArrayXd w = amplitudes.array().square();
    const double total = w.sum();
    if (!(total > 0.0)) throw InvalidArgument("participation_ratio: zero vector");
    return (w / total).square().sum();
}

Eigen::VectorXd cell_probabilities(const Eigen::VectorXd& vector) {
    if (vector.size() == 0 || vector.size() % 2 != 0) {
        throw DimensionMismatch("cell_probabilities: need an even, non-zero length");
    }
    const Eigen::Index n = vector.size() / 2;
    Eigen::VectorXd p(n);
    for (Eigen::Index m = 0; m < n; ++m) p(m) = vector(2 * m) * vector(2 * m) + vector(2 * m + 1) * vector(2 * m + 1);
    const double total = p.sum();
    if (!(total > 0.0)) throw InvalidArgument("cell_probabilities: zero vector");
    return p / total;
}

double cell_participation_ratio(const Eigen::VectorXd& vector) {
    return cell_probabilities(vector).squaredNorm();
}

double gaussian_width(const Eigen::VectorXd& positions, const Eigen::VectorXd& probabilities) {
    if (positions.size() != probabilities.size()) throw DimensionMismatch("gaussian_width: size mismatch");
    if (positions.size() < 3) throw InvalidArgument("gaussian_width: need at least 3 points");
    if ((probabilities.array() < 0.0).any()) throw InvalidArgument("gaussian_width: negative probability");
    const double total = probabilities.sum();
    if (!(total > 0.0)) throw InvalidArgument("gaussian_width: probabilities sum to zero");
    const Eigen::ArrayXd p = probabilities.array() / total;
    const double mean = (p * positions.array()).sum();
    const double var = (p * (positions.array() - mean).square()).sum();
    return 2.0 * std::sqrt(std::max(var, 0.0));
}

const char* to_string(StateClass c) { return c == StateClass::localized ? "localized" : "extended"; }

namespace {

struct ScanSlice {
    std::vector<StateRecord> records;
    double localized_fraction = 0.0;
};

ScanSlice scan_one(const LatticeSpec& spec, double threshold) {
    const EigenSystem sys = diagonalize(build_reduced_hamiltonian(spec));
    const Eigen::VectorXd cells = Eigen::VectorXd::LinSpaced(spec.n_cells, 1.0, spec.n_cells);
    ScanSlice slice;
    int localized = 0;
    for (Eigen::Index i = 0; i < sys.eigenvalues.size(); ++i) {
        const Eigen::VectorXd p = cell_probabilities(sys.eigenvectors.col(i));
        StateRecord r;
        r.epsilon = spec.reduced_coupling();
        r.index = static_cast<int>(i);
        r.energy = sys.eigenvalues(i);
        r.ipr = p.squaredNorm();
        r.width_cells = spec.lattice_constant * gaussian_width(cells, p);
        Eigen::Index arg = 0;
        p.maxCoeff(&arg);
        r.center_cell = static_cast<int>(arg) + 1;
        r.classification = r.ipr > threshold ? StateClass::localized : StateClass::extended;
        localized += r.classification == StateClass::localized;
        slice.records.push_back(r);
    }
    slice.localized_fraction = static_cast<double>(localized) / static_cast<double>(sys.eigenvalues.size());
    return slice;
}

}  // namespace

LocalizationReport localization_scan(int n_cells, const std::vector<double>& epsilons,
                                     const AngleProfile& profile, const ScanOptions& options) {
    if (epsilons.empty()) throw InvalidArgument("localization_scan: epsilon list is empty");
    if (n_cells < 3) throw InvalidArgument("localization_scan: need at least 3 cells");
    if (static_cast<int>(profile.size()) != n_cells) {
        throw DimensionMismatch("localization_scan: profile has " + std::to_string(profile.size()) +
                                " angles for " + std::to_string(n_cells) + " cells");
    }
    if (!(options.threshold_factor > 0.0)) throw InvalidArgument("localization_scan: threshold factor must be > 0");

    std::vector<LatticeSpec> specs;
    for (double eps : epsilons) {
        if (!std::isfinite(eps) || eps < 0.0) throw InvalidArgument("localization_scan: epsilon must be finite and >= 0");
        LatticeSpec spec{n_cells, 1.0, -1.0, eps, options.lattice_constant, profile};
        spec.validate();
        specs.push_back(std::move(spec));
    }

    LocalizationReport report;
    report.n_cells = n_cells;
    report.epsilons = epsilons;
    report.threshold = options.threshold_factor / n_cells;
    const double dphi = (profile.values.back() - profile.values.front()) / (n_cells - 1);

    std::vector<ScanSlice> slices(specs.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(
        specs.size(), options.threads > 0 ? static_cast<std::size_t>(options.threads) : hw);
    if (workers <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) slices[i] = scan_one(specs[i], report.threshold);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < specs.size(); i += workers) {
                        slices[i] = scan_one(specs[i], report.threshold);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    for (std::size_t i = 0; i < slices.size(); ++i) {
        report.angle_steps.push_back(dphi);
        report.localized_fraction.push_back(slices[i].localized_fraction);
        report.predicted_length_cells.push_back(localization_length_cells(epsilons[i], dphi));
        report.records.insert(report.records.end(), slices[i].records.begin(), slices[i].records.end());
    }
    return report;
}

ComparisonReport compare_discrete_continuum(int n_cells, double epsilon, double lattice_constant) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("compare_discrete_continuum: epsilon must be > 0");
    if (!(lattice_constant > 0.0)) throw InvalidArgument("compare_discrete_continuum: a must be > 0");
    LatticeSpec spec = LatticeSpec::equidistant(n_cells, epsilon);
    spec.lattice_constant = lattice_constant;
    spec.validate();

    ComparisonReport rep;
    rep.n_cells = n_cells;
    rep.epsilon = epsilon;
    rep.angle_step = spec.angle_step();
    rep.half_span = std::numbers::pi * lattice_constant / (4.0 * rep.angle_step);
    rep.g = derive_params(epsilon, lattice_constant, rep.half_span).g;

    const EigenSystem sys = diagonalize(build_reduced_hamiltonian(spec));
    const Eigen::VectorXd discrete = cell_probabilities(sys.eigenvectors.col(0));

    const double center = 0.5 * (n_cells + 1);
    Eigen::VectorXd x(n_cells), continuum(n_cells);
    for (int m = 1; m <= n_cells; ++m) {
        x(m - 1) = lattice_constant * (m - center);
        const double xi = std::numbers::pi * x(m - 1) / (2.0 * rep.half_span);
        continuum(m - 1) = std::exp(-xi * xi / rep.g);
    }
    continuum /= continuum.sum();

    for (int m = 0; m < n_cells; ++m) rep.rows.push_back({m + 1, x(m), discrete(m), continuum(m)});
    rep.rms_deviation = std::sqrt((discrete - continuum).squaredNorm() / n_cells);
    rep.discrete_width = gaussian_width(x, discrete) / lattice_constant;
    rep.continuum_width = gaussian_width(x, continuum) / lattice_constant;
    rep.predicted_width = localization_length_cells(epsilon, rep.angle_step);
    rep.width_ratio = rep.discrete_width / rep.predicted_width;
    return rep;
}

}  // namespace ipl
