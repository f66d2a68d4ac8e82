#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ipl/lattice.hpp"

namespace ipl {

/// Sum of p_i^2 with p_i = |psi_i|^2 / sum |psi_j|^2. Throws InvalidArgument
/// for an empty or zero vector.
double participation_ratio(const Eigen::VectorXd& amplitudes);

/// Per-cell probabilities of a lattice vector (components 2m and 2m+1
/// summed), normalized to 1.
Eigen::VectorXd cell_probabilities(const Eigen::VectorXd& vector);

/// Participation ratio of the per-cell probabilities.
double cell_participation_ratio(const Eigen::VectorXd& vector);

/// l = 2 sigma from the second central moment, so a density proportional to
/// exp(-2 x^2 / l^2) returns l. Needs at least 3 points and non-negative
/// weights with a positive sum.
double gaussian_width(const Eigen::VectorXd& positions, const Eigen::VectorXd& probabilities);

enum class StateClass { localized, extended };

const char* to_string(StateClass c);

struct StateRecord {
    double epsilon = 0.0;
    int index = 0;  ///< position in the ascending spectrum
    double energy = 0.0;
    double ipr = 0.0;          ///< cell-level
    double width_cells = 0.0;  ///< 2 sigma in units of a
    int center_cell = 0;       ///< 1-based cell of maximum probability
    StateClass classification = StateClass::extended;
};

struct LocalizationReport {
    int n_cells = 0;
    std::vector<double> epsilons;
    std::vector<double> angle_steps;  ///< one per epsilon, mean step of the profile
    double threshold = 0.0;           ///< localized if ipr > threshold
    std::vector<StateRecord> records;  ///< 2N per epsilon, input order
    std::vector<double> localized_fraction;
    std::vector<double> predicted_length_cells;  ///< sqrt(eps / dphi)
};

struct ScanOptions {
    double threshold_factor = 4.0;  ///< threshold = factor / N
    int threads = 0;                ///< 0: hardware concurrency
    double lattice_constant = 1.0;
};

/// For each reduced coupling epsilon: builds the reduced lattice with
/// d1 = 1, d2 = -1, diagonalizes and classifies every state. Per-epsilon runs
/// may execute in parallel; results always follow the input order.
LocalizationReport localization_scan(int n_cells, const std::vector<double>& epsilons,
                                     const AngleProfile& profile, const ScanOptions& options = {});

struct ComparisonRow {
    int cell = 0;  ///< 1-based
    double x = 0.0;
    double discrete_prob = 0.0;
    double continuum_prob = 0.0;
};

struct ComparisonReport {
    int n_cells = 0;
    double epsilon = 0.0;
    double half_span = 0.0;  ///< L = pi a / (4 dphi)
    double angle_step = 0.0;
    double g = 0.0;
    std::vector<ComparisonRow> rows;
    double rms_deviation = 0.0;
    double discrete_width = 0.0;   ///< cells
    double continuum_width = 0.0;  ///< cells, from the sampled exp(-xi^2/g)
    double predicted_width = 0.0;  ///< a sqrt(eps / dphi)
    double width_ratio = 0.0;      ///< discrete / predicted
};

/// Ground state of the equidistant reduced lattice against the continuum
/// ground-state density exp(-xi^2/g), both sampled at x_m = a (m - (N+1)/2).
ComparisonReport compare_discrete_continuum(int n_cells, double epsilon, double lattice_constant = 1.0);

}  // namespace ipl
