#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipl/analysis.hpp"
#include "ipl/continuum.hpp"
#include "ipl/errors.hpp"
#include "ipl/grid.hpp"
#include "ipl/lattice.hpp"
#include "ipl/symmetry.hpp"

namespace ipl::cli {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::string> commands = {"discrete-spectrum", "continuum-spectrum", "continuum-states",
                                           "symmetry-check",    "localization-scan",  "compare",
                                           "oracle-check"};

const std::vector<KeySpec>& key_specs() {
    static const std::vector<KeySpec> specs = {
        {"n_cells", ValueType::integer, "201", "number of lattice cells N"},
        {"d1", ValueType::real, "1", "first cell eigenvalue"},
        {"d2", ValueType::real, "-1", "second cell eigenvalue"},
        {"epsilon", ValueType::real, "0.5", "bare inter-cell coupling"},
        {"a", ValueType::real, "1", "cell length"},
        {"L", ValueType::real, "15.707963267948966", "half span of the angle profile"},
        {"lambda", ValueType::real, "", "override the derived lambda"},
        {"g", ValueType::real, "", "override the derived g"},
        {"n_max", ValueType::integer, "5", "highest continuum level"},
        {"level", ValueType::integer, "0", "level n for continuum-states"},
        {"sign", ValueType::text, "+", "branch for continuum-states: + or -"},
        {"norm", ValueType::text, "unit-total", "normalization: unit-total or per-component"},
        {"hamiltonian", ValueType::text, "reduced", "discrete Hamiltonian: reduced or full"},
        {"xi_max", ValueType::real, "", "grid half width (default 10 sqrt(g))"},
        {"n_points", ValueType::integer, "4001", "grid sites, odd"},
        {"samples", ValueType::integer, "401", "sample points for continuum-states"},
        {"epsilons", ValueType::real_list, "0.1,0.2,0.5,1,2,5", "comma separated couplings for the scan"},
        {"threshold_factor", ValueType::real, "4", "localized if cell IPR > factor / N"},
        {"threads", ValueType::integer, "0", "scan threads, 0 for all cores"},
        {"random_count", ValueType::integer, "20", "random spinors in symmetry-check"},
        {"seed", ValueType::integer, "20240611", "random seed"},
        {"tolerance", ValueType::real, "1e-11", "residual tolerance"},
        {"grid_tolerance", ValueType::real, "1e-4", "relative grid tolerance in oracle-check"},
        {"csv", ValueType::text, "", "CSV output path"},
        {"json", ValueType::text, "", "JSON output path"},
        {"svg", ValueType::text, "", "SVG plot path"},
    };
    return specs;
}

namespace {

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const KeySpec* find_key(const std::string& key) {
    for (const KeySpec& k : key_specs()) {
        if (key == k.key) return &k;
    }
    return nullptr;
}

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw InvalidArgument("config: '" + key + "' expects a number, got '" + text + "'");
    }
    if (!std::isfinite(v)) throw InvalidArgument("config: '" + key + "' must be finite");
    return v;
}

long parse_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw InvalidArgument("config: '" + key + "' expects an integer, got '" + text + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
    if (out.empty()) throw InvalidArgument("config: '" + key + "' is empty");
    return out;
}

std::string json_to_text(const std::string& key, const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_number(v.get<double>());
    if (v.is_array()) {
        std::string out;
        for (const auto& item : v) {
            if (!item.is_number()) throw InvalidArgument("config: '" + key + "' must be a list of numbers");
            if (!out.empty()) out += ',';
            out += format_number(item.get<double>());
        }
        return out;
    }
    throw InvalidArgument("config: unsupported value for '" + key + "'");
}

// ---------------------------------------------------------------- output

std::string format_fixed(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, r.ptr);
}

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_plot(const std::string& title, const std::vector<Series>& series) {
    constexpr double width = 640, height = 400, margin = 40;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const Series& s : series) {
        for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
        for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    o << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    o << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";
    o << "<rect x=\"40\" y=\"40\" width=\"560\" height=\"320\" fill=\"none\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Series& s = series[i];
        o << "<polyline fill=\"none\" stroke=\"" << colors[i % 4] << "\" points=\"";
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            const double px = margin + (s.x[j] - x0) / (x1 - x0) * (width - 2 * margin);
            const double py = height - margin - (s.y[j] - y0) / (y1 - y0) * (height - 2 * margin);
            o << (j ? " " : "") << format_fixed(px) << ',' << format_fixed(py);
        }
        o << "\"/>\n";
        o << "<text x=\"" << 50 << "\" y=\"" << 58 + 16 * i << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
          << colors[i % 4] << "\">" << s.name << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

struct Output {
    bool json_primary = false;
    std::string csv;
    ordered_json results = ordered_json::object();
    std::string summary;
    std::vector<Series> plot;
    std::string plot_title;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("failed writing '" + path + "'");
}

ordered_json config_json(const RunConfig& c) {
    ordered_json j = ordered_json::object();
    for (const KeySpec& k : key_specs()) {
        if (!c.has(k.key)) {
            j[k.key] = nullptr;
            continue;
        }
        switch (k.type) {
            case ValueType::integer: j[k.key] = c.integer(k.key); break;
            case ValueType::real: j[k.key] = c.real(k.key); break;
            case ValueType::text: j[k.key] = c.text(k.key); break;
            case ValueType::real_list: j[k.key] = c.real_list(k.key); break;
        }
    }
    return j;
}

std::string csv_line(std::initializer_list<std::string> fields) {
    std::string line;
    for (const std::string& f : fields) {
        if (!line.empty()) line += ',';
        line += f;
    }
    return line + '\n';
}

// ---------------------------------------------------------------- models

double reduced_coupling(const RunConfig& c) {
    const double d1 = c.real("d1"), d2 = c.real("d2");
    if (d1 == d2) throw DegenerateCell("d1 == d2: reduced coupling undefined");
    return 2.0 * c.real("epsilon") / (d1 - d2);
}

struct ResolvedModel {
    ContinuumParams params;
    LinearModel model;
    bool overridden = false;
};

ResolvedModel resolve_model(const RunConfig& c) {
    ResolvedModel r;
    const double eps = reduced_coupling(c);
    if (eps < 0.0) throw InvalidArgument("epsilon: reduced coupling must be >= 0");
    r.params = derive_params(eps, c.real("a"), c.real("L"));
    r.model = r.params.model();
    if (c.has("lambda")) r.model.lambda = c.real("lambda"), r.overridden = true;
    if (c.has("g")) r.model.g = c.real("g"), r.overridden = true;
    return r;
}

double resolved_xi_max(RunConfig& c, const LinearModel& m) {
    if (!c.has("xi_max")) c.values["xi_max"] = format_number(10.0 * std::sqrt(m.g));
    const double x = c.real("xi_max");
    if (!(x > 0.0)) throw InvalidArgument("xi_max must be > 0");
    return x;
}

Branch parse_sign(const std::string& s) {
    if (s == "+" || s == "positive") return Branch::positive;
    if (s == "-" || s == "negative") return Branch::negative;
    throw InvalidArgument("sign must be '+' or '-', got '" + s + "'");
}

NormConvention parse_norm(const std::string& s) {
    if (s == "unit-total") return NormConvention::unit_total;
    if (s == "per-component") return NormConvention::per_component;
    throw InvalidArgument("norm must be 'unit-total' or 'per-component', got '" + s + "'");
}

int positive_int(const RunConfig& c, const std::string& key, long min_value) {
    const long v = c.integer(key);
    if (v < min_value || v > 100000000) {
        throw InvalidArgument(key + " must be >= " + std::to_string(min_value));
    }
    return static_cast<int>(v);
}

ordered_json level_json(const Level& l) {
    return {{"n", l.n}, {"sign", std::string(1, branch_symbol(l.sign))}, {"energy", l.energy}};
}

// ---------------------------------------------------------------- commands

Output discrete_spectrum(RunConfig& c) {
    const int n = positive_int(c, "n_cells", 2);
    LatticeSpec spec = LatticeSpec::equidistant(n, c.real("epsilon"));
    spec.d1 = c.real("d1");
    spec.d2 = c.real("d2");
    spec.lattice_constant = c.real("a");
    spec.validate();
    const std::string& kind = c.text("hamiltonian");
    if (kind != "reduced" && kind != "full") throw InvalidArgument("hamiltonian must be 'reduced' or 'full'");
    const BlockTridiagonal h = kind == "full" ? build_full_hamiltonian(spec) : build_reduced_hamiltonian(spec);
    const EigenSystem sys = diagonalize(h);
    const double scale = std::max(1.0, sys.eigenvalues.cwiseAbs().maxCoeff());
    if (sys.max_residual > 1e-9 * scale) {
        throw NumericalFailure("eigen residual " + format_number(sys.max_residual) + " beyond tolerance");
    }

    Output o;
    o.csv = "level,sign,energy\n";
    Series s{"energy", {}, {}};
    for (Eigen::Index i = 0; i < sys.eigenvalues.size(); ++i) {
        const double e = sys.eigenvalues(i);
        o.csv += csv_line({std::to_string(i), e < 0.0 ? "-" : "+", format_number(e)});
        s.x.push_back(static_cast<double>(i));
        s.y.push_back(e);
    }
    o.results = {{"dimension", h.dimension()},
                 {"eigenvalues", std::vector<double>(sys.eigenvalues.data(), sys.eigenvalues.data() + sys.eigenvalues.size())},
                 {"max_residual", sys.max_residual},
                 {"max_orthogonality_defect", sys.max_orthogonality_defect}};
    o.summary = "discrete-spectrum: n_cells=" + std::to_string(n) + " dimension=" + std::to_string(h.dimension()) +
                " min=" + format_number(sys.eigenvalues.minCoeff()) +
                " max=" + format_number(sys.eigenvalues.maxCoeff()) + " max_residual=" + format_number(sys.max_residual);
    o.plot = {s};
    o.plot_title = "discrete spectrum";
    return o;
}

Output continuum_spectrum(RunConfig& c) {
    const ResolvedModel r = resolve_model(c);
    const int n_max = positive_int(c, "n_max", 0);
    std::vector<Level> levels;
    if (!r.overridden) levels = analytic_spectrum(r.params, n_max);
    else if (r.model.g == 0.0) levels = {{0, Branch::negative, -r.model.lambda}, {0, Branch::positive, r.model.lambda}};
    else levels = analytic_spectrum(r.model, n_max);

    Output o;
    o.csv = "level,sign,energy\n";
    ordered_json list = ordered_json::array();
    Series s{"energy", {}, {}};
    for (const Level& l : levels) {
        o.csv += csv_line({std::to_string(l.n), std::string(1, branch_symbol(l.sign)), format_number(l.energy)});
        list.push_back(level_json(l));
        s.x.push_back(static_cast<double>(s.x.size()));
        s.y.push_back(l.energy);
    }
    o.results = {{"lambda", r.model.lambda}, {"g", r.model.g}, {"degenerate", r.model.g == 0.0},
                 {"levels", list}};
    o.summary = "continuum-spectrum: lambda=" + format_number(r.model.lambda) + " g=" + format_number(r.model.g) +
                " levels=" + std::to_string(levels.size());
    o.plot = {s};
    o.plot_title = "continuum spectrum";
    return o;
}

Output continuum_states(RunConfig& c) {
    const ResolvedModel r = resolve_model(c);
    r.model.require_gaussian();
    const int n = positive_int(c, "level", 0);
    const Branch sign = parse_sign(c.text("sign"));
    const NormConvention norm = parse_norm(c.text("norm"));
    const int samples = positive_int(c, "samples", 2);
    const double xi_max = resolved_xi_max(c, r.model);

    const PolyGaussianSpinor state = build_eigenstate(r.model, n, sign, norm);
    const double residual = coefficient_residual(r.model, state);
    if (residual > c.real("tolerance")) {
        throw NumericalFailure("state residual " + format_number(residual) + " beyond tolerance");
    }

    Output o;
    o.csv = "xi,psi1,psi2\n";
    Series s1{"psi1", {}, {}}, s2{"psi2", {}, {}};
    for (int i = 0; i < samples; ++i) {
        const double xi = -xi_max + 2.0 * xi_max * i / (samples - 1);
        const Eigen::Vector2d v = state.evaluate(xi);
        o.csv += csv_line({format_number(xi), format_number(v(0)), format_number(v(1))});
        s1.x.push_back(xi), s1.y.push_back(v(0));
        s2.x.push_back(xi), s2.y.push_back(v(1));
    }
    const auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    o.results = {{"lambda", r.model.lambda},  {"g", r.model.g},
                 {"level", n},                 {"sign", std::string(1, branch_symbol(sign))},
                 {"energy", state.energy},     {"coeffs_a", vec(state.coeffs_a)},
                 {"coeffs_b", vec(state.coeffs_b)}, {"norm_squared", state.norm_squared()},
                 {"residual", residual}};
    o.summary = "continuum-states: level=" + std::to_string(n) + " sign=" + branch_symbol(sign) +
                " energy=" + format_number(state.energy) + " residual=" + format_number(residual);
    o.plot = {s1, s2};
    o.plot_title = "continuum eigenstate";
    return o;
}

Output symmetry_check(RunConfig& c) {
    const ResolvedModel r = resolve_model(c);
    r.model.require_gaussian();
    const int n_max = positive_int(c, "n_max", 1);
    const int count = positive_int(c, "random_count", 1);
    const SymmetryReport rep =
        symmetry_report(r.model, n_max, count, static_cast<std::uint64_t>(c.integer("seed")));
    const double tol = c.real("tolerance");

    ordered_json partners = ordered_json::array();
    double worst_partner = 0.0;
    for (const PartnerCheck& p : rep.partner_energy_checks) {
        partners.push_back({{"level", p.level}, {"energy", p.energy}, {"partner_energy", p.partner_energy},
                            {"residual", p.residual}});
        worst_partner = std::max(worst_partner, p.residual);
    }
    Output o;
    o.json_primary = true;
    o.results = {{"lambda", r.model.lambda},
                 {"g", r.model.g},
                 {"commutator_residual_P", rep.commutator_residual_P},
                 {"anticommutator_residual_V", rep.anticommutator_residual_V},
                 {"sigma_x_chirality_residual", rep.sigma_x_chirality_residual},
                 {"parity_signs", rep.parity_signs},
                 {"partner_energy_checks", partners}};
    o.summary = "symmetry-check: [H,P]=" + format_number(rep.commutator_residual_P) +
                " {H,V}=" + format_number(rep.anticommutator_residual_V) +
                " partner_residual=" + format_number(worst_partner);
    if (std::max({rep.commutator_residual_P, rep.anticommutator_residual_V, rep.sigma_x_chirality_residual,
                  worst_partner}) > tol) {
        o.summary += " FAILED";
        o.results["passed"] = false;
    } else {
        o.results["passed"] = true;
    }
    return o;
}

int scan_threads(const RunConfig& c) {
    int threads = positive_int(c, "threads", 0);
    if (const char* env = std::getenv("IPL_THREADS")) {
        const long cap = parse_integer("IPL_THREADS", env);
        if (cap < 1) throw InvalidArgument("IPL_THREADS must be >= 1");
        threads = threads == 0 ? static_cast<int>(cap) : std::min(threads, static_cast<int>(cap));
    }
    return threads;
}

Output localization(RunConfig& c) {
    const int n = positive_int(c, "n_cells", 3);
    const double d1 = c.real("d1"), d2 = c.real("d2");
    if (d1 == d2) throw DegenerateCell("d1 == d2: reduced coupling undefined");
    std::vector<double> eps = c.real_list("epsilons");
    for (double& e : eps) e = 2.0 * e / (d1 - d2);
    ScanOptions opt;
    opt.threshold_factor = c.real("threshold_factor");
    opt.threads = scan_threads(c);
    opt.lattice_constant = c.real("a");
    const LocalizationReport rep = localization_scan(n, eps, equidistant_angles(n), opt);

    Output o;
    o.csv = "epsilon,state_index,energy,ipr,width_cells,class\n";
    for (const StateRecord& r : rep.records) {
        o.csv += csv_line({format_number(r.epsilon), std::to_string(r.index), format_number(r.energy),
                           format_number(r.ipr), format_number(r.width_cells), to_string(r.classification)});
    }
    o.results = {{"threshold", rep.threshold},
                 {"epsilons", rep.epsilons},
                 {"angle_steps", rep.angle_steps},
                 {"localized_fraction", rep.localized_fraction},
                 {"predicted_length_cells", rep.predicted_length_cells}};
    o.summary = "localization-scan: n_cells=" + std::to_string(n) + " localized_fraction=";
    for (std::size_t i = 0; i < rep.localized_fraction.size(); ++i) {
        o.summary += (i ? "," : "") + format_number(rep.localized_fraction[i]);
    }
    o.plot = {{"localized fraction", rep.epsilons, rep.localized_fraction}};
    o.plot_title = "localized fraction vs epsilon";
    return o;
}

Output compare(RunConfig& c) {
    const int n = positive_int(c, "n_cells", 3);
    const ComparisonReport rep = compare_discrete_continuum(n, reduced_coupling(c), c.real("a"));
    Output o;
    o.csv = "cell,x,discrete_prob,continuum_prob\n";
    Series sd{"discrete", {}, {}}, sc{"continuum", {}, {}};
    for (const ComparisonRow& r : rep.rows) {
        o.csv += csv_line({std::to_string(r.cell), format_number(r.x), format_number(r.discrete_prob),
                           format_number(r.continuum_prob)});
        sd.x.push_back(r.x), sd.y.push_back(r.discrete_prob);
        sc.x.push_back(r.x), sc.y.push_back(r.continuum_prob);
    }
    o.results = {{"half_span", rep.half_span},         {"angle_step", rep.angle_step},
                 {"g", rep.g},                         {"rms_deviation", rep.rms_deviation},
                 {"discrete_width", rep.discrete_width}, {"continuum_width", rep.continuum_width},
                 {"predicted_width", rep.predicted_width}, {"width_ratio", rep.width_ratio}};
    o.summary = "compare: n_cells=" + std::to_string(n) + " rms=" + format_number(rep.rms_deviation) +
                " width_ratio=" + format_number(rep.width_ratio);
    o.plot = {sd, sc};
    o.plot_title = "ground state: discrete vs continuum";
    return o;
}

Output oracle_check(RunConfig& c) {
    const ResolvedModel r = resolve_model(c);
    r.model.require_gaussian();
    const int n_max = positive_int(c, "n_max", 1);
    const double xi_max = resolved_xi_max(c, r.model);
    const GridOperator grid = discretize_linear(r.model, xi_max, positive_int(c, "n_points", 201));
    const Eigen::VectorXd eigs = grid.eigenvalues();
    const int count = 2 * n_max + 1;
    const Eigen::VectorXd low = smallest_magnitude(eigs, count);
    const std::vector<Level> levels = sorted_by_energy(analytic_spectrum(r.model, n_max));

    double grid_error = 0.0;
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < count; ++i) {
        const double err = std::abs(low(i) - levels[i].energy) / std::abs(levels[i].energy);
        grid_error = std::max(grid_error, err);
        rows.push_back({{"n", levels[i].n},
                        {"sign", std::string(1, branch_symbol(levels[i].sign))},
                        {"analytic", levels[i].energy},
                        {"grid", low(i)},
                        {"relative_error", err}});
    }
    const double lam = r.model.lambda;
    int near_plus = 0, near_minus = 0;
    for (double e : eigs) {
        near_plus += std::abs(e - lam) <= 1e-4 * std::abs(lam);
        near_minus += std::abs(e + lam) <= 0.01;
    }

    double closed_form_diff = 0.0;
    for (int n = 1; n <= 2; ++n) {
        const PolyGaussianSpinor a = build_eigenstate(r.model, n, Branch::negative);
        const PolyGaussianSpinor b = closed_form_state(r.model, n, Branch::negative);
        closed_form_diff = std::max(closed_form_diff, max_abs_coeff(axpy_difference(a.coeffs(), 1.0, b.coeffs())));
    }
    double residual = 0.0;
    for (const Level& l : levels) residual = std::max(residual, coefficient_residual(r.model, build_eigenstate(r.model, l.n, l.sign)));

    const bool passed = grid_error <= c.real("grid_tolerance") && near_plus == 1 && near_minus == 0 &&
                        closed_form_diff <= 1e-12 && residual <= c.real("tolerance");
    Output o;
    o.json_primary = true;
    o.results = {{"lambda", lam},
                 {"g", r.model.g},
                 {"grid_dimension", grid.dimension()},
                 {"grid_warnings", grid.warnings},
                 {"levels", rows},
                 {"max_relative_error", grid_error},
                 {"eigenvalues_near_plus_lambda", near_plus},
                 {"eigenvalues_near_minus_lambda", near_minus},
                 {"closed_form_max_difference", closed_form_diff},
                 {"max_coefficient_residual", residual},
                 {"passed", passed}};
    o.summary = "oracle-check: max_relative_error=" + format_number(grid_error) +
                " near_minus_lambda=" + std::to_string(near_minus) + " residual=" + format_number(residual) +
                (passed ? "" : " FAILED");
    return o;
}

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, r.ptr);
}

bool RunConfig::has(const std::string& key) const {
    const auto it = values.find(key);
    return it != values.end() && !it->second.empty();
}

const std::string& RunConfig::text(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw InvalidArgument("config: missing '" + key + "'");
    return it->second;
}

long RunConfig::integer(const std::string& key) const { return parse_integer(key, text(key)); }
double RunConfig::real(const std::string& key) const {
    if (!has(key)) throw InvalidArgument("config: '" + key + "' is not set");
    return parse_real(key, text(key));
}
std::vector<double> RunConfig::real_list(const std::string& key) const { return parse_list(key, text(key)); }

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    const auto put = [&](std::string key, std::string value) {
        key = normalize_key(trim(key));
        if (!find_key(key)) throw InvalidArgument("config: unknown key '" + key + "'");
        out[key] = std::move(value);
    };
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument(std::string("config: invalid JSON: ") + e.what());
        }
        for (const auto& [k, v] : j.items()) {
            const std::string key = normalize_key(k);
            if (v.is_null()) continue;
            put(key, json_to_text(key, v));
        }
        return out;
    }
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("config: line " + std::to_string(number) + " is not key=value");
        }
        put(line.substr(0, eq), trim(line.substr(eq + 1)));
    }
    return out;
}

RunConfig resolve_config(const std::string& command, const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& flag_values) {
    if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
        throw InvalidArgument("unknown command '" + command + "'");
    }
    RunConfig c;
    c.command = command;
    for (const KeySpec& k : key_specs()) c.values[k.key] = k.fallback;
    for (const auto* source : {&file_values, &flag_values}) {
        for (const auto& [key, value] : *source) {
            if (!find_key(key)) throw InvalidArgument("config: unknown key '" + key + "'");
            c.values[key] = value;
        }
    }
    for (const KeySpec& k : key_specs()) {
        if (!c.has(k.key)) continue;
        switch (k.type) {
            case ValueType::integer: c.integer(k.key); break;
            case ValueType::real: c.real(k.key); break;
            case ValueType::real_list: c.real_list(k.key); break;
            case ValueType::text: break;
        }
    }
    return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    RunConfig c = config;
    try {
        Output o;
        if (c.command == "discrete-spectrum") o = discrete_spectrum(c);
        else if (c.command == "continuum-spectrum") o = continuum_spectrum(c);
        else if (c.command == "continuum-states") o = continuum_states(c);
        else if (c.command == "symmetry-check") o = symmetry_check(c);
        else if (c.command == "localization-scan") o = localization(c);
        else if (c.command == "compare") o = compare(c);
        else if (c.command == "oracle-check") o = oracle_check(c);
        else throw InvalidArgument("unknown command '" + c.command + "'");

        ordered_json doc = {{"command", c.command}, {"config", config_json(c)}, {"results", o.results}};
        const std::string json_text = doc.dump(2) + "\n";
        bool summary_to_out = false;
        if (o.json_primary) {
            if (c.has("json")) write_file(c.text("json"), json_text), summary_to_out = true;
            else out << json_text;
        } else {
            if (c.has("csv")) write_file(c.text("csv"), o.csv), summary_to_out = true;
            else out << o.csv;
            if (c.has("json")) write_file(c.text("json"), json_text);
        }
        if (c.has("svg")) {
            if (o.plot.empty()) throw InvalidArgument(c.command + " has no plot");
            write_file(c.text("svg"), svg_plot(o.plot_title, o.plot));
        }
        (summary_to_out ? out : err) << o.summary << '\n';
        const auto passed = o.results.find("passed");
        if (passed != o.results.end() && !passed->get<bool>()) return 3;
        return 0;
    } catch (const NumericalFailure& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConsistencyError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Isospectrally patterned lattice and continuum model toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    std::map<std::string, std::string> flags;
    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key=value or JSON config file");
        for (const KeySpec& k : key_specs()) {
            std::string flag = k.key;
            std::replace(flag.begin(), flag.end(), '_', '-');
            const std::string key = k.key;
            sub->add_option_function<std::string>(
                "--" + flag, [&flags, key](const std::string& v) { flags[key] = v; },
                std::string(k.help) + (*k.fallback ? std::string(" [") + k.fallback + "]" : std::string()));
        }
    }

    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    std::string command;
    for (CLI::App* sub : app.get_subcommands()) command = sub->get_name();
    try {
        std::map<std::string, std::string> file_values;
        if (!config_path.empty()) {
            std::ifstream f(config_path, std::ios::binary);
            if (!f) throw InvalidArgument("cannot read config '" + config_path + "'");
            std::stringstream ss;
            ss << f.rdbuf();
            file_values = parse_config_text(ss.str());
        }
        return run(resolve_config(command, file_values, flags), out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace ipl::cli
