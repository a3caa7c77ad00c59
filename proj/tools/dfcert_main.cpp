#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dfcert/certifier.hpp"
#include "dfcert/graph.hpp"
#include "dfcert/linalg.hpp"

using json = nlohmann::json;
using namespace dfcert;

namespace {

constexpr int kSchemaVersion = 1;

// Problems with the shape of the input (malformed JSON, wrong types, unknown
// keys, unparsable number lists) exit with 2; domain-invariant violations
// exit with 3 via the library's error codes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::StarGraphDetected:
        case Errc::NotStronglyConnected:
            return 6; // inadmissible model
        case Errc::NoConvergence:
        case Errc::SpectralGapTooSmall:
        case Errc::AsymmetryDetected:
        case Errc::ConsistencyCheckFailed:
        case Errc::SingularNewtonMatrix:
        case Errc::SingularMatrix:
        case Errc::NotSymmetric:
            return 5; // evidence is inconclusive, not wrong input
        default:
            return 3; // input invariant violation
    }
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(flag + ": cannot parse '" + item + "' as a number");
        }
    }
    if (values.empty()) throw ConfigError(flag + ": empty number list");
    return values;
}

void require_keys(const json& object, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    for (const auto& [key, value] : object.items()) {
        (void)value;
        bool known = false;
        for (const char* name : allowed)
            if (key == name) known = true;
        if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double number_field(const json& object, const char* key, double fallback) {
    if (!object.contains(key)) return fallback;
    if (!object[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
    return object[key].get<double>();
}

long integer_field(const json& object, const char* key, long fallback) {
    if (!object.contains(key)) return fallback;
    if (!object[key].is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
    return object[key].get<long>();
}

// Everything a command needs, resolved from the config file and flags
// (flags win over file values).
struct Resolved {
    InfluenceWeights weights;
    SolverConfig solver;
    double delta;
};

struct CommonFlags {
    std::string config_path;
    std::string gamma_csv;
    std::string x0_csv;
    std::string output_path;
    std::string format;
    long steps = -1;
    std::int64_t seed = -1; // -1: not given on the command line
};

Resolved resolve(const CommonFlags& flags) {
    json config = json::object();
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw ConfigError("cannot open config file " + flags.config_path);
        try {
            in >> config;
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!config.is_object()) throw ConfigError("config root must be a JSON object");
        require_keys(config, {"gamma", "interaction_matrix", "solver", "delta", "seed"}, "config");
    }

    SolverConfig solver;
    if (config.contains("solver")) {
        const json& s = config["solver"];
        if (!s.is_object()) throw ConfigError("solver must be a JSON object");
        require_keys(s,
                     {"picard_tol", "picard_max_iters", "newton_tol", "newton_max_iters",
                      "multistart_count", "cluster_radius", "seed"},
                     "solver");
        solver.picard_tol = number_field(s, "picard_tol", solver.picard_tol);
        solver.picard_max_iters = integer_field(s, "picard_max_iters", solver.picard_max_iters);
        solver.newton_tol = number_field(s, "newton_tol", solver.newton_tol);
        solver.newton_max_iters =
            static_cast<int>(integer_field(s, "newton_max_iters", solver.newton_max_iters));
        solver.multistart_count =
            static_cast<int>(integer_field(s, "multistart_count", solver.multistart_count));
        solver.cluster_radius = number_field(s, "cluster_radius", solver.cluster_radius);
        solver.seed = static_cast<std::uint64_t>(integer_field(s, "seed", 0));
    }
    if (config.contains("seed"))
        solver.seed = static_cast<std::uint64_t>(integer_field(config, "seed", 0));
    if (flags.seed >= 0) solver.seed = static_cast<std::uint64_t>(flags.seed);
    solver.validate();

    const double delta = number_field(config, "delta", kDefaultDelta);

    std::optional<std::vector<double>> gamma;
    if (config.contains("gamma")) {
        if (!config["gamma"].is_array()) throw ConfigError("gamma must be an array of numbers");
        gamma.emplace();
        for (const json& v : config["gamma"]) {
            if (!v.is_number()) throw ConfigError("gamma must be an array of numbers");
            gamma->push_back(v.get<double>());
        }
    }
    if (!flags.gamma_csv.empty()) gamma = parse_number_list(flags.gamma_csv, "--gamma");

    std::optional<Matrix> interaction;
    if (config.contains("interaction_matrix")) {
        const json& rows = config["interaction_matrix"];
        if (!rows.is_array() || rows.empty())
            throw ConfigError("interaction_matrix must be a nonempty array of rows");
        const std::size_t n = rows.size();
        for (const json& row : rows)
            if (!row.is_array() || row.size() != rows.front().size())
                throw ConfigError("interaction_matrix rows must be equally sized arrays");
        Matrix m(n, rows.front().size());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
                if (!rows[i][j].is_number())
                    throw ConfigError("interaction_matrix entries must be numbers");
                m(i, j) = rows[i][j].get<double>();
            }
        interaction = std::move(m);
    }

    if (gamma.has_value() == interaction.has_value())
        throw ConfigError("provide exactly one of gamma (config or --gamma) or interaction_matrix");

    if (gamma)
        return Resolved{InfluenceWeights(std::move(*gamma)), solver, delta};
    return Resolved{gamma_from_matrix(InteractionMatrix(std::move(*interaction))), solver, delta};
}

SimplexPoint parse_point(const CommonFlags& flags, std::size_t n) {
    if (flags.x0_csv.empty()) throw ConfigError("--x0 is required for this command");
    std::vector<double> values = parse_number_list(flags.x0_csv, "--x0");
    if (values.size() != n)
        fail(Errc::InvalidArgument, "--x0 has " + std::to_string(values.size()) +
                                        " entries but the model has " + std::to_string(n));
    return SimplexPoint(std::move(values));
}

void check_format(const CommonFlags& flags, const std::string& required) {
    if (!flags.format.empty() && flags.format != required)
        throw ConfigError("this command emits " + required + " only");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write output file " + path);
}

std::string format17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

json location_json(const SimplexPoint& x) {
    json a = json::array();
    for (std::size_t i = 0; i < x.size(); ++i) a.push_back(x[i]);
    return a;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string dump(const json& report) { return report.dump(2) + "\n"; }

double sup_residual(const DfMap& map, const SimplexPoint& x) {
    const SimplexPoint fx = map.evaluate(x);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(fx[i] - x[i]));
    return r;
}

// Locate the interior fixed point for the rate command: Picard from the
// barycenter down to the Newton handoff, then Newton to full precision.
SimplexPoint locate_fixed_point(const DfMap& map, const SolverConfig& cfg, double delta) {
    SolverConfig coarse = cfg;
    coarse.picard_tol = std::max(cfg.picard_tol, 1e-6);
    const PicardResult picard = picard_solve(map, SimplexPoint::barycenter(map.size()), coarse);
    if (!picard.converged)
        fail(Errc::NoConvergence, "Picard iteration from the barycenter did not converge");
    return newton_refine(map, picard.record.location, cfg, delta).location;
}

int cmd_simulate(const CommonFlags& flags) {
    check_format(flags, "csv");
    if (flags.steps < 0) throw ConfigError("--steps is required and must be nonnegative");
    const Resolved r = resolve(flags);
    const DfMap map(r.weights);
    const SimplexPoint x0 = parse_point(flags, map.size());

    const Trajectory traj = map.simulate(x0, flags.steps);
    std::string csv = "step";
    for (std::size_t i = 1; i <= map.size(); ++i) csv += ",x_" + std::to_string(i);
    csv += "\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        csv += std::to_string(k);
        for (std::size_t i = 0; i < map.size(); ++i)
            csv += "," + format17(traj.states[k][i]);
        csv += "\n";
    }
    write_text(flags.output_path, csv);
    return 0;
}

int cmd_certify(const CommonFlags& flags) {
    check_format(flags, "json");
    const Resolved r = resolve(flags);
    const DfMap map(r.weights);
    const LefschetzCertificate cert = certify(r.weights, r.solver, r.delta);

    json interior = json::array();
    for (const StabilityReport& report : cert.interior) {
        interior.push_back({{"location", location_json(report.location)},
                            {"residual", sup_residual(map, report.location)},
                            {"eigenvalues", report.reduced_spectrum},
                            {"spectral_radius", report.spectral_radius},
                            {"stability", stability_name(report.stability)},
                            {"lefschetz_index", report.lefschetz_index}});
    }
    json corners = json::array();
    for (const CornerReport& report : cert.corners)
        corners.push_back({{"corner", report.corner + 1},
                           {"eigenvalue", report.spectral_radius},
                           {"lefschetz_index", report.lefschetz_index}});

    const json report = {{"schema", "dfcert.certificate"},
                         {"schema_version", kSchemaVersion},
                         {"verdict", verdict_name(cert.verdict)},
                         {"detail", cert.detail},
                         {"interior_fixed_points", interior},
                         {"corner_reports", corners},
                         {"index_sum", cert.index_sum},
                         {"euler_characteristic", cert.euler_characteristic},
                         {"converged_starts", cert.converged_starts},
                         {"nonconverged_starts", cert.nonconverged_starts},
                         {"seed", r.solver.seed}};
    write_text(flags.output_path, dump(report));

    switch (cert.verdict) {
        case Verdict::UniqueExpStable: return 0;
        case Verdict::Inconsistent: return 4;
        case Verdict::Inconclusive: return 5;
    }
    return 5;
}

int cmd_spectrum(const CommonFlags& flags) {
    check_format(flags, "json");
    const Resolved r = resolve(flags);
    const DfMap map(r.weights);
    const SimplexPoint x = parse_point(flags, map.size());

    const FullJacobian full = full_jacobian(map, x, r.delta);
    const ReducedJacobian reduced = reduced_jacobian(full);
    const std::vector<double> full_eigenvalues = df_spectrum_via_symmetrization(full, x);
    const std::vector<double> reduced_eigenvalues = drop_zero_eigenvalue(full_eigenvalues);

    double column_sum_max = 0.0;
    for (std::size_t j = 0; j < map.size(); ++j) {
        double column_sum = 0.0;
        for (std::size_t i = 0; i < map.size(); ++i) column_sum += full.entries(i, j);
        column_sum_max = std::max(column_sum_max, std::abs(column_sum));
    }

    const json report = {{"schema", "dfcert.spectrum"},
                         {"schema_version", kSchemaVersion},
                         {"point", location_json(x)},
                         {"full_jacobian", matrix_json(full.entries)},
                         {"reduced_jacobian", matrix_json(reduced.entries)},
                         {"full_eigenvalues", full_eigenvalues},
                         {"reduced_eigenvalues", reduced_eigenvalues},
                         {"column_sum_max_abs", column_sum_max}};
    write_text(flags.output_path, dump(report));
    return 0;
}

int cmd_fixed_point(const CommonFlags& flags) {
    check_format(flags, "json");
    const Resolved r = resolve(flags);
    const DfMap map(r.weights);
    const Enumeration enumeration = enumerate_fixed_points(map, r.solver, r.delta);

    json points = json::array();
    for (const FixedPointRecord& record : enumeration.records)
        points.push_back({{"location", location_json(record.location)},
                          {"residual", record.residual},
                          {"basin_hits", record.basin_hits},
                          {"is_corner", record.is_corner}});

    const json report = {{"schema", "dfcert.fixed_points"},
                         {"schema_version", kSchemaVersion},
                         {"fixed_points", points},
                         {"converged_starts", enumeration.converged_starts},
                         {"nonconverged_starts", enumeration.nonconverged_starts},
                         {"seed", r.solver.seed}};
    write_text(flags.output_path, dump(report));
    return 0;
}

int cmd_rate(const CommonFlags& flags) {
    check_format(flags, "json");
    if (flags.steps < 0) throw ConfigError("--steps is required and must be nonnegative");
    const Resolved r = resolve(flags);
    const DfMap map(r.weights);
    const SimplexPoint x0 = parse_point(flags, map.size());

    const SimplexPoint xbar = locate_fixed_point(map, r.solver, r.delta);
    const RateEstimate estimate = rate_estimate(map, x0, xbar, flags.steps, r.delta);

    const json report = {{"schema", "dfcert.rate"},
                         {"schema_version", kSchemaVersion},
                         {"fixed_point", location_json(xbar)},
                         {"spectral_rate", estimate.predicted},
                         {"empirical_rate", estimate.rate},
                         {"relative_gap", estimate.relative_error},
                         {"tail_points", estimate.tail_steps}};
    write_text(flags.output_path, dump(report));
    return 0;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_point, bool with_steps) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--gamma", flags.gamma_csv, "influence weights, comma-separated");
    cmd->add_option("--seed", flags.seed, "seed override for the multistart sampler");
    cmd->add_option("--output", flags.output_path, "output file (default: stdout)");
    cmd->add_option("--format", flags.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    if (with_point)
        cmd->add_option("--x0", flags.x0_csv, "simplex point, comma-separated coordinates");
    if (with_steps) cmd->add_option("--steps", flags.steps, "number of map applications");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certify existence, uniqueness, and stability of fixed points of the "
                 "self-confidence dynamics on the unit simplex"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* simulate = app.add_subcommand("simulate", "iterate the map and emit the trajectory as CSV");
    add_common_flags(simulate, flags, true, true);
    CLI::App* certify_cmd = app.add_subcommand("certify", "full fixed-point certificate as JSON");
    add_common_flags(certify_cmd, flags, false, false);
    CLI::App* spectrum = app.add_subcommand("spectrum", "Jacobian and spectra at a point as JSON");
    add_common_flags(spectrum, flags, true, false);
    CLI::App* fixed_point = app.add_subcommand("fixed-point", "enumerate fixed points as JSON");
    add_common_flags(fixed_point, flags, false, false);
    CLI::App* rate = app.add_subcommand("rate", "empirical vs spectral contraction rate as JSON");
    add_common_flags(rate, flags, true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(simulate)) return cmd_simulate(flags);
        if (app.got_subcommand(certify_cmd)) return cmd_certify(flags);
        if (app.got_subcommand(spectrum)) return cmd_spectrum(flags);
        if (app.got_subcommand(fixed_point)) return cmd_fixed_point(flags);
        if (app.got_subcommand(rate)) return cmd_rate(flags);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 0;
}
