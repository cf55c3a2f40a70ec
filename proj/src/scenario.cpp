#include "sisctl/scenario.hpp"

#include "sisctl/io.hpp"
#include "sisctl/random.hpp"
#include "sisctl/serialize.hpp"

#include <cerrno>
#include <cstdlib>
#include <initializer_list>
#include <string_view>

namespace sisctl {

namespace {

using json = nlohmann::json;

[[noreturn]] void config_error(const std::string& message)
{
    throw Error(ErrorKind::ConfigParse, message);
}

const json& require_object(const json& value, const std::string& where)
{
    if (!value.is_object())
        config_error(where + " must be an object");
    return value;
}

void check_keys(const json& object, const std::string& where, std::initializer_list<std::string_view> allowed)
{
    for (const auto& item : object.items()) {
        bool known = false;
        for (auto key : allowed)
            known = known || item.key() == key;
        if (!known)
            config_error("unknown key '" + item.key() + "' in " + where);
    }
}

const json& field(const json& object, const char* key, const std::string& where)
{
    const auto it = object.find(key);
    if (it == object.end())
        config_error(where + " is missing '" + key + "'");
    return *it;
}

double number_field(const json& object, const char* key, const std::string& where)
{
    const json& value = field(object, key, where);
    if (!value.is_number())
        config_error(where + "." + key + " must be a number");
    return value.get<double>();
}

std::uint64_t unsigned_field(const json& object, const char* key, const std::string& where)
{
    const json& value = field(object, key, where);
    if (!value.is_number_integer() || (!value.is_number_unsigned() && value.get<std::int64_t>() < 0))
        config_error(where + "." + key + " must be a non-negative integer");
    return value.get<std::uint64_t>();
}

bool bool_field(const json& object, const char* key, const std::string& where)
{
    const json& value = field(object, key, where);
    if (!value.is_boolean())
        config_error(where + "." + key + " must be true or false");
    return value.get<bool>();
}

std::string string_field(const json& object, const char* key, const std::string& where)
{
    const json& value = field(object, key, where);
    if (!value.is_string())
        config_error(where + "." + key + " must be a string");
    return value.get<std::string>();
}

std::filesystem::path resolve_path(const std::filesystem::path& base_dir, const std::string& text)
{
    std::filesystem::path p(text);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
}

NetworkSpec parse_network(const json& value, const std::filesystem::path& base_dir)
{
    require_object(value, "network");
    NetworkSpec spec;
    if (value.contains("file")) {
        check_keys(value, "network", {"file"});
        spec.source = NetworkSpec::Source::File;
        spec.file = resolve_path(base_dir, string_field(value, "file", "network"));
        return spec;
    }
    check_keys(value, "network", {"generator", "n", "radius", "area_side"});
    const std::string generator = string_field(value, "generator", "network");
    if (generator != "geometric")
        config_error("network.generator must be \"geometric\", got \"" + generator + "\"");
    const std::uint64_t n = unsigned_field(value, "n", "network");
    if (n == 0 || n > 1000000)
        config_error("network.n must lie in [1, 1000000]");
    spec.n = static_cast<int>(n);
    spec.radius = number_field(value, "radius", "network");
    spec.area_side = number_field(value, "area_side", "network");
    return spec;
}

EpidemicParams parse_params(const json& value)
{
    require_object(value, "params");
    check_keys(value, "params", {"beta", "gamma", "dt"});
    return {number_field(value, "beta", "params"), number_field(value, "gamma", "params"),
            number_field(value, "dt", "params")};
}

PolicyKind parse_policy(const json& value)
{
    if (!value.is_string())
        config_error("policy must be a string");
    const auto text = value.get<std::string>();
    if (text == "none")
        return PolicyKind::None;
    if (text == "linear_distancing")
        return PolicyKind::LinearDistancing;
    config_error("policy must be \"none\" or \"linear_distancing\", got \"" + text + "\"");
}

InitialStateSpec parse_initial_state(const json& value, const std::filesystem::path& base_dir)
{
    require_object(value, "x0");
    InitialStateSpec spec;
    const std::string mode = string_field(value, "mode", "x0");
    if (mode == "uniform_open_half") {
        check_keys(value, "x0", {"mode", "seed"});
        spec.mode = InitialStateSpec::Mode::UniformOpenHalf;
        if (value.contains("seed"))
            spec.seed = unsigned_field(value, "seed", "x0");
    } else if (mode == "explicit") {
        check_keys(value, "x0", {"mode", "values"});
        spec.mode = InitialStateSpec::Mode::Explicit;
        const json& values = field(value, "values", "x0");
        if (!values.is_array() || values.empty())
            config_error("x0.values must be a nonempty array of numbers");
        for (const auto& v : values) {
            if (!v.is_number())
                config_error("x0.values must contain only numbers");
            spec.values.push_back(v.get<double>());
        }
    } else if (mode == "file") {
        check_keys(value, "x0", {"mode", "path"});
        spec.mode = InitialStateSpec::Mode::File;
        spec.file = resolve_path(base_dir, string_field(value, "path", "x0"));
    } else {
        config_error("x0.mode must be uniform_open_half, explicit or file, got \"" + mode + "\"");
    }
    return spec;
}

OutputSpec parse_outputs(const json& value)
{
    require_object(value, "outputs");
    check_keys(value, "outputs", {"directory", "trajectory_csv", "regime_json", "audit_json"});
    OutputSpec spec;
    if (value.contains("directory"))
        spec.directory = string_field(value, "directory", "outputs");
    if (value.contains("trajectory_csv"))
        spec.trajectory_csv = bool_field(value, "trajectory_csv", "outputs");
    if (value.contains("regime_json"))
        spec.regime_json = bool_field(value, "regime_json", "outputs");
    if (value.contains("audit_json"))
        spec.audit_json = bool_field(value, "audit_json", "outputs");
    return spec;
}

/// Numbers separated by commas and/or whitespace.
std::vector<double> parse_number_list(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::size_t pos = 0;
    auto is_separator = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (pos < text.size()) {
        while (pos < text.size() && is_separator(text[pos]))
            ++pos;
        if (pos >= text.size())
            break;
        std::size_t end = pos;
        while (end < text.size() && !is_separator(text[end]))
            ++end;
        const std::string token = text.substr(pos, end - pos);
        char* stop = nullptr;
        errno = 0;
        const double v = std::strtod(token.c_str(), &stop);
        if (stop != token.c_str() + token.size() || errno == ERANGE)
            config_error("bad number '" + token + "' in " + what);
        out.push_back(v);
        pos = end;
    }
    return out;
}

Vector to_vector(const std::vector<double>& values)
{
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

ControlPolicy make_policy(PolicyKind kind)
{
    return kind == PolicyKind::LinearDistancing ? ControlPolicy::linear_distancing() : ControlPolicy::none();
}

std::string join_prefixed(const std::vector<std::string>& messages, std::initializer_list<std::string_view> prefixes)
{
    std::string out;
    for (const auto& m : messages) {
        for (auto p : prefixes) {
            if (m.rfind(p, 0) == 0) {
                if (!out.empty())
                    out += "; ";
                out += m;
                break;
            }
        }
    }
    return out;
}

void write_json(const json& document, const std::filesystem::path& path)
{
    write_text_file(path, document.dump(2) + "\n");
}

json optional_kind(const std::optional<ErrorKind>& kind)
{
    return kind ? json(std::string(to_string(*kind))) : json(nullptr);
}

}  // namespace

ScenarioConfig parse_scenario_config(const nlohmann::json& document, const std::filesystem::path& base_dir)
{
    require_object(document, "config");
    check_keys(document, "config",
               {"network", "params", "policy", "x0", "horizon", "stop_tol", "seed", "outputs"});
    ScenarioConfig config;
    config.network = parse_network(field(document, "network", "config"), base_dir);
    config.params = parse_params(field(document, "params", "config"));
    config.policy = parse_policy(field(document, "policy", "config"));
    config.x0 = parse_initial_state(field(document, "x0", "config"), base_dir);
    config.seed = unsigned_field(document, "seed", "config");
    if (document.contains("horizon"))
        config.horizon = unsigned_field(document, "horizon", "config");
    if (document.contains("stop_tol")) {
        config.stop_tol = number_field(document, "stop_tol", "config");
        if (!(config.stop_tol >= 0.0))
            config_error("config.stop_tol must be >= 0");
    }
    if (document.contains("outputs"))
        config.outputs = parse_outputs(document["outputs"]);
    return config;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path)
{
    const std::string text = read_text_file(path);
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error& e) {
        config_error("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_scenario_config(document, path.parent_path());
}

ScenarioInputs resolve_inputs(const ScenarioConfig& config)
{
    const auto& net = config.network;
    EpidemicNetwork network = net.source == NetworkSpec::Source::File
                                  ? read_network_csv(net.file)
                                  : generate_geometric_network(net.n, net.radius, net.area_side, config.seed);

    Vector x0;
    switch (config.x0.mode) {
    case InitialStateSpec::Mode::UniformOpenHalf: {
        Rng rng(config.x0.seed.value_or(config.seed), Stream::InitialState);
        x0.resize(network.size());
        for (Eigen::Index i = 0; i < x0.size(); ++i)
            x0(i) = rng.uniform(kInitialStateMargin, 0.5 - kInitialStateMargin);
        break;
    }
    case InitialStateSpec::Mode::Explicit:
        x0 = to_vector(config.x0.values);
        break;
    case InitialStateSpec::Mode::File:
        x0 = to_vector(parse_number_list(read_text_file(config.x0.file), "'" + config.x0.file.string() + "'"));
        break;
    }
    require_same_size(network.size(), x0.size(), "initial state");
    return {std::move(network), std::move(x0)};
}

nlohmann::json to_json(const ScenarioSummary& summary)
{
    json j;
    j["exit_code"] = summary.exit_code;
    j["error"] = optional_kind(summary.error);
    j["messages"] = summary.messages;
    j["assumptions"] = summary.assumptions ? to_json(*summary.assumptions) : json(nullptr);
    j["regime"] = summary.regime ? to_json(*summary.regime) : json(nullptr);
    j["steps"] = summary.steps;
    j["stop_reason"] = std::string(to_string(summary.stop_reason));
    j["final_max_state"] = summary.final_max_state;
    j["final_min_state"] = summary.final_min_state;
    j["lyapunov_certificate"] = summary.certificate ? to_json(*summary.certificate) : json(nullptr);
    j["dfe_descent"] = summary.descent ? to_json(*summary.descent) : json(nullptr);
    j["endemic_audit"] = summary.endemic_audit ? to_json(*summary.endemic_audit) : json(nullptr);
    j["half_bound"] = summary.bound ? to_json(*summary.bound) : json(nullptr);
    return j;
}

ScenarioSummary execute_scenario(const ScenarioConfig& config, const EpidemicNetwork& network, const Vector& x0,
                                 const std::filesystem::path& out_dir)
{
    ScenarioSummary summary;
    const EpidemicParams& params = config.params;
    const bool distancing = config.policy == PolicyKind::LinearDistancing;

    try {
        params.validate();
        require_same_size(network.size(), x0.size(), "initial state");
        if (!x0.allFinite())
            throw Error(ErrorKind::NonFiniteEntry, "initial state has a non-finite entry");
        summary.assumptions = validate_assumptions(network, params, x0);
        const AssumptionReport& report = *summary.assumptions;
        if (!report.a1_strongly_connected || !report.a3_dt_small)
            throw Error(ErrorKind::AssumptionViolation, join_prefixed(report.messages, {"A1:", "A3:"}));
        if (distancing) {
            if (!report.a4_row_stochastic_diag)
                throw Error(ErrorKind::AssumptionViolation, join_prefixed(report.messages, {"A4:"}));
            if (!((x0.array() >= 0.0).all() && (x0.array() < 0.5).all()))
                throw Error(ErrorKind::AssumptionViolation,
                            "linear_distancing needs every x0 entry in [0, 1/2)");
        } else if (!((x0.array() >= 0.0).all() && (x0.array() <= 1.0).all())) {
            throw Error(ErrorKind::AssumptionViolation, "every x0 entry must lie in [0, 1]");
        }
        for (const auto& m : report.messages)
            summary.messages.push_back("advisory: " + m);
    } catch (const Error& e) {
        summary.exit_code = kExitConfig;
        summary.error = e.kind();
        summary.messages.emplace_back(e.what());
        if (config.outputs.audit_json)
            write_json(to_json(summary), out_dir / "audit.json");
        return summary;
    }

    const SimulationOptions options{config.horizon, config.stop_tol};
    Trajectory trajectory = simulate(x0, network, params, make_policy(config.policy), options);
    summary.steps = trajectory.steps();
    summary.stop_reason = trajectory.stop_reason();
    summary.final_max_state = trajectory.final_state().maxCoeff();
    summary.final_min_state = trajectory.final_state().minCoeff();
    summary.regime = classify_regime(network, params);
    const RegimeReport& regime = *summary.regime;

    bool certified = true;
    auto fail = [&](const std::string& message) {
        certified = false;
        summary.messages.push_back("certificate failure: " + message);
    };

    if (regime.regime == Regime::DiseaseFree) {
        const Matrix m = system_matrix(network, params);
        try {
            summary.certificate = find_diagonal_lyapunov(m);
            summary.descent = verify_dfe_descent(trajectory, m, *summary.certificate);
            if (!summary.descent->strictly_decreasing)
                fail("x^T P x does not decrease at step " + std::to_string(*summary.descent->first_failure));
        } catch (const Error& e) {
            fail(e.what());
        }
    } else if (!distancing) {
        summary.messages.emplace_back("endemic audit skipped: it applies to the linear_distancing policy");
    } else if ((x0.array() == 0.0).all()) {
        summary.messages.emplace_back("endemic audit skipped: x0 = 0 stays at the disease-free state");
    } else if (!regime.predicted_equilibrium) {
        summary.messages.emplace_back("endemic audit skipped: no closed-form endemic level for r0 <= 1");
    } else {
        try {
            summary.endemic_audit = build_endemic_audit(trajectory, network, params, *regime.predicted_equilibrium);
            const EndemicAudit& audit = *summary.endemic_audit;
            if (!audit.passed())
                fail("endemic audit did not pass");
            for (const auto& w : audit.warnings)
                summary.messages.push_back("endemic audit: " + w);
        } catch (const Error& e) {
            fail(e.what());
        }
    }

    if (distancing) {
        summary.bound = verify_half_bound(trajectory, params);
        if (!summary.bound->bound_holds)
            fail(std::to_string(summary.bound->violation_count) + " states reached 1/2");
        if (!summary.bound->cap_holds)
            fail(std::to_string(summary.bound->cap_violation_count) + " steps broke the monotone cap");
    }
    summary.exit_code = certified ? kExitPass : kExitCertificate;

    if (config.outputs.trajectory_csv) {
        write_trajectory_csv(trajectory, out_dir / "trajectory.csv");
        summary.artifacts.push_back(out_dir / "trajectory.csv");
    }
    if (config.outputs.regime_json) {
        write_json(to_json(regime), out_dir / "regime.json");
        summary.artifacts.push_back(out_dir / "regime.json");
    }
    if (config.outputs.audit_json) {
        write_json(to_json(summary), out_dir / "audit.json");
        summary.artifacts.push_back(out_dir / "audit.json");
        if (summary.endemic_audit) {
            write_audit_log_csv(*summary.endemic_audit, out_dir / "audit_steps.csv");
            summary.artifacts.push_back(out_dir / "audit_steps.csv");
        }
    }
    summary.trajectory = std::move(trajectory);
    return summary;
}

ScenarioSummary run_scenario(const ScenarioConfig& config)
{
    std::optional<ScenarioInputs> inputs;
    try {
        inputs = resolve_inputs(config);
    } catch (const Error& e) {
        ScenarioSummary summary;
        summary.exit_code = kExitConfig;
        summary.error = e.kind();
        summary.messages.emplace_back(e.what());
        return summary;
    }
    return execute_scenario(config, inputs->network, inputs->x0, config.outputs.directory);
}

std::vector<GridPoint> parse_grid(const nlohmann::json& document)
{
    if (!document.is_array() || document.empty())
        config_error("grid must be a nonempty array");
    std::vector<GridPoint> grid;
    for (std::size_t i = 0; i < document.size(); ++i) {
        const json& item = document[i];
        const std::string where = "grid[" + std::to_string(i) + "]";
        if (item.is_array()) {
            if (item.size() != 2 || !item[0].is_number() || !item[1].is_number())
                config_error(where + " must be a [beta, gamma] pair of numbers");
            grid.push_back({item[0].get<double>(), item[1].get<double>()});
        } else if (item.is_object()) {
            check_keys(item, where, {"beta", "gamma"});
            grid.push_back({number_field(item, "beta", where), number_field(item, "gamma", where)});
        } else {
            config_error(where + " must be a pair or an object");
        }
    }
    return grid;
}

std::vector<GridPoint> load_grid(const std::filesystem::path& path)
{
    const std::string text = read_text_file(path);
    try {
        return parse_grid(json::parse(text));
    } catch (const json::parse_error& e) {
        config_error("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

SweepTable sweep(const ScenarioConfig& base, const std::vector<GridPoint>& grid, std::uint64_t shared_seed)
{
    if (grid.empty())
        config_error("grid must be nonempty");
    ScenarioConfig shared = base;
    shared.seed = shared_seed;
    const ScenarioInputs inputs = resolve_inputs(shared);

    SweepTable table;
    bool any_certificate = false;
    bool any_error = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SweepRow row;
        row.index = i;
        row.point = grid[i];
        ScenarioConfig config = shared;
        config.params.beta = grid[i].beta;
        config.params.gamma = grid[i].gamma;
        try {
            const ScenarioSummary summary = execute_scenario(
                config, inputs.network, inputs.x0, shared.outputs.directory / ("row_" + std::to_string(i)));
            row.exit_code = summary.exit_code;
            row.error = summary.error;
            if (summary.error && !summary.messages.empty())
                row.error_message = summary.messages.back();
            if (summary.regime) {
                row.r0 = summary.regime->r0;
                row.rho_m = summary.regime->rho_m;
                row.regime = summary.regime->regime;
                row.x_bar = summary.regime->predicted_equilibrium;
                row.x_final_max = summary.final_max_state;
            }
            if (summary.bound)
                row.bound_holds = summary.bound->bound_holds;
        } catch (const Error& e) {
            row.exit_code = kExitConfig;
            row.error = e.kind();
            row.error_message = e.what();
        }
        any_certificate = any_certificate || row.exit_code == kExitCertificate;
        any_error = any_error || row.exit_code == kExitConfig;
        table.rows.push_back(std::move(row));
    }
    table.exit_code = any_certificate ? kExitCertificate : any_error ? kExitConfig : kExitPass;

    write_sweep_csv(table, shared.outputs.directory / "sweep.csv");
    write_text_file(shared.outputs.directory / "sweep.json", to_json(table).dump(2) + "\n");
    return table;
}

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path)
{
    std::string text = "beta,gamma,r0,rho_M,regime,x_bar,x_final_max,bound_holds\n";
    auto cell = [](const std::optional<double>& v) { return v ? format_g17(*v) : std::string(); };
    for (const auto& row : table.rows) {
        text += format_g17(row.point.beta) + ',' + format_g17(row.point.gamma) + ',' + cell(row.r0) + ',' +
                cell(row.rho_m) + ',' + (row.regime ? std::string(to_string(*row.regime)) : std::string()) + ',' +
                cell(row.x_bar) + ',' + cell(row.x_final_max) + ',' +
                (row.bound_holds ? (*row.bound_holds ? "true" : "false") : "") + '\n';
    }
    write_text_file(path, text);
}

nlohmann::json to_json(const SweepTable& table)
{
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json rows = json::array();
    for (const auto& row : table.rows) {
        rows.push_back({{"index", row.index},
                        {"beta", row.point.beta},
                        {"gamma", row.point.gamma},
                        {"exit_code", row.exit_code},
                        {"error", optional_kind(row.error)},
                        {"error_message", row.error ? json(row.error_message) : json(nullptr)},
                        {"r0", opt(row.r0)},
                        {"rho_M", opt(row.rho_m)},
                        {"regime", row.regime ? json(std::string(to_string(*row.regime))) : json(nullptr)},
                        {"x_bar", opt(row.x_bar)},
                        {"x_final_max", opt(row.x_final_max)},
                        {"bound_holds", row.bound_holds ? json(*row.bound_holds) : json(nullptr)}});
    }
    return {{"exit_code", table.exit_code}, {"rows", rows}};
}

}  // namespace sisctl
