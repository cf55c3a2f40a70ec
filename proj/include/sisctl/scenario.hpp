#pragma once

#include "sisctl/certificates.hpp"
#include "sisctl/dynamics.hpp"
#include "sisctl/graph.hpp"
#include "sisctl/spectral.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sisctl {

/// x0 coordinates in uniform_open_half mode are drawn from (eps, 1/2 - eps).
inline constexpr double kInitialStateMargin = 1e-6;

struct NetworkSpec {
    enum class Source { Geometric, File };
    Source source = Source::Geometric;
    int n = 0;
    double radius = 0.0;
    double area_side = 0.0;
    std::filesystem::path file;
};

struct InitialStateSpec {
    enum class Mode { UniformOpenHalf, Explicit, File };
    Mode mode = Mode::UniformOpenHalf;
    std::optional<std::uint64_t> seed;  ///< uniform_open_half only; defaults to the scenario seed
    std::vector<double> values;         ///< explicit only
    std::filesystem::path file;         ///< file only
};

struct OutputSpec {
    std::filesystem::path directory = "out";
    bool trajectory_csv = true;
    bool regime_json = true;
    bool audit_json = true;
};

/// Parsed scenario file. Relative input paths are resolved against the
/// directory of the config file; the output directory is used as given.
struct ScenarioConfig {
    NetworkSpec network;
    EpidemicParams params;
    PolicyKind policy = PolicyKind::LinearDistancing;
    InitialStateSpec x0;
    std::size_t horizon = kDefaultHorizon;
    double stop_tol = kDefaultStopTolerance;
    std::uint64_t seed = 0;
    OutputSpec outputs;
};

/// Throws ConfigParse on a missing field, a wrong type or an unknown key.
ScenarioConfig parse_scenario_config(const nlohmann::json& document, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

struct ScenarioInputs {
    EpidemicNetwork network;
    Vector x0;
};

/// Generates or reads the network and the initial state.
ScenarioInputs resolve_inputs(const ScenarioConfig& config);

inline constexpr int kExitPass = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitCertificate = 2;

struct ScenarioSummary {
    int exit_code = kExitPass;
    std::optional<ErrorKind> error;
    std::vector<std::string> messages;

    std::optional<AssumptionReport> assumptions;
    std::optional<RegimeReport> regime;
    std::size_t steps = 0;
    StopReason stop_reason = StopReason::Horizon;
    double final_max_state = 0.0;
    double final_min_state = 0.0;

    std::optional<LyapunovCertificate> certificate;
    std::optional<DescentReport> descent;
    std::optional<EndemicAudit> endemic_audit;
    std::optional<BoundReport> bound;

    std::optional<Trajectory> trajectory;
    std::vector<std::filesystem::path> artifacts;
};

/// Machine-readable summary; also the body of audit.json.
nlohmann::json to_json(const ScenarioSummary& summary);

/// Simulate, classify, certify and write artifacts into `out_dir`. Errors
/// from the config gate end up in the summary with exit code 1; IoFailure
/// while writing artifacts is thrown.
ScenarioSummary execute_scenario(const ScenarioConfig& config, const EpidemicNetwork& network, const Vector& x0,
                                 const std::filesystem::path& out_dir);

/// resolve_inputs + execute_scenario into config.outputs.directory.
ScenarioSummary run_scenario(const ScenarioConfig& config);

struct GridPoint {
    double beta = 0.0;
    double gamma = 0.0;
};

/// Array of [beta, gamma] pairs or of {"beta": ..., "gamma": ...} objects.
std::vector<GridPoint> parse_grid(const nlohmann::json& document);
std::vector<GridPoint> load_grid(const std::filesystem::path& path);

struct SweepRow {
    std::size_t index = 0;
    GridPoint point;
    int exit_code = kExitPass;
    std::optional<ErrorKind> error;
    std::string error_message;
    std::optional<double> r0;
    std::optional<double> rho_m;
    std::optional<Regime> regime;
    std::optional<double> x_bar;  ///< predicted equilibrium
    std::optional<double> x_final_max;
    std::optional<bool> bound_holds;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    /// 2 if any row failed a certificate, else 1 if any row errored, else 0.
    int exit_code = kExitPass;
};

/// Runs every grid point on one network and one x0, both derived from
/// `shared_seed`. Row i writes its artifacts under `<out>/row_<i>`; the
/// table goes to `<out>/sweep.csv` and `<out>/sweep.json`.
SweepTable sweep(const ScenarioConfig& base, const std::vector<GridPoint>& grid, std::uint64_t shared_seed);

/// Header `beta,gamma,r0,rho_M,regime,x_bar,x_final_max,bound_holds`;
/// unavailable cells are empty.
void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path);
nlohmann::json to_json(const SweepTable& table);

}  // namespace sisctl
