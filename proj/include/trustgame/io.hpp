#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trustgame/params.hpp"
#include "trustgame/simulate.hpp"
#include "trustgame/solution.hpp"

namespace trustgame {

inline constexpr const char* kToolName = "trustgame";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { Solve, Check, Simulate, Sweep };

const char* to_string(Command c);

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    enum class Spacing { Linear, Log } spacing = Spacing::Linear;

    std::vector<double> points() const;
    bool operator==(const GridSpec&) const = default;
};

struct RunConfig {
    ModelParams params{};
    Command command = Command::Solve;
    std::optional<EqClass> class_filter;
    SimConfig sim{};
    std::optional<GridSpec> sweep_k;
    std::optional<GridSpec> sweep_u;
    std::string output = "out";
    bool fmt_csv = true;
    bool fmt_json = true;
    // test hook: scales sigma* before the check-report residuals
    double debug_sigma_scale = 1.0;

    bool operator==(const RunConfig& o) const;
};

// Strict-schema JSON config: unknown keys are rejected, every numeric field
// must be finite, and validate_params applies. Defaults are filled so the
// result round-trips through emit_resolved_config.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);
std::string emit_resolved_config(const RunConfig& cfg);

// 17 significant digits: re-reading reproduces the double bit-exactly.
std::string fmt17(double v);

int run_solve(const RunConfig& cfg);
int run_check(const RunConfig& cfg);
int run_simulate(const RunConfig& cfg);
int run_sweep(const RunConfig& cfg);
int run_command(const RunConfig& cfg);

}  // namespace trustgame
