#pragma once
// Run configuration: a flat "key = value" plaintext format with '#'
// comments, full-key override strings (--set), and the reference working
// point baked into the zero-argument RunConfig. Unknown keys are hard errors
// with a nearest-key suggestion; suspicious magnitudes produce warnings.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nhqc/dynamics.hpp"
#include "nhqc/spectrum.hpp"

namespace nhqc {

struct ScanConfig {
    Axis axis1{Axis::GeDirect};
    double a1_min{-3.0}, a1_max{3.0};
    int n1{201};
    std::vector<double> a1_values;  // overrides min/max/n when nonempty
    Axis axis2{Axis::DeltaTheta};
    double a2_min{0.0}, a2_max{kPi};
    int n2{201};
    std::vector<double> a2_values;
};

struct EpConfig {
    double tol_disc{1e-9};
    int max_bisect{80};
};

struct OracleConfig {
    std::vector<double> gamma_a_schedule{65.0, 130.0, 260.0, 520.0};
    bool with_coupler{false};
    double gamma_c{0.0};
};

struct RunConfig {
    CircuitParams circuit;  // defaults are the reference working point
    std::optional<double> ge_override;
    ScanConfig scan;
    EpConfig ep;
    EvolveSpec evolve;
    OracleConfig oracle;
    std::string output_path{"out.csv"};
    std::string format{"csv"};  // csv | json
    int threads{1};
    std::uint64_t seed{20260818};
    std::vector<std::string> warnings;  // unit-sanity notes collected while parsing
};

// All recognized keys, for documentation and the selftest echo.
const std::vector<std::string>& config_keys();

// Parses a whole document on top of base. Throws ParseError (with line and
// column), UnknownKey (with nearest-key suggestion), or ConfigError when a
// value violates a parameter invariant.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig parse_config_file(const std::string& path, RunConfig base = {});

// One "key=value" override, highest precedence. Line number 0 in errors.
void apply_override(RunConfig& cfg, const std::string& key_eq_value);

// Resolved axes (explicit value lists win over min/max/n).
AxisSpec resolved_axis1(const RunConfig& cfg);
AxisSpec resolved_axis2(const RunConfig& cfg);

// "key = value" echo lines of the fully-resolved configuration, stable order.
std::vector<std::string> echo_config(const RunConfig& cfg);

}  // namespace nhqc
