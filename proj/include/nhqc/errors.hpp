#pragma once
// Error taxonomy. Everything user-facing derives from Error so the CLI can
// map failure classes onto exit codes (config = 2, numerical = 3).

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nhqc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- parameter / model construction -------------------------------------

struct InvalidParameter : Error {
    using Error::Error;
};

// A qubit sits exactly on the coupler frequency; the dispersive coupler
// shift g^2/(omega_q - omega_c) is undefined there.
struct DegenerateDetuning : InvalidParameter {
    using InvalidParameter::InvalidParameter;
};

// The resonator loss enters as a divisor (Omega_n, Gamma_j, the eliminated
// photon pole), so gamma_a must be strictly positive.
struct NonPositiveResonatorLoss : InvalidParameter {
    using InvalidParameter::InvalidParameter;
};

// --- numerics -------------------------------------------------------------

// A cross-check between two independent computations of the same quantity
// exceeded its pinned tolerance.
struct ResidualCheckFailed : Error {
    using Error::Error;
};

// The evolving state left the finite range; step is the integrator step at
// which the check tripped.
struct NonFiniteState : Error {
    NonFiniteState(const std::string& msg, std::size_t step_index)
        : Error(msg + " (step " + std::to_string(step_index) + ")"), step(step_index) {}
    std::size_t step;
};

// Both eigenmodes decay at the same rate; "the long-lived mode" is not a
// well-posed selection.
struct DegenerateDecay : Error {
    using Error::Error;
};

// Mode tracking by qubit-subspace weight found no clear second qubit-like
// eigenvector (weight below 0.5).
struct SlowModeAmbiguity : Error {
    using Error::Error;
};

// --- configuration ----------------------------------------------------------

struct ConfigError : Error {
    ConfigError(const std::string& msg, int line_no = 0, int col_no = 0)
        : Error(msg), line(line_no), col(col_no) {}
    int line;
    int col;
};

struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

struct UnknownKey : ConfigError {
    UnknownKey(const std::string& bad_key, const std::string& nearest, int line_no)
        : ConfigError("unknown key '" + bad_key + "'" +
                          (nearest.empty() ? std::string()
                                           : " (did you mean '" + nearest + "'?)"),
                      line_no),
          key(bad_key),
          suggestion(nearest) {}
    std::string key;
    std::string suggestion;
};

}  // namespace nhqc
