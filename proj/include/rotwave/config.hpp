#pragma once

#include "rotwave/model.hpp"
#include "rotwave/pde_freeze.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace rotwave {

inline constexpr const char* kVersion = "rotwave 0.1.0";

/// Invalid input or config (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown at run time (CLI exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // model
    std::string model_name = "qcgl";
    QCGLParams params;
    // pde
    double R = 20.0;
    double dx = 0.25;
    double dt = 0.005;
    double t_sim = 150.0;
    double t_freeze = 400.0;  // absolute end time of the frozen stage
    Scheme scheme = Scheme::imex_bdf2;
    // spectral
    double sigma = -1.0;
    int neigs = 40;
    int krylov_dim = 0;  // 0: solver default
    double tol = 1e-10;
    // decay
    double window_lo = 5.0;
    double window_hi = 13.0;
    double dir_x = 0.0, dir_y = 1.0;
    std::vector<double> p_list{2.0};
    double eps = 0.5;

    std::string out_dir = "out";
};

/// Fully defaulted config from a JSON object; unknown keys are rejected.
RunConfig parse_config_json(const nlohmann::json& j);

/// Reads and parses the file at path; empty path yields pure defaults.
RunConfig parse_config(const std::string& path);

nlohmann::json config_to_json(const RunConfig& cfg);

/// FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

void validate(const RunConfig& cfg);  // throws ConfigError

}  // namespace rotwave
