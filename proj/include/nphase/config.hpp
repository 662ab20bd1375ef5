#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nphase/ensemble.hpp"
#include "nphase/integrate.hpp"
#include "nphase/params.hpp"
#include "nphase/stationary.hpp"

namespace nphase {

/// Configuration problem with the offending field path in what().
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Accepts a plain number (ordinary frequency in Hz) or a string like
/// "2pi*20MHz", "-2pi*70 kHz", "1.5GHz", "3.2e5 rad/s".  Returns rad/s.
double parse_frequency(const nlohmann::json& value, const std::string& path);
double parse_frequency_string(const std::string& text, const std::string& path);

/// Exact-round-trip serialization ("<value> rad/s").
std::string frequency_to_string(double rad_per_s);

struct GridSpec {
    double from = 0.0;  // rad/s
    double to = 0.0;
    int count = 2;
    std::vector<double> values() const;
};

struct ContourSpec {
    double omega_pump = 0.0;
    double delta_pc = 0.0;
    double lo = -1.6;
    double hi = 1.6;
    int samples = 161;
};

struct LyapunovSpec {
    double lo = -1.55;
    double hi = 1.55;
    int grid_per_dim = 5;
    double max_norm = M_PI;
};

struct RunConfig {
    PhysicalParams params;
    std::uint64_t seed = 0;
    std::string output_dir;
    std::vector<std::string> formats{"csv", "json", "svg"};
    int threads = 1;

    std::optional<IntegratorControls> integrator;
    std::optional<double> t_end_seconds;  // set when the horizon came in seconds
    std::optional<EnsembleSpec> ensemble;
    std::optional<SearchRegion> search;
    std::optional<GridSpec> grid_omega;
    std::optional<GridSpec> grid_delta_pc;
    std::vector<double> linecuts;              // delta_pc values, rad/s
    std::optional<GridSpec> linecut_omega;
    std::vector<ContourSpec> contours;
    LyapunovSpec lyapunov;
    double cluster_radius_frac = 0.1;
    std::optional<double> varphi;  // two-group phase for the heff report

    static RunConfig from_json(const nlohmann::json& doc);
    static RunConfig load(const std::string& path);
    nlohmann::json to_json() const;
};

}  // namespace nphase
