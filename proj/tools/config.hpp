#pragma once

#include "talenti/compare.hpp"
#include "talenti/report.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace talenti::cli {

/// Malformed or invalid configuration; the CLI exits with status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string name = "case";
    AnisotropicNorm norm = AnisotropicNorm::euclidean(2);
    double raw_scale = 1.0;  ///< scale before normalization
    bool normalized = false;
    std::optional<double> beta;
    DomainSpec domain;
    LoadSpec f = std::vector<double>{1.0};
    std::optional<std::string> f_field;  ///< nodal values file, read against the mesh
    int refine = 0;
    SolveOptions solver;
    EigenOptions eigen;
    std::uint64_t seed = 0;
    int samples = 1000;
    int csv_samples = 200;
    bool with_eigen = false;

    double radius = 1.0;
    std::optional<PiecewiseLinear> fstar;

    std::vector<double> radii;
    std::vector<double> loads;

    Json source;  ///< the configuration as read
};

/// Parse and validate a configuration for `command`. Every object is checked
/// against its allowed keys; norms are constructed here, so an unsupported
/// gauge is a configuration error.
RunConfig parse_config(const Json& j, const std::string& command);

RunConfig load_config(const std::string& path, const std::string& command);

}  // namespace talenti::cli
