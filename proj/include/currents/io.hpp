#pragma once

#include <currents/ambient_basis.hpp>
#include <currents/flatnorm.hpp>
#include <currents/scenarios.hpp>
#include <currents/spectral.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace currents {

using Json = nlohmann::json;

/// A malformed configuration; `path` is the JSON pointer of the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path))
    {
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

///
/// {"ambient_dim", "dim", "vertices", "simplices", "multiplicities", "mass"}.
/// Simplices are written in ascending vertex order; faces are rebuilt on load.
///
Json chain_to_json(const Chain& chain);
Chain chain_from_json(const Json& j);

/// {"value", "U", "V"}.
Json certificate_to_json(const FlatNormCertificate& cert);

/// {"values" (finite only), "inf_count", "method", "bc"}; the +inf entries
/// follow the listed values in k-order.
Json spectrum_to_json(const SpectralResult& result);

/// Two-space indented dump with a trailing newline.
std::string dump_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

struct BasisSpec {
    std::string kind = "spline";
    std::optional<Box> box;  // spline; default is the inflated bounding box
    std::vector<int> cells;  // spline; one entry repeats on every axis
    int degree = 3;
    Matrix centers;          // rbf, N x count
    double width = 0.0;      // rbf
};

struct StudySpec {
    std::string family;
    std::vector<double> grid;
    int k = 0;          // 0 picks the family default
    int resolution = 0; // 0 picks the family default
};

/// Union of the per-command parameter records.
struct RunConfig {
    std::optional<ScenarioSpec> scenario;
    std::string input;        // chain JSON
    std::string input_b;      // second chain for flat distance
    std::optional<ScenarioSpec> host;
    std::string host_input;   // host chain JSON
    std::string method = "intrinsic";
    std::string bc = "closed";
    int k = 3;
    double epsilon = 0.02;
    std::optional<BasisSpec> basis;
    std::optional<StudySpec> study;
    std::uint64_t seed = 1;
};

/// Throws ConfigError with the field path.
RunConfig config_from_json(const Json& j);
Json config_to_json(const RunConfig& cfg);

AmbientBasis make_basis(const BasisSpec& spec, const Chain& chain);
BoundaryCondition parse_bc(const std::string& name, const std::string& path = "/bc");

/// Host complex of a flat-norm configuration: square, strip, annulus, or any scenario.
ComplexPtr make_host(const ScenarioSpec& spec);

} // namespace currents
