#pragma once

/// @file config.hpp
/// @brief The keyed plain-text run configuration.
///
/// One `key = value` per line, `#` starts a comment. Lists are separated by
/// spaces, and lists of points by `;`. `version = 1` is required and unknown
/// keys are errors.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ymflow/errors.hpp"
#include "ymflow/flow.hpp"
#include "ymflow/spacetime.hpp"

namespace ymflow {

/// Invalid configuration; `line` is 0 when the problem is a missing key.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string source, int line, std::string field, const std::string& message);
  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  int line_;
  std::string field_;
};

enum class DataKind { Flat, AbelianMode, Instanton, Vortex, Random, File, SyntheticDensity };

struct RunConfig {
  int version = 1;
  int n = 4, N = 16;
  double L = 1.0;
  int m = 3;

  DataKind data = DataKind::Flat;
  std::vector<double> k, v;        ///< abelian-mode
  double epsilon = 0.1;            ///< abelian-mode
  double rho = 0.0;                ///< instanton
  Point center;                    ///< instanton, vortex, synthetic-density
  double support = 0.0;            ///< instanton
  double radius = 0.0;             ///< vortex
  double amplitude = 1.0;          ///< vortex, random, synthetic-density
  int modes = 4;                   ///< random
  std::string path;                ///< file
  std::string profile = "self-similar";  ///< synthetic-density
  double blowup_time = 0.0;        ///< synthetic-density

  double t_end = 0.01;
  Cadence cadence = Cadence::uniform(0.001);
  double c_cfl = 0.2;
  double fixed_dt = 0.0;
  int threads = 1;
  std::uint64_t seed = 1;
  std::string output = "out";
  /// Directory written by `run`; analysis commands read it instead of
  /// integrating the flow again.
  std::string trajectory;

  std::vector<SpacetimePoint> entropy_centers;
  std::vector<double> entropy_radii;
  double entropy_iota = 0.0;  ///< 0 means phi = 1
  double entropy_tol = 1e-6;
  int entropy_intervals = 32;
  bool entropy_soliton = false;
  double c_max = 64.0;

  SpacetimePoint blowup_center;
  std::vector<double> blowup_lambdas;
  int blowup_samples = 8;
  double blowup_radius = 0.0;  ///< entropy scaling radius, 0 skips it
  double tangent_radius = 1.0, tangent_depth = 1.0;
  int tangent_layers = 16, tangent_cells = 16;

  std::vector<double> scan_epsilons;
  std::vector<double> scan_radii;
  int scan_stride = 1;
  std::vector<double> scan_times;
  double scan_time_stride = 0.0;
  double scan_delta = 0.5;
  std::vector<double> box_radii;

  std::string stratify_input;
  double stratify_tol = 1e-6;

  double gradient_tol = 1e-6;
  double energy_tol = 1e-10;
  double dilation_tol = 1e-10;
  int verify_samples = 4;

  /// Name of the input, used in error messages.
  std::string source = "config";
  /// Keys exactly as given, for the manifest.
  std::map<std::string, std::string> raw;
};

/// Parses and validates a configuration. `source` names the input in errors.
RunConfig parse_config(std::istream& is, const std::string& source = "config");
RunConfig load_config(const std::string& path);

/// The tolerance-like keys with their effective values, for the manifest.
std::map<std::string, double> config_tolerances(const RunConfig& c);

}  // namespace ymflow
