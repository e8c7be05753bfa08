#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icb/model.hpp"

namespace icb {

struct DomainSpec {
  double phi_max = 8.0;
  double v_max = 15.0;
  double b_theta = 8.0;
  double penetration = 0.1;
  std::optional<double> lambda_max;  // unset: m*(v_max + a_grav*dt)
  std::optional<double> b_lambda;    // unset: automatic
  bool operator==(const DomainSpec&) const = default;
};

struct DatasetSpec {
  std::size_t n = 100;
  double contact_bias = 0.5;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  bool operator==(const DatasetSpec&) const = default;
};

struct TrainerSpec {
  std::vector<std::string> losses{"explicit", "naive_implicit", "violation_implicit"};
  double step = 1e-3;
  std::size_t iterations = 50000;
  std::optional<double> init;  // unset: random in theta_true +- 1
  std::size_t patience = 1000;
  bool operator==(const TrainerSpec&) const = default;
};

struct SweepSpec {
  double theta_min = -1.0;
  double theta_max = 1.0;
  std::size_t theta_points = 201;
  std::vector<double> n_values{10, 30, 100, 300, 1000, 3000, 10000, 30000, 100000, 300000, 1000000};
  std::vector<double> delta_values{0.001, 0.01, 0.05, 0.1, 0.2, 0.5, 0.9};
  double delta = 0.05;   // held fixed in the n sweep
  double n = 1000;       // held fixed in the delta sweep; also the reference n for the sample-size ratio
  double k = 1;
  bool operator==(const SweepSpec&) const = default;
};

struct QGSpec {
  std::size_t samples = 10000;
  bool operator==(const QGSpec&) const = default;
};

/// Everything a CLI run needs. Serialized as JSON; "epsilon" is a number or
/// the string "auto" (min(1/4, m^2/2)).
struct ExperimentConfig {
  ModelParams model;
  DomainSpec domain;
  std::optional<double> epsilon;  // unset: auto
  DatasetSpec dataset;
  TrainerSpec trainer;
  SweepSpec sweeps;
  QGSpec qg;
  std::string output_dir;  // empty: ICB_OUTPUT_DIR, then "icb_out"
  std::uint64_t seed = 7;

  Epsilon resolved_epsilon() const;
  DomainBounds domain_bounds() const;
  std::filesystem::path resolved_output_dir() const;
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigError on malformed JSON, unknown keys, or invalid values.
ExperimentConfig parse_config(std::string_view text);
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64 of the serialized config without output_dir, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace icb
