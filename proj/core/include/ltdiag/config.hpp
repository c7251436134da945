#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace ltdiag {

// Pipeline parameters. Read from an INI file with sections [problem],
// [variational], [certify], [cutoff] and [output]; command-line flags override
// the file.
struct PipelineConfig {
  int d = 1;
  double s = 1.0;
  int k = 2;
  int n_particles = 2;
  int grid = 64;
  std::uint64_t seed = 0;

  // variational
  std::string family = "slater";
  int basis_size = 1;
  double halo = 1.0;

  // certify
  std::string lambda_rule = "2^d*q+1";
  std::string density = "two_bump";  // named family or a grid manifest path
  double mass = 6.0;
  std::string c1 = "measured";       // "measured" or a number
  std::string energy_table;          // JSON table file; empty propagates a measured base
  int table_max = 64;
  int c1_samples = 20;

  // cutoff
  std::string variant = "plain";

  std::string out_dir = ".";

  void validate() const;
  nlohmann::json to_json() const;
};

PipelineConfig load_config(const std::string& path);
// Loads over an existing configuration (keys absent from the file keep their values).
void merge_config_file(PipelineConfig& cfg, const std::string& path);

}  // namespace ltdiag
