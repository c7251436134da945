#include "ltdiag/config.hpp"

#include <cmath>
#include <filesystem>
#include <type_traits>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ltdiag/grid.hpp"
#include "ltdiag/types.hpp"

namespace ltdiag {

void PipelineConfig::validate() const {
  if (d < 1 || d > 3) throw Error("config: d must be 1, 2 or 3");
  if (!(s > 0.0)) throw Error("config: s must be positive");
  if (k < 2) throw Error("config: k must be at least 2");
  if (n_particles < 1) throw Error("config: N must be at least 1");
  if (grid < 2) throw Error("config: grid must have at least 2 points");
  check_desk_limit(d * n_particles, grid);
  if (basis_size < 1) throw Error("config: basis_size must be positive");
  if (!(halo >= 0.0)) throw Error("config: halo must be non-negative");
  if (!(mass > 0.0)) throw Error("config: mass must be positive");
  if (table_max < 1) throw Error("config: table_max must be positive");
  if (c1_samples < 1) throw Error("config: c1_samples must be positive");
  if (lambda_rule != "2^d*q+1") throw Error("config: unsupported lambda_rule '" + lambda_rule + "'");
  if (c1 != "measured") {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(c1, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != c1.size() || !(v > 0.0)) throw Error("config: c1 must be 'measured' or a positive number");
  }
  if (!energy_table.empty() && !std::filesystem::exists(energy_table)) {
    throw Error("config: energy table file not found: " + energy_table);
  }
  if (density != "two_bump" && density != "one_bump" && !std::filesystem::exists(density)) {
    throw Error("config: density must be two_bump, one_bump or an existing manifest, got '" + density + "'");
  }
}

nlohmann::json PipelineConfig::to_json() const {
  return {{"d", d},
          {"s", s},
          {"k", k},
          {"N", n_particles},
          {"grid", grid},
          {"seed", seed},
          {"family", family},
          {"basis_size", basis_size},
          {"halo", halo},
          {"lambda_rule", lambda_rule},
          {"density", density},
          {"mass", mass},
          {"c1", c1},
          {"energy_table", energy_table},
          {"table_max", table_max},
          {"c1_samples", c1_samples},
          {"variant", variant},
          {"out_dir", out_dir}};
}

void merge_config_file(PipelineConfig& cfg, const std::string& path) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(path, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error("config: cannot read " + path + ": " + e.message());
  }
  // a present key must parse; absent keys keep the current value
  auto read = [&](const char* key, auto& field) {
    if (const auto node = pt.get_child_optional(key)) {
      using T = std::decay_t<decltype(field)>;
      try {
        field = node->get_value<T>();
      } catch (const boost::property_tree::ptree_bad_data&) {
        throw Error("config: bad value for " + std::string(key) + " in " + path + ": '" + node->data() + "'");
      }
    }
  };
  read("problem.d", cfg.d);
  read("problem.s", cfg.s);
  read("problem.k", cfg.k);
  read("problem.N", cfg.n_particles);
  read("problem.grid", cfg.grid);
  read("problem.seed", cfg.seed);
  read("variational.family", cfg.family);
  read("variational.basis_size", cfg.basis_size);
  read("variational.halo", cfg.halo);
  read("certify.lambda_rule", cfg.lambda_rule);
  read("certify.density", cfg.density);
  read("certify.mass", cfg.mass);
  read("certify.c1", cfg.c1);
  read("certify.energy_table", cfg.energy_table);
  read("certify.table_max", cfg.table_max);
  read("certify.c1_samples", cfg.c1_samples);
  read("cutoff.variant", cfg.variant);
  read("output.dir", cfg.out_dir);
  // relative file references are taken from the config file's directory
  const auto base = std::filesystem::path(path).parent_path();
  auto rebase = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative() && p != "two_bump" && p != "one_bump") {
      p = (base / p).string();
    }
  };
  rebase(cfg.energy_table);
  rebase(cfg.density);
}

PipelineConfig load_config(const std::string& path) {
  PipelineConfig cfg;
  merge_config_file(cfg, path);
  return cfg;
}

}  // namespace ltdiag
