#pragma once

#include <string>
#include <vector>

#include "dirac/core.hpp"
#include "dirac/dirac_op.hpp"
#include "dirac/localization.hpp"

#include <nlohmann/json_fwd.hpp>

namespace dirac {

// Run configuration: model constants, k-plane domain, potential family,
// truncation and search controls. Loaded from a documented JSON file.
struct RunConfig {
  ModelParams model;
  KDomainParams domain;
  PotentialSpec potential;
  TruncationScheme truncation;
  FindZerosOptions search;
  int sign_m = +1;
  // sector / cluster / bounds extras
  double sector_eps_hi = 0.5;
  int sector_bisection_steps = 3;
  int cluster_ell_max = 2;
  double bounds_q = 4.0;
  double bounds_tau = 1.0;
  std::vector<double> bounds_im_grid = {0.1, 0.05, 0.02, 0.01};
  std::vector<double> annulus_r = {0.14, 0.10, 0.06, 0.03};
  unsigned long seed = 0;
  int threads = 1;

  void validate() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json config_snapshot(const RunConfig& cfg);

}  // namespace dirac
