#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ltdiag/config.hpp"
#include "ltdiag/grid.hpp"

namespace ltdiag {

// Compactly supported test densities on the unit cube, normalized to `mass`:
// "one_bump" (centre 1/2) and "two_bump" (centres 0.3 and 0.7 along axis 0).
DensityGrid named_density(const std::string& name, int d, double mass, int points);

// Largest minimal local-uncertainty constant over `samples` random smooth
// normalized two-particle states on the unit cube and its dyadic children.
double measure_c1(int d, double s, int points, int samples, std::uint64_t seed);

// <Psi, sum (-Delta)^s Psi> against int rho^{1+2s/d} for a named family
// (bosonic, slater, jastrow).
nlohmann::json cmd_lt_ratio(const PipelineConfig& cfg);

// Covering, energy table and constant assembly with a provenance record. The
// only time-dependent field is "timestamp".
nlohmann::json cmd_certify(const PipelineConfig& cfg);

std::string utc_timestamp();

}  // namespace ltdiag
