#pragma once

#include <filesystem>

#include "ltdiag/grid.hpp"

namespace ltdiag {

// Manifest {dim, n_particles, per_axis_points, corner, side, dtype, data_file[, periodic]}
// next to a raw little-endian row-major sample file. data_file is resolved
// relative to the manifest's directory.
void write_grid_function(const GridFunction& psi, const std::filesystem::path& manifest,
                         const std::string& data_file = {});
GridFunction read_grid_function(const std::filesystem::path& manifest);

// Densities use the same container with n_particles = 1 and dtype f64.
void write_density(const DensityGrid& rho, const std::filesystem::path& manifest);
DensityGrid read_density(const std::filesystem::path& manifest);

}  // namespace ltdiag
