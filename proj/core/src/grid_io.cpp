#include "ltdiag/grid_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace ltdiag {

static_assert(std::endian::native == std::endian::little, "grid files are little-endian");

namespace {

namespace fs = std::filesystem;

fs::path data_path_for(const fs::path& manifest, const std::string& data_file) {
  if (!data_file.empty()) return data_file;
  return manifest.filename().replace_extension(".bin");
}

void write_manifest(const fs::path& manifest, nlohmann::json j) {
  std::ofstream out(manifest);
  if (!out) throw Error("cannot write manifest " + manifest.string());
  out << j.dump(2) << '\n';
}

nlohmann::json read_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error("cannot open manifest " + manifest.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed manifest " + manifest.string() + ": " + e.what());
  }
}

std::vector<double> read_raw(const fs::path& file, std::size_t n_doubles) {
  std::ifstream in(file, std::ios::binary | std::ios::ate);
  if (!in) throw Error("cannot open data file " + file.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != n_doubles * sizeof(double)) {
    throw Error("data file " + file.string() + " has " + std::to_string(bytes) + " bytes, expected " +
                std::to_string(n_doubles * sizeof(double)));
  }
  in.seekg(0);
  std::vector<double> buf(n_doubles);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
  return buf;
}

void write_raw(const fs::path& file, const std::vector<double>& buf) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write data file " + file.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
}

}  // namespace

void write_grid_function(const GridFunction& psi, const fs::path& manifest, const std::string& data_file) {
  const fs::path rel = data_path_for(manifest, data_file);
  const bool complex = psi.value_type() == ValueType::c128;
  std::vector<double> buf;
  buf.reserve(psi.size() * (complex ? 2 : 1));
  for (const auto& v : psi.values()) {
    buf.push_back(v.real());
    if (complex) buf.push_back(v.imag());
  }
  write_raw(manifest.parent_path() / rel, buf);
  write_manifest(manifest, {{"dim", psi.dim()},
                            {"n_particles", psi.n_particles()},
                            {"per_axis_points", psi.points()},
                            {"corner", psi.domain().corner()},
                            {"side", psi.domain().side()},
                            {"dtype", complex ? "c128" : "f64"},
                            {"data_file", rel.string()},
                            {"periodic", psi.kind() == GridKind::periodic}});
}

GridFunction read_grid_function(const fs::path& manifest) {
  const auto j = read_manifest(manifest);
  try {
    const int dim = j.at("dim").get<int>();
    const std::string dtype = j.at("dtype").get<std::string>();
    if (dtype != "f64" && dtype != "c128") throw Error("unknown dtype '" + dtype + "'");
    const bool complex = dtype == "c128";
    const GridKind kind = j.value("periodic", false) ? GridKind::periodic : GridKind::closed;
    GridFunction psi(j.at("n_particles").get<int>(), j.at("per_axis_points").get<int>(),
                     CubeDomain(dim, j.at("corner").get<std::vector<double>>(), j.at("side").get<double>()), kind,
                     complex ? ValueType::c128 : ValueType::f64);
    const auto buf = read_raw(manifest.parent_path() / j.at("data_file").get<std::string>(),
                              psi.size() * (complex ? 2 : 1));
    for (std::size_t i = 0; i < psi.size(); ++i) {
      psi[i] = complex ? cplx(buf[2 * i], buf[2 * i + 1]) : cplx(buf[i], 0.0);
    }
    return psi;
  } catch (const nlohmann::json::exception& e) {
    throw Error("manifest " + manifest.string() + ": " + e.what());
  }
}

void write_density(const DensityGrid& rho, const fs::path& manifest) {
  GridFunction g(1, rho.points, rho.domain, rho.kind);
  for (std::size_t i = 0; i < rho.values.size(); ++i) g[i] = rho.values[i];
  write_grid_function(g, manifest);
}

DensityGrid read_density(const fs::path& manifest) {
  const GridFunction g = read_grid_function(manifest);
  if (g.n_particles() != 1 || g.value_type() != ValueType::f64) {
    throw Error("density file must hold a real one-particle grid");
  }
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = g[i].real();
  return DensityGrid::from_values(g.domain(), g.points(), std::move(v), g.kind());
}

}  // namespace ltdiag
