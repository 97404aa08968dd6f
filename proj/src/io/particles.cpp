#include "ripple/io/particles.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "ripple/core/error.hpp"
#include "ripple/io/csv.hpp"

namespace ripple {

namespace {

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&v, bytes, sizeof(T));
    return v;
  }
}

template <typename T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::filesystem::path& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(path.string() + ": truncated particle file");
  return to_little(v);
}

}  // namespace

void write_particles_csv(const ParticleSet& particles, std::span<const Transform> transforms,
                         const std::filesystem::path& path) {
  if (static_cast<Eigen::Index>(transforms.size()) != particles.dim()) {
    throw std::invalid_argument("write_particles_csv: transform count mismatch");
  }
  write_csv(path, particles.param_names(), to_constrained(particles.values(), transforms));
}

ParticleSet read_particles_csv(const std::filesystem::path& path, std::span<const Transform> transforms,
                               int stage) {
  const CsvTable table = read_csv(path);
  if (static_cast<Eigen::Index>(transforms.size()) != table.values.cols()) {
    throw Error(path.string() + ": expected " + std::to_string(transforms.size()) + " parameter columns, found " +
                std::to_string(table.values.cols()));
  }
  return ParticleSet(to_unconstrained(table.values, transforms), table.header, stage);
}

void write_particles_binary(const ParticleSet& particles, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kParticleMagic, 4);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(particles.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(particles.dim()));
  const RowMatrix rows = particles.values();
  for (Eigen::Index i = 0; i < rows.size(); ++i) put<double>(out, rows.data()[i]);
  if (!out) throw Error("error writing " + path.string());
}

ParticleSet read_particles_binary(const std::filesystem::path& path, std::vector<std::string> names,
                                  int stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kParticleMagic, 4) != 0) throw Error(path.string() + ": bad particle file magic");
  const auto m = get<std::uint64_t>(in, path);
  const auto p = get<std::uint32_t>(in, path);
  RowMatrix rows(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < rows.size(); ++i) rows.data()[i] = get<double>(in, path);
  if (names.empty()) names = default_param_names(static_cast<Eigen::Index>(p));
  return ParticleSet(Matrix(rows), std::move(names), stage);
}

void write_particles(const ParticleSet& particles, std::span<const Transform> transforms,
                     const std::filesystem::path& path) {
  if (path.extension() == ".bin") write_particles_binary(particles, path);
  else write_particles_csv(particles, transforms, path);
}

ParticleSet read_particles(const std::filesystem::path& path, std::span<const Transform> transforms,
                           const std::vector<std::string>& names, int stage) {
  if (path.extension() == ".bin") return read_particles_binary(path, names, stage);
  return read_particles_csv(path, transforms, stage);
}

}  // namespace ripple
