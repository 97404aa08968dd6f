#pragma once

#include <filesystem>
#include <span>

#include "ripple/models/model.hpp"
#include "ripple/smoothing/particle_set.hpp"

namespace ripple {

// Particle CSV: header = parameter names, one row per particle, values on the
// natural (constrained) scale, 17 significant digits.
void write_particles_csv(const ParticleSet& particles, std::span<const Transform> transforms,
                         const std::filesystem::path& path);
ParticleSet read_particles_csv(const std::filesystem::path& path, std::span<const Transform> transforms,
                               int stage = 1);

// Raw binary: 16-byte header ("RPB1", M as uint64, P as uint32, all
// little-endian) followed by M*P little-endian doubles in row-major order.
// Values are stored exactly as held (unconstrained scale); names are not
// stored, so the reader takes them from the caller (default theta1..thetaP).
inline constexpr char kParticleMagic[4] = {'R', 'P', 'B', '1'};
void write_particles_binary(const ParticleSet& particles, const std::filesystem::path& path);
ParticleSet read_particles_binary(const std::filesystem::path& path,
                                  std::vector<std::string> names = {}, int stage = 1);

// Dispatch on extension: ".bin" is binary, anything else is CSV.
void write_particles(const ParticleSet& particles, std::span<const Transform> transforms,
                     const std::filesystem::path& path);
ParticleSet read_particles(const std::filesystem::path& path, std::span<const Transform> transforms,
                           const std::vector<std::string>& names = {}, int stage = 1);

}  // namespace ripple
