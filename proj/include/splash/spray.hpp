#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "splash/grid.hpp"
#include "splash/params.hpp"
#include "splash/surface.hpp"

namespace splash {

struct Particle {
    double x, y, z;     // m
    double vx, vy, vz;  // m/s
    double volume;      // m^3, constant for the particle's lifetime
};

/// Ballistic droplet pool. All particles share the scene's particle_volume,
/// so volume bookkeeping is exact integer counting: every spawn debits four
/// columns by one quarter-volume each, every reabsorption credits one column
/// with four quarters. airborne_volume()/destroyed_volume() rebuild the
/// ledger numbers from those counts with a single rounding each.
struct SprayPool {
    std::vector<Particle> particles;
    std::mt19937_64 rng;

    std::int64_t spawned_count = 0;
    std::int64_t reabsorbed_count = 0;
    std::int64_t destroyed_count = 0;
    std::int64_t debited_quarters = 0;   // lifetime column debits, particle_volume/4 units
    std::int64_t credited_quarters = 0;  // lifetime column credits, same unit

    explicit SprayPool(std::uint64_t seed = 0) : rng(seed) {}

    double airborne_volume(const FluidParams& p) const {
        return double(particles.size()) * p.particle_volume;
    }
    double destroyed_volume(const FluidParams& p) const {
        return double(destroyed_count) * p.particle_volume;
    }
};

namespace spray {

struct SpawnReport {
    std::int64_t spawned = 0;
    std::int64_t capped = 0;  // particles requested but not spawned (volume cap)
};

/// Spawn particles at every mesh point whose vertical surface velocity
/// exceeds the threshold. Count per point: ceil(spawn_fraction *
/// (z_dot - threshold) / threshold). Each particle starts uniformly at random
/// inside the point's dx-by-dy cell, on the (bilinear) surface, with the
/// bilinear surface velocity, and debits the point's four columns by a
/// quarter-volume each. Spawning at a point stops when any of its columns
/// cannot cover the next quarter; the remaining particles are dropped.
SpawnReport spawn(SprayPool& pool, const SurfaceMesh& mesh, ColumnGrid& grid,
                  const FluidParams& p);

/// Advance every particle by one step of exact constant-acceleration
/// kinematics under gravity; no interaction.
void integrate(SprayPool& pool, const FluidParams& p);

struct AbsorbReport {
    std::int64_t reabsorbed = 0;
    std::int64_t destroyed = 0;
};

/// Remove particles that fell back into the fluid (crediting the containing
/// column) or hit the ground plane outside the grid (logging the loss).
AbsorbReport reabsorb(SprayPool& pool, ColumnGrid& grid, const SurfaceMesh& mesh,
                      const FluidParams& p, double ground_z);

/// Uniform draw in [0, 1) from the top 53 bits of one generator output; kept
/// explicit so streams are identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace spray
}  // namespace splash
