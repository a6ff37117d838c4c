#include "splash/spray.hpp"

#include <algorithm>
#include <cmath>

namespace splash::spray {

SpawnReport spawn(SprayPool& pool, const SurfaceMesh& mesh, ColumnGrid& grid,
                  const FluidParams& p) {
    SpawnReport rep;
    const int mx = mesh.mx, my = mesh.my;

    // Fast path: nothing anywhere near the threshold (the common case).
    bool any = false;
    for (double zd : mesh.z_dot) {
        if (zd > p.spray_threshold) {
            any = true;
            break;
        }
    }
    if (!any) return rep;

    const double quarter = p.particle_volume * 0.25;
    std::vector<double> avail = grid.V;               // working copy, never negative
    std::vector<std::int32_t> debit(avail.size(), 0);  // quarters per column

    for (int j = 0; j < my; ++j) {
        for (int i = 0; i < mx; ++i) {
            double zd = mesh.z_dot[mesh.idx(i, j)];
            if (!(zd > p.spray_threshold)) continue;
            auto requested = static_cast<std::int64_t>(
                std::ceil(p.spawn_fraction * (zd - p.spray_threshold) / p.spray_threshold));
            if (requested < 1) requested = 1;

            const std::size_t cols[4] = {grid.idx(i, j), grid.idx(i + 1, j),
                                         grid.idx(i, j + 1), grid.idx(i + 1, j + 1)};
            double px0 = mesh.point_x(i, p);
            double py0 = mesh.point_y(j, p);

            for (std::int64_t k = 0; k < requested; ++k) {
                bool covered = avail[cols[0]] >= quarter && avail[cols[1]] >= quarter &&
                               avail[cols[2]] >= quarter && avail[cols[3]] >= quarter;
                if (!covered) {
                    rep.capped += requested - k;
                    break;
                }
                for (std::size_t c : cols) {
                    avail[c] -= quarter;
                    debit[c] += 1;
                }
                double u = uniform01(pool.rng);
                double v = uniform01(pool.rng);
                Particle part;
                part.x = px0 + (u - 0.5) * p.dx;
                part.y = py0 + (v - 0.5) * p.dy;
                part.z = surface::sample_mesh(mesh, mesh.z, part.x, part.y, p);
                part.vx = surface::sample_mesh(mesh, mesh.x_dot, part.x, part.y, p);
                part.vy = surface::sample_mesh(mesh, mesh.y_dot, part.x, part.y, p);
                part.vz = surface::sample_mesh(mesh, mesh.z_dot, part.x, part.y, p);
                part.volume = p.particle_volume;
                pool.particles.push_back(part);
                rep.spawned += 1;
            }
        }
    }

    // Apply debits in column order. The working copy already holds the
    // quarter-by-quarter subtraction result, which is guaranteed >= 0.
    for (std::size_t c = 0; c < debit.size(); ++c) {
        if (debit[c] != 0) {
            grid.V[c] = avail[c];
            pool.debited_quarters += debit[c];
        }
    }
    pool.spawned_count += rep.spawned;
    return rep;
}

void integrate(SprayPool& pool, const FluidParams& p) {
    const double dt = p.dt;
    const double g = p.g;
    const auto n = static_cast<std::int64_t>(pool.particles.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
        Particle& part = pool.particles[k];
        part.x += part.vx * dt;
        part.y += part.vy * dt;
        part.z += part.vz * dt + 0.5 * g * dt * dt;
        part.vz += g * dt;
    }
}

AbsorbReport reabsorb(SprayPool& pool, ColumnGrid& grid, const SurfaceMesh& mesh,
                      const FluidParams& p, double ground_z) {
    AbsorbReport rep;
    const double extent_x = grid.nx * p.dx;
    const double extent_y = grid.ny * p.dy;
    std::vector<std::int32_t> credit;  // allocated only if something lands

    std::size_t keep = 0;
    for (std::size_t k = 0; k < pool.particles.size(); ++k) {
        const Particle& part = pool.particles[k];
        bool over_grid = part.x >= 0.0 && part.x < extent_x && part.y >= 0.0 && part.y < extent_y;
        if (over_grid) {
            double z_s = surface::sample_mesh(mesh, mesh.z, part.x, part.y, p);
            if (part.z <= z_s) {
                int i = std::clamp(static_cast<int>(std::floor(part.x / p.dx)), 0, grid.nx - 1);
                int j = std::clamp(static_cast<int>(std::floor(part.y / p.dy)), 0, grid.ny - 1);
                if (credit.empty()) credit.assign(grid.V.size(), 0);
                credit[grid.idx(i, j)] += 1;
                rep.reabsorbed += 1;
                continue;
            }
        } else if (part.z <= ground_z) {
            rep.destroyed += 1;
            continue;
        }
        pool.particles[keep++] = pool.particles[k];
    }
    pool.particles.resize(keep);

    if (!credit.empty()) {
        for (std::size_t c = 0; c < credit.size(); ++c) {
            if (credit[c] != 0) {
                grid.V[c] += double(credit[c]) * p.particle_volume;
                pool.credited_quarters += std::int64_t(credit[c]) * 4;
            }
        }
    }
    pool.reabsorbed_count += rep.reabsorbed;
    pool.destroyed_count += rep.destroyed;
    return rep;
}

}  // namespace splash::spray
