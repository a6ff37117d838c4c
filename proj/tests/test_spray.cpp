#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "splash/grid.hpp"
#include "splash/params.hpp"
#include "splash/spray.hpp"
#include "splash/surface.hpp"
#include "test_util.hpp"

using namespace splash;
using testutil::bits_equal;

namespace {

struct SprayRig {
    FluidParams p;
    ColumnGrid grid;
    SurfaceMesh mesh;
    SprayPool pool;

    SprayRig(int n, double depth, std::uint64_t seed = 7)
        : grid(n, n), mesh(n, n), pool(seed) {
        p.dx = p.dy = 0.1;
        for (double& v : grid.V) v = depth * p.column_area();
        for (double& h : grid.h) h = depth;
        for (double& z : mesh.z) z = depth;
    }
};

}  // namespace

TEST_CASE("spawn threshold defaults inside the documented band") {
    FluidParams p;
    CHECK(p.spray_threshold == 2.25);
    CHECK(p.spray_threshold >= 2.0);
    CHECK(p.spray_threshold <= 2.5);
}

TEST_CASE("a quiet surface spawns nothing, debits nothing, and leaves the rng untouched") {
    SprayRig rig(4, 0.3);
    for (double& zd : rig.mesh.z_dot) zd = 2.0;  // below 2.25
    const std::vector<double> v0 = rig.grid.V;
    const std::mt19937_64 rng0 = rig.pool.rng;

    spray::SpawnReport rep = spray::spawn(rig.pool, rig.mesh, rig.grid, rig.p);
    CHECK(rep.spawned == 0);
    CHECK(rep.capped == 0);
    CHECK(rig.pool.particles.empty());
    CHECK(bits_equal(rig.grid.V, v0));
    CHECK(rig.pool.rng == rng0);  // no draws consumed
}

TEST_CASE("spawn count follows the velocity-excess formula") {
    SprayRig rig(4, 0.3);
    // One active point: z_dot = 3.0, threshold 2.25, fraction 4
    // -> ceil(4 * (3 - 2.25) / 2.25) = ceil(1.333) = 2 particles.
    rig.mesh.z_dot[rig.mesh.idx(1, 1)] = 3.0;
    spray::SpawnReport rep = spray::spawn(rig.pool, rig.mesh, rig.grid, rig.p);
    CHECK(rep.spawned == 2);
    CHECK(rig.pool.particles.size() == 2);

    // Barely above threshold -> ceil of a small positive -> exactly 1.
    SprayRig tiny(4, 0.3);
    tiny.mesh.z_dot[tiny.mesh.idx(1, 1)] = 2.2500001;
    CHECK(spray::spawn(tiny.pool, tiny.mesh, tiny.grid, tiny.p).spawned == 1);

    // Doubling the excess doubles the count (up to the ceiling).
    SprayRig loud(4, 0.3);
    loud.mesh.z_dot[loud.mesh.idx(1, 1)] = 3.75;  // excess 1.5 -> ceil(2.667) = 3
    CHECK(spray::spawn(loud.pool, loud.mesh, loud.grid, loud.p).spawned == 3);
}

TEST_CASE("spawned volume equals the column debits exactly") {
    SprayRig rig(5, 0.25);
    rig.mesh.z_dot[rig.mesh.idx(1, 1)] = 4.1;
    rig.mesh.z_dot[rig.mesh.idx(3, 2)] = 2.9;
    const double total0 = rig.grid.total_volume();

    spray::SpawnReport rep = spray::spawn(rig.pool, rig.mesh, rig.grid, rig.p);
    REQUIRE(rep.spawned > 0);

    // Accounting identity: the sum of the spawned particle volumes and the
    // sum of the applied quarter-debits are the same real number, so the two
    // doubles agree bit for bit.
    const double quarter = rig.p.particle_volume * 0.25;
    CHECK(rig.pool.debited_quarters == 4 * rep.spawned);
    CHECK(double(rig.pool.debited_quarters) * quarter == rig.pool.airborne_volume(rig.p));

    double particle_sum = 0.0;
    for (const Particle& q : rig.pool.particles) {
        CHECK(q.volume == rig.p.particle_volume);
        particle_sum += q.volume;
    }
    CHECK(particle_sum == doctest::Approx(rig.pool.airborne_volume(rig.p)).epsilon(1e-15));

    // The grid lost what the pool gained, up to one rounding per subtraction.
    CHECK(rig.grid.total_volume() ==
          doctest::Approx(total0 - rig.pool.airborne_volume(rig.p)).epsilon(1e-12));
    for (double v : rig.grid.V) CHECK(v >= 0.0);
}

TEST_CASE("spawning stops at the volume cap instead of overdrawing columns") {
    SprayRig rig(4, 0.0);
    // Give the four columns under point (1,1) just enough for 3 quarters each.
    const double quarter = rig.p.particle_volume * 0.25;
    for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di)
            rig.grid.V[rig.grid.idx(1 + di, 1 + dj)] = 3.4 * quarter;
    rig.mesh.z_dot[rig.mesh.idx(1, 1)] = 50.0;  // requests far more than 3

    spray::SpawnReport rep = spray::spawn(rig.pool, rig.mesh, rig.grid, rig.p);
    CHECK(rep.spawned == 3);
    CHECK(rep.capped > 0);
    for (double v : rig.grid.V) CHECK(v >= 0.0);
    CHECK(rig.pool.particles.size() == 3);
}

TEST_CASE("particles spawn inside their cell with the bilinear surface state") {
    SprayRig rig(4, 0.5);
    const int mi = 1, mj = 2;
    for (double& zd : rig.mesh.z_dot) zd = 0.0;
    rig.mesh.z_dot[rig.mesh.idx(mi, mj)] = 3.4;
    for (double& xd : rig.mesh.x_dot) xd = 0.6;
    for (double& yd : rig.mesh.y_dot) yd = -0.2;

    spray::SpawnReport rep = spray::spawn(rig.pool, rig.mesh, rig.grid, rig.p);
    REQUIRE(rep.spawned > 0);
    const double cx = rig.mesh.point_x(mi, rig.p);
    const double cy = rig.mesh.point_y(mj, rig.p);
    for (const Particle& q : rig.pool.particles) {
        CHECK(std::fabs(q.x - cx) <= 0.5 * rig.p.dx);
        CHECK(std::fabs(q.y - cy) <= 0.5 * rig.p.dy);
        CHECK(q.z == doctest::Approx(0.5).epsilon(1e-12));  // on the flat surface
        // Uniform fields interpolate to themselves.
        CHECK(q.vx == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(q.vy == doctest::Approx(-0.2).epsilon(1e-12));
        CHECK(q.vz >= 0.0);  // interpolated from 3.4 at the point, 0 at neighbors
        CHECK(q.vz <= 3.4);
    }
}

TEST_CASE("spawning is deterministic for a fixed seed") {
    auto run = [](std::uint64_t seed) {
        SprayRig rig(5, 0.3, seed);
        rig.mesh.z_dot[rig.mesh.idx(2, 2)] = 5.0;
        rig.mesh.z_dot[rig.mesh.idx(0, 3)] = 2.6;
        spray::spawn(rig.pool, rig.mesh, rig.grid, rig.p);
        return rig.pool.particles;
    };
    const std::vector<Particle> a = run(123);
    const std::vector<Particle> b = run(123);
    const std::vector<Particle> c = run(124);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].vz == b[i].vz);
    }
    // A different seed moves at least one particle.
    bool differs = a.size() != c.size();
    for (std::size_t i = 0; !differs && i < a.size(); ++i)
        differs = (a[i].x != c[i].x) || (a[i].y != c[i].y);
    CHECK(differs);
}

TEST_CASE("an infinite threshold keeps the system particle-free") {
    SprayRig rig(5, 0.3);
    rig.p.spray_threshold = std::numeric_limits<double>::infinity();
    for (double& zd : rig.mesh.z_dot) zd = 1e9;
    const std::vector<double> v0 = rig.grid.V;
    spray::SpawnReport rep = spray::spawn(rig.pool, rig.mesh, rig.grid, rig.p);
    CHECK(rep.spawned == 0);
    CHECK(bits_equal(rig.grid.V, v0));
}

TEST_CASE("free fall drops 4.9 meters in one unit step") {
    FluidParams p;
    p.dt = 1.0;
    SprayPool pool;
    pool.particles.push_back({0.0, 0.0, 10.0, 0.0, 0.0, 0.0, p.particle_volume});
    spray::integrate(pool, p);
    CHECK(pool.particles[0].z == doctest::Approx(10.0 - 4.9).epsilon(1e-15));
    CHECK(pool.particles[0].vz == doctest::Approx(-9.8).epsilon(1e-15));
    CHECK(pool.particles[0].x == 0.0);
    CHECK(pool.particles[0].y == 0.0);
}

TEST_CASE("horizontal velocity components never change under gravity") {
    FluidParams p;
    p.dt = 1.0 / 300.0;
    SprayPool pool;
    pool.particles.push_back({1.0, 2.0, 5.0, 0.31, -0.72, 2.5, p.particle_volume});
    for (int s = 0; s < 500; ++s) spray::integrate(pool, p);
    CHECK(pool.particles[0].vx == 0.31);
    CHECK(pool.particles[0].vy == -0.72);
}

TEST_CASE("trajectories match the closed-form parabola at every step boundary") {
    FluidParams p;
    p.dt = 1.0 / 300.0;
    SprayPool pool;
    const Particle start{0.5, 0.25, 1.0, 0.4, -0.3, 3.0, p.particle_volume};
    pool.particles.push_back(start);
    for (int s = 1; s <= 600; ++s) {
        spray::integrate(pool, p);
        const double t = s * p.dt;
        const Particle& q = pool.particles[0];
        CHECK(q.x == doctest::Approx(start.x + start.vx * t).epsilon(1e-12));
        CHECK(q.y == doctest::Approx(start.y + start.vy * t).epsilon(1e-12));
        CHECK(q.z ==
              doctest::Approx(start.z + start.vz * t + 0.5 * p.g * t * t).epsilon(1e-10));
        CHECK(q.vz == doctest::Approx(start.vz + p.g * t).epsilon(1e-12));
    }
}

TEST_CASE("particles above the surface persist unchanged") {
    SprayRig rig(4, 0.3);
    rig.pool.particles.push_back({0.15, 0.15, 2.0, 0.0, 0.0, 1.0, rig.p.particle_volume});
    const std::vector<double> v0 = rig.grid.V;
    spray::AbsorbReport rep = spray::reabsorb(rig.pool, rig.grid, rig.mesh, rig.p, -1.0);
    CHECK(rep.reabsorbed == 0);
    CHECK(rep.destroyed == 0);
    CHECK(rig.pool.particles.size() == 1);
    CHECK(bits_equal(rig.grid.V, v0));
}

TEST_CASE("a particle under the local surface is absorbed by its column") {
    SprayRig rig(4, 0.3);
    // Particle at (0.25, 0.15): column (2, 1). Below the 0.3 m surface.
    rig.pool.particles.push_back({0.25, 0.15, 0.1, 0.0, 0.0, -1.0, rig.p.particle_volume});
    const double v_col = rig.grid.V[rig.grid.idx(2, 1)];
    spray::AbsorbReport rep = spray::reabsorb(rig.pool, rig.grid, rig.mesh, rig.p, -1.0);
    CHECK(rep.reabsorbed == 1);
    CHECK(rig.pool.particles.empty());
    CHECK(rig.grid.V[rig.grid.idx(2, 1)] == v_col + rig.p.particle_volume);
    CHECK(rig.pool.credited_quarters == 4);
}

TEST_CASE("particles beyond the grid are destroyed at the ground plane") {
    SprayRig rig(4, 0.3);
    const double ground = -0.5;
    rig.pool.particles.push_back({-1.0, 0.2, -0.6, 0.0, 0.0, -1.0, rig.p.particle_volume});
    rig.pool.particles.push_back({5.0, 5.0, 0.2, 0.0, 0.0, -1.0, rig.p.particle_volume});
    const std::vector<double> v0 = rig.grid.V;

    spray::AbsorbReport rep = spray::reabsorb(rig.pool, rig.grid, rig.mesh, rig.p, ground);
    CHECK(rep.destroyed == 1);  // the second one is still above ground_z
    CHECK(rep.reabsorbed == 0);
    CHECK(rig.pool.particles.size() == 1);
    CHECK(rig.pool.destroyed_count == 1);
    CHECK(rig.pool.destroyed_volume(rig.p) == rig.p.particle_volume);
    CHECK(bits_equal(rig.grid.V, v0));
}

TEST_CASE("reabsorption keeps the untouched survivors in order") {
    SprayRig rig(4, 0.3);
    auto mk = [&](double x, double z) {
        return Particle{x, 0.15, z, 0.0, 0.0, 0.0, rig.p.particle_volume};
    };
    rig.pool.particles = {mk(0.05, 2.0), mk(0.15, 0.1), mk(0.25, 3.0), mk(0.35, 0.1),
                          mk(0.05, 4.0)};
    spray::reabsorb(rig.pool, rig.grid, rig.mesh, rig.p, -1.0);
    REQUIRE(rig.pool.particles.size() == 3);
    CHECK(rig.pool.particles[0].z == 2.0);
    CHECK(rig.pool.particles[1].z == 3.0);
    CHECK(rig.pool.particles[2].z == 4.0);
}

TEST_CASE("spawn-flight-reabsorb cycle closes the volume ledger") {
    SprayRig rig(6, 0.4, 99);
    const double total0 = rig.grid.total_volume();
    rig.mesh.z_dot[rig.mesh.idx(2, 2)] = 6.0;
    rig.mesh.z_dot[rig.mesh.idx(3, 3)] = 4.5;
    rig.p.dt = 1.0 / 300.0;

    spray::spawn(rig.pool, rig.mesh, rig.grid, rig.p);
    const std::int64_t spawned = rig.pool.spawned_count;
    REQUIRE(spawned > 0);
    // Let everything fly up and fall back; walls are far away, so all
    // particles land inside the grid.
    for (int s = 0; s < 3000 && !rig.pool.particles.empty(); ++s) {
        spray::integrate(rig.pool, rig.p);
        spray::reabsorb(rig.pool, rig.grid, rig.mesh, rig.p, -10.0);
    }
    CHECK(rig.pool.particles.empty());
    CHECK(rig.pool.reabsorbed_count == spawned);
    CHECK(rig.pool.credited_quarters == rig.pool.debited_quarters);
    CHECK(rig.grid.total_volume() == doctest::Approx(total0).epsilon(1e-12));
}
