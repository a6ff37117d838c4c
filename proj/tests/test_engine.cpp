#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "splash/engine.hpp"
#include "test_util.hpp"

using namespace splash;
using testutil::bits_equal;

namespace {

Scene pool_scene(int n, double depth, double duration = 1.0) {
    Scene sc;
    sc.nx = sc.ny = n;
    sc.params.dx = sc.params.dy = 0.1;
    sc.depth = depth;
    sc.duration = duration;
    sc.ground_z = -1.0;
    return sc;
}

Scene ball_drop_scene(int n, double depth) {
    Scene sc = pool_scene(n, depth, 2.0);
    ObjectSpec ball;
    ball.ellipsoids.push_back({0.0, 0.0, 0.0, 0.15, 0.15, 0.15});
    ball.mass = 7.0;  // about half the displaced-water mass: bobs and splashes
    ball.x = 0.5 * n * sc.params.dx;
    ball.y = 0.5 * n * sc.params.dy;
    ball.s = depth + 0.4;
    ball.s_dot = -2.0;
    sc.objects.push_back(ball);
    return sc;
}

}  // namespace

TEST_CASE("initialization fills columns, heights, mesh and the ledger baseline") {
    Scene sc = pool_scene(5, 0.3);
    SimState st = engine::init_state(sc);
    CHECK(st.grid.nx == 5);
    for (double v : st.grid.V)
        CHECK(v == doctest::Approx(0.3 * 0.1 * 0.1).epsilon(1e-15));
    for (double h : st.grid.h) CHECK(h == doctest::Approx(0.3).epsilon(1e-15));
    for (double z : st.mesh.z) CHECK(z == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(st.ledger.initial_total == st.grid.total_volume());
    CHECK(st.step_count == 0);
    CHECK(st.clock == 0.0);
}

TEST_CASE("a flat pool is a fixed point of the full engine step") {
    Scene sc = pool_scene(9, 0.25);
    SimState st = engine::init_state(sc);
    const std::vector<double> v0 = st.grid.V;
    const std::vector<double> z0 = st.mesh.z;
    for (int i = 0; i < 500; ++i) engine::step(st);
    CHECK(bits_equal(st.grid.V, v0));
    CHECK(bits_equal(st.mesh.z, z0));
    CHECK(st.pool.particles.empty());
    CHECK(engine::ledger_error(st) == 0.0);
    CHECK(st.max_surface_speed == 0.0);
}

TEST_CASE("the clock is recomputed from the step counter") {
    Scene sc = pool_scene(4, 0.2);
    sc.params.dt = 1.0 / 300.0;
    SimState st = engine::init_state(sc);
    for (int i = 0; i < 7; ++i) engine::step(st);
    CHECK(st.step_count == 7);
    CHECK(st.clock == 7.0 * (1.0 / 300.0));
}

TEST_CASE("an object above the water free-falls exactly like a ballistic particle") {
    Scene sc = pool_scene(9, 0.25, 1.0);
    ObjectSpec ball;
    ball.ellipsoids.push_back({0.0, 0.0, 0.0, 0.05, 0.05, 0.05});
    ball.mass = 0.5;
    ball.x = 0.45;
    ball.y = 0.45;
    ball.s = 2.0;  // well above the 0.25 m pool
    sc.objects.push_back(ball);
    SimState st = engine::init_state(sc);

    SprayPool ref;
    ref.particles.push_back({0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1e-6});
    for (int i = 0; i < 60; ++i) {
        engine::step(st);
        spray::integrate(ref, st.params);
        REQUIRE(st.objects[0].s == ref.particles[0].z);
        REQUIRE(st.objects[0].s_dot == ref.particles[0].vz);
        CHECK(st.objects[0].f_o == 0.0);
        CHECK(st.objects[0].contact_area == 0.0);
    }
}

TEST_CASE("objects wake up at their activation time") {
    Scene sc = pool_scene(9, 0.25, 1.0);
    ObjectSpec ball;
    ball.ellipsoids.push_back({0.0, 0.0, 0.0, 0.05, 0.05, 0.05});
    ball.x = ball.y = 0.45;
    ball.s = 1.0;
    ball.active_from = 0.1;
    sc.objects.push_back(ball);
    SimState st = engine::init_state(sc);
    const std::int64_t wake = engine::steps_for_duration(0.1, st.params.dt);
    for (int i = 0; i < 40; ++i) {
        engine::step(st);
        if (st.step_count <= wake)
            CHECK(st.objects[0].s == 1.0);  // frozen until activation
        else
            CHECK(st.objects[0].s < 1.0);  // falling
    }
}

TEST_CASE("a dropped ball disturbs the pool and the ledger stays closed") {
    Scene sc = ball_drop_scene(21, 0.3);
    SimState st = engine::init_state(sc);
    bool touched = false;
    for (int i = 0; i < 900; ++i) {
        engine::step(st);
        if (st.objects[0].contact_area > 0.0) touched = true;
        if (i % 100 == 99)
            REQUIRE(engine::ledger_relative_error(st) <=
                    engine::ledger_tolerance(st.step_count));
    }
    CHECK(touched);
    CHECK(st.max_surface_speed > 0.0);
    // The splash must have moved the surface somewhere.
    double relief = 0.0;
    for (double h : st.grid.h) relief = std::max(relief, std::fabs(h - 0.3));
    CHECK(relief > 1e-4);
    CHECK(engine::ledger_relative_error(st) <= engine::ledger_tolerance(st.step_count));
}

TEST_CASE("frame cadence includes step zero and honors the stride") {
    CHECK(engine::steps_for_duration(2.0, 1.0 / 300.0) == 600);
    CHECK(engine::frame_stride(1.0 / 30.0, 1.0 / 300.0) == 10);
    CHECK(engine::steps_for_duration(20.0, 1.0 / 300.0) == 6000);

    Scene sc = pool_scene(5, 0.2, 2.0);
    sc.params.dt = 1.0 / 300.0;
    SimState st = engine::init_state(sc);
    engine::RunConfig cfg;
    cfg.steps = 600;
    cfg.stride = 10;
    std::int64_t frames = 0, diags = 0;
    engine::RunResult res =
        engine::run(st, cfg, [&](const Frame&) { ++frames; }, [&](const SimState&) { ++diags; });
    CHECK(res.steps_done == 600);
    CHECK(frames == 61);  // t = 0 plus one every 10 steps
    CHECK(res.frames == 61);
    CHECK(diags == 601);  // every step plus the initial state
}

TEST_CASE("frames snapshot the simulation state faithfully") {
    Scene sc = ball_drop_scene(13, 0.3);
    SimState st = engine::init_state(sc);
    for (int i = 0; i < 120; ++i) engine::step(st);
    Frame f = engine::make_frame(st);
    CHECK(f.step == 120);
    CHECK(f.time == doctest::Approx(st.clock).epsilon(1e-15));
    CHECK(f.nx == 13);
    CHECK(f.ny == 13);
    REQUIRE(f.heights.size() == 169);
    CHECK(f.heights[0] == float(st.grid.h[0]));
    REQUIRE(f.mesh_z.size() == 144);
    REQUIRE(f.objects.size() == 1);
    CHECK(f.objects[0].s == float(st.objects[0].s));
    CHECK(f.particles.size() == st.pool.particles.size());
}

TEST_CASE("identical scenes replay to identical byte streams at any thread count") {
    auto capture = [](int threads) {
        engine::set_threads(threads);
        Scene sc = ball_drop_scene(15, 0.3);
        SimState st = engine::init_state(sc);
        engine::RunConfig cfg;
        cfg.steps = 240;
        cfg.stride = 30;
        std::vector<std::uint8_t> bytes;
        engine::run(st, cfg,
                    [&](const Frame& f) {
                        const std::vector<std::uint8_t> b = frame::write_binary(f);
                        bytes.insert(bytes.end(), b.begin(), b.end());
                    },
                    [](const SimState&) {});
        return bytes;
    };
    const auto a = capture(1);
    const auto b = capture(4);
    const auto c = capture(1);
    REQUIRE(a.size() == b.size());
    CHECK(a == b);
    CHECK(a == c);
    engine::set_threads(0);
}

TEST_CASE("ledger tolerance scales with the step count") {
    CHECK(engine::ledger_tolerance(1) == 1e-9);
    CHECK(engine::ledger_tolerance(1000) == 1e-9);
    CHECK(engine::ledger_tolerance(5000) == doctest::Approx(5e-9).epsilon(1e-12));
}

TEST_CASE("boundary inflow shows up as ledger flux, not as an error") {
    Scene sc = pool_scene(7, 0.2, 1.0);
    sc.boundary.west = BoundaryRule::constant(1e-5);
    SimState st = engine::init_state(sc);
    const double v0 = st.grid.total_volume();
    for (int i = 0; i < 300; ++i) engine::step(st);
    CHECK(st.grid.total_volume() > v0);  // water came in
    CHECK(st.ledger.boundary_flux > 0.0);
    CHECK(engine::ledger_relative_error(st) <= engine::ledger_tolerance(st.step_count));
}

TEST_CASE("validation mode reports the worst ledger error it saw") {
    Scene sc = ball_drop_scene(13, 0.3);
    SimState st = engine::init_state(sc);
    engine::RunConfig cfg;
    cfg.steps = 300;
    cfg.stride = 100;
    cfg.validate = true;
    engine::RunResult res =
        engine::run(st, cfg, [](const Frame&) {}, [](const SimState&) {});
    CHECK(res.ledger_ok);
    CHECK(res.steps_done == 300);
    CHECK(res.worst_rel_err <= engine::ledger_tolerance(300));
    CHECK(res.worst_step >= 0);
}
