#include "splash/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "splash/volume.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace splash::engine {

namespace {

using Clock = std::chrono::steady_clock;

/// Phase timer that compiles down to nothing when timing is off.
struct Stopwatch {
    bool on;
    Clock::time_point t;

    explicit Stopwatch(bool enabled) : on(enabled) {
        if (on) t = Clock::now();
    }
    void lap(double& acc) {
        if (!on) return;
        auto n = Clock::now();
        acc += std::chrono::duration<double>(n - t).count();
        t = n;
    }
};

}  // namespace

SimState init_state(const Scene& sc) {
    SimState st;
    st.params = sc.params;
    st.grid = ColumnGrid(sc.nx, sc.ny);
    st.grid.boundary = sc.boundary;
    const double area = sc.params.dx * sc.params.dy;
    for (int j = 0; j < sc.ny; ++j)
        for (int i = 0; i < sc.nx; ++i)
            st.grid.V[st.grid.idx(i, j)] = sc.initial_depth(i, j) * area;

    st.pipes = PipeField(sc.nx, sc.ny);
    st.pipes_prev = PipeField(sc.nx, sc.ny);
    st.mesh = SurfaceMesh(sc.nx, sc.ny);
    st.pool = SprayPool(sc.params.seed);
    st.ground_z = sc.ground_z;
    st.h_dot.assign(st.grid.V.size(), 0.0);
    st.dv.assign(st.grid.V.size(), 0.0);

    for (const ObjectSpec& spec : sc.objects) {
        RigidObject obj;
        obj.ellipsoids = spec.ellipsoids;
        obj.mass = spec.mass;
        obj.x = spec.x;
        obj.y = spec.y;
        obj.s = spec.s;
        obj.s_dot = spec.s_dot;
        obj.alpha = spec.alpha;
        obj.contact_ramp = spec.contact_ramp;
        obj.active_from = spec.active_from;
        st.objects.push_back(std::move(obj));
    }

    volume::compute_heights(st.grid, st.params);
    surface::update_heights(st.mesh, st.grid);
    st.ledger.initial_total = st.grid.total_volume();
    return st;
}

void step(SimState& st, PhaseTimes* timing) {
    const FluidParams& p = st.params;
    Stopwatch sw(timing != nullptr);

    // Phase 1+2: fresh pressures, then object contact and kinematics. The
    // footprint reads the surface left by the previous step, so an impact
    // pressurizes the fluid before this step's flow update feels it.
    std::fill(st.grid.E.begin(), st.grid.E.end(), 0.0);
    for (RigidObject& obj : st.objects) {
        obj.f_o = 0.0;
        obj.contact_area = 0.0;
        if (st.clock < obj.active_from) continue;
        ContactFootprint fp = objects::contact_footprint(obj, st.mesh, p);
        if (!fp.empty()) {
            obj.contact_time += p.dt;
            double f_max = objects::max_impact_force(obj, fp.mean_z, p.dt, p);
            obj.f_o = objects::impact_force(obj, f_max);
            objects::apply_reaction(fp, obj.f_o, st.mesh, st.grid, p);
            obj.contact_area = fp.area;
        } else {
            obj.contact_time = 0.0;
        }
        objects::step_object(obj, obj.f_o, p);
    }
    if (timing) sw.lap(timing->objects);

    // Phase 3: pipe flow update from current heights and pressures.
    volume::compute_heights(st.grid, p);
    st.pipes_prev = st.pipes;
    volume::update_flows(st.grid, st.pipes, p);
    volume::apply_boundary(st.pipes, st.grid.boundary);
    if (timing) sw.lap(timing->flows);

    // Phase 4: trapezoidal volume update, then keep every column non-negative.
    volume::integrate_volumes(st.grid, st.pipes_prev, st.pipes, p, st.dv);
    volume::ScaleReport rep =
        volume::enforce_nonnegative(st.grid, st.pipes_prev, st.pipes, p, st.dv);
    st.ledger.clamp_discarded += rep.clamped_volume;
    st.ledger.boundary_flux +=
        volume::boundary_flux_volume(st.grid, st.pipes_prev, st.pipes, p);
    if (timing) sw.lap(timing->volumes);

    // Phase 5: surface mesh heights and velocities from the settled volumes.
    volume::compute_heights(st.grid, p);
    surface::update_heights(st.mesh, st.grid);
    surface::column_vertical_velocity(st.grid, st.pipes, p, st.h_dot);
    surface::update_velocities(st.mesh, st.grid, st.pipes, st.h_dot, p);
    double speed2 = 0.0;
    for (std::size_t k = 0; k < st.mesh.z.size(); ++k) {
        double s2 = st.mesh.x_dot[k] * st.mesh.x_dot[k] + st.mesh.y_dot[k] * st.mesh.y_dot[k] +
                    st.mesh.z_dot[k] * st.mesh.z_dot[k];
        if (s2 > speed2) speed2 = s2;
    }
    st.max_surface_speed = std::sqrt(speed2);
    if (timing) sw.lap(timing->surface);

    // Phase 6: spray. Spawn reads the fresh surface velocities; reabsorption
    // credits columns, which the next step's heights will pick up.
    spray::spawn(st.pool, st.mesh, st.grid, p);
    spray::integrate(st.pool, p);
    spray::reabsorb(st.pool, st.grid, st.mesh, p, st.ground_z);
    if (timing) sw.lap(timing->spray);

    // Phase 7: clock.
    st.step_count += 1;
    st.clock = double(st.step_count) * p.dt;
}

double total_accounted(const SimState& st) {
    return st.grid.total_volume() + st.pool.airborne_volume(st.params) +
           st.pool.destroyed_volume(st.params) + st.ledger.clamp_discarded -
           st.ledger.boundary_flux;
}

double ledger_error(const SimState& st) {
    return total_accounted(st) - st.ledger.initial_total;
}

double ledger_relative_error(const SimState& st) {
    double denom = std::max(std::fabs(st.ledger.initial_total), 1e-12);
    return std::fabs(ledger_error(st)) / denom;
}

double ledger_tolerance(std::int64_t steps) {
    return 1e-9 * std::max(1.0, double(steps) / 1000.0);
}

std::int64_t steps_for_duration(double duration, double dt) {
    return std::max<std::int64_t>(1, std::llround(duration / dt));
}

std::int64_t frame_stride(double frame_interval, double dt) {
    return std::max<std::int64_t>(1, std::llround(frame_interval / dt));
}

Frame make_frame(const SimState& st) {
    Frame f;
    f.step = std::uint64_t(st.step_count);
    f.time = st.clock;
    f.nx = std::uint32_t(st.grid.nx);
    f.ny = std::uint32_t(st.grid.ny);
    f.heights.reserve(st.grid.h.size());
    for (double v : st.grid.h) f.heights.push_back(float(v));
    f.mesh_z.reserve(st.mesh.z.size());
    for (double v : st.mesh.z) f.mesh_z.push_back(float(v));
    f.particles.reserve(st.pool.particles.size());
    for (const Particle& q : st.pool.particles)
        f.particles.push_back({float(q.x), float(q.y), float(q.z), float(q.vx), float(q.vy),
                               float(q.vz), float(q.volume)});
    f.objects.reserve(st.objects.size());
    for (const RigidObject& o : st.objects)
        f.objects.push_back({float(o.s), float(o.s_dot), float(o.f_o), float(o.contact_area)});
    return f;
}

RunResult run(SimState& st, const RunConfig& cfg, const FrameSink& on_frame,
              const DiagSink& on_diag) {
    RunResult res;
    if (on_frame) {
        on_frame(make_frame(st));
        res.frames += 1;
    }
    if (on_diag) on_diag(st);

    for (std::int64_t k = 0; k < cfg.steps; ++k) {
        step(st, cfg.timing ? &res.phases : nullptr);
        res.steps_done += 1;
        if (on_diag) on_diag(st);
        if (on_frame && st.step_count % cfg.stride == 0) {
            on_frame(make_frame(st));
            res.frames += 1;
        }
        if (cfg.validate) {
            double rel = ledger_relative_error(st);
            if (rel > res.worst_rel_err) {
                res.worst_rel_err = rel;
                res.worst_step = st.step_count;
            }
            if (rel > ledger_tolerance(st.step_count)) {
                res.ledger_ok = false;
                break;
            }
        }
    }
    return res;
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace splash::engine
