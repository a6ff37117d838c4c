#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "splash/frame.hpp"
#include "splash/grid.hpp"
#include "splash/objects.hpp"
#include "splash/params.hpp"
#include "splash/scene.hpp"
#include "splash/spray.hpp"
#include "splash/surface.hpp"

namespace splash {

/// Global volume accounting. The running identity is
///   columns + airborne + destroyed + clamp_discarded - boundary_flux = initial
/// where clamp_discarded <= 0 (it cancels volume the clamp had to create when
/// zeroing a negative column) and boundary_flux counts net inflow as positive.
struct Ledger {
    double initial_total = 0;
    double clamp_discarded = 0;
    double boundary_flux = 0;
};

struct PhaseTimes {
    double objects = 0, flows = 0, volumes = 0, surface = 0, spray = 0;  // seconds
    double total() const { return objects + flows + volumes + surface + spray; }
};

struct SimState {
    FluidParams params;
    ColumnGrid grid;
    PipeField pipes;       // flows after the latest update
    PipeField pipes_prev;  // flows entering the current step (trapezoid partner)
    SurfaceMesh mesh;
    SprayPool pool;
    std::vector<RigidObject> objects;
    std::vector<double> h_dot, dv;  // scratch fields reused across steps
    std::int64_t step_count = 0;
    double clock = 0;  // = step_count * dt, recomputed (not accumulated)
    double ground_z = 0;
    Ledger ledger;
    double max_surface_speed = 0;  // diagnostics, refreshed each step
};

namespace engine {

SimState init_state(const Scene& sc);

/// One full step in the fixed phase order: zero pressures; objects (contact,
/// bounded reaction, kinematics); flow update + boundary; volume update +
/// non-negativity; surface heights and velocities; spray spawn/fly/reabsorb;
/// clock. Pass `timing` to accumulate per-phase wall time.
void step(SimState& st, PhaseTimes* timing = nullptr);

double total_accounted(const SimState& st);
double ledger_error(const SimState& st);
double ledger_relative_error(const SimState& st);
double ledger_tolerance(std::int64_t steps);  // 1e-9 per 1000 steps, floor 1e-9

std::int64_t steps_for_duration(double duration, double dt);
std::int64_t frame_stride(double frame_interval, double dt);

Frame make_frame(const SimState& st);

struct RunConfig {
    std::int64_t steps = 0;
    std::int64_t stride = 1;  // emit a frame every `stride` steps (plus step 0)
    bool validate = false;    // stop as soon as the ledger identity breaks
    bool timing = false;
};

struct RunResult {
    std::int64_t steps_done = 0;
    std::int64_t frames = 0;
    bool ledger_ok = true;
    double worst_rel_err = 0;
    std::int64_t worst_step = -1;
    PhaseTimes phases;
};

using FrameSink = std::function<void(const Frame&)>;
using DiagSink = std::function<void(const SimState&)>;

/// Run `steps` steps, emitting a frame at step 0 and every `stride` steps and
/// a diagnostics callback every step (including step 0).
RunResult run(SimState& st, const RunConfig& cfg, const FrameSink& on_frame,
              const DiagSink& on_diag);

/// Pin the worker-pool size; ignored when built without OpenMP. n <= 0 keeps
/// the runtime default.
void set_threads(int n);

}  // namespace engine
}  // namespace splash
