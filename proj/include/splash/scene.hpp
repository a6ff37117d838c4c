#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "splash/grid.hpp"
#include "splash/objects.hpp"
#include "splash/params.hpp"

namespace splash {

/// Rigid body as described in a scene file.
struct ObjectSpec {
    std::vector<Ellipsoid> ellipsoids;
    double mass = 1.0;
    double x = 0, y = 0;
    double s = 0, s_dot = 0;
    double alpha = 0.85;
    double contact_ramp = 0;
    double active_from = 0;

    bool operator==(const ObjectSpec&) const = default;
};

/// Fully resolved scene: grid geometry, fluid constants, initial depth,
/// boundary rules, time range, spray tuning, objects, output cadence.
struct Scene {
    int nx = 0, ny = 0;
    FluidParams params;  // dx/dy resolved from extent keys at parse time
    BoundarySpec boundary;
    double depth = 0.0;               // uniform initial depth, m
    std::vector<double> depth_table;  // per-column depth, row-major; empty = uniform
    double duration = 0;              // s
    double ground_z = 0;              // z at which stray particles are destroyed
    double frame_interval = 1.0 / 30;
    std::string format = "bin";       // "bin" | "text"
    std::vector<ObjectSpec> objects;

    bool operator==(const Scene&) const = default;

    double initial_depth(int i, int j) const {
        return depth_table.empty() ? depth : depth_table[std::size_t(j) * nx + i];
    }
    double max_depth() const;
};

struct SceneError : std::runtime_error {
    int line;  // 1-based; 0 when not tied to a line
    SceneError(int line_, const std::string& msg) : std::runtime_error(msg), line(line_) {}
};

namespace scene {

/// Parse scene text. Strict: unknown sections or keys are errors, as are
/// missing required keys, malformed numbers, and dimension mismatches.
Scene parse(const std::string& text);

/// Canonical text form; parse(render(s)) == s for any valid scene.
std::string render(const Scene& sc);

Scene load_file(const std::string& path);

/// Range-check everything (also called by parse before returning).
void validate(const Scene& sc);

struct CflReport {
    double max_depth = 0;
    double bound = 0;  // largest stable dt at that depth
    double dt = 0;
    bool ok = true;  // dt <= bound
};
CflReport cfl_report(const Scene& sc);

}  // namespace scene
}  // namespace splash
