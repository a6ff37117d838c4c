#pragma once

#include <vector>

#include "splash/grid.hpp"
#include "splash/params.hpp"
#include "splash/surface.hpp"

namespace splash {

/// One ellipsoid of a rigid body, offset from the object origin.
struct Ellipsoid {
    double ox = 0, oy = 0, oz = 0;  // center offset, m
    double a = 0, b = 0, c = 0;     // semi-axes, m

    bool operator==(const Ellipsoid&) const = default;
};

/// Vertical-only rigid body: ellipsoid union at a fixed horizontal position
/// with 1-DOF dynamics driven by gravity plus a bounded reaction force.
struct RigidObject {
    std::vector<Ellipsoid> ellipsoids;
    double mass = 1.0;  // kg
    double x = 0, y = 0;  // horizontal position, fixed
    double s = 0;       // vertical position of the object origin, m
    double s_dot = 0;   // vertical velocity, m/s
    double alpha = 0.85;       // reaction fraction of the force bound, [0,1]
    double contact_ramp = 0;   // s over which alpha fades in after first contact
    double active_from = 0;    // s; frozen in place before this time

    // Per-step bookkeeping.
    double contact_time = 0;   // s continuously in contact
    double f_o = 0;            // last applied reaction force, N
    double contact_area = 0;   // last footprint area, m^2
};

/// Mesh points currently under the object, all with equal weight 1/count.
struct ContactFootprint {
    std::vector<std::size_t> points;  // mesh indices, ascending
    double area = 0;                  // count * dx * dy
    double mean_z = 0;                // average surface height over the footprint

    bool empty() const { return points.empty(); }
    double weight() const { return points.empty() ? 0.0 : 1.0 / double(points.size()); }
};

namespace objects {

/// Lowest z of the ellipsoid union above horizontal point (px, py) for an
/// object whose origin sits at height s. Returns +infinity when no ellipsoid
/// covers that point.
double union_bottom(const RigidObject& obj, double s, double px, double py);

/// Mesh points where the object's underside reaches below the surface.
ContactFootprint contact_footprint(const RigidObject& obj, const SurfaceMesh& mesh,
                                   const FluidParams& p);

/// Force that would bring the object exactly to z_surface after time t,
/// floored at zero (the reaction never pulls the object down).
double max_impact_force(const RigidObject& obj, double z_surface, double t,
                        const FluidParams& p);

/// Heuristic reaction: the alpha fraction of the bound, with the optional
/// contact-ramp fade-in applied.
double impact_force(const RigidObject& obj, double f_max);

/// One step of vertical kinematics under gravity plus reaction f_o.
void step_object(RigidObject& obj, double f_o, const FluidParams& p);

/// Push the equal-and-opposite force into the fluid: -f_o split over the
/// footprint points by weight, each share converted to column pressure.
void apply_reaction(const ContactFootprint& fp, double f_o, const SurfaceMesh& mesh,
                    ColumnGrid& grid, const FluidParams& p);

}  // namespace objects
}  // namespace splash
