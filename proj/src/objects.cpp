#include "splash/objects.hpp"

#include <cmath>
#include <limits>

namespace splash::objects {

double union_bottom(const RigidObject& obj, double s, double px, double py) {
    double bottom = std::numeric_limits<double>::infinity();
    for (const Ellipsoid& e : obj.ellipsoids) {
        double u = (px - (obj.x + e.ox)) / e.a;
        double v = (py - (obj.y + e.oy)) / e.b;
        double r2 = u * u + v * v;
        if (r2 > 1.0) continue;
        double z = (s + e.oz) - e.c * std::sqrt(1.0 - r2);
        if (z < bottom) bottom = z;
    }
    return bottom;
}

ContactFootprint contact_footprint(const RigidObject& obj, const SurfaceMesh& mesh,
                                   const FluidParams& p) {
    ContactFootprint fp;
    double z_sum = 0.0;
    for (int j = 0; j < mesh.my; ++j) {
        for (int i = 0; i < mesh.mx; ++i) {
            std::size_t m = mesh.idx(i, j);
            double bottom = union_bottom(obj, obj.s, mesh.point_x(i, p), mesh.point_y(j, p));
            if (bottom < mesh.z[m]) {
                fp.points.push_back(m);
                z_sum += mesh.z[m];
            }
        }
    }
    if (!fp.points.empty()) {
        fp.area = double(fp.points.size()) * (p.dx * p.dy);
        fp.mean_z = z_sum / double(fp.points.size());
    }
    return fp;
}

double max_impact_force(const RigidObject& obj, double z_surface, double t,
                        const FluidParams& p) {
    double f = obj.mass * (2.0 * (z_surface - obj.s - obj.s_dot * t) / (t * t) - p.g);
    return f > 0.0 ? f : 0.0;
}

double impact_force(const RigidObject& obj, double f_max) {
    double a = obj.alpha;
    if (obj.contact_ramp > 0.0) {
        double ramp = obj.contact_time / obj.contact_ramp;
        if (ramp < 1.0) a *= ramp;
    }
    return a * f_max;
}

void step_object(RigidObject& obj, double f_o, const FluidParams& p) {
    double accel = p.g + f_o / obj.mass;
    obj.s += obj.s_dot * p.dt + 0.5 * accel * p.dt * p.dt;
    obj.s_dot += accel * p.dt;
}

void apply_reaction(const ContactFootprint& fp, double f_o, const SurfaceMesh& mesh,
                    ColumnGrid& grid, const FluidParams& p) {
    if (fp.empty() || f_o == 0.0) return;
    double share = -f_o * fp.weight();
    for (std::size_t m : fp.points) {
        int i = static_cast<int>(m % mesh.mx);
        int j = static_cast<int>(m / mesh.mx);
        surface::distribute_force(mesh, i, j, share, grid, p);
    }
}

}  // namespace splash::objects
