#pragma once

#include <vector>

#include "splash/grid.hpp"
#include "splash/params.hpp"

namespace splash {

/// Control-point mesh sitting between columns. Point [i,j] is centered over
/// the corner shared by columns (i,j), (i+1,j), (i,j+1), (i+1,j+1), i.e. at
/// world position ((i+1)*dx, (j+1)*dy) when column (0,0) spans [0,dx]x[0,dy].
struct SurfaceMesh {
    int mx = 0;  // = nx - 1
    int my = 0;  // = ny - 1
    std::vector<double> z;      // surface height, m
    std::vector<double> z_dot;  // vertical surface velocity, m/s
    std::vector<double> x_dot;  // horizontal surface velocity, m/s
    std::vector<double> y_dot;

    SurfaceMesh() = default;
    SurfaceMesh(int nx, int ny) : mx(nx - 1), my(ny - 1) {
        std::size_t n = std::size_t(mx) * my;
        z.assign(n, 0.0);
        z_dot.assign(n, 0.0);
        x_dot.assign(n, 0.0);
        y_dot.assign(n, 0.0);
    }

    std::size_t idx(int i, int j) const {
        assert(i >= 0 && i < mx && j >= 0 && j < my);
        return std::size_t(j) * mx + i;
    }
    double point_x(int i, const FluidParams& p) const { return (i + 1) * p.dx; }
    double point_y(int j, const FluidParams& p) const { return (j + 1) * p.dy; }
};

namespace surface {

/// z = average of the four surrounding column heights.
void update_heights(SurfaceMesh& mesh, const ColumnGrid& grid);

/// Per-column height rate from the net pipe inflow: h_dot = sum(Q_in)/(dx*dy).
void column_vertical_velocity(const ColumnGrid& grid, const PipeField& pipes,
                              const FluidParams& p, std::vector<double>& h_dot);

/// Mesh velocities: z_dot averages the four column h_dot values; x_dot/y_dot
/// average the two parallel pipe flows spanning the point and convert the
/// flux (m^3/s) to a linear velocity (m/s) by dividing by the mean pipe
/// cross-section of those two pipes. A cross-section below kDrySection
/// (effectively dry) yields zero velocity.
void update_velocities(SurfaceMesh& mesh, const ColumnGrid& grid, const PipeField& pipes,
                       const std::vector<double>& h_dot, const FluidParams& p);

inline constexpr double kDrySection = 1e-12;  // m^2

/// Bilinear sample of a mesh field at world (x, y); clamps to the mesh hull
/// (constant extrapolation outside).
double sample_mesh(const SurfaceMesh& mesh, const std::vector<double>& field, double x,
                   double y, const FluidParams& p);

/// Reformulate a vertical force on one mesh point as external pressure on its
/// four columns: each receives E += -f_e / (4*dx*dy). Downward (negative) f_e
/// raises pressure.
void distribute_force(const SurfaceMesh& mesh, int point_i, int point_j, double f_e,
                      ColumnGrid& grid, const FluidParams& p);

}  // namespace surface
}  // namespace splash
