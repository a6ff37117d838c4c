#include "splash/surface.hpp"

#include <cmath>

#include "splash/volume.hpp"

namespace splash::surface {

namespace {

/// Average of the four corner values, accumulated diagonal-opposite pairs
/// first. That grouping is invariant under every square symmetry (rotations
/// map one diagonal pair onto the other), so symmetric states stay bitwise
/// symmetric.
inline double corner_average(double a, double b, double c, double d) {
    // a=(i,j), b=(i,j+1), c=(i+1,j), d=(i+1,j+1)
    return ((a + d) + (b + c)) * 0.25;
}

}  // namespace

void update_heights(SurfaceMesh& mesh, const ColumnGrid& grid) {
    const int mx = mesh.mx, my = mesh.my;
    const double* h = grid.h.data();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < my; ++j) {
        for (int i = 0; i < mx; ++i) {
            mesh.z[mesh.idx(i, j)] =
                corner_average(h[grid.idx(i, j)], h[grid.idx(i, j + 1)], h[grid.idx(i + 1, j)],
                               h[grid.idx(i + 1, j + 1)]);
        }
    }
}

void column_vertical_velocity(const ColumnGrid& grid, const PipeField& pipes,
                              const FluidParams& p, std::vector<double>& h_dot) {
    const int nx = grid.nx, ny = grid.ny;
    const double area = p.dx * p.dy;
    h_dot.resize(std::size_t(nx) * ny);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            h_dot[grid.idx(i, j)] = volume::net_inflow(pipes, i, j) / area;
        }
    }
}

void update_velocities(SurfaceMesh& mesh, const ColumnGrid& grid, const PipeField& pipes,
                       const std::vector<double>& h_dot, const FluidParams& p) {
    const int mx = mesh.mx, my = mesh.my;
    const double* h = grid.h.data();
    const double* hd = h_dot.data();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < my; ++j) {
        for (int i = 0; i < mx; ++i) {
            std::size_t m = mesh.idx(i, j);
            mesh.z_dot[m] = corner_average(hd[grid.idx(i, j)], hd[grid.idx(i, j + 1)],
                                           hd[grid.idx(i + 1, j)], hd[grid.idx(i + 1, j + 1)]);

            // The two +x pipes spanning this point: (i,j)->(i+1,j) and
            // (i,j+1)->(i+1,j+1). Their shared face index is f = i+1.
            double qx = 0.5 * (pipes.e[pipes.ie(i + 1, j)] + pipes.e[pipes.ie(i + 1, j + 1)]);
            double cx1 = 0.5 * (h[grid.idx(i, j)] + h[grid.idx(i + 1, j)]) * p.dy;
            double cx2 = 0.5 * (h[grid.idx(i, j + 1)] + h[grid.idx(i + 1, j + 1)]) * p.dy;
            double cx = 0.5 * (cx1 + cx2);
            mesh.x_dot[m] = cx > kDrySection ? qx / cx : 0.0;

            // The two +y pipes: (i,j)->(i,j+1) and (i+1,j)->(i+1,j+1), face g = j+1.
            double qy = 0.5 * (pipes.n[pipes.in(i, j + 1)] + pipes.n[pipes.in(i + 1, j + 1)]);
            double cy1 = 0.5 * (h[grid.idx(i, j)] + h[grid.idx(i, j + 1)]) * p.dx;
            double cy2 = 0.5 * (h[grid.idx(i + 1, j)] + h[grid.idx(i + 1, j + 1)]) * p.dx;
            double cy = 0.5 * (cy1 + cy2);
            mesh.y_dot[m] = cy > kDrySection ? qy / cy : 0.0;
        }
    }
}

double sample_mesh(const SurfaceMesh& mesh, const std::vector<double>& field, double x,
                   double y, const FluidParams& p) {
    // Mesh point [i,j] sits at ((i+1)*dx, (j+1)*dy).
    double u = x / p.dx - 1.0;
    double v = y / p.dy - 1.0;
    double fu = std::floor(u);
    double fv = std::floor(v);
    int i0 = static_cast<int>(fu);
    int j0 = static_cast<int>(fv);
    double tu = u - fu;
    double tv = v - fv;
    if (i0 < 0) { i0 = 0; tu = 0.0; }
    if (j0 < 0) { j0 = 0; tv = 0.0; }
    if (i0 >= mesh.mx - 1) { i0 = mesh.mx - 1; tu = 0.0; }
    if (j0 >= mesh.my - 1) { j0 = mesh.my - 1; tv = 0.0; }
    int i1 = i0 + 1 < mesh.mx ? i0 + 1 : i0;
    int j1 = j0 + 1 < mesh.my ? j0 + 1 : j0;
    double f00 = field[mesh.idx(i0, j0)];
    double f10 = field[mesh.idx(i1, j0)];
    double f01 = field[mesh.idx(i0, j1)];
    double f11 = field[mesh.idx(i1, j1)];
    double fx0 = f00 + tu * (f10 - f00);
    double fx1 = f01 + tu * (f11 - f01);
    return fx0 + tv * (fx1 - fx0);
}

void distribute_force(const SurfaceMesh& mesh, int point_i, int point_j, double f_e,
                      ColumnGrid& grid, const FluidParams& p) {
    (void)mesh;
    double dE = -f_e / (4.0 * (p.dx * p.dy));
    grid.E[grid.idx(point_i, point_j)] += dE;
    grid.E[grid.idx(point_i, point_j + 1)] += dE;
    grid.E[grid.idx(point_i + 1, point_j)] += dE;
    grid.E[grid.idx(point_i + 1, point_j + 1)] += dE;
}

}  // namespace splash::surface
