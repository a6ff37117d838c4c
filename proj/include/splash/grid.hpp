#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

#include "splash/params.hpp"

namespace splash {

/// Flow rule for pipes that cross one edge of the grid.
struct BoundaryRule {
    enum class Kind { Wall, Constant };
    Kind kind = Kind::Wall;
    double q = 0.0;  // m^3/s, positive = source (flow into the grid)

    static BoundaryRule wall() { return {}; }
    static BoundaryRule constant(double q_) { return {Kind::Constant, q_}; }

    bool operator==(const BoundaryRule&) const = default;
};

struct BoundarySpec {
    BoundaryRule west, east, south, north;

    bool operator==(const BoundarySpec&) const = default;

    bool all_wall() const {
        return west.kind == BoundaryRule::Kind::Wall && east.kind == BoundaryRule::Kind::Wall &&
               south.kind == BoundaryRule::Kind::Wall && north.kind == BoundaryRule::Kind::Wall;
    }
};

/// Rectilinear grid of fluid columns. V is the authoritative state; h and E
/// are derived/scratch fields refreshed inside each step.
struct ColumnGrid {
    int nx = 0;
    int ny = 0;
    std::vector<double> V;  // column volume, m^3, >= 0 after each step
    std::vector<double> E;  // external pressure, Pa, rebuilt every step
    std::vector<double> h;  // derived height, m
    BoundarySpec boundary;

    ColumnGrid() = default;
    ColumnGrid(int nx_, int ny_) : nx(nx_), ny(ny_) {
        V.assign(std::size_t(nx) * ny, 0.0);
        E.assign(std::size_t(nx) * ny, 0.0);
        h.assign(std::size_t(nx) * ny, 0.0);
    }

    std::size_t idx(int i, int j) const {
        assert(i >= 0 && i < nx && j >= 0 && j < ny);
        return std::size_t(j) * nx + i;
    }
    bool in_grid(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }

    double total_volume() const {
        double sum = 0.0;
        for (double v : V) sum += v;
        return sum;
    }
    double max_height() const {
        double m = 0.0;
        for (double v : h)
            if (v > m) m = v;
        return m;
    }
};

/// One signed flow per undirected pipe, stored face-centered so that
/// Q_{ij->kl} = -Q_{kl->ij} holds by construction.
///
/// Slot conventions (f, g are face indices):
///   e[f,j]   connects (f-1, j)   -> (f, j),     positive toward +x, f in [0, nx]
///   n[i,g]   connects (i, g-1)   -> (i, g),     positive toward +y, g in [0, ny]
///   ne[f,g]  connects (f-1, g-1) -> (f, g),     positive toward +x+y
///   nw[f,g]  connects (f, g-1)   -> (f-1, g),   positive toward -x+y
///
/// Slots with one endpoint outside the grid are boundary pipes; the four
/// diagonal slots with both endpoints outside (ne at (0,ny),(nx,0) and nw at
/// (0,0),(nx,ny)) are unused and stay zero.
struct PipeField {
    int nx = 0;
    int ny = 0;
    std::vector<double> e, n, ne, nw;

    PipeField() = default;
    PipeField(int nx_, int ny_) : nx(nx_), ny(ny_) {
        e.assign(std::size_t(nx + 1) * ny, 0.0);
        n.assign(std::size_t(nx) * (ny + 1), 0.0);
        ne.assign(std::size_t(nx + 1) * (ny + 1), 0.0);
        nw.assign(std::size_t(nx + 1) * (ny + 1), 0.0);
    }

    std::size_t ie(int f, int j) const {
        assert(f >= 0 && f <= nx && j >= 0 && j < ny);
        return std::size_t(j) * (nx + 1) + f;
    }
    std::size_t in(int i, int g) const {
        assert(i >= 0 && i < nx && g >= 0 && g <= ny);
        return std::size_t(g) * nx + i;
    }
    std::size_t id(int f, int g) const {
        assert(f >= 0 && f <= nx && g >= 0 && g <= ny);
        return std::size_t(g) * (nx + 1) + f;
    }

    /// Signed flow from column (i,j) toward the neighbor at offset (di,dj),
    /// positive = outflow. Both orientations of a pipe read negated values.
    double flow(int i, int j, int di, int dj) const;
};

/// Pipe lengths and transverse widths from the grid geometry. The diagonal
/// width carries the diag_coupling weight.
struct PipeGeometry {
    double len_e, len_n, len_d;
    double width_e, width_n, width_d;

    explicit PipeGeometry(const FluidParams& p) {
        len_e = p.dx;
        len_n = p.dy;
        len_d = std::sqrt(p.dx * p.dx + p.dy * p.dy);
        width_e = p.dy;
        width_n = p.dx;
        width_d = p.diag_coupling * (p.dx * p.dy) / len_d;
    }
};

inline double PipeField::flow(int i, int j, int di, int dj) const {
    if (di == 1 && dj == 0) return e[ie(i + 1, j)];
    if (di == -1 && dj == 0) return -e[ie(i, j)];
    if (di == 0 && dj == 1) return n[in(i, j + 1)];
    if (di == 0 && dj == -1) return -n[in(i, j)];
    if (di == 1 && dj == 1) return ne[id(i + 1, j + 1)];
    if (di == -1 && dj == -1) return -ne[id(i, j)];
    if (di == -1 && dj == 1) return nw[id(i, j + 1)];
    if (di == 1 && dj == -1) return -nw[id(i + 1, j)];
    assert(false && "not a neighbor offset");
    return 0.0;
}

}  // namespace splash
