#include "splash/volume.hpp"

#include <cassert>
#include <cmath>

namespace splash::volume {

double column_height(double V, const FluidParams& p) {
    assert(V >= 0.0 && "negative column volume");
    return V / (p.dx * p.dy);
}

double total_pressure(double h, double E, const FluidParams& p) {
    return h * p.rho * p.gravity_magnitude() + p.p0 + E;
}

double pipe_acceleration(double h_a, double h_b, double E_a, double E_b, double l,
                         const FluidParams& p) {
    double rho_g = p.rho * p.gravity_magnitude();
    return (rho_g * (h_a - h_b) + (E_a - E_b)) / (p.rho * l);
}

double flow_step(double q, double c, double a, const FluidParams& p) {
    return (q + p.dt * (c * a)) * p.damp_factor();
}

void compute_heights(ColumnGrid& grid, const FluidParams& p) {
    const double area = p.dx * p.dy;
    const int n = grid.nx * grid.ny;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < n; ++c) grid.h[c] = grid.V[c] / area;
}

void update_flows(const ColumnGrid& grid, PipeField& pipes, const FluidParams& p) {
    const PipeGeometry geo(p);
    const double rho_g = p.rho * p.gravity_magnitude();
    const double rho_le = p.rho * geo.len_e;
    const double rho_ln = p.rho * geo.len_n;
    const double rho_ld = p.rho * geo.len_d;
    const double damp = p.damp_factor();
    const double dt = p.dt;
    const int nx = grid.nx, ny = grid.ny;
    const double* h = grid.h.data();
    const double* E = grid.E.data();

#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
        for (int f = 1; f < nx; ++f) {
            std::size_t a = grid.idx(f - 1, j), b = grid.idx(f, j);
            double accel = (rho_g * (h[a] - h[b]) + (E[a] - E[b])) / rho_le;
            double c = 0.5 * (h[a] + h[b]) * geo.width_e;
            double& q = pipes.e[pipes.ie(f, j)];
            q = (q + dt * (c * accel)) * damp;
        }
    }
#pragma omp parallel for schedule(static)
    for (int g = 1; g < ny; ++g) {
        for (int i = 0; i < nx; ++i) {
            std::size_t a = grid.idx(i, g - 1), b = grid.idx(i, g);
            double accel = (rho_g * (h[a] - h[b]) + (E[a] - E[b])) / rho_ln;
            double c = 0.5 * (h[a] + h[b]) * geo.width_n;
            double& q = pipes.n[pipes.in(i, g)];
            q = (q + dt * (c * accel)) * damp;
        }
    }
#pragma omp parallel for schedule(static)
    for (int g = 1; g < ny; ++g) {
        for (int f = 1; f < nx; ++f) {
            std::size_t a = grid.idx(f - 1, g - 1), b = grid.idx(f, g);
            double accel = (rho_g * (h[a] - h[b]) + (E[a] - E[b])) / rho_ld;
            double c = 0.5 * (h[a] + h[b]) * geo.width_d;
            double& q = pipes.ne[pipes.id(f, g)];
            q = (q + dt * (c * accel)) * damp;

            std::size_t a2 = grid.idx(f, g - 1), b2 = grid.idx(f - 1, g);
            double accel2 = (rho_g * (h[a2] - h[b2]) + (E[a2] - E[b2])) / rho_ld;
            double c2 = 0.5 * (h[a2] + h[b2]) * geo.width_d;
            double& q2 = pipes.nw[pipes.id(f, g)];
            q2 = (q2 + dt * (c2 * accel2)) * damp;
        }
    }
}

namespace {

enum class PipeArray { E, N, NE, NW };

/// Enumerate every boundary pipe slot in a fixed order with its edge rule and
/// the sign that orients the stored value into the grid. Unused diagonal
/// corner slots (both endpoints outside) are reported with rule == nullptr.
template <typename Fn>
void for_each_boundary_slot(int nx, int ny, const BoundarySpec& b, Fn&& fn) {
    PipeField index_helper;  // only for slot arithmetic
    index_helper.nx = nx;
    index_helper.ny = ny;
    const auto& ix = index_helper;
    for (int j = 0; j < ny; ++j) {
        fn(PipeArray::E, ix.ie(0, j), &b.west, 1.0);
        fn(PipeArray::E, ix.ie(nx, j), &b.east, -1.0);
    }
    for (int i = 0; i < nx; ++i) {
        fn(PipeArray::N, ix.in(i, 0), &b.south, 1.0);
        fn(PipeArray::N, ix.in(i, ny), &b.north, -1.0);
    }
    for (int g = 0; g <= ny; ++g) {
        for (int f = 0; f <= nx; ++f) {
            // ne slot connects (f-1,g-1) -> (f,g)
            bool a_out = (f == 0 || g == 0);
            bool b_out = (f == nx || g == ny);
            if (a_out && b_out)
                fn(PipeArray::NE, ix.id(f, g), static_cast<const BoundaryRule*>(nullptr), 0.0);
            else if (a_out)
                fn(PipeArray::NE, ix.id(f, g), f == 0 ? &b.west : &b.south, 1.0);
            else if (b_out)
                fn(PipeArray::NE, ix.id(f, g), f == nx ? &b.east : &b.north, -1.0);

            // nw slot connects (f,g-1) -> (f-1,g)
            bool a2_out = (f == nx || g == 0);
            bool b2_out = (f == 0 || g == ny);
            if (a2_out && b2_out)
                fn(PipeArray::NW, ix.id(f, g), static_cast<const BoundaryRule*>(nullptr), 0.0);
            else if (a2_out)
                fn(PipeArray::NW, ix.id(f, g), f == nx ? &b.east : &b.south, 1.0);
            else if (b2_out)
                fn(PipeArray::NW, ix.id(f, g), f == 0 ? &b.west : &b.north, -1.0);
        }
    }
}

double& slot_ref(PipeField& p, PipeArray which, std::size_t slot) {
    switch (which) {
        case PipeArray::E: return p.e[slot];
        case PipeArray::N: return p.n[slot];
        case PipeArray::NE: return p.ne[slot];
        default: return p.nw[slot];
    }
}

double slot_val(const PipeField& p, PipeArray which, std::size_t slot) {
    switch (which) {
        case PipeArray::E: return p.e[slot];
        case PipeArray::N: return p.n[slot];
        case PipeArray::NE: return p.ne[slot];
        default: return p.nw[slot];
    }
}

double edge_flow(const BoundaryRule& rule, double sign_into_grid) {
    return rule.kind == BoundaryRule::Kind::Wall ? 0.0 : sign_into_grid * rule.q;
}

/// Trapezoidal step contribution of each direction into column (i,j),
/// oriented inflow-positive. Exact negation of the paired column's value.
struct StepTerms {
    double e_, w_, n_, s_, ne_, sw_, nw_, se_;
};

inline StepTerms step_terms(const PipeField& po, const PipeField& pn, int i, int j) {
    StepTerms t;
    t.e_ = -(po.e[po.ie(i + 1, j)] + pn.e[pn.ie(i + 1, j)]);
    t.w_ = po.e[po.ie(i, j)] + pn.e[pn.ie(i, j)];
    t.n_ = -(po.n[po.in(i, j + 1)] + pn.n[pn.in(i, j + 1)]);
    t.s_ = po.n[po.in(i, j)] + pn.n[pn.in(i, j)];
    t.ne_ = -(po.ne[po.id(i + 1, j + 1)] + pn.ne[pn.id(i + 1, j + 1)]);
    t.sw_ = po.ne[po.id(i, j)] + pn.ne[pn.id(i, j)];
    t.nw_ = -(po.nw[po.id(i, j + 1)] + pn.nw[pn.id(i, j + 1)]);
    t.se_ = po.nw[po.id(i + 1, j)] + pn.nw[pn.id(i + 1, j)];
    return t;
}

/// Fixed opposite-pair accumulation: invariant under the grid's square
/// symmetries, which keeps symmetric scenes bitwise symmetric.
inline double pair_sum(double e_, double w_, double n_, double s_, double ne_, double sw_,
                       double nw_, double se_) {
    return ((e_ + w_) + (n_ + s_)) + ((ne_ + sw_) + (nw_ + se_));
}

/// Scale the old and new values of every pipe draining column (i,j) by s.
void scale_outflows(PipeField& po, PipeField& pn, int i, int j, const StepTerms& t, double s) {
    auto scale = [s](double& a, double& b) {
        a *= s;
        b *= s;
    };
    if (t.e_ < 0.0) scale(po.e[po.ie(i + 1, j)], pn.e[pn.ie(i + 1, j)]);
    if (t.w_ < 0.0) scale(po.e[po.ie(i, j)], pn.e[pn.ie(i, j)]);
    if (t.n_ < 0.0) scale(po.n[po.in(i, j + 1)], pn.n[pn.in(i, j + 1)]);
    if (t.s_ < 0.0) scale(po.n[po.in(i, j)], pn.n[pn.in(i, j)]);
    if (t.ne_ < 0.0) scale(po.ne[po.id(i + 1, j + 1)], pn.ne[pn.id(i + 1, j + 1)]);
    if (t.sw_ < 0.0) scale(po.ne[po.id(i, j)], pn.ne[pn.id(i, j)]);
    if (t.nw_ < 0.0) scale(po.nw[po.id(i, j + 1)], pn.nw[pn.id(i, j + 1)]);
    if (t.se_ < 0.0) scale(po.nw[po.id(i + 1, j)], pn.nw[pn.id(i + 1, j)]);
}

}  // namespace

void apply_boundary(PipeField& pipes, const BoundarySpec& boundary) {
    for_each_boundary_slot(pipes.nx, pipes.ny, boundary,
                           [&](PipeArray which, std::size_t slot, const BoundaryRule* rule,
                               double sign) {
                               slot_ref(pipes, which, slot) = rule ? edge_flow(*rule, sign) : 0.0;
                           });
}

double net_inflow(const PipeField& p, int i, int j) {
    double e_ = -p.e[p.ie(i + 1, j)];
    double w_ = p.e[p.ie(i, j)];
    double n_ = -p.n[p.in(i, j + 1)];
    double s_ = p.n[p.in(i, j)];
    double ne_ = -p.ne[p.id(i + 1, j + 1)];
    double sw_ = p.ne[p.id(i, j)];
    double nw_ = -p.nw[p.id(i, j + 1)];
    double se_ = p.nw[p.id(i + 1, j)];
    return pair_sum(e_, w_, n_, s_, ne_, sw_, nw_, se_);
}

void integrate_volumes(const ColumnGrid& grid, const PipeField& pipes_old,
                       const PipeField& pipes_new, const FluidParams& p,
                       std::vector<double>& dv) {
    const int nx = grid.nx, ny = grid.ny;
    const double half_dt = 0.5 * p.dt;
    dv.resize(std::size_t(nx) * ny);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            StepTerms t = step_terms(pipes_old, pipes_new, i, j);
            double acc = pair_sum(t.e_, t.w_, t.n_, t.s_, t.ne_, t.sw_, t.nw_, t.se_);
            dv[grid.idx(i, j)] = acc * half_dt;
        }
    }
}

ScaleReport enforce_nonnegative(ColumnGrid& grid, PipeField& pipes_old, PipeField& pipes_new,
                                const FluidParams& p, std::vector<double>& dv) {
    const int nx = grid.nx, ny = grid.ny;
    const double half_dt = 0.5 * p.dt;
    ScaleReport rep;

    for (int iter = 0; iter < kMaxScaleIterations; ++iter) {
        // Deficit detection against the current dv. A pipe can only drain one
        // of its two columns, so each deficit column scales a disjoint pipe
        // set and the pass order does not affect the result.
        bool any = false;
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                std::size_t c = grid.idx(i, j);
                if (grid.V[c] + dv[c] >= 0.0) continue;
                StepTerms t = step_terms(pipes_old, pipes_new, i, j);
                auto neg = [](double x) { return x < 0.0 ? x : 0.0; };
                double out_acc = pair_sum(neg(t.e_), neg(t.w_), neg(t.n_), neg(t.s_),
                                          neg(t.ne_), neg(t.sw_), neg(t.nw_), neg(t.se_));
                double out_vol = out_acc * half_dt;
                if (!(out_vol < 0.0)) continue;
                double s = grid.V[c] / (-out_vol);
                scale_outflows(pipes_old, pipes_new, i, j, t, s);
                any = true;
            }
        }
        if (!any) break;
        rep.iterations = iter + 1;
        integrate_volumes(grid, pipes_old, pipes_new, p, dv);
    }

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            std::size_t c = grid.idx(i, j);
            double v = grid.V[c] + dv[c];
            if (v < 0.0) {
                rep.clamped_volume += v;
                rep.clamped_columns += 1;
                v = 0.0;
            }
            grid.V[c] = v;
        }
    }
    return rep;
}

double boundary_flux_volume(const ColumnGrid& grid, const PipeField& pipes_old,
                            const PipeField& pipes_new, const FluidParams& p) {
    const double half_dt = 0.5 * p.dt;
    double acc = 0.0;
    for_each_boundary_slot(grid.nx, grid.ny, grid.boundary,
                           [&](PipeArray which, std::size_t slot, const BoundaryRule* rule,
                               double sign) {
                               if (!rule) return;
                               double q_old = slot_val(pipes_old, which, slot);
                               double q_new = slot_val(pipes_new, which, slot);
                               acc += sign * ((q_old + q_new) * half_dt);
                           });
    return acc;
}

BoundaryPipeCount count_boundary_pipes(int nx, int ny) {
    BoundaryPipeCount count;
    BoundarySpec b;
    for_each_boundary_slot(nx, ny, b,
                           [&](PipeArray, std::size_t, const BoundaryRule* rule, double) {
                               if (rule == &b.west) count.west += 1;
                               else if (rule == &b.east) count.east += 1;
                               else if (rule == &b.south) count.south += 1;
                               else if (rule == &b.north) count.north += 1;
                           });
    return count;
}

}  // namespace splash::volume
