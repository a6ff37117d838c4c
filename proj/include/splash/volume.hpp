#pragma once

#include <vector>

#include "splash/grid.hpp"
#include "splash/params.hpp"

namespace splash::volume {

/// Outcome of the non-negativity scale-back. clamped_volume is the signed sum
/// of residual negative volumes forced to zero after the iteration cap
/// (<= 0; nonzero is a diagnostic, not a failure).
struct ScaleReport {
    int iterations = 0;
    int clamped_columns = 0;
    double clamped_volume = 0.0;
};

inline constexpr int kMaxScaleIterations = 20;

double column_height(double V, const FluidParams& p);
double total_pressure(double h, double E, const FluidParams& p);

/// Acceleration of the fluid in a pipe of length l between columns a and b;
/// positive accelerates flow from a toward b.
double pipe_acceleration(double h_a, double h_b, double E_a, double E_b, double l,
                         const FluidParams& p);

/// Single-pipe flow update: integrate acceleration, then damp.
double flow_step(double q, double c, double a, const FluidParams& p);

/// Refresh grid.h from grid.V.
void compute_heights(ColumnGrid& grid, const FluidParams& p);

/// Accelerate and damp every interior pipe in place (boundary slots are left
/// for apply_boundary). Reads grid.h and grid.E.
void update_flows(const ColumnGrid& grid, PipeField& pipes, const FluidParams& p);

/// Force boundary-crossing pipes to their edge rule: 0 for Wall, +-q oriented
/// into the grid for Constant sources.
void apply_boundary(PipeField& pipes, const BoundarySpec& boundary);

/// Trapezoidal net volume change per column from the flows before and after
/// update_flows. Inflow-oriented; on a closed grid the field sums to zero up
/// to rounding.
void integrate_volumes(const ColumnGrid& grid, const PipeField& pipes_old,
                       const PipeField& pipes_new, const FluidParams& p,
                       std::vector<double>& dv);

/// Scale back outflows of columns whose update would drive them negative,
/// then apply dv to grid.V. Both pipes_old and pipes_new are scaled so the
/// step's transported volume stays consistent. Residual negatives after
/// kMaxScaleIterations are clamped to zero and reported.
ScaleReport enforce_nonnegative(ColumnGrid& grid, PipeField& pipes_old, PipeField& pipes_new,
                                const FluidParams& p, std::vector<double>& dv);

/// Net inflow into column (i,j) in the fixed opposite-pair accumulation
/// order; shared by the volume update and the surface velocity extraction.
double net_inflow(const PipeField& pipes, int i, int j);

/// Volume carried into the grid through boundary pipes by the (old, new)
/// flow pair of one step. Used for the conservation ledger.
double boundary_flux_volume(const ColumnGrid& grid, const PipeField& pipes_old,
                            const PipeField& pipes_new, const FluidParams& p);

/// Number of pipes crossing each edge (west, east, south, north).
struct BoundaryPipeCount {
    int west = 0, east = 0, south = 0, north = 0;
};
BoundaryPipeCount count_boundary_pipes(int nx, int ny);

}  // namespace splash::volume
