#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace splash {

/// Physical and numerical constants shared by every subsystem.
/// g is stored signed (negative = downward); hydrostatic formulas use |g|.
struct FluidParams {
    double rho = 1000.0;          // fluid density, kg/m^3
    double g = -9.8;              // gravitational acceleration, m/s^2, signed
    double p0 = 101325.0;         // atmospheric pressure, Pa
    double dx = 0.1;              // column spacing, m
    double dy = 0.1;
    double dt = 1.0 / 300.0;      // time step, s
    double damping = 0.1;         // per-second flow decay, >= 0
    double diag_coupling = 0.25;  // diagonal pipe weight, (0, 1]
    double spray_threshold = 2.25;   // m/s; useful range 2.0 - 2.5
    double particle_volume = 5e-6;   // m^3 per spray droplet
    double spawn_fraction = 4.0;     // particles per unit of threshold excess
    std::uint64_t seed = 0;

    bool operator==(const FluidParams&) const = default;

    double gravity_magnitude() const { return std::fabs(g); }
    double column_area() const { return dx * dy; }
    double damp_factor() const {
        double f = 1.0 - damping * dt;
        return f > 0.0 ? f : 0.0;
    }

    void validate() const {
        auto require = [](bool ok, const char* what) {
            if (!ok) throw std::invalid_argument(std::string("FluidParams: ") + what);
        };
        require(rho > 0.0, "rho must be > 0");
        require(dx > 0.0, "dx must be > 0");
        require(dy > 0.0, "dy must be > 0");
        require(dt > 0.0, "dt must be > 0");
        require(p0 >= 0.0, "p0 must be >= 0");
        require(damping >= 0.0, "damping must be >= 0");
        require(diag_coupling > 0.0 && diag_coupling <= 1.0, "diag_coupling must be in (0, 1]");
        require(spray_threshold > 0.0, "spray_threshold must be > 0");
        require(particle_volume > 0.0, "particle_volume must be > 0");
        require(spawn_fraction > 0.0, "spawn_fraction must be > 0");
    }
};

/// Time-step ceiling for stable explicit integration at maximum depth h_max.
inline double cfl_bound(const FluidParams& p, double h_max) {
    if (h_max <= 0.0) return std::numeric_limits<double>::infinity();
    double cell = p.dx < p.dy ? p.dx : p.dy;
    return 0.25 * cell / std::sqrt(p.gravity_magnitude() * h_max);
}

}  // namespace splash
