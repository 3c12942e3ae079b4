#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hns/eigensystem.hpp"
#include "hns/eos.hpp"

namespace hns {

// Conserved triple (v, u, E = e + u^2/2) plus the relaxed fields (q, S).
struct Cell {
    double v, u, E, q, S;
};

struct Grid {
    std::size_t n_cells = 2048;
    double x_lo = -20.0;
    double x_hi = 20.0;
};

struct GridState {
    std::vector<Cell> cells;
    double dx = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
    double time = 0.0;

    double x_center(std::size_t i) const {
        return x_lo + (static_cast<double>(i) + 0.5) * dx;
    }
};

// C^2 profiles with support [-1, 1]. Bump is the even polynomial bump
// (1 - xi^2)^3; SkewBump rises over the left fifth of the support with a
// quintic smoothstep and falls over the remaining four fifths, so the two
// slope orientations steepen at rates roughly 4:1 apart.
enum class ProfileFamily { Bump, SkewBump };

double profile_value(ProfileFamily family, double xi);

struct InitialData {
    ProfileFamily family = ProfileFamily::Bump;
    double eps = 1e-3;
    double sigma = 2.0; // support half-width
    double x0 = 0.0;
    // perturbation direction in (v, u, theta, q, S); when absent the
    // equilibrium eigenvector r* scaled to unit sup-norm is used
    std::optional<Vec5> direction;
};

struct solver_breakdown : std::runtime_error {
    solver_breakdown(std::size_t cell_, double time_, const std::string& why);
    std::size_t cell;
    double time;
};

// state = equilibrium + eps * phi((x - x0)/sigma) * direction, evaluated at
// cell centers; exact equilibrium outside the support. Rejects data whose
// support does not fit in the domain or that is inadmissible.
GridState make_initial_data(const InitialData& init, const PhysicalParams& p,
                            const Grid& grid);

// Recovers theta from the conserved fields.
ThermoState cell_state(const Cell& c, const PhysicalParams& p);

// One SSP-RK2 step of the MUSCL-Rusanov update of (v, u, E) and the
// exponentially integrated balance-law update of (q, S);
// dt = cfl * dx / max lambda5. Throws solver_breakdown when a cell leaves
// the admissible set.
GridState step(const GridState& state, const PhysicalParams& p, double cfl);

struct DiagSample {
    double t;
    double max_du, max_dtheta;
    double eta_integral;
    double s_integral;
    double dissipation_integral; // int_0^t int (v q^2/(k th^2) + v S^2/(mu th))
    double eta_residual;         // eta-balance residual / eta(0)
    double min_v, min_theta;
    bool resolved; // steepest gradient spans >= 8 cells
};

struct RunDiagnostics {
    std::vector<DiagSample> series;
    // (t, max|du/dx|) recorded every step
    std::vector<std::pair<double, double>> gradient_trace;
    double initial_max_du = 0.0;
    double eta0 = 0.0;
    bool broke_down = false;
    double breakdown_time = 0.0;
    std::size_t breakdown_cell = 0;
    bool boundary_touched = false;
    bool theta_below_half = false;
    bool classical = true; // admissible and resolved throughout, no breakdown
};

struct RunOptions {
    double t_end = 1.0;
    double cfl = 0.4;
    Grid grid;
    std::size_t output_every = 20;
    // stop once max|du/dx| reaches factor * its initial value
    std::optional<double> gradient_stop_factor;
};

struct RunResult {
    RunDiagnostics diag;
    GridState state;
    std::optional<double> threshold_time;
};

RunResult run(const InitialData& init, const PhysicalParams& p,
              const RunOptions& opt);

// Residual series of the discrete energy balance
// (eta-integral + accumulated dissipation - initial eta-integral) / eta(0).
std::vector<double> entropy_balance(const RunDiagnostics& diag);

struct BlowupCase {
    int sign;
    double eps;
    std::size_t n_cells;
    std::optional<double> t_star; // threshold crossing or breakdown time
    bool crossed = false;
    bool broke_down = false;
    double growth = 1.0;  // max gradient / initial gradient
    double fit_r2 = 0.0;  // linear fit of 1/max|du/dx| over the last decade
    double horizon = 0.0; // t_end the case actually used
};

struct ScanOptions {
    double cfl = 0.4;
    double t_max = 20.0;
    double threshold = 1e3; // growth factor defining T*
    double x_lo = -20.0, x_hi = 20.0;
    bool rarefactive = true; // also run the opposite orientation
};

struct BlowupScanReport {
    int compressive_sign = +1;
    std::vector<BlowupCase> cases;             // compressive orientation
    std::vector<BlowupCase> rarefactive_cases; // horizon 2 * T*_compressive
};

// Orientation whose initial lambda_4 profile has the steeper compression.
int compressive_sign(const InitialData& init, const PhysicalParams& p,
                     const Grid& grid);

BlowupScanReport blowup_scan(const InitialData& family,
                             const std::vector<double>& amplitudes,
                             const std::vector<std::size_t>& resolutions,
                             const PhysicalParams& p, const ScanOptions& opt);

double linear_fit_r2(const std::vector<double>& x,
                     const std::vector<double>& y);

} // namespace hns
