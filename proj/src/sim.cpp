#include "hns/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hns/invariant.hpp"
#include "hns/parallel.hpp"

namespace hns {

namespace {

double quintic_smoothstep(double t) {
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

constexpr double skew_rise_fraction = 0.2;

Cell equilibrium_cell(const PhysicalParams& p) {
    return Cell{1.0, 0.0, p.cv, 0.0, 0.0};
}

double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::min(a, b);
    if (a < 0.0 && b < 0.0) return std::max(a, b);
    return 0.0;
}

struct FaceFlux {
    double fv, fu, fE;
};

// F(U) = (-u, p - S, u p + q - u S) evaluated at a reconstructed state
FaceFlux physical_flux(const Cell& c, double pres) {
    return {-c.u, pres - c.S, c.u * pres + c.q - c.u * c.S};
}

// Workspace for the two-stage stepping of one grid; indices are padded by
// two equilibrium ghost cells on each side.
class Stepper {
public:
    Stepper(const PhysicalParams& p, std::size_t n, double dx)
        : p_(p),
          n_(n),
          dx_(dx),
          pad_(n + 4),
          theta_(n + 4),
          speed_(n + 4),
          slope_(n + 4),
          stage1_(n),
          stage2_(n) {
        const Cell eq = equilibrium_cell(p_);
        const ThermoState eq_state = equilibrium_state();
        eq_theta_ = 1.0;
        eq_speed_ = wave_speed_bound(eq_state, p_);
        std::fill(pad_.begin(), pad_.end(), eq);
    }

    // Advances cells in place by one step of size at most dt_cap; returns
    // the dt taken. Strang structure: exponential relaxation half-kick,
    // SSP-RK2 MUSCL-Rusanov drift of (v, u, E), relaxation half-kick.
    double advance(std::vector<Cell>& cells, double time, double cfl,
                   double dt_cap) {
        load(cells);
        prepare(time);
        double smax = eq_speed_;
        for (std::size_t i = 2; i < n_ + 2; ++i) {
            smax = std::max(smax, speed_[i]);
        }
        double dt = cfl * dx_ / smax;
        if (dt > dt_cap) dt = dt_cap;

        relax_kick(cells, 0.5 * dt, time);

        load(cells);
        prepare(time);
        stage(dt, time, stage1_);
        load(stage1_);
        prepare(time);
        stage(dt, time, stage2_);
        for (std::size_t i = 0; i < n_; ++i) {
            Cell& c = cells[i];
            const Cell& s2 = stage2_[i];
            c.v = 0.5 * (c.v + s2.v);
            c.u = 0.5 * (c.u + s2.u);
            c.E = 0.5 * (c.E + s2.E);
            // q and S ride through the drift unchanged
        }

        relax_kick(cells, 0.5 * dt, time);
        check_admissible(cells, time + dt);
        return dt;
    }

    double dissipation_integrand(const std::vector<Cell>& cells,
                                 double time) const {
        double acc = 0.0;
        for (const Cell& c : cells) {
            const ThermoState s = to_state(c, time);
            acc += s.v * s.q * s.q / (p_.kappa * s.theta * s.theta) +
                   s.v * s.s_stress * s.s_stress / (p_.mu * s.theta);
        }
        return acc * dx_;
    }

private:
    ThermoState to_state(const Cell& c, double) const {
        if (!(c.v > 0.0)) {
            throw std::domain_error("non-positive specific volume");
        }
        const double theta =
            recover_temperature(c.v, c.E - 0.5 * c.u * c.u, c.q, c.S, p_);
        return ThermoState{c.v, c.u, theta, c.q, c.S};
    }

    void load(const std::vector<Cell>& cells) {
        std::copy(cells.begin(), cells.end(), pad_.begin() + 2);
    }

    // primitives, speeds and limited slopes of the padded state
    void prepare(double time) {
        const std::size_t m = n_ + 4;
        for (std::size_t i = 0; i < m; ++i) {
            const Cell& c = pad_[i];
            if (i < 2 || i >= n_ + 2) {
                theta_[i] = eq_theta_;
                speed_[i] = eq_speed_;
                continue;
            }
            ThermoState s{};
            try {
                s = to_state(c, time);
            } catch (const std::domain_error& e) {
                throw solver_breakdown(i - 2, time, e.what());
            }
            theta_[i] = s.theta;
            try {
                speed_[i] = wave_speed_bound(s, p_);
            } catch (const std::exception& e) {
                throw solver_breakdown(i - 2, time, e.what());
            }
        }
        slope_[0] = slope_[m - 1] = Cell{0, 0, 0, 0, 0};
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const Cell &l = pad_[i - 1], &c = pad_[i], &r = pad_[i + 1];
            slope_[i] = Cell{minmod(c.v - l.v, r.v - c.v),
                             minmod(c.u - l.u, r.u - c.u),
                             minmod(c.E - l.E, r.E - c.E),
                             minmod(c.q - l.q, r.q - c.q),
                             minmod(c.S - l.S, r.S - c.S)};
        }
    }

    Cell face_state(std::size_t i, double side) const {
        // side = +0.5 for the right edge of cell i, -0.5 for the left edge
        const Cell& c = pad_[i];
        const Cell& s = slope_[i];
        return Cell{c.v + side * s.v, c.u + side * s.u, c.E + side * s.E,
                    c.q + side * s.q, c.S + side * s.S};
    }

    // exact exponential integration of the relaxation toward the local
    // quasi-steady targets, gradients frozen at the current state
    void relax_kick(std::vector<Cell>& cells, double h, double time) {
        load(cells);
        const std::size_t m = n_ + 4;
        for (std::size_t i = 2; i < m - 2; ++i) {
            try {
                theta_[i] = to_state(pad_[i], time).theta;
            } catch (const std::domain_error& e) {
                throw solver_breakdown(i - 2, time, e.what());
            }
        }
        theta_[0] = theta_[1] = theta_[m - 1] = theta_[m - 2] = eq_theta_;
        const double decay_q = std::exp(-h / p_.tau1);
        const double decay_S = std::exp(-h / p_.tau2);
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t pi = i + 2;
            const Cell& c = pad_[pi];
            const double theta_x =
                (theta_[pi + 1] - theta_[pi - 1]) / (2.0 * dx_);
            const double u_x =
                (pad_[pi + 1].u - pad_[pi - 1].u) / (2.0 * dx_);
            const double q_target = -p_.kappa * theta_x / c.v;
            const double S_target = p_.mu * u_x / c.v;
            cells[i].q = c.q * decay_q + q_target * (1.0 - decay_q);
            cells[i].S = c.S * decay_S + S_target * (1.0 - decay_S);
        }
    }

    void stage(double h, double time, std::vector<Cell>& out) {
        // faces f = 0..n between padded cells f+1 and f+2
        const double lam = h / dx_;
        double flux_v_prev = 0.0, flux_u_prev = 0.0, flux_E_prev = 0.0;
        for (std::size_t f = 0; f <= n_; ++f) {
            const std::size_t jl = f + 1, jr = f + 2;
            Cell wl = face_state(jl, +0.5);
            Cell wr = face_state(jr, -0.5);
            double pl, pr;
            try {
                pl = pressure(to_state(wl, time), p_);
                pr = pressure(to_state(wr, time), p_);
            } catch (const std::domain_error& e) {
                throw solver_breakdown(f, time, e.what());
            }
            const FaceFlux Fl = physical_flux(wl, pl);
            const FaceFlux Fr = physical_flux(wr, pr);
            const double s = std::max(speed_[jl], speed_[jr]);
            const double fv = 0.5 * (Fl.fv + Fr.fv) - 0.5 * s * (wr.v - wl.v);
            const double fu = 0.5 * (Fl.fu + Fr.fu) - 0.5 * s * (wr.u - wl.u);
            const double fE = 0.5 * (Fl.fE + Fr.fE) - 0.5 * s * (wr.E - wl.E);
            if (f > 0) {
                const std::size_t i = f - 1; // real cell left of this face
                const Cell& c = pad_[i + 2];
                Cell& o = out[i];
                o.v = c.v - lam * (fv - flux_v_prev);
                o.u = c.u - lam * (fu - flux_u_prev);
                o.E = c.E - lam * (fE - flux_E_prev);
            }
            flux_v_prev = fv;
            flux_u_prev = fu;
            flux_E_prev = fE;
        }

        for (std::size_t i = 0; i < n_; ++i) {
            out[i].q = pad_[i + 2].q;
            out[i].S = pad_[i + 2].S;
        }
    }

    void check_admissible(const std::vector<Cell>& cells, double time) const {
        for (std::size_t i = 0; i < n_; ++i) {
            const Cell& c = cells[i];
            if (!(c.v > 0.0)) {
                throw solver_breakdown(i, time, "non-positive specific volume");
            }
            try {
                recover_temperature(c.v, c.E - 0.5 * c.u * c.u, c.q, c.S, p_);
            } catch (const std::domain_error& e) {
                throw solver_breakdown(i, time, e.what());
            }
        }
    }

    const PhysicalParams& p_;
    std::size_t n_;
    double dx_;
    double eq_theta_ = 1.0, eq_speed_ = 0.0;
    std::vector<Cell> pad_;
    std::vector<double> theta_, speed_;
    std::vector<Cell> slope_;
    std::vector<Cell> stage1_, stage2_;
};

double max_face_gradient(const std::vector<Cell>& cells, double dx,
                         double Cell::*field, double far_value) {
    double m = 0.0;
    if (cells.empty()) return m;
    m = std::abs(cells.front().*field - far_value) / dx;
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        m = std::max(m, std::abs(cells[i + 1].*field - cells[i].*field) / dx);
    }
    m = std::max(m, std::abs(far_value - cells.back().*field) / dx);
    return m;
}

} // namespace

solver_breakdown::solver_breakdown(std::size_t cell_, double time_,
                                   const std::string& why)
    : std::runtime_error("solver breakdown at cell " + std::to_string(cell_) +
                         ", t = " + std::to_string(time_) + ": " + why),
      cell(cell_),
      time(time_) {}

double profile_value(ProfileFamily family, double xi) {
    if (!(xi > -1.0 && xi < 1.0)) return 0.0;
    switch (family) {
        case ProfileFamily::Bump: {
            const double s = 1.0 - xi * xi;
            return s * s * s;
        }
        case ProfileFamily::SkewBump: {
            const double a = skew_rise_fraction;
            const double split = -1.0 + 2.0 * a;
            if (xi <= split) {
                return quintic_smoothstep((xi + 1.0) / (2.0 * a));
            }
            return quintic_smoothstep((1.0 - xi) / (2.0 * (1.0 - a)));
        }
    }
    return 0.0;
}

ThermoState cell_state(const Cell& c, const PhysicalParams& p) {
    const double theta =
        recover_temperature(c.v, c.E - 0.5 * c.u * c.u, c.q, c.S, p);
    return ThermoState{c.v, c.u, theta, c.q, c.S};
}

GridState make_initial_data(const InitialData& init, const PhysicalParams& p,
                            const Grid& grid) {
    if (!(init.eps >= 0.0) && !(init.eps < 0.0)) {
        throw std::invalid_argument("make_initial_data: eps is NaN");
    }
    if (!(init.sigma > 0.0)) {
        throw std::invalid_argument("make_initial_data: sigma must be positive");
    }
    if (grid.n_cells < 8 || !(grid.x_lo < grid.x_hi)) {
        throw std::invalid_argument("make_initial_data: bad grid");
    }
    if (init.x0 - init.sigma < grid.x_lo || init.x0 + init.sigma > grid.x_hi) {
        throw std::invalid_argument(
            "make_initial_data: profile support exceeds the domain");
    }

    Vec5 dir{};
    if (init.direction) {
        dir = *init.direction;
    } else {
        dir = equilibrium_eigenvector(reduce(p), p.gas_const, +1);
        double sup = 0.0;
        for (double c : dir) sup = std::max(sup, std::abs(c));
        for (double& c : dir) c /= sup;
    }

    GridState st{};
    st.x_lo = grid.x_lo;
    st.x_hi = grid.x_hi;
    st.dx = (grid.x_hi - grid.x_lo) / static_cast<double>(grid.n_cells);
    st.time = 0.0;
    st.cells.resize(grid.n_cells);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        const double xi = (st.x_center(i) - init.x0) / init.sigma;
        const double amp = init.eps * profile_value(init.family, xi);
        if (amp == 0.0) {
            st.cells[i] = equilibrium_cell(p);
            continue;
        }
        const ThermoState s{1.0 + amp * dir[0], amp * dir[1],
                            1.0 + amp * dir[2], amp * dir[3], amp * dir[4]};
        if (!(s.v > 0.0) || !(s.theta > 0.0)) {
            throw std::invalid_argument(
                "make_initial_data: amplitude leaves the admissible set");
        }
        st.cells[i] = Cell{s.v, s.u,
                           internal_energy(s, p) + 0.5 * s.u * s.u, s.q,
                           s.s_stress};
    }
    return st;
}

GridState step(const GridState& state, const PhysicalParams& p, double cfl) {
    if (!(cfl > 0.0)) throw std::invalid_argument("step: cfl must be positive");
    GridState out = state;
    Stepper stepper(p, out.cells.size(), out.dx);
    const double dt = stepper.advance(
        out.cells, out.time, cfl, std::numeric_limits<double>::infinity());
    out.time += dt;
    return out;
}

std::vector<double> entropy_balance(const RunDiagnostics& diag) {
    std::vector<double> res;
    res.reserve(diag.series.size());
    for (const DiagSample& s : diag.series) res.push_back(s.eta_residual);
    return res;
}

namespace {

DiagSample sample_state(const GridState& st, const PhysicalParams& p,
                        double diss_accum, double eta0) {
    DiagSample d{};
    d.t = st.time;
    d.min_v = std::numeric_limits<double>::infinity();
    d.min_theta = std::numeric_limits<double>::infinity();
    double eta = 0.0, s_tot = 0.0;
    double u_min = 0.0, u_max = 0.0;
    std::vector<double> theta(st.cells.size());
    for (std::size_t i = 0; i < st.cells.size(); ++i) {
        const ThermoState s = cell_state(st.cells[i], p);
        theta[i] = s.theta;
        eta += relative_entropy(s, p);
        s_tot += entropy(s, p);
        d.min_v = std::min(d.min_v, s.v);
        d.min_theta = std::min(d.min_theta, s.theta);
        u_min = std::min(u_min, s.u);
        u_max = std::max(u_max, s.u);
    }
    d.eta_integral = eta * st.dx;
    d.s_integral = s_tot * st.dx;
    d.dissipation_integral = diss_accum;
    d.eta_residual = (d.eta_integral + diss_accum - eta0) /
                     std::max(eta0, 1e-300);
    d.max_du = max_face_gradient(st.cells, st.dx, &Cell::u, 0.0);
    d.max_dtheta = 0.0;
    for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
        d.max_dtheta =
            std::max(d.max_dtheta, std::abs(theta[i + 1] - theta[i]) / st.dx);
    }
    d.resolved = d.max_du == 0.0 ||
                 (u_max - u_min) / d.max_du >= 8.0 * st.dx;
    return d;
}

bool boundary_deviates(const GridState& st, const PhysicalParams& p) {
    const Cell eq = equilibrium_cell(p);
    const std::size_t n = st.cells.size();
    for (std::size_t k : {std::size_t{0}, std::size_t{1}, n - 2, n - 1}) {
        const Cell& c = st.cells[k];
        if (std::abs(c.v - eq.v) > 1e-10 || std::abs(c.u) > 1e-10 ||
            std::abs(c.E - eq.E) > 1e-10 || std::abs(c.q) > 1e-10 ||
            std::abs(c.S) > 1e-10) {
            return true;
        }
    }
    return false;
}

} // namespace

RunResult run(const InitialData& init, const PhysicalParams& p,
              const RunOptions& opt) {
    if (!(opt.t_end >= 0.0)) throw std::invalid_argument("run: t_end < 0");
    if (!(opt.cfl > 0.0) || opt.cfl > 1.0) {
        throw std::invalid_argument("run: cfl outside (0, 1]");
    }
    RunResult result{};
    result.state = make_initial_data(init, p, opt.grid);
    GridState& st = result.state;
    RunDiagnostics& diag = result.diag;

    Stepper stepper(p, st.cells.size(), st.dx);
    double diss_accum = 0.0;

    DiagSample first = sample_state(st, p, 0.0, 0.0);
    diag.eta0 = first.eta_integral;
    first.eta_residual = 0.0;
    diag.initial_max_du = first.max_du;
    diag.series.push_back(first);
    diag.gradient_trace.emplace_back(0.0, first.max_du);
    diag.theta_below_half = first.min_theta <= 0.5;

    const double stop_gradient =
        opt.gradient_stop_factor
            ? *opt.gradient_stop_factor * std::max(diag.initial_max_du, 0.0)
            : std::numeric_limits<double>::infinity();

    std::size_t steps = 0;
    bool stopped = false;
    while (st.time < opt.t_end * (1.0 - 1e-14) && !stopped) {
        const double d_before = stepper.dissipation_integrand(st.cells, st.time);
        double dt = 0.0;
        try {
            dt = stepper.advance(st.cells, st.time, opt.cfl,
                                 opt.t_end - st.time);
        } catch (const solver_breakdown& b) {
            diag.broke_down = true;
            diag.breakdown_time = b.time;
            diag.breakdown_cell = b.cell;
            diag.classical = false;
            break;
        }
        st.time += dt;
        ++steps;
        const double d_after = stepper.dissipation_integrand(st.cells, st.time);
        diss_accum += 0.5 * (d_before + d_after) * dt;

        const double max_du = max_face_gradient(st.cells, st.dx, &Cell::u, 0.0);
        diag.gradient_trace.emplace_back(st.time, max_du);
        if (max_du >= stop_gradient && diag.initial_max_du > 0.0) {
            result.threshold_time = st.time;
            stopped = true;
        }

        const bool final_step = st.time >= opt.t_end * (1.0 - 1e-14);
        if (steps % opt.output_every == 0 || final_step || stopped) {
            DiagSample s = sample_state(st, p, diss_accum, diag.eta0);
            diag.series.push_back(s);
            diag.theta_below_half =
                diag.theta_below_half || s.min_theta <= 0.5;
            if (!s.resolved) diag.classical = false;
            if (boundary_deviates(st, p)) {
                diag.boundary_touched = true;
                break;
            }
        }
    }
    if (diag.broke_down) diag.classical = false;
    return result;
}

int compressive_sign(const InitialData& init, const PhysicalParams& p,
                     const Grid& grid) {
    double steepest[2] = {0.0, 0.0};
    const int signs[2] = {+1, -1};
    for (int k = 0; k < 2; ++k) {
        InitialData trial = init;
        trial.eps = signs[k] * std::abs(init.eps);
        const GridState st = make_initial_data(trial, p, grid);
        double min_slope = 0.0;
        double prev_lambda4 = 0.0;
        bool have_prev = false;
        for (const Cell& c : st.cells) {
            const ThermoState s = cell_state(c, p);
            const auto roots = solve_quartic(quartic_coeffs(s, p));
            const double lambda4 = roots[2];
            if (have_prev) {
                min_slope =
                    std::min(min_slope, (lambda4 - prev_lambda4) / st.dx);
            }
            prev_lambda4 = lambda4;
            have_prev = true;
        }
        steepest[k] = min_slope;
    }
    return steepest[0] <= steepest[1] ? +1 : -1;
}

namespace {

BlowupCase run_blowup_case(const InitialData& family, const PhysicalParams& p,
                           const ScanOptions& opt, int sign, double eps,
                           std::size_t n, double horizon) {
    InitialData init = family;
    init.eps = sign * eps;
    RunOptions ro{};
    ro.t_end = horizon;
    ro.cfl = opt.cfl;
    ro.grid = Grid{n, opt.x_lo, opt.x_hi};
    ro.output_every = 50;
    ro.gradient_stop_factor = opt.threshold;

    BlowupCase out{};
    out.sign = sign;
    out.eps = eps;
    out.n_cells = n;
    out.horizon = horizon;

    const RunResult r = run(init, p, ro);
    out.crossed = r.threshold_time.has_value();
    out.broke_down = r.diag.broke_down;
    if (out.crossed) {
        out.t_star = r.threshold_time;
    } else if (out.broke_down) {
        out.t_star = r.diag.breakdown_time;
    }

    const auto& trace = r.diag.gradient_trace;
    const double g0 = r.diag.initial_max_du;
    double gmax = 0.0;
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace[i].second > gmax) {
            gmax = trace[i].second;
            argmax = i;
        }
    }
    out.growth = g0 > 0.0 ? gmax / g0 : 1.0;

    // linear fit of 1/g over the last decade of gradient growth; when the
    // growth never spans a full decade the window starts at the initial
    // gradient instead
    if (gmax > 0.0) {
        const double lo = std::max(0.1 * gmax, g0);
        std::vector<double> t, y;
        for (std::size_t i = 0; i <= argmax; ++i) {
            if (trace[i].second >= lo && trace[i].second > 0.0) {
                t.push_back(trace[i].first);
                y.push_back(1.0 / trace[i].second);
            }
        }
        out.fit_r2 = linear_fit_r2(t, y);
    }
    return out;
}

} // namespace

BlowupScanReport blowup_scan(const InitialData& family,
                             const std::vector<double>& amplitudes,
                             const std::vector<std::size_t>& resolutions,
                             const PhysicalParams& p, const ScanOptions& opt) {
    if (amplitudes.empty() || resolutions.empty()) {
        throw std::invalid_argument("blowup_scan: empty amplitude/resolution list");
    }
    for (std::size_t i = 0; i + 1 < amplitudes.size(); ++i) {
        if (!(amplitudes[i] > 0.0) || !(amplitudes[i] < amplitudes[i + 1])) {
            throw std::invalid_argument(
                "blowup_scan: amplitudes must be positive ascending");
        }
    }

    BlowupScanReport rep{};
    {
        InitialData probe = family;
        probe.eps = amplitudes.back();
        rep.compressive_sign =
            compressive_sign(probe, p, Grid{512, opt.x_lo, opt.x_hi});
    }

    rep.cases.resize(amplitudes.size() * resolutions.size());
    parallel_for(rep.cases.size(), [&](std::size_t j) {
        const double eps = amplitudes[j / resolutions.size()];
        const std::size_t n = resolutions[j % resolutions.size()];
        rep.cases[j] = run_blowup_case(family, p, opt, rep.compressive_sign,
                                       eps, n, opt.t_max);
    });

    if (opt.rarefactive) {
        rep.rarefactive_cases.resize(rep.cases.size());
        parallel_for(rep.cases.size(), [&](std::size_t j) {
            const BlowupCase& comp = rep.cases[j];
            double horizon = opt.t_max;
            if (comp.t_star) horizon = std::min(opt.t_max, 2.0 * *comp.t_star);
            rep.rarefactive_cases[j] =
                run_blowup_case(family, p, opt, -rep.compressive_sign,
                                comp.eps, comp.n_cells, horizon);
        });
    }
    return rep;
}

double linear_fit_r2(const std::vector<double>& x,
                     const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 3) return 0.0;
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (syy == 0.0) return 1.0;
    if (sxx == 0.0) return 0.0;
    const double ss_res = syy - sxy * sxy / sxx;
    return 1.0 - ss_res / syy;
}

} // namespace hns
