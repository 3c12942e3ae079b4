#pragma once

#include <stdexcept>

namespace hns {

// Physical constants of the relaxed gas model. All strictly positive and
// gamma = 1 + gas_const/cv must lie in (1, 5/3].
struct PhysicalParams {
    double tau1;      // heat-flux relaxation time
    double tau2;      // stress relaxation time
    double kappa;     // heat conductivity
    double mu;        // viscosity
    double gas_const; // universal gas constant R
    double cv;        // specific heat at constant volume
    double gamma;     // adiabatic index, always 1 + gas_const/cv

    static PhysicalParams make(double tau1, double tau2, double kappa,
                               double mu, double gas_const, double cv);

    // tau1 = tau2 = mu = 1, kappa = 1.5, R = 1, cv = 1.5, so that the
    // reduced pair is w = z = 1 and gamma = 5/3.
    static PhysicalParams defaults();
};

// Dimensionless groups w = kappa/(tau1*cv*R), z = mu/(tau2*R) plus gamma.
struct ReducedParams {
    double w;
    double z;
    double gamma;

    static ReducedParams make(double w, double z, double gamma);
};

ReducedParams reduce(const PhysicalParams& p);

// Inverse of reduce() with kappa = mu = 1 and the given gas constant.
PhysicalParams params_from_reduced(const ReducedParams& rp, double gas_const);

// Pointwise fluid state in Lagrangian coordinates.
struct ThermoState {
    double v;        // specific volume
    double u;        // velocity
    double theta;    // absolute temperature
    double q;        // heat flux
    double s_stress; // stress tensor S
};

constexpr ThermoState equilibrium_state() { return {1.0, 0.0, 1.0, 0.0, 0.0}; }

// First partial derivatives of pressure and internal energy with respect
// to (v, theta, q, S).
struct ThermoPartials {
    double p_v, p_theta, p_q, p_S;
    double e_v, e_theta, e_q, e_S;
};

// Relaxation-free ideal-gas closures, normalized so ideal_entropy(1,1) = 0.
double ideal_pressure(double v, double theta, const PhysicalParams& p);
double ideal_internal_energy(double theta, const PhysicalParams& p);
double ideal_entropy(double v, double theta, const PhysicalParams& p);

// p = R theta/v - tau1 q^2/(2 kappa theta) - tau2 S^2/(2 mu)
double pressure(const ThermoState& s, const PhysicalParams& p);

// e = cv theta + tau1 v q^2/(kappa theta) + tau2 v S^2/(2 mu)
double internal_energy(const ThermoState& s, const PhysicalParams& p);

// s = cv ln(theta) + R ln(v) + tau1 v q^2/(2 kappa theta^2)
double entropy(const ThermoState& s, const PhysicalParams& p);

// Convex relative entropy with Taylor base point at the equilibrium
// (v,u,theta,q,S) = (1,0,1,0,0). Nonnegative whenever theta > 1/2.
double relative_entropy(const ThermoState& s, const PhysicalParams& p);

ThermoPartials thermo_partials(const ThermoState& s, const PhysicalParams& p);

// e_v - (theta p_theta - p); identically zero for the closures above.
double gibbs_residual(const ThermoState& s, const PhysicalParams& p);

/// Inverts internal_energy for theta at fixed (v, q, S). Returns the larger
/// root of cv theta^2 - ehat theta + tau1 v q^2/kappa = 0 with
/// ehat = e - tau2 v S^2/(2 mu), i.e. the branch continuous with
/// theta = e/cv as q -> 0. Throws std::domain_error when the reduced energy
/// falls below the relaxation floor (negative discriminant).
double recover_temperature(double v, double e, double q, double S,
                           const PhysicalParams& p);

} // namespace hns
