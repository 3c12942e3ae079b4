#include "hns/eos.hpp"

#include <cmath>
#include <string>

namespace hns {

namespace {

void require_positive(double x, const char* name) {
    if (!(x > 0.0)) {
        throw std::invalid_argument(std::string(name) + " must be positive");
    }
}

void require_admissible(const ThermoState& s, const char* where) {
    if (!(s.v > 0.0)) {
        throw std::domain_error(std::string(where) +
                                ": non-positive specific volume");
    }
    if (!(s.theta > 0.0)) {
        throw std::domain_error(std::string(where) +
                                ": non-positive temperature");
    }
}

constexpr double gamma_upper = 5.0 / 3.0;
constexpr double gamma_slack = 1e-9;

} // namespace

PhysicalParams PhysicalParams::make(double tau1, double tau2, double kappa,
                                    double mu, double gas_const, double cv) {
    require_positive(tau1, "tau1");
    require_positive(tau2, "tau2");
    require_positive(kappa, "kappa");
    require_positive(mu, "mu");
    require_positive(gas_const, "gas_const");
    require_positive(cv, "cv");
    const double gamma = 1.0 + gas_const / cv;
    if (!(gamma > 1.0) || gamma > gamma_upper + gamma_slack) {
        throw std::invalid_argument(
            "adiabatic index 1 + R/cv = " + std::to_string(gamma) +
            " outside (1, 5/3]");
    }
    return PhysicalParams{tau1, tau2, kappa, mu, gas_const, cv, gamma};
}

PhysicalParams PhysicalParams::defaults() {
    return make(1.0, 1.0, 1.5, 1.0, 1.0, 1.5);
}

ReducedParams ReducedParams::make(double w, double z, double gamma) {
    require_positive(w, "w");
    require_positive(z, "z");
    if (!(gamma > 1.0) || gamma > gamma_upper + gamma_slack) {
        throw std::invalid_argument("gamma outside (1, 5/3]");
    }
    return ReducedParams{w, z, gamma};
}

ReducedParams reduce(const PhysicalParams& p) {
    return ReducedParams{p.kappa / (p.tau1 * p.cv * p.gas_const),
                         p.mu / (p.tau2 * p.gas_const), p.gamma};
}

PhysicalParams params_from_reduced(const ReducedParams& rp, double gas_const) {
    require_positive(gas_const, "gas_const");
    const double cv = gas_const / (rp.gamma - 1.0);
    const double tau1 = 1.0 / (cv * gas_const * rp.w); // kappa = 1
    const double tau2 = 1.0 / (gas_const * rp.z);      // mu = 1
    return PhysicalParams::make(tau1, tau2, 1.0, 1.0, gas_const, cv);
}

double ideal_pressure(double v, double theta, const PhysicalParams& p) {
    return p.gas_const * theta / v;
}

double ideal_internal_energy(double theta, const PhysicalParams& p) {
    return p.cv * theta;
}

double ideal_entropy(double v, double theta, const PhysicalParams& p) {
    return p.cv * std::log(theta) + p.gas_const * std::log(v);
}

double pressure(const ThermoState& s, const PhysicalParams& p) {
    require_admissible(s, "pressure");
    return ideal_pressure(s.v, s.theta, p) -
           p.tau1 * s.q * s.q / (2.0 * p.kappa * s.theta) -
           p.tau2 * s.s_stress * s.s_stress / (2.0 * p.mu);
}

double internal_energy(const ThermoState& s, const PhysicalParams& p) {
    require_admissible(s, "internal_energy");
    return ideal_internal_energy(s.theta, p) +
           p.tau1 * s.v * s.q * s.q / (p.kappa * s.theta) +
           p.tau2 * s.v * s.s_stress * s.s_stress / (2.0 * p.mu);
}

double entropy(const ThermoState& s, const PhysicalParams& p) {
    require_admissible(s, "entropy");
    return ideal_entropy(s.v, s.theta, p) +
           p.tau1 * s.v * s.q * s.q / (2.0 * p.kappa * s.theta * s.theta);
}

double relative_entropy(const ThermoState& s, const PhysicalParams& p) {
    require_admissible(s, "relative_entropy");
    // ideal part: cv(theta - 1 - ln theta) + R(v - 1 - ln v) + u^2/2
    const double eta_ideal =
        p.cv * (s.theta - 1.0 - std::log(s.theta)) +
        p.gas_const * (s.v - 1.0 - std::log(s.v)) + 0.5 * s.u * s.u;
    return eta_ideal +
           (1.0 - 1.0 / (2.0 * s.theta)) * p.tau1 * s.v * s.q * s.q /
               (p.kappa * s.theta) +
           p.tau2 * s.v * s.s_stress * s.s_stress / (2.0 * p.mu);
}

ThermoPartials thermo_partials(const ThermoState& s, const PhysicalParams& p) {
    require_admissible(s, "thermo_partials");
    const double v = s.v, th = s.theta, q = s.q, S = s.s_stress;
    ThermoPartials d{};
    d.p_v = -p.gas_const * th / (v * v);
    d.p_theta = p.gas_const / v + p.tau1 * q * q / (2.0 * p.kappa * th * th);
    d.p_q = -p.tau1 * q / (p.kappa * th);
    d.p_S = -p.tau2 * S / p.mu;
    d.e_v = p.tau1 * q * q / (p.kappa * th) +
            p.tau2 * S * S / (2.0 * p.mu);
    d.e_theta = p.cv - p.tau1 * v * q * q / (p.kappa * th * th);
    d.e_q = 2.0 * p.tau1 * v * q / (p.kappa * th);
    d.e_S = p.tau2 * v * S / p.mu;
    return d;
}

double gibbs_residual(const ThermoState& s, const PhysicalParams& p) {
    const ThermoPartials d = thermo_partials(s, p);
    return d.e_v - (s.theta * d.p_theta - pressure(s, p));
}

double recover_temperature(double v, double e, double q, double S,
                           const PhysicalParams& p) {
    if (!(v > 0.0)) {
        throw std::domain_error(
            "recover_temperature: non-positive specific volume");
    }
    const double ehat = e - p.tau2 * v * S * S / (2.0 * p.mu);
    const double floor_term = p.tau1 * v * q * q / p.kappa;
    const double disc = ehat * ehat - 4.0 * p.cv * floor_term;
    if (disc < 0.0 || !(ehat > 0.0)) {
        throw std::domain_error(
            "recover_temperature: energy below relaxation floor");
    }
    // larger quadratic root, continuous with theta = e/cv as q -> 0
    const double theta = (ehat + std::sqrt(disc)) / (2.0 * p.cv);
    if (!(theta > 0.0)) {
        throw std::domain_error("recover_temperature: non-positive root");
    }
    return theta;
}

} // namespace hns
