#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hns/eos.hpp"

namespace hns {

using Vec5 = std::array<double, 5>;
using Mat5 = std::array<Vec5, 5>;

// Quasilinear form u_t + A(u) u_x = g(u) for u = (v, u, theta, q, S).
struct FluxSystem {
    Mat5 matrix;
    Vec5 source;
};

// Pi(lambda) = lambda^4 + a lambda^3 + b lambda^2 + c lambda + d, the
// quartic factor of det(lambda I - A) = lambda * Pi(lambda), plus the
// reference speed c0 = sqrt(mu(1 - p_S)/(tau2 v) - p_v).
struct QuarticCoeffs {
    double a, b, c, d;
    double c0;
};

// Five ordered eigenvalues and right eigenvectors, each eigenvector scaled
// so its first component of magnitude above roundoff equals 1.
struct Spectrum {
    std::array<double, 5> lambdas;
    std::array<Vec5, 5> right_vectors;
    double c0;
};

struct hyperbolicity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

FluxSystem assemble_flux(const ThermoState& s, const PhysicalParams& p);

// Throws hyperbolicity_error when c0^2 <= 0.
QuarticCoeffs quartic_coeffs(const ThermoState& s, const PhysicalParams& p);

double eval_quartic(const QuarticCoeffs& qc, double lambda);
double eval_quartic_deriv(const QuarticCoeffs& qc, double lambda);

/// Four real roots in ascending order. Primary path brackets the roots on
/// the intervals delimited by {-inf, -c0, 0, +c0, +inf} where Pi changes
/// sign near equilibrium, then polishes with safeguarded Newton. When the
/// bracketing signs fail (state too far from equilibrium) the roots come
/// from the eigenvalues of the companion matrix; a complex pair there
/// raises hyperbolicity_error.
std::array<double, 4> solve_quartic(const QuarticCoeffs& qc);

// max(|lambda_1|, lambda_5): outermost characteristic speed, cheaper than a
// full solve_quartic (Newton from a biquadratic initial guess).
double wave_speed_bound(const ThermoState& s, const PhysicalParams& p);
double wave_speed_bound(const QuarticCoeffs& qc);

// Non-throwing spectrum analysis used by the sweep: records the interlacing
// and residual outcome instead of raising.
struct SpectrumCheck {
    Spectrum spectrum;
    double gap;          // min eigenvalue gap including the +-c0 margins
    double max_residual; // max ||A r - lambda r||_inf / (||A||_inf ||r||_inf)
    bool interlacing_ok;
    bool residual_ok;
    bool ok() const { return interlacing_ok && residual_ok; }
};

SpectrumCheck analyze_spectrum(const ThermoState& s, const PhysicalParams& p);

/// Eigenvalues {0} U roots of Pi with the interlacing
/// lambda_1 < -c0 < lambda_2 < 0 < lambda_4 < c0 < lambda_5 certified;
/// throws hyperbolicity_error when the certificate fails.
Spectrum spectrum(const ThermoState& s, const PhysicalParams& p);

struct SweepSample {
    ThermoState state;
    std::array<double, 5> lambdas;
    double gap;
    double residual;
    bool pass;
    std::string note; // failure reason when pass is false
};

struct SweepReport {
    double radius;
    std::uint64_t seed;
    std::vector<SweepSample> samples;
    double min_gap;      // over passing samples
    double max_residual; // over passing samples
    std::size_t failures;
    bool pass() const { return failures == 0; }
};

// Samples random states in the ball |(v-1, theta-1, q, S)| <= radius and
// certifies the spectrum of each. Deterministic for a given seed; samples
// are independent so the sweep distributes them across workers.
SweepReport hyperbolicity_sweep(double radius, std::size_t samples,
                                const PhysicalParams& p, std::uint64_t seed);

namespace tol {
inline constexpr double eigen_residual = 1e-10;
inline constexpr double interlacing_slack = 1e-12;
inline constexpr double smallness_radius_default = 1e-2;
} // namespace tol

} // namespace hns
