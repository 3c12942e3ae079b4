#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "hns/eigensystem.hpp"
#include "hns/eos.hpp"

namespace hns {

// All quantities entering the reduced-parameter algebra at one (w, z, gamma),
// with the invariant evaluated through its three equivalent expressions:
//   (a) R = M L - w N
//   (b) R = (Q - M g)/2
//   (c) R = -2 (gamma-1) w^2 P / (M g + Q)
// lambda_star is the equilibrium eigenvalue magnitude for gas constant 1.
struct InvariantEval {
    double L, f, g, M, N, P, Q;
    double R_a, R_b, R_c;
    double lambda_star;
    bool c_skipped; // |Mg + Q| below the degeneracy guard

    double spread() const; // max pairwise relative disagreement
};

// Smaller root of x^2 - (z+w+gamma) x + (z+1) w = 0, computed in the
// cancellation-free form 2 (z+1) w / (f + g).
double eval_L(const ReducedParams& p);

// M quadratic and N linear in w.
std::pair<double, double> eval_MN(const ReducedParams& p);

// The cubics P = 4w^3 - p2 w^2 + p1 w - p0 and
// Q = 2(gamma-1) w^3 - q2 w^2 + q1 w - q0.
std::pair<double, double> eval_PQ(const ReducedParams& p);

double eval_dQ_dw(const ReducedParams& p);

InvariantEval riemann_invariant(const ReducedParams& p);

// (dPi/dv, dPi/dtheta, dPi/dq, dPi/dS) at the equilibrium state, evaluated
// at lambda_star = branch * sqrt(L R); branch +1 selects lambda_4, -1
// selects lambda_2.
std::array<double, 4> grad_Pi_equilibrium(const ReducedParams& p,
                                          double gas_const, int branch = +1);

// Right eigenvector of A_* for lambda_star in the unnormalized reference scaling
// (R(w-L), -lambda_star R(w-L), (gamma-1) R L, R^2 w lambda_star,
//  R^2 z (w-L)).
Vec5 equilibrium_eigenvector(const ReducedParams& p, double gas_const,
                             int branch = +1);

// Roots of N, M, P and the smallest root of Q at fixed (z, gamma); ordered
// 0 < w_N < w_M < w_P <= w_Q.
struct RootTable {
    double w_N, w_M, w_P, w_Q;
};

RootTable root_table(double z, double gamma);

// The four-part partition of w in (0, inf) and the invariant expression the
// negativity proof uses on each part.
enum class Region { UpToWN, WNToWM, IMinus, IPlus };
enum class RExpr { A, B, C };

const char* region_name(Region r);
char expr_name(RExpr e);

struct RegionInfo {
    Region region;
    RExpr proof_expression;
    RootTable roots;
    double Q; // Q(w, z) deciding I- vs I+
};

RegionInfo region_partition(double z, double gamma, double w);

// Monotonicity classification of Q(., z): closed-form conditions
// (a) gamma in (1, gamma0) and z in [z-, z+],
// (b) gamma in [gamma0, 5/3] and z in (0, z+],
// cross-checked through the sign of dQ/dw at its interior minimum.
struct QMonotonicityVerdict {
    double a0;      // a0(gamma)
    double gamma0;  // unique zero of a0 on (1, 5/3]
    double z_minus, z_plus;
    bool monotone;        // closed-form verdict
    bool monotone_vertex; // min_w dQ/dw >= 0
};

double q_monotonicity_a0(double gamma);
double q_monotonicity_gamma0();
QMonotonicityVerdict classify_q_monotonicity(double gamma, double z);

// Negativity certificate over a log-spaced (w, z) grid per gamma.
struct CertGrid {
    double w_min = 1e-3, w_max = 1e3;
    double z_min = 1e-3, z_max = 1e3;
    std::size_t n_w = 200, n_z = 200;
};

struct CertificateRow {
    double gamma, z, w;
    double M, N, P, Q, L;
    double R_a, R_b, R_c;
    Region region;
    bool c_skipped;
    double spread;
};

struct CertificateSummary {
    double max_R; // max of R_a over the grid (must stay negative)
    double argmax_gamma, argmax_z, argmax_w;
    double max_spread;      // outside the |Mg+Q| degeneracy band
    double boundary_margin; // half the smallest |R| observed on grid edges
    std::size_t n_points, n_c_skipped;
    bool pass; // max_R < 0 and max_R < -boundary_margin
};

struct CertificateReport {
    CertGrid grid;
    std::vector<double> gammas;
    std::vector<CertificateRow> rows;
    CertificateSummary summary;
};

CertificateReport negativity_certificate(const CertGrid& grid,
                                         const std::vector<double>& gammas);

// Up to three real roots of c3 x^3 + c2 x^2 + c1 x + c0, ascending.
int solve_cubic_real(double c3, double c2, double c1, double c0,
                     std::array<double, 3>& roots);

} // namespace hns
