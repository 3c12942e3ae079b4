#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hns/ddouble.hpp"
#include "hns/invariant.hpp"
#include "hns/report.hpp"
#include "support/oracles.hpp"
#include "support/rational.hpp"

using namespace hns;
using oracle::Rat;

namespace {

// Exact-rational derivation of every quantity at (w, z, gamma) when the
// discriminant is a perfect rational square. Independent of the library.
struct RatTerms {
    Rat f, g, L, M, N, P, Q, Mg, MgQ, Ra, Rb, Rc;
};

RatTerms rational_terms(Rat w, Rat z, Rat gamma) {
    RatTerms t{};
    const Rat one{1};
    t.f = z + w + gamma;
    t.g = oracle::sqrt_exact(t.f * t.f - Rat{4} * (z + one) * w);
    t.L = (t.f - t.g) / Rat{2};
    t.M = Rat{2} * (gamma - one) * w * w +
          (gamma * gamma - Rat{2} * gamma + Rat{3}) * w -
          gamma * (gamma + one) * (z + gamma);
    t.N = Rat{2} * ((gamma - one) * z + gamma) * w -
          gamma * (gamma + one) * (z + one);
    const Rat p2 = Rat{6} * (gamma + one) * z + Rat{12};
    const Rat p1 = Rat{6} * (gamma * gamma + one) * z * z +
                   Rat{3} * (Rat{3} * gamma * gamma + Rat{2} * gamma + Rat{3}) * z +
                   Rat{3} * (gamma * gamma + Rat{3});
    const Rat p0 = gamma * (gamma + one) *
                   (Rat{2} * z * z * z + Rat{3} * (gamma + one) * z * z +
                    Rat{3} * (gamma + one) * z + Rat{2} * gamma);
    t.P = Rat{4} * w * w * w - p2 * w * w + p1 * w - p0;
    const Rat q2 = Rat{2} * (gamma - one) * z +
                   (Rat{8} * gamma - Rat{3} * gamma * gamma - Rat{3});
    const Rat q1 = (Rat{2} * gamma * gamma - gamma + Rat{3}) * z +
                   gamma * (Rat{5} - gamma);
    const Rat q0 = gamma * (gamma + one) * (z + gamma) * (z + gamma);
    t.Q = Rat{2} * (gamma - one) * w * w * w - q2 * w * w + q1 * w - q0;
    t.Mg = t.M * t.g;
    t.MgQ = t.Mg + t.Q;
    t.Ra = t.M * t.L - w * t.N;
    t.Rb = (t.Q - t.Mg) / Rat{2};
    t.Rc = -(Rat{2} * (gamma - one) * w * w * t.P) / t.MgQ;
    return t;
}

ReducedParams unit_point() { return ReducedParams::make(1.0, 1.0, 5.0 / 3.0); }

std::pair<double, double> random_log_wz(std::mt19937_64& rng, double lo,
                                        double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return {std::exp(u(rng)), std::exp(u(rng))};
}

} // namespace

TEST_CASE("double-double arithmetic keeps bits plain double loses") {
    // (1e16 + 1) - 1e16 collapses to 0 or 2 in double; DD keeps the 1
    const DD one_kept = (DD(1e16) + DD(1.0)) - DD(1e16);
    CHECK(static_cast<double>(one_kept) == 1.0);

    // sqrt residual at dd precision
    const DD r = sqrt(DD(2.0));
    const DD resid = r * r - DD(2.0);
    CHECK(std::abs(static_cast<double>(resid)) < 1e-30);

    // division round trip
    const DD x = DD(1.0) / DD(3.0);
    const DD back = x * DD(3.0) - DD(1.0);
    CHECK(std::abs(static_cast<double>(back)) < 1e-31);

    // two_prod error capture: pi * pi to 31 digits
    const DD pi(3.141592653589793, 1.2246467991473532e-16);
    const DD pi2 = pi * pi;
    CHECK(static_cast<double>(pi2) ==
          doctest::Approx(9.869604401089358).epsilon(1e-15));
}

TEST_CASE("certificate serialization is deterministic") {
    CertGrid grid{};
    grid.n_w = 9;
    grid.n_z = 9;
    const CertificateReport a = negativity_certificate(grid, {1.3, 1.5});
    const CertificateReport b = negativity_certificate(grid, {1.3, 1.5});
    std::ostringstream sa, sb;
    write_certificate_csv(sa, a);
    write_certificate_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("nan") == std::string::npos);
}

TEST_CASE("rational oracle reproduces the frozen spot values at (1,1,5/3)") {
    const RatTerms t = rational_terms(Rat{1}, Rat{1}, Rat{5, 3});
    CHECK(t.f == Rat{11, 3});
    CHECK(t.g == Rat{7, 3});
    CHECK(t.L == Rat{2, 3});
    CHECK(t.M == Rat{-218, 27});
    CHECK(t.N == Rat{-38, 9});
    CHECK(t.Q == Rat{-1714, 81});
    CHECK(t.P == Rat{-940, 27});
    CHECK(t.Mg == Rat{-1526, 81});
    CHECK(t.MgQ == Rat{-40});
    CHECK(t.Ra == Rat{-94, 81});
    CHECK(t.Rb == Rat{-94, 81});
    CHECK(t.Rc == Rat{-94, 81});
}

TEST_CASE("implementation matches the rational oracle at (1,1,5/3)") {
    const RatTerms t = rational_terms(Rat{1}, Rat{1}, Rat{5, 3});
    const InvariantEval e = riemann_invariant(unit_point());
    const double tol = 1e-12;
    CHECK(e.f == doctest::Approx(to_double(t.f)).epsilon(tol));
    CHECK(e.g == doctest::Approx(to_double(t.g)).epsilon(tol));
    CHECK(e.L == doctest::Approx(to_double(t.L)).epsilon(tol));
    CHECK(e.M == doctest::Approx(to_double(t.M)).epsilon(tol));
    CHECK(e.N == doctest::Approx(to_double(t.N)).epsilon(tol));
    CHECK(e.P == doctest::Approx(to_double(t.P)).epsilon(tol));
    CHECK(e.Q == doctest::Approx(to_double(t.Q)).epsilon(tol));
    CHECK(e.R_a == doctest::Approx(-94.0 / 81.0).epsilon(tol));
    CHECK(e.R_b == doctest::Approx(-94.0 / 81.0).epsilon(tol));
    CHECK_FALSE(e.c_skipped);
    CHECK(e.R_c == doctest::Approx(-94.0 / 81.0).epsilon(tol));
    CHECK(e.lambda_star == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(tol));

    const auto [M, N] = eval_MN(unit_point());
    const auto [P, Q] = eval_PQ(unit_point());
    CHECK(M == doctest::Approx(-218.0 / 27.0).epsilon(tol));
    CHECK(N == doctest::Approx(-38.0 / 9.0).epsilon(tol));
    CHECK(P == doctest::Approx(-940.0 / 27.0).epsilon(tol));
    CHECK(Q == doctest::Approx(-1714.0 / 81.0).epsilon(tol));
    CHECK(eval_L(unit_point()) == doctest::Approx(2.0 / 3.0).epsilon(tol));
}

TEST_CASE("eval_L properties") {
    // vanishes with w
    CHECK(eval_L(ReducedParams::make(1e-12, 1.0, 1.4)) < 1e-11);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ug(1.01, 5.0 / 3.0);
    for (int i = 0; i < 2000; ++i) {
        const auto [w, z] = random_log_wz(rng, 1e-3, 1e3);
        const ReducedParams p = ReducedParams::make(w, z, ug(rng));
        const double L = eval_L(p);
        // defining quadratic
        const double resid = L * L - (p.z + p.w + p.gamma) * L +
                             (p.z + 1.0) * p.w;
        const double scale =
            L * L + (p.z + p.w + p.gamma) * L + (p.z + 1.0) * p.w;
        CHECK(std::abs(resid) <= 1e-12 * scale);
        // agreement of the two algebraic forms
        const double f = p.z + p.w + p.gamma;
        const double g = std::sqrt(f * f - 4.0 * (p.z + 1.0) * p.w);
        CHECK(L == doctest::Approx(0.5 * (f - g))
                       .epsilon(1e-9)
                       .scale(1.0 + 0.5 * (f + g)));
        CHECK(L > 0.0);
    }
}

TEST_CASE("M and N structure") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ug(1.01, 5.0 / 3.0);
    for (int i = 0; i < 500; ++i) {
        const auto [w_unused, z] = random_log_wz(rng, 1e-3, 1e3);
        const double g = ug(rng);
        // constant terms at w -> 0
        const auto [M0, N0] = eval_MN(ReducedParams::make(1e-300, z, g));
        CHECK(M0 == doctest::Approx(-g * (g + 1.0) * (z + g)).epsilon(1e-12));
        CHECK(N0 == doctest::Approx(-g * (g + 1.0) * (z + 1.0)).epsilon(1e-12));
        // N vanishes at its closed-form root
        const RootTable tbl = root_table(z, g);
        const auto [Mn, Nn] = eval_MN(ReducedParams::make(tbl.w_N, z, g));
        const double n_scale = 2.0 * ((g - 1.0) * z + g) * tbl.w_N +
                               g * (g + 1.0) * (z + 1.0);
        CHECK(std::abs(Nn) <= 1e-12 * n_scale);
        (void)Mn;
        (void)w_unused;
    }
}

TEST_CASE("P and Q structure") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ug(1.01, 5.0 / 3.0);
    for (int i = 0; i < 500; ++i) {
        const auto [w, z] = random_log_wz(rng, 1e-3, 1e3);
        const double g = ug(rng);

        // printed coefficient polynomials stay positive
        const double p2 = 6.0 * (g + 1.0) * z + 12.0;
        const double p1 = 6.0 * (g * g + 1.0) * z * z +
                          3.0 * (3.0 * g * g + 2.0 * g + 3.0) * z +
                          3.0 * (g * g + 3.0);
        const double p0 = g * (g + 1.0) *
                          (2.0 * z * z * z + 3.0 * (g + 1.0) * z * z +
                           3.0 * (g + 1.0) * z + 2.0 * g);
        const double q2 = 2.0 * (g - 1.0) * z + (8.0 * g - 3.0 * g * g - 3.0);
        const double q1 = (2.0 * g * g - g + 3.0) * z + g * (5.0 - g);
        const double q0 = g * (g + 1.0) * (z + g) * (z + g);
        CHECK(p2 > 0.0);
        CHECK(p1 > 0.0);
        CHECK(p0 > 0.0);
        CHECK(q2 > 0.0);
        CHECK(q1 > 0.0);
        CHECK(q0 > 0.0);

        // constant terms at w -> 0
        const auto [Pw0, Qw0] = eval_PQ(ReducedParams::make(1e-300, z, g));
        CHECK(Pw0 == doctest::Approx(-p0).epsilon(1e-12));
        CHECK(Qw0 == doctest::Approx(-q0).epsilon(1e-12));

        // P against its defining combination (M^2 g^2 - Q^2)/(4(gamma-1)w^2)
        const InvariantEval e = riemann_invariant(ReducedParams::make(w, z, g));
        const double lhs = e.P;
        const double m2g2 = e.M * e.M * e.g * e.g;
        const double rhs = (m2g2 - e.Q * e.Q) / (4.0 * (g - 1.0) * w * w);
        const double scale =
            (m2g2 + e.Q * e.Q) / (4.0 * (g - 1.0) * w * w) + std::abs(lhs);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);

        // dP/dw > 0 everywhere: negative discriminant and sampled positivity
        CHECK(4.0 * p2 * p2 - 48.0 * p1 < 0.0);
        const double dP = 12.0 * w * w - 2.0 * p2 * w + p1;
        CHECK(dP > 0.0);
    }
}

TEST_CASE("three expressions of the invariant agree") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ug(1.01, 5.0 / 3.0);
    int c_evaluated = 0;
    for (int i = 0; i < 3000; ++i) {
        const auto [w, z] = random_log_wz(rng, 1e-3, 1e3);
        const InvariantEval e =
            riemann_invariant(ReducedParams::make(w, z, ug(rng)));
        CHECK(e.spread() < 1e-9);
        CHECK(e.R_a < 0.0);
        if (!e.c_skipped) ++c_evaluated;
        // f^2 - g^2 = 4 (z+1) w
        const double lhs = e.f * e.f - e.g * e.g;
        const double rhs = 4.0 * (z + 1.0) * w;
        CHECK(lhs ==
              doctest::Approx(rhs).epsilon(1e-12).scale(e.f * e.f + rhs));
    }
    CHECK(c_evaluated > 2900); // the degeneracy band is thin
}

TEST_CASE("pre-reduction expansion of the invariant agrees with M L - w N") {
    // before eliminating L^2 through its defining quadratic, the dot
    // product reads ((2g-3)w - g(g+1)) L^2 + ((3-2g)z + w + 2g+3) w L
    // - (z+3) w^2
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> ug(1.01, 5.0 / 3.0);
    for (int i = 0; i < 500; ++i) {
        const auto [w, z] = random_log_wz(rng, 1e-2, 1e2);
        const double g = ug(rng);
        const ReducedParams p = ReducedParams::make(w, z, g);
        const double L = eval_L(p);
        const double expanded =
            ((2.0 * g - 3.0) * w - g * (g + 1.0)) * L * L +
            ((3.0 - 2.0 * g) * z + w + 2.0 * g + 3.0) * w * L -
            (z + 3.0) * w * w;
        const double Ra = riemann_invariant(p).R_a;
        const double scale = std::abs((2.0 * g - 3.0) * w - g * (g + 1.0)) *
                                 L * L +
                             std::abs((3.0 - 2.0 * g) * z + w + 2.0 * g + 3.0) *
                                 w * L +
                             (z + 3.0) * w * w;
        CHECK(std::abs(expanded - Ra) <= 1e-11 * scale);
    }
}

TEST_CASE("gradient of Pi at equilibrium") {
    const ReducedParams p = unit_point();

    SUBCASE("closed-form spot values at (1,1,5/3)") {
        const auto g = grad_Pi_equilibrium(p, 1.0, +1);
        CHECK(g[0] == doctest::Approx(-13.0 / 9.0).epsilon(1e-14));
        CHECK(g[1] == doctest::Approx(-1.0 / 9.0).epsilon(1e-14));
        const double want_q =
            (2.0 / 3.0) * (2.0 * (2.0 / 3.0) - 3.0) * std::sqrt(2.0 / 3.0);
        CHECK(g[2] == doctest::Approx(want_q).epsilon(1e-14));
        CHECK(g[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }

    SUBCASE("matches finite differences of Pi through the eigen module") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> ug(1.05, 5.0 / 3.0);
        std::uniform_real_distribution<double> uR(0.5, 3.0);
        for (int i = 0; i < 60; ++i) {
            const auto [w, z] = random_log_wz(rng, 1e-1, 1e1);
            const ReducedParams rp = ReducedParams::make(w, z, ug(rng));
            const double R = uR(rng);
            const PhysicalParams pp = params_from_reduced(rp, R);
            const double lam = std::sqrt(eval_L(rp) * R);
            auto Pi = [&](const ThermoState& s) {
                const QuarticCoeffs qc = quartic_coeffs(s, pp);
                return eval_quartic(qc, lam);
            };
            const auto grad = grad_Pi_equilibrium(rp, R, +1);
            const double h = 1e-5;
            const double fd[4] = {
                oracle::central_diff(
                    [&](double v) { return Pi({v, 0, 1, 0, 0}); }, 1.0, h),
                oracle::central_diff(
                    [&](double th) { return Pi({1, 0, th, 0, 0}); }, 1.0, h),
                oracle::central_diff(
                    [&](double q) { return Pi({1, 0, 1, q, 0}); }, 0.0, h),
                oracle::central_diff(
                    [&](double S) { return Pi({1, 0, 1, 0, S}); }, 0.0, h)};
            for (int c = 0; c < 4; ++c) {
                CHECK(grad[c] == doctest::Approx(fd[c]).epsilon(1e-6).scale(
                                     1.0 + std::abs(fd[c])));
            }
        }
    }

    SUBCASE("q-component vanishes when 2L = 2z + 1") {
        // pick z, gamma, then solve for w with L(w) = z + 1/2 via the
        // defining quadratic: L fixed means w = L(L - z - gamma)/(L - z - 1)
        const double z = 0.4, g = 1.5;
        const double L = z + 0.5;
        const double w = L * (L - z - g) / (L - z - 1.0);
        REQUIRE(w > 0.0);
        const auto grad =
            grad_Pi_equilibrium(ReducedParams::make(w, z, g), 1.0, +1);
        CHECK(std::abs(grad[2]) < 1e-12);
    }
}

TEST_CASE("lambda_2 branch flips the odd components but not the invariant") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ug(1.05, 5.0 / 3.0);
    for (int i = 0; i < 100; ++i) {
        const auto [w, z] = random_log_wz(rng, 1e-2, 1e2);
        const ReducedParams rp = ReducedParams::make(w, z, ug(rng));
        const double R = 1.7;
        const auto gp = grad_Pi_equilibrium(rp, R, +1);
        const auto gm = grad_Pi_equilibrium(rp, R, -1);
        const Vec5 rp4 = equilibrium_eigenvector(rp, R, +1);
        const Vec5 rm2 = equilibrium_eigenvector(rp, R, -1);
        CHECK(gm[2] == doctest::Approx(-gp[2]).epsilon(1e-14));
        CHECK(rm2[1] == doctest::Approx(-rp4[1]).epsilon(1e-14));
        CHECK(rm2[3] == doctest::Approx(-rp4[3]).epsilon(1e-14));
        auto dot = [&](const std::array<double, 4>& g, const Vec5& r) {
            return g[0] * r[0] + g[1] * r[2] + g[2] * r[3] + g[3] * r[4];
        };
        CHECK(dot(gp, rp4) == doctest::Approx(dot(gm, rm2)).epsilon(1e-12));
    }
}

TEST_CASE("genuine-nonlinearity bridge to the eigen module") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ug(1.01, 5.0 / 3.0);
    for (int i = 0; i < 100; ++i) {
        const auto [w, z] = random_log_wz(rng, 1e-2, 1e2);
        const ReducedParams rp = ReducedParams::make(w, z, ug(rng));
        const double Ra = riemann_invariant(rp).R_a;
        for (double R : {1.0, 2.3}) {
            const auto grad = grad_Pi_equilibrium(rp, R, +1);
            const Vec5 r = equilibrium_eigenvector(rp, R, +1);
            const double dot =
                grad[0] * r[0] + grad[1] * r[2] + grad[2] * r[3] +
                grad[3] * r[4];
            const double bridged = dot / (R * R * R);
            CHECK(std::abs(bridged - Ra) <=
                  1e-10 * std::max(1.0, std::abs(Ra)));
        }
        // the reference-scaled eigenvector really is an eigenvector of A_*
        const PhysicalParams pp = params_from_reduced(rp, 1.0);
        const Mat5 A = assemble_flux(equilibrium_state(), pp).matrix;
        const Vec5 r = equilibrium_eigenvector(rp, 1.0, +1);
        const double lam = std::sqrt(eval_L(rp));
        double resid = 0.0, rnorm = 0.0;
        for (int row = 0; row < 5; ++row) {
            double acc = 0.0;
            for (int col = 0; col < 5; ++col) acc += A[row][col] * r[col];
            resid = std::max(resid, std::abs(acc - lam * r[row]));
            rnorm = std::max(rnorm, std::abs(r[row]));
        }
        CHECK(resid <= 1e-10 * rnorm * (1.0 + lam));
    }
}

TEST_CASE("root table") {
    SUBCASE("closed-form spot values at z = 1, gamma = 5/3") {
        const RootTable t = root_table(1.0, 5.0 / 3.0);
        CHECK(t.w_N == doctest::Approx(40.0 / 21.0).epsilon(1e-12));
        CHECK(t.w_M ==
              doctest::Approx((-66.0 + std::sqrt(50436.0)) / 72.0)
                  .epsilon(1e-12));
        CHECK(t.w_M < t.w_P);
        CHECK(t.w_P <= t.w_Q);
    }

    SUBCASE("roots annihilate their functions and stay ordered on a grid") {
        for (double g : {1.01, 1.1, 1.4, 5.0 / 3.0}) {
            for (int j = 0; j < 40; ++j) {
                const double z =
                    1e-3 * std::pow(1e6, static_cast<double>(j) / 39.0);
                const RootTable t = root_table(z, g);
                CHECK(t.w_N > 0.0);
                CHECK(t.w_N < t.w_M);
                CHECK(t.w_M < t.w_P);
                CHECK(t.w_P <= t.w_Q * (1.0 + 1e-12));

                const auto [Pp, Qp] =
                    eval_PQ(ReducedParams::make(t.w_P, z, g));
                const auto [Pq, Qq] =
                    eval_PQ(ReducedParams::make(t.w_Q, z, g));
                const double p_scale =
                    4.0 * std::pow(t.w_P, 3) + std::abs(Pp) + 1.0;
                const double q_scale =
                    2.0 * (g - 1.0) * std::pow(t.w_Q, 3) + std::abs(Qq) + 1.0;
                CHECK(std::abs(Pp) <= 1e-10 * p_scale);
                CHECK(std::abs(Qq) <= 1e-10 * q_scale);
                (void)Qp;
                (void)Pq;
            }
        }
    }

    SUBCASE("P is negative at w_M and nonnegative at w_Q") {
        std::mt19937_64 rng(19);
        std::uniform_real_distribution<double> ug(1.01, 5.0 / 3.0);
        for (int i = 0; i < 200; ++i) {
            const auto [w_unused, z] = random_log_wz(rng, 1e-3, 1e3);
            const double g = ug(rng);
            const RootTable t = root_table(z, g);
            const double PwM = eval_PQ(ReducedParams::make(t.w_M, z, g)).first;
            const double PwQ = eval_PQ(ReducedParams::make(t.w_Q, z, g)).first;
            CHECK(PwM < 0.0);
            const double scale = 4.0 * std::pow(t.w_Q, 3) + 1.0;
            CHECK(PwQ >= -1e-9 * scale);
            (void)w_unused;
        }
    }

    SUBCASE("Q stays negative on (0, w_Q)") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> ug(1.01, 5.0 / 3.0);
        for (int i = 0; i < 100; ++i) {
            const auto [w_unused, z] = random_log_wz(rng, 1e-3, 1e3);
            const double g = ug(rng);
            const RootTable t = root_table(z, g);
            for (int k = 1; k < 200; ++k) {
                const double w =
                    t.w_Q * (1.0 - 1e-9) * static_cast<double>(k) / 200.0;
                if (w <= 0.0) continue;
                CHECK(eval_PQ(ReducedParams::make(w, z, g)).second < 0.0);
            }
            (void)w_unused;
        }
    }
}

TEST_CASE("region partition") {
    const double g = 5.0 / 3.0;

    const RegionInfo a = region_partition(1.0, g, 1.0);
    CHECK(a.region == Region::UpToWN); // w_N = 40/21 > 1
    CHECK(a.proof_expression == RExpr::C);

    const RootTable t = root_table(1.0, g);
    const RegionInfo b = region_partition(1.0, g, t.w_M);
    CHECK(b.region == Region::WNToWM); // half-open boundary convention
    CHECK(b.proof_expression == RExpr::A);

    const RegionInfo c = region_partition(1.0, g, 10.0);
    CHECK(c.Q > 0.0);
    CHECK(c.region == Region::IPlus);
    CHECK(c.proof_expression == RExpr::C);

    const RegionInfo d = region_partition(1.0, g, 2.5); // between w_M and w_Q
    CHECK(d.region == Region::IMinus);
    CHECK(d.proof_expression == RExpr::B);
}

TEST_CASE("sign pattern of M and N across the regions") {
    std::mt19937_64 rng(27);
    std::uniform_real_distribution<double> ug(1.01, 5.0 / 3.0);
    for (int i = 0; i < 1500; ++i) {
        const auto [w, z] = random_log_wz(rng, 1e-3, 1e3);
        const double g = ug(rng);
        const RegionInfo info = region_partition(z, g, w);
        const auto [M, N] = eval_MN(ReducedParams::make(w, z, g));
        switch (info.region) {
            case Region::UpToWN:
                CHECK(M < 0.0);
                CHECK(N <= 1e-12 * std::abs(M));
                break;
            case Region::WNToWM:
                CHECK(M <= 1e-12 * std::abs(N));
                CHECK(N > 0.0);
                break;
            case Region::IMinus:
            case Region::IPlus:
                CHECK(M > 0.0);
                break;
        }
    }
}

TEST_CASE("Q-monotonicity classification") {
    SUBCASE("a0 endpoints and gamma0") {
        CHECK(q_monotonicity_a0(1.0) == 4.0);
        CHECK(q_monotonicity_a0(5.0 / 3.0) ==
              doctest::Approx(-492.0 / 27.0).epsilon(1e-14));
        const double g0 = q_monotonicity_gamma0();
        CHECK(g0 > 1.0);
        CHECK(g0 < 5.0 / 3.0);
        CHECK(std::abs(q_monotonicity_a0(g0)) < 1e-12);
    }

    SUBCASE("D3 quartic factor is positive on (1, 5/3]") {
        for (int i = 0; i <= 1000; ++i) {
            const double g = 1.0 + (5.0 / 3.0 - 1.0) *
                                       static_cast<double>(i) / 1000.0;
            const double inner =
                (((36.0 * g - 96.0) * g + 179.0) * g - 166.0) * g + 63.0;
            CHECK(inner > 0.0);
        }
    }

    SUBCASE("closed-form verdict equals the vertex cross-check") {
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> ug(1.001, 5.0 / 3.0);
        for (int i = 0; i < 2000; ++i) {
            const auto [w_unused, z] = random_log_wz(rng, 1e-3, 1e3);
            const QMonotonicityVerdict v = classify_q_monotonicity(ug(rng), z);
            CHECK(v.monotone == v.monotone_vertex);
            (void)w_unused;
        }
    }

    SUBCASE("verdict agrees with dense sign sampling of dQ/dw") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> ug(1.001, 5.0 / 3.0);
        for (int i = 0; i < 300; ++i) {
            const auto [w_unused, z] = random_log_wz(rng, 1e-2, 1e2);
            const double g = ug(rng);
            const QMonotonicityVerdict v = classify_q_monotonicity(g, z);
            const RootTable t = root_table(z, g);
            double min_slope = std::numeric_limits<double>::infinity();
            for (int k = 1; k <= 2048; ++k) {
                const double w =
                    10.0 * t.w_M * static_cast<double>(k) / 2048.0;
                min_slope = std::min(
                    min_slope, eval_dQ_dw(ReducedParams::make(w, z, g)));
            }
            const double scale =
                std::abs((2.0 * g * g - g + 3.0) * z + g * (5.0 - g));
            if (std::abs(min_slope) > 1e-9 * scale) {
                CHECK(v.monotone == (min_slope > 0.0));
            }
            (void)w_unused;
        }
    }
}

TEST_CASE("negativity certificate on a small grid") {
    CertGrid grid{};
    grid.n_w = 41;
    grid.n_z = 41;
    const CertificateReport rep =
        negativity_certificate(grid, {1.01, 5.0 / 3.0});
    CHECK(rep.summary.pass);
    CHECK(rep.summary.max_R < 0.0);
    CHECK(rep.summary.max_spread < 1e-9);
    CHECK(rep.summary.n_points == 2 * 41 * 41);

    // the w = z = 1 neighborhood carries the rational spot value
    double best = 1e300;
    double r_at_best = 0.0;
    for (const CertificateRow& row : rep.rows) {
        if (row.gamma < 1.5) continue;
        const double d = std::abs(std::log(row.w)) + std::abs(std::log(row.z));
        if (d < best) {
            best = d;
            r_at_best = row.R_a;
        }
    }
    CHECK(r_at_best == doctest::Approx(-94.0 / 81.0).epsilon(1e-6));

    CHECK_THROWS_AS(negativity_certificate(CertGrid{1, 0.5, 1, 2, 4, 4}, {1.4}),
                    std::invalid_argument);
}
