#include "hns/eigensystem.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hns/parallel.hpp"

namespace hns {

namespace {

std::string describe(const ThermoState& s) {
    std::ostringstream os;
    os << "(v=" << s.v << ", theta=" << s.theta << ", q=" << s.q
       << ", S=" << s.s_stress << ")";
    return os.str();
}

double cauchy_bound(const QuarticCoeffs& qc) {
    return 1.0 + std::max(std::max(std::abs(qc.a), std::abs(qc.b)),
                          std::max(std::abs(qc.c), std::abs(qc.d)));
}

// Safeguarded Newton on a sign-changing bracket [lo, hi]; hint is an
// optional starting point inside the bracket.
double bracketed_root(const QuarticCoeffs& qc, double lo, double hi,
                      double hint) {
    double flo = eval_quartic(qc, lo);
    double x = (hint > lo && hint < hi) ? hint : 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = eval_quartic(qc, x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        const double dfx = eval_quartic_deriv(qc, x);
        double next = x - fx / dfx;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <=
            4.0 * std::numeric_limits<double>::epsilon() *
                (std::abs(x) + std::abs(next))) {
            return next;
        }
        x = next;
    }
    return x;
}

std::array<double, 4> companion_roots(const QuarticCoeffs& qc) {
    Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
    C(1, 0) = C(2, 1) = C(3, 2) = 1.0;
    C(0, 3) = -qc.d;
    C(1, 3) = -qc.c;
    C(2, 3) = -qc.b;
    C(3, 3) = -qc.a;
    Eigen::EigenSolver<Eigen::Matrix4d> es(C);
    std::array<double, 4> roots{};
    double scale = 1.0;
    for (int i = 0; i < 4; ++i) {
        scale = std::max(scale, std::abs(es.eigenvalues()[i].real()));
    }
    for (int i = 0; i < 4; ++i) {
        const auto ev = es.eigenvalues()[i];
        if (std::abs(ev.imag()) > 1e-8 * scale) {
            throw hyperbolicity_error(
                "not strictly hyperbolic: complex characteristic pair");
        }
        roots[static_cast<std::size_t>(i)] = ev.real();
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Full-pivot Gaussian elimination kernel vector of a rank-4 5x5 matrix.
Vec5 kernel_vector(Mat5 B) {
    std::array<int, 5> col{0, 1, 2, 3, 4};
    for (int k = 0; k < 4; ++k) {
        int pr = k, pc = k;
        double best = 0.0;
        for (int i = k; i < 5; ++i) {
            for (int j = k; j < 5; ++j) {
                const double m = std::abs(B[i][j]);
                if (m > best) {
                    best = m;
                    pr = i;
                    pc = j;
                }
            }
        }
        if (best == 0.0) {
            throw hyperbolicity_error(
                "eigenvector solve: matrix rank below 4");
        }
        std::swap(B[k], B[pr]);
        if (pc != k) {
            for (int i = 0; i < 5; ++i) std::swap(B[i][k], B[i][pc]);
            std::swap(col[k], col[pc]);
        }
        for (int i = k + 1; i < 5; ++i) {
            const double m = B[i][k] / B[k][k];
            B[i][k] = 0.0;
            for (int j = k + 1; j < 5; ++j) B[i][j] -= m * B[k][j];
        }
    }
    std::array<double, 5> y{}; // solution in permuted coordinates
    y[4] = 1.0;
    for (int k = 3; k >= 0; --k) {
        double acc = 0.0;
        for (int j = k + 1; j < 5; ++j) acc += B[k][j] * y[j];
        y[k] = -acc / B[k][k];
    }
    Vec5 r{};
    for (int k = 0; k < 5; ++k) r[col[k]] = y[k];

    double amax = 0.0;
    for (double x : r) amax = std::max(amax, std::abs(x));
    for (double x : r) {
        if (std::abs(x) > 1e-12 * amax) {
            for (double& e : r) e /= x;
            break;
        }
    }
    return r;
}

double matrix_inf_norm(const Mat5& A) {
    double n = 0.0;
    for (const auto& row : A) {
        double s = 0.0;
        for (double x : row) s += std::abs(x);
        n = std::max(n, s);
    }
    return n;
}

double pair_residual(const Mat5& A, double lambda, const Vec5& r) {
    double res = 0.0, rnorm = 0.0;
    for (int i = 0; i < 5; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 5; ++j) acc += A[i][j] * r[j];
        res = std::max(res, std::abs(acc - lambda * r[i]));
        rnorm = std::max(rnorm, std::abs(r[i]));
    }
    return res / (matrix_inf_norm(A) * rnorm);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

FluxSystem assemble_flux(const ThermoState& s, const PhysicalParams& p) {
    const ThermoPartials d = thermo_partials(s, p);
    FluxSystem f{};
    auto& A = f.matrix;
    A[0] = {0.0, -1.0, 0.0, 0.0, 0.0};
    A[1] = {d.p_v, 0.0, d.p_theta, d.p_q, d.p_S - 1.0};
    A[2] = {0.0, s.theta * d.p_theta / d.e_theta,
            -2.0 * s.q / (s.theta * d.e_theta), 1.0 / d.e_theta, 0.0};
    A[3] = {0.0, 0.0, p.kappa / (p.tau1 * s.v), 0.0, 0.0};
    A[4] = {0.0, -p.mu / (p.tau2 * s.v), 0.0, 0.0, 0.0};

    f.source = {0.0, 0.0,
                (2.0 * s.v * s.q * s.q / (p.kappa * s.theta) +
                 s.v * s.s_stress * s.s_stress / p.mu) /
                    d.e_theta,
                -s.q / p.tau1, -s.s_stress / p.tau2};
    return f;
}

QuarticCoeffs quartic_coeffs(const ThermoState& s, const PhysicalParams& p) {
    const ThermoPartials d = thermo_partials(s, p);
    if (!(d.e_theta > 0.0)) {
        throw hyperbolicity_error("hypothesis violated: e_theta <= 0 at " +
                                  describe(s));
    }
    const double c0sq = p.mu * (1.0 - d.p_S) / (p.tau2 * s.v) - d.p_v;
    if (!(c0sq > 0.0)) {
        throw hyperbolicity_error("loss of hyperbolicity: c0^2 <= 0 at " +
                                  describe(s));
    }
    const double ke = p.kappa / (p.tau1 * s.v * d.e_theta);
    QuarticCoeffs qc{};
    qc.a = 2.0 * s.q / (s.theta * d.e_theta);
    qc.b = -(c0sq + ke + s.theta * d.p_theta * d.p_theta / d.e_theta);
    qc.c = -(qc.a * c0sq + ke * s.theta * d.p_theta * d.p_q);
    qc.d = ke * c0sq;
    qc.c0 = std::sqrt(c0sq);
    return qc;
}

double eval_quartic(const QuarticCoeffs& qc, double x) {
    return (((x + qc.a) * x + qc.b) * x + qc.c) * x + qc.d;
}

double eval_quartic_deriv(const QuarticCoeffs& qc, double x) {
    return ((4.0 * x + 3.0 * qc.a) * x + 2.0 * qc.b) * x + qc.c;
}

std::array<double, 4> solve_quartic(const QuarticCoeffs& qc) {
    const double c0 = qc.c0;
    const double B = cauchy_bound(qc);
    const bool bracketed = c0 > 0.0 && eval_quartic(qc, -c0) < 0.0 &&
                           eval_quartic(qc, 0.0) > 0.0 &&
                           eval_quartic(qc, c0) < 0.0 &&
                           eval_quartic(qc, -B) > 0.0 &&
                           eval_quartic(qc, B) > 0.0;
    if (!bracketed) {
        return companion_roots(qc);
    }
    // biquadratic hints from the even part lambda^4 + b lambda^2 + d
    const double disc = qc.b * qc.b - 4.0 * qc.d;
    double outer_hint = 0.0, inner_hint = 0.0;
    if (disc > 0.0) {
        outer_hint = std::sqrt(0.5 * (-qc.b + std::sqrt(disc)));
        const double inner_sq = 0.5 * (-qc.b - std::sqrt(disc));
        inner_hint = inner_sq > 0.0 ? std::sqrt(inner_sq) : 0.5 * c0;
    }
    std::array<double, 4> roots{
        bracketed_root(qc, -B, -c0, -outer_hint),
        bracketed_root(qc, -c0, 0.0, -inner_hint),
        bracketed_root(qc, 0.0, c0, inner_hint),
        bracketed_root(qc, c0, B, outer_hint),
    };
    std::sort(roots.begin(), roots.end());
    return roots;
}

double wave_speed_bound(const QuarticCoeffs& qc) {
    const double c0 = qc.c0;
    const double B = cauchy_bound(qc);
    if (!(eval_quartic(qc, -c0) < 0.0) || !(eval_quartic(qc, c0) < 0.0)) {
        const auto roots = solve_quartic(qc);
        return std::max(std::abs(roots[0]), std::abs(roots[3]));
    }
    const double disc = qc.b * qc.b - 4.0 * qc.d;
    const double hint =
        disc > 0.0 ? std::sqrt(0.5 * (-qc.b + std::sqrt(disc))) : 0.0;
    const double right = bracketed_root(qc, c0, B, hint);
    const double left = bracketed_root(qc, -B, -c0, -hint);
    return std::max(right, -left);
}

double wave_speed_bound(const ThermoState& s, const PhysicalParams& p) {
    return wave_speed_bound(quartic_coeffs(s, p));
}

SpectrumCheck analyze_spectrum(const ThermoState& s, const PhysicalParams& p) {
    const QuarticCoeffs qc = quartic_coeffs(s, p);
    const auto roots = solve_quartic(qc);

    SpectrumCheck chk{};
    Spectrum& sp = chk.spectrum;
    sp.c0 = qc.c0;
    // lambda = 0 is an exact root of the characteristic polynomial at every
    // state, so it is inserted exactly rather than to tolerance.
    sp.lambdas = {roots[0], roots[1], 0.0, roots[2], roots[3]};

    const double slack = tol::interlacing_slack * qc.c0;
    chk.interlacing_ok =
        sp.lambdas[0] < -qc.c0 - slack && -qc.c0 + slack < sp.lambdas[1] &&
        sp.lambdas[1] < -slack && slack < sp.lambdas[3] &&
        sp.lambdas[3] < qc.c0 - slack && qc.c0 + slack < sp.lambdas[4];

    const Mat5 A = assemble_flux(s, p).matrix;
    chk.max_residual = 0.0;
    for (int k = 0; k < 5; ++k) {
        Mat5 shifted = A;
        for (int i = 0; i < 5; ++i) shifted[i][i] -= sp.lambdas[k];
        sp.right_vectors[k] = kernel_vector(shifted);
        chk.max_residual = std::max(
            chk.max_residual, pair_residual(A, sp.lambdas[k],
                                            sp.right_vectors[k]));
    }
    chk.residual_ok = chk.max_residual <= tol::eigen_residual;

    double gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < 5; ++k) {
        gap = std::min(gap, sp.lambdas[k + 1] - sp.lambdas[k]);
    }
    gap = std::min(gap, -qc.c0 - sp.lambdas[0]);
    gap = std::min(gap, sp.lambdas[1] + qc.c0);
    gap = std::min(gap, qc.c0 - sp.lambdas[3]);
    gap = std::min(gap, sp.lambdas[4] - qc.c0);
    chk.gap = gap;
    return chk;
}

Spectrum spectrum(const ThermoState& s, const PhysicalParams& p) {
    SpectrumCheck chk = analyze_spectrum(s, p);
    if (!chk.interlacing_ok) {
        throw hyperbolicity_error(
            "hyperbolicity certificate failed: interlacing violated at " +
            describe(s));
    }
    if (!chk.residual_ok) {
        throw hyperbolicity_error(
            "hyperbolicity certificate failed: eigenvector residual " +
            std::to_string(chk.max_residual) + " at " + describe(s));
    }
    return chk.spectrum;
}

SweepReport hyperbolicity_sweep(double radius, std::size_t samples,
                                const PhysicalParams& p, std::uint64_t seed) {
    if (!(radius >= 0.0)) {
        throw std::invalid_argument("hyperbolicity_sweep: negative radius");
    }
    SweepReport rep{};
    rep.radius = radius;
    rep.seed = seed;
    rep.samples.resize(samples);

    parallel_for(samples, [&](std::size_t i) {
        std::mt19937_64 rng(splitmix64(seed ^ (0x51a77ull + i)));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        double x[4];
        for (;;) {
            double norm2 = 0.0;
            for (double& c : x) {
                c = unit(rng);
                norm2 += c * c;
            }
            if (norm2 <= 1.0) break;
        }
        SweepSample& out = rep.samples[i];
        out.state = ThermoState{1.0 + radius * x[0], 0.0,
                                1.0 + radius * x[1], radius * x[2],
                                radius * x[3]};
        try {
            SpectrumCheck chk = analyze_spectrum(out.state, p);
            out.lambdas = chk.spectrum.lambdas;
            out.gap = chk.gap;
            out.residual = chk.max_residual;
            out.pass = chk.ok();
            if (!chk.interlacing_ok) out.note = "interlacing violated";
            else if (!chk.residual_ok) out.note = "residual above tolerance";
        } catch (const std::exception& e) {
            out.lambdas = {0, 0, 0, 0, 0};
            out.gap = 0.0;
            out.residual = std::numeric_limits<double>::quiet_NaN();
            out.pass = false;
            out.note = e.what();
        }
    });

    rep.min_gap = std::numeric_limits<double>::infinity();
    rep.max_residual = 0.0;
    rep.failures = 0;
    for (const auto& s : rep.samples) {
        if (!s.pass) {
            ++rep.failures;
            continue;
        }
        rep.min_gap = std::min(rep.min_gap, s.gap);
        rep.max_residual = std::max(rep.max_residual, s.residual);
    }
    return rep;
}

} // namespace hns
