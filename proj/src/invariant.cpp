#include "hns/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hns/ddouble.hpp"
#include "hns/parallel.hpp"

namespace hns {

namespace {

constexpr double c_expr_guard = 1e-8;

// The whole reduced algebra at one (w, z, gamma). Evaluated both in plain
// double (public single-quantity operations) and in double-double (the
// three-expression invariant, whose agreement check needs each route
// accurate to its own last ulp even where |Q|/|R| ~ 1e11).
template <class T>
struct Terms {
    T f, g, L, M, N, P, Q, Ra, Rb, Rc, MgQ;
    bool c_skipped;
};

template <class T>
Terms<T> eval_terms(T w, T z, T gamma) {
    using std::sqrt; // found by ADL for DD
    const T one(1.0);
    Terms<T> t{};
    t.f = z + w + gamma;
    const T zg = z - w + gamma;
    t.g = sqrt(zg * zg + T(4.0) * w * (gamma - one));
    t.L = T(2.0) * (z + one) * w / (t.f + t.g);

    t.M = T(2.0) * (gamma - one) * w * w +
          (gamma * gamma - T(2.0) * gamma + T(3.0)) * w -
          gamma * (gamma + one) * (z + gamma);
    t.N = T(2.0) * ((gamma - one) * z + gamma) * w -
          gamma * (gamma + one) * (z + one);

    const T p2 = T(6.0) * (gamma + one) * z + T(12.0);
    const T p1 = T(6.0) * (gamma * gamma + one) * z * z +
                 T(3.0) * (T(3.0) * gamma * gamma + T(2.0) * gamma + T(3.0)) * z +
                 T(3.0) * (gamma * gamma + T(3.0));
    const T p0 = gamma * (gamma + one) *
                 (T(2.0) * z * z * z + T(3.0) * (gamma + one) * z * z +
                  T(3.0) * (gamma + one) * z + T(2.0) * gamma);
    t.P = T(4.0) * w * w * w - p2 * w * w + p1 * w - p0;

    const T q2 = T(2.0) * (gamma - one) * z +
                 (T(8.0) * gamma - T(3.0) * gamma * gamma - T(3.0));
    const T q1 = (T(2.0) * gamma * gamma - gamma + T(3.0)) * z +
                 gamma * (T(5.0) - gamma);
    const T q0 = gamma * (gamma + one) * (z + gamma) * (z + gamma);
    t.Q = T(2.0) * (gamma - one) * w * w * w - q2 * w * w + q1 * w - q0;

    t.Ra = t.M * t.L - w * t.N;
    const T Mg = t.M * t.g;
    t.Rb = (t.Q - Mg) * T(0.5);
    t.MgQ = Mg + t.Q;
    const double denom = std::abs(static_cast<double>(t.MgQ));
    const double scale = std::abs(static_cast<double>(Mg)) +
                         std::abs(static_cast<double>(t.Q));
    t.c_skipped = denom < c_expr_guard * scale;
    if (t.c_skipped) {
        t.Rc = T(std::numeric_limits<double>::quiet_NaN());
    } else {
        t.Rc = -(T(2.0) * (gamma - one) * w * w * t.P) / t.MgQ;
    }
    return t;
}

// Safeguarded Newton for a cubic on a sign-changing bracket.
double cubic_bracketed_root(double c3, double c2, double c1, double c0,
                            double lo, double hi) {
    auto f = [&](double x) { return ((c3 * x + c2) * x + c1) * x + c0; };
    auto df = [&](double x) { return (3.0 * c3 * x + 2.0 * c2) * x + c1; };
    double flo = f(lo);
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        double next = x - fx / df(x);
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

} // namespace

double InvariantEval::spread() const {
    double vals[3] = {R_a, R_b, R_c};
    const int n = c_skipped ? 2 : 3;
    double lo = vals[0], hi = vals[0], mag = std::abs(vals[0]);
    for (int i = 1; i < n; ++i) {
        lo = std::min(lo, vals[i]);
        hi = std::max(hi, vals[i]);
        mag = std::max(mag, std::abs(vals[i]));
    }
    return mag > 0.0 ? (hi - lo) / mag : 0.0;
}

double eval_L(const ReducedParams& p) {
    return eval_terms<double>(p.w, p.z, p.gamma).L;
}

std::pair<double, double> eval_MN(const ReducedParams& p) {
    const auto t = eval_terms<double>(p.w, p.z, p.gamma);
    return {t.M, t.N};
}

std::pair<double, double> eval_PQ(const ReducedParams& p) {
    const auto t = eval_terms<double>(p.w, p.z, p.gamma);
    return {t.P, t.Q};
}

double eval_dQ_dw(const ReducedParams& p) {
    const double g = p.gamma;
    const double q2 = 2.0 * (g - 1.0) * p.z + (8.0 * g - 3.0 * g * g - 3.0);
    const double q1 = (2.0 * g * g - g + 3.0) * p.z + g * (5.0 - g);
    return 6.0 * (g - 1.0) * p.w * p.w - 2.0 * q2 * p.w + q1;
}

InvariantEval riemann_invariant(const ReducedParams& p) {
    const auto t = eval_terms<DD>(DD(p.w), DD(p.z), DD(p.gamma));
    InvariantEval e{};
    e.L = static_cast<double>(t.L);
    e.f = static_cast<double>(t.f);
    e.g = static_cast<double>(t.g);
    e.M = static_cast<double>(t.M);
    e.N = static_cast<double>(t.N);
    e.P = static_cast<double>(t.P);
    e.Q = static_cast<double>(t.Q);
    e.R_a = static_cast<double>(t.Ra);
    e.R_b = static_cast<double>(t.Rb);
    e.R_c = static_cast<double>(t.Rc);
    e.c_skipped = t.c_skipped;
    e.lambda_star = std::sqrt(e.L);
    return e;
}

std::array<double, 4> grad_Pi_equilibrium(const ReducedParams& p,
                                          double gas_const, int branch) {
    const double R = gas_const;
    const double w = p.w, z = p.z, g = p.gamma;
    const double L = eval_L(p);
    const double lambda_star = (branch >= 0 ? 1.0 : -1.0) * std::sqrt(L * R);
    return {R * R * ((z + w + 2.0 * g) * L - (2.0 * z + 3.0) * w),
            R * R * (w - g * L),
            (g - 1.0) * (2.0 * L - 2.0 * z - 1.0) * lambda_star,
            R * (w - L)};
}

Vec5 equilibrium_eigenvector(const ReducedParams& p, double gas_const,
                             int branch) {
    const double R = gas_const;
    const double w = p.w, z = p.z, g = p.gamma;
    const double L = eval_L(p);
    const double lambda_star = (branch >= 0 ? 1.0 : -1.0) * std::sqrt(L * R);
    return {R * (w - L), -lambda_star * R * (w - L), (g - 1.0) * R * L,
            R * R * w * lambda_star, R * R * z * (w - L)};
}

RootTable root_table(double z, double gamma) {
    ReducedParams::make(1.0, z, gamma); // validate (z, gamma)
    const double g = gamma;

    RootTable tbl{};
    // closed forms for the roots of N and M
    const double ztilde = (g - 1.0) * z + g;
    tbl.w_N = g * (g + 1.0) / (2.0 * (g - 1.0)) * (ztilde - 1.0) / ztilde;
    const double m1 = g * g - 2.0 * g + 3.0;
    const double D1 = m1 * m1 + 8.0 * g * (g + 1.0) * (g - 1.0) * (z + g);
    tbl.w_M = (std::sqrt(D1) - m1) / (4.0 * (g - 1.0));

    // P is strictly increasing: expand a bracket upward from w_M
    auto P_at = [&](double w) {
        return eval_PQ(ReducedParams::make(w, z, gamma)).first;
    };
    double hi = std::max(tbl.w_M, 1.0);
    while (P_at(hi) <= 0.0) hi *= 2.0;
    {
        const double p2 = 6.0 * (g + 1.0) * z + 12.0;
        const double p1 = 6.0 * (g * g + 1.0) * z * z +
                          3.0 * (3.0 * g * g + 2.0 * g + 3.0) * z +
                          3.0 * (g * g + 3.0);
        const double p0 = g * (g + 1.0) *
                          (2.0 * z * z * z + 3.0 * (g + 1.0) * z * z +
                           3.0 * (g + 1.0) * z + 2.0 * g);
        tbl.w_P = cubic_bracketed_root(4.0, -p2, p1, -p0, 0.0, hi);
    }

    // smallest root of Q: arithmetic scan (step w_M/64) for the first sign
    // change, cross-checked against the cubic resolvent in case the scan
    // steps over a narrow positive hump
    const double q3 = 2.0 * (g - 1.0);
    const double q2 = -(2.0 * (g - 1.0) * z + (8.0 * g - 3.0 * g * g - 3.0));
    const double q1 = (2.0 * g * g - g + 3.0) * z + g * (5.0 - g);
    const double q0 = -g * (g + 1.0) * (z + g) * (z + g);
    auto Q_at = [&](double w) {
        return ((q3 * w + q2) * w + q1) * w + q0;
    };
    double w_scan = std::numeric_limits<double>::quiet_NaN();
    {
        const double h = tbl.w_M / 64.0;
        double prev = 0.0;
        for (int k = 1; k <= 64 * 32; ++k) {
            const double wk = k * h;
            if (Q_at(wk) > 0.0) {
                w_scan = cubic_bracketed_root(q3, q2, q1, q0, prev, wk);
                break;
            }
            prev = wk;
        }
    }
    double w_res = std::numeric_limits<double>::infinity();
    {
        std::array<double, 3> roots{};
        const int nr = solve_cubic_real(q3, q2, q1, q0, roots);
        for (int i = 0; i < nr; ++i) {
            if (roots[i] > 0.0 && roots[i] < w_res) {
                // polish with Newton around the resolvent value
                double x = roots[i];
                for (int it = 0; it < 8; ++it) {
                    const double fx = Q_at(x);
                    const double dfx = (3.0 * q3 * x + 2.0 * q2) * x + q1;
                    if (dfx == 0.0) break;
                    const double nx = x - fx / dfx;
                    if (!(nx > 0.0) || !std::isfinite(nx)) break;
                    x = nx;
                }
                if (x > 0.0) w_res = std::min(w_res, x);
            }
        }
    }
    if (std::isnan(w_scan)) {
        tbl.w_Q = w_res;
    } else {
        tbl.w_Q = std::min(w_scan, w_res);
    }
    return tbl;
}

const char* region_name(Region r) {
    switch (r) {
        case Region::UpToWN: return "(0,wN]";
        case Region::WNToWM: return "(wN,wM]";
        case Region::IMinus: return "I-";
        case Region::IPlus: return "I+";
    }
    return "?";
}

char expr_name(RExpr e) {
    switch (e) {
        case RExpr::A: return 'a';
        case RExpr::B: return 'b';
        case RExpr::C: return 'c';
    }
    return '?';
}

RegionInfo region_partition(double z, double gamma, double w) {
    if (!(w > 0.0)) throw std::invalid_argument("region_partition: w <= 0");
    RegionInfo info{};
    info.roots = root_table(z, gamma);
    info.Q = eval_PQ(ReducedParams::make(w, z, gamma)).second;
    if (w <= info.roots.w_N) {
        info.region = Region::UpToWN;
        info.proof_expression = RExpr::C;
    } else if (w <= info.roots.w_M) {
        info.region = Region::WNToWM;
        info.proof_expression = RExpr::A;
    } else if (info.Q <= 0.0) {
        info.region = Region::IMinus;
        info.proof_expression = RExpr::B;
    } else {
        info.region = Region::IPlus;
        info.proof_expression = RExpr::C;
    }
    return info;
}

double q_monotonicity_a0(double gamma) {
    return (((9.0 * gamma - 42.0) * gamma + 46.0) * gamma - 18.0) * gamma +
           9.0;
}

double q_monotonicity_gamma0() {
    static const double g0 = [] {
        double lo = 1.0, hi = 5.0 / 3.0; // a0(1) = 4 > 0 > a0(5/3)
        for (int it = 0; it < 200 && hi - lo >
                                         std::numeric_limits<double>::epsilon() *
                                             4.0;
             ++it) {
            const double mid = 0.5 * (lo + hi);
            (q_monotonicity_a0(mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return g0;
}

QMonotonicityVerdict classify_q_monotonicity(double gamma, double z) {
    if (!(gamma > 1.0) || !(gamma <= 5.0 / 3.0 + 1e-9)) {
        throw std::invalid_argument("classify_q_monotonicity: gamma outside (1,5/3]");
    }
    if (!(z > 0.0)) throw std::invalid_argument("classify_q_monotonicity: z <= 0");
    QMonotonicityVerdict v{};
    v.a0 = q_monotonicity_a0(gamma);
    v.gamma0 = q_monotonicity_gamma0();
    const double a1 = (12.0 * gamma - 19.0) * gamma + 15.0;
    const double inner =
        (((36.0 * gamma - 96.0) * gamma + 179.0) * gamma - 166.0) * gamma +
        63.0;
    const double s = std::sqrt(3.0 * inner);
    v.z_minus = (a1 - s) / (4.0 * (gamma - 1.0));
    v.z_plus = (a1 + s) / (4.0 * (gamma - 1.0));
    if (gamma < v.gamma0) {
        v.monotone = z >= v.z_minus && z <= v.z_plus;
    } else {
        v.monotone = z <= v.z_plus;
    }
    // exact cross-check: dQ/dw is an upward parabola with positive vertex
    const double q2 = 2.0 * (gamma - 1.0) * z +
                      (8.0 * gamma - 3.0 * gamma * gamma - 3.0);
    const double q1 = (2.0 * gamma * gamma - gamma + 3.0) * z +
                      gamma * (5.0 - gamma);
    v.monotone_vertex = q1 - q2 * q2 / (6.0 * (gamma - 1.0)) >= 0.0;
    return v;
}

CertificateReport negativity_certificate(const CertGrid& grid,
                                         const std::vector<double>& gammas) {
    if (!(grid.w_min > 0.0) || !(grid.w_max > grid.w_min) ||
        !(grid.z_min > 0.0) || !(grid.z_max > grid.z_min) || grid.n_w < 2 ||
        grid.n_z < 2 || gammas.empty()) {
        throw std::invalid_argument("negativity_certificate: invalid grid");
    }
    CertificateReport rep{};
    rep.grid = grid;
    rep.gammas = gammas;

    std::vector<double> ws(grid.n_w), zs(grid.n_z);
    const double lw = std::log(grid.w_max / grid.w_min);
    const double lz = std::log(grid.z_max / grid.z_min);
    for (std::size_t i = 0; i < grid.n_w; ++i) {
        ws[i] = grid.w_min *
                std::exp(lw * static_cast<double>(i) /
                         static_cast<double>(grid.n_w - 1));
    }
    for (std::size_t j = 0; j < grid.n_z; ++j) {
        zs[j] = grid.z_min *
                std::exp(lz * static_cast<double>(j) /
                         static_cast<double>(grid.n_z - 1));
    }

    rep.rows.resize(gammas.size() * grid.n_z * grid.n_w);
    parallel_for(gammas.size() * grid.n_z, [&](std::size_t slab) {
        const std::size_t gi = slab / grid.n_z;
        const std::size_t zj = slab % grid.n_z;
        const double gamma = gammas[gi];
        const double z = zs[zj];
        const RootTable roots = root_table(z, gamma);
        CertificateRow* row = &rep.rows[slab * grid.n_w];
        for (std::size_t wi = 0; wi < grid.n_w; ++wi, ++row) {
            const double w = ws[wi];
            const InvariantEval e =
                riemann_invariant(ReducedParams::make(w, z, gamma));
            row->gamma = gamma;
            row->z = z;
            row->w = w;
            row->M = e.M;
            row->N = e.N;
            row->P = e.P;
            row->Q = e.Q;
            row->L = e.L;
            row->R_a = e.R_a;
            row->R_b = e.R_b;
            row->R_c = e.R_c;
            row->c_skipped = e.c_skipped;
            row->spread = e.spread();
            if (w <= roots.w_N) row->region = Region::UpToWN;
            else if (w <= roots.w_M) row->region = Region::WNToWM;
            else if (e.Q <= 0.0) row->region = Region::IMinus;
            else row->region = Region::IPlus;
        }
    });

    CertificateSummary& sum = rep.summary;
    sum.max_R = -std::numeric_limits<double>::infinity();
    sum.max_spread = 0.0;
    sum.n_points = rep.rows.size();
    sum.n_c_skipped = 0;
    double boundary_min = std::numeric_limits<double>::infinity();
    std::size_t idx = 0;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        for (std::size_t zj = 0; zj < grid.n_z; ++zj) {
            for (std::size_t wi = 0; wi < grid.n_w; ++wi, ++idx) {
                const CertificateRow& row = rep.rows[idx];
                if (row.R_a > sum.max_R) {
                    sum.max_R = row.R_a;
                    sum.argmax_gamma = row.gamma;
                    sum.argmax_z = row.z;
                    sum.argmax_w = row.w;
                }
                sum.max_spread = std::max(sum.max_spread, row.spread);
                if (row.c_skipped) ++sum.n_c_skipped;
                const bool edge = wi == 0 || wi + 1 == grid.n_w || zj == 0 ||
                                  zj + 1 == grid.n_z;
                if (edge) boundary_min = std::min(boundary_min, -row.R_a);
            }
        }
    }
    sum.boundary_margin = 0.5 * std::max(boundary_min, 0.0);
    sum.pass = sum.max_R < 0.0 && sum.max_R < -sum.boundary_margin;
    return rep;
}

int solve_cubic_real(double c3, double c2, double c1, double c0,
                     std::array<double, 3>& roots) {
    const double a2 = c2 / c3;
    const double a1 = c1 / c3;
    const double a0 = c0 / c3;
    const double q = a1 / 3.0 - a2 * a2 / 9.0;
    const double r = (a1 * a2 - 3.0 * a0) / 6.0 - a2 * a2 * a2 / 27.0;
    const double delta = q * q * q + r * r;
    int nr = 0;
    if (delta > 0.0) {
        double s1 = r + std::sqrt(delta);
        double s2 = r - std::sqrt(delta);
        s1 = std::cbrt(s1);
        s2 = std::cbrt(s2);
        roots[0] = s1 + s2 - a2 / 3.0;
        nr = 1;
    } else if (delta < 0.0) {
        const double theta = std::acos(r / std::sqrt(-q * q * q)) / 3.0;
        const double sq = std::sqrt(-q);
        roots[0] = 2.0 * sq * std::cos(theta) - a2 / 3.0;
        roots[1] = -sq * std::cos(theta) - a2 / 3.0 -
                   std::sqrt(3.0) * sq * std::sin(theta);
        roots[2] = -sq * std::cos(theta) - a2 / 3.0 +
                   std::sqrt(3.0) * sq * std::sin(theta);
        nr = 3;
    } else {
        const double s = std::cbrt(r);
        roots[0] = 2.0 * s - a2 / 3.0;
        roots[1] = -s - a2 / 3.0;
        roots[2] = roots[1];
        nr = 3;
    }
    std::sort(roots.begin(), roots.begin() + nr);
    return nr;
}

} // namespace hns
