#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "hns/eigensystem.hpp"
#include "hns/eos.hpp"
#include "hns/invariant.hpp"
#include "hns/report.hpp"
#include "hns/sim.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

// exit-code contract: 0 pass, 1 certificate/assertion failure,
// 2 usage/config error, 3 I/O error
constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    bool no_timestamp = false;
    std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "JSON configuration file");
    sub->add_option("--out", c.out_dir, "output directory (created if missing)");
    sub->add_option("--seed", c.seed, "override the RNG seed");
    sub->add_flag("--no-timestamp", c.no_timestamp,
                  "omit timestamps for byte-identical artifacts");
    sub->add_option("--format", c.format, "bulk artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
}

json load_config(const Common& c) {
    if (c.config_path.empty()) return json::object();
    std::ifstream in(c.config_path);
    if (!in) throw config_error("cannot open config: " + c.config_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error("malformed config: " + std::string(e.what()));
    }
    if (!j.is_object()) throw config_error("config must be a JSON object");
    return j;
}

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) {
        throw config_error(std::string("field '") + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

std::uint64_t get_u64(const json& j, const char* key, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<std::uint64_t>();
}

hns::PhysicalParams params_from_config(const json& root) {
    const json j = root.value("params", json::object());
    const hns::PhysicalParams def = hns::PhysicalParams::defaults();
    hns::PhysicalParams p{};
    try {
        p = hns::PhysicalParams::make(
            get_num(j, "tau1", def.tau1), get_num(j, "tau2", def.tau2),
            get_num(j, "kappa", def.kappa), get_num(j, "mu", def.mu),
            get_num(j, "gas_const", def.gas_const), get_num(j, "cv", def.cv));
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    if (j.contains("gamma")) {
        const double claimed = j.at("gamma").get<double>();
        if (std::abs(claimed - p.gamma) > 1e-9) {
            throw config_error("configured gamma " + std::to_string(claimed) +
                               " violates gamma = 1 + gas_const/cv in (1, 5/3]");
        }
    }
    return p;
}

json params_to_json(const hns::PhysicalParams& p) {
    return json{{"tau1", p.tau1},   {"tau2", p.tau2},
                {"kappa", p.kappa}, {"mu", p.mu},
                {"gas_const", p.gas_const}, {"cv", p.cv},
                {"gamma", p.gamma}};
}

fs::path prepare_out_dir(const Common& c) {
    fs::path dir(c.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory: " + ec.message());
    return dir;
}

std::string timestamp_now() {
    char buf[64];
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << content;
    out.flush();
    if (!out.good()) throw io_error("write failed: " + path.string());
}

void echo_config(const Common& c, const fs::path& dir, const char* command,
                 json resolved) {
    if (!c.no_timestamp) resolved["generated_at"] = timestamp_now();
    write_file(dir / (std::string(command) + ".config.json"),
               resolved.dump(2) + "\n");
}

std::string maybe_stamp_comment(const Common& c) {
    return c.no_timestamp ? std::string()
                          : "# generated " + timestamp_now() + "\n";
}

// ---------------------------------------------------------------------------

int cmd_eos_check(const Common& c) {
    const json cfg = load_config(c);
    const hns::PhysicalParams p = params_from_config(cfg);
    const std::size_t samples =
        static_cast<std::size_t>(get_u64(cfg, "samples", 10000));
    const std::uint64_t seed = c.seed.value_or(get_u64(cfg, "seed", 1));
    if (samples == 0) throw config_error("samples must be positive");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uv(0.5, 2.0), ut(0.6, 1.8),
        uu(-1.0, 1.0);
    auto draw_state = [&]() {
        hns::ThermoState s{};
        s.v = uv(rng);
        s.theta = ut(rng);
        s.u = uu(rng);
        const double cap =
            0.8 * s.theta * std::sqrt(p.cv * p.kappa / (p.tau1 * s.v));
        s.q = uu(rng) * cap;
        s.s_stress = 0.8 * uu(rng);
        return s;
    };

    double max_gibbs = 0.0, max_roundtrip = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const hns::ThermoState s = draw_state();
        max_gibbs = std::max(max_gibbs, std::abs(hns::gibbs_residual(s, p)));
        const double e = hns::internal_energy(s, p);
        const double back =
            hns::recover_temperature(s.v, e, s.q, s.s_stress, p);
        max_roundtrip =
            std::max(max_roundtrip, std::abs(back - s.theta) / s.theta);
    }

    // entropy closure conditions by chained finite differences
    double max_closure = 0.0;
    auto sbar = [&](double v, double e, double q, double S) {
        const double theta = hns::recover_temperature(v, e, q, S, p);
        return hns::entropy({v, 0, theta, q, S}, p);
    };
    const std::size_t fd_samples = std::min<std::size_t>(samples, 200);
    for (std::size_t i = 0; i < fd_samples; ++i) {
        const hns::ThermoState s = draw_state();
        const double e = hns::internal_energy(s, p);
        const double h = 1e-5;
        const double dq =
            (sbar(s.v, e, s.q + h, s.s_stress) -
             sbar(s.v, e, s.q - h, s.s_stress)) /
            (2.0 * h);
        const double dS =
            (sbar(s.v, e, s.q, s.s_stress + h) -
             sbar(s.v, e, s.q, s.s_stress - h)) /
            (2.0 * h);
        const double want_q =
            -p.tau1 * s.v * s.q / (p.kappa * s.theta * s.theta);
        const double want_S = -p.tau2 * s.v * s.s_stress / (p.mu * s.theta);
        max_closure = std::max(
            max_closure, std::abs(dq - want_q) / (1.0 + std::abs(want_q)));
        max_closure = std::max(
            max_closure, std::abs(dS - want_S) / (1.0 + std::abs(want_S)));
    }

    // analytic partials against central differences
    double max_partial = 0.0;
    for (std::size_t i = 0; i < fd_samples; ++i) {
        const hns::ThermoState s = draw_state();
        const hns::ThermoPartials d = hns::thermo_partials(s, p);
        const double h = 1e-5;
        auto diff = [&](auto f, double base) {
            return (f(base + h) - f(base - h)) / (2.0 * h);
        };
        const double fd_pv = diff(
            [&](double v) { return hns::pressure({v, 0, s.theta, s.q, s.s_stress}, p); },
            s.v);
        const double fd_et = diff(
            [&](double th) {
                return hns::internal_energy({s.v, 0, th, s.q, s.s_stress}, p);
            },
            s.theta);
        max_partial = std::max(
            max_partial, std::abs(fd_pv - d.p_v) / (1.0 + std::abs(d.p_v)));
        max_partial = std::max(
            max_partial,
            std::abs(fd_et - d.e_theta) / (1.0 + std::abs(d.e_theta)));
    }

    const bool pass =
        max_gibbs < 1e-10 && max_roundtrip < 1e-12 && max_closure < 1e-6 &&
        max_partial < 1e-6;

    const fs::path dir = prepare_out_dir(c);
    json summary{{"samples", samples},
                 {"seed", seed},
                 {"max_gibbs_residual", max_gibbs},
                 {"max_temperature_roundtrip", max_roundtrip},
                 {"max_closure_fd_error", max_closure},
                 {"max_partials_fd_error", max_partial},
                 {"pass", pass}};
    if (!c.no_timestamp) summary["generated_at"] = timestamp_now();
    write_file(dir / "eos_check.json", summary.dump(2) + "\n");
    echo_config(c, dir, "eos-check",
                json{{"params", params_to_json(p)},
                     {"samples", samples},
                     {"seed", seed}});

    std::printf("gibbs residual        max %.3e (tol 1e-10)\n", max_gibbs);
    std::printf("temperature roundtrip max %.3e (tol 1e-12)\n", max_roundtrip);
    std::printf("entropy closure FD    max %.3e (tol 1e-6)\n", max_closure);
    std::printf("thermo partials FD    max %.3e (tol 1e-6)\n", max_partial);
    std::printf("eos-check: %s\n", pass ? "PASS" : "FAIL");
    return pass ? exit_ok : exit_failed;
}

int cmd_eigen_sweep(const Common& c) {
    const json cfg = load_config(c);
    const hns::PhysicalParams p = params_from_config(cfg);
    const double radius = get_num(cfg, "radius", 1e-3);
    const std::size_t samples =
        static_cast<std::size_t>(get_u64(cfg, "samples", 10000));
    const std::uint64_t seed = c.seed.value_or(get_u64(cfg, "seed", 1));
    if (radius < 0.0) throw config_error("radius must be nonnegative");
    if (samples == 0) throw config_error("samples must be positive");

    const hns::SweepReport rep =
        hns::hyperbolicity_sweep(radius, samples, p, seed);

    const fs::path dir = prepare_out_dir(c);
    if (c.format == "csv") {
        std::ostringstream os;
        os << maybe_stamp_comment(c);
        hns::write_sweep_csv(os, rep);
        write_file(dir / "eigen_sweep.csv", os.str());
    } else {
        json rows = json::array();
        for (const auto& s : rep.samples) {
            rows.push_back(json{{"v", s.state.v},
                                {"theta", s.state.theta},
                                {"q", s.state.q},
                                {"S", s.state.s_stress},
                                {"lambdas", s.lambdas},
                                {"gap", s.gap},
                                {"residual", s.residual},
                                {"pass", s.pass},
                                {"note", s.note}});
        }
        write_file(dir / "eigen_sweep.json", rows.dump(2) + "\n");
    }
    json summary{{"radius", radius},
                 {"samples", samples},
                 {"seed", seed},
                 {"failures", rep.failures},
                 {"min_gap", rep.min_gap},
                 {"max_residual", rep.max_residual},
                 {"pass", rep.pass()}};
    if (!c.no_timestamp) summary["generated_at"] = timestamp_now();
    write_file(dir / "eigen_sweep_summary.json", summary.dump(2) + "\n");
    echo_config(c, dir, "eigen-sweep",
                json{{"params", params_to_json(p)},
                     {"radius", radius},
                     {"samples", samples},
                     {"seed", seed}});

    std::printf("sweep: %zu samples, radius %g: %zu failures, min gap %.6g, "
                "max residual %.3e\n",
                samples, radius, rep.failures, rep.min_gap, rep.max_residual);
    std::printf("eigen-sweep: %s\n", rep.pass() ? "PASS" : "FAIL");
    return rep.pass() ? exit_ok : exit_failed;
}

std::vector<double> gammas_from_config(const json& cfg) {
    std::vector<double> gammas{1.01, 1.2, 1.4, 5.0 / 3.0};
    if (cfg.contains("gammas")) {
        gammas = cfg.at("gammas").get<std::vector<double>>();
        if (gammas.empty()) throw config_error("gammas list must be nonempty");
    }
    for (double g : gammas) {
        if (!(g > 1.0) || g > 5.0 / 3.0 + 1e-9) {
            throw config_error("gamma " + std::to_string(g) +
                               " outside (1, 5/3]");
        }
    }
    return gammas;
}

int cmd_invariant_certify(const Common& c) {
    const json cfg = load_config(c);
    hns::CertGrid grid{};
    grid.w_min = get_num(cfg, "w_min", grid.w_min);
    grid.w_max = get_num(cfg, "w_max", grid.w_max);
    grid.z_min = get_num(cfg, "z_min", grid.z_min);
    grid.z_max = get_num(cfg, "z_max", grid.z_max);
    grid.n_w = static_cast<std::size_t>(get_u64(cfg, "n_w", grid.n_w));
    grid.n_z = static_cast<std::size_t>(get_u64(cfg, "n_z", grid.n_z));
    const std::vector<double> gammas = gammas_from_config(cfg);

    hns::CertificateReport rep;
    try {
        rep = hns::negativity_certificate(grid, gammas);
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    const bool spread_ok = rep.summary.max_spread < 1e-9;
    const bool pass = rep.summary.pass && spread_ok;

    const fs::path dir = prepare_out_dir(c);
    if (c.format == "csv") {
        std::ostringstream os;
        os << maybe_stamp_comment(c);
        hns::write_certificate_csv(os, rep);
        write_file(dir / "invariant_certificate.csv", os.str());
    } else {
        json rows = json::array();
        for (const auto& r : rep.rows) {
            json row{{"gamma", r.gamma}, {"z", r.z},     {"w", r.w},
                     {"M", r.M},         {"N", r.N},     {"P", r.P},
                     {"Q", r.Q},         {"L", r.L},     {"R_a", r.R_a},
                     {"R_b", r.R_b},     {"spread", r.spread},
                     {"region", hns::region_name(r.region)}};
            if (!r.c_skipped) row["R_c"] = r.R_c;
            rows.push_back(std::move(row));
        }
        write_file(dir / "invariant_certificate.json", rows.dump(2) + "\n");
    }
    json summary{{"max_R", rep.summary.max_R},
                 {"argmax", json{{"gamma", rep.summary.argmax_gamma},
                                 {"z", rep.summary.argmax_z},
                                 {"w", rep.summary.argmax_w}}},
                 {"max_spread", rep.summary.max_spread},
                 {"boundary_margin", rep.summary.boundary_margin},
                 {"n_points", rep.summary.n_points},
                 {"n_c_skipped", rep.summary.n_c_skipped},
                 {"pass", pass}};
    if (!c.no_timestamp) summary["generated_at"] = timestamp_now();
    write_file(dir / "invariant_certificate_summary.json",
               summary.dump(2) + "\n");
    echo_config(c, dir, "invariant-certify",
                json{{"w_min", grid.w_min},
                     {"w_max", grid.w_max},
                     {"z_min", grid.z_min},
                     {"z_max", grid.z_max},
                     {"n_w", grid.n_w},
                     {"n_z", grid.n_z},
                     {"gammas", gammas}});

    std::printf("certificate: %zu points, max R = %.9e at (gamma=%g, z=%g, "
                "w=%g), spread %.3e\n",
                rep.summary.n_points, rep.summary.max_R,
                rep.summary.argmax_gamma, rep.summary.argmax_z,
                rep.summary.argmax_w, rep.summary.max_spread);
    std::printf("invariant-certify: %s\n", pass ? "PASS" : "FAIL");
    return pass ? exit_ok : exit_failed;
}

int cmd_invariant_point(const Common& c) {
    const json cfg = load_config(c);
    const double w = get_num(cfg, "w", 1.0);
    const double z = get_num(cfg, "z", 1.0);
    const double gamma = get_num(cfg, "gamma", 5.0 / 3.0);
    hns::InvariantEval e{};
    try {
        e = hns::riemann_invariant(hns::ReducedParams::make(w, z, gamma));
    } catch (const std::invalid_argument& err) {
        throw config_error(err.what());
    }
    std::printf("w      = %.15g\nz      = %.15g\ngamma  = %.15g\n", w, z,
                gamma);
    std::printf("L      = %.15g\nf      = %.15g\ng      = %.15g\n", e.L, e.f,
                e.g);
    std::printf("M      = %.15g\nN      = %.15g\nP      = %.15g\nQ      = "
                "%.15g\n",
                e.M, e.N, e.P, e.Q);
    std::printf("R (a)  = %.15g\nR (b)  = %.15g\n", e.R_a, e.R_b);
    if (e.c_skipped) {
        std::printf("R (c)  = skipped (|Mg+Q| degeneracy guard)\n");
    } else {
        std::printf("R (c)  = %.15g\n", e.R_c);
    }
    std::printf("spread = %.3e\n", e.spread());
    return exit_ok;
}

int cmd_roots(const Common& c) {
    const json cfg = load_config(c);
    const std::vector<double> gammas = gammas_from_config(cfg);
    const double z_min = get_num(cfg, "z_min", 0.01);
    const double z_max = get_num(cfg, "z_max", 100.0);
    const std::size_t n_z = static_cast<std::size_t>(get_u64(cfg, "n_z", 50));
    if (n_z == 0) throw config_error("empty z grid");
    if (!(z_min > 0.0) || !(z_max >= z_min)) {
        throw config_error("z grid must satisfy 0 < z_min <= z_max");
    }

    std::vector<hns::RootsRow> rows;
    bool ordered = true;
    for (double gamma : gammas) {
        for (std::size_t i = 0; i < n_z; ++i) {
            const double t =
                n_z == 1 ? 0.0
                         : static_cast<double>(i) / static_cast<double>(n_z - 1);
            const double z = z_min * std::pow(z_max / z_min, t);
            hns::RootsRow row{};
            row.gamma = gamma;
            row.z = z;
            row.roots = hns::root_table(z, gamma);
            row.verdict = hns::classify_q_monotonicity(gamma, z);
            ordered = ordered && row.roots.w_N > 0.0 &&
                      row.roots.w_N < row.roots.w_M &&
                      row.roots.w_M < row.roots.w_P &&
                      row.roots.w_P <= row.roots.w_Q * (1.0 + 1e-12);
            rows.push_back(row);
        }
    }

    const fs::path dir = prepare_out_dir(c);
    {
        std::ostringstream os;
        os << maybe_stamp_comment(c);
        hns::write_roots_csv(os, rows);
        write_file(dir / "roots.csv", os.str());
    }
    echo_config(c, dir, "roots",
                json{{"gammas", gammas},
                     {"z_min", z_min},
                     {"z_max", z_max},
                     {"n_z", n_z}});

    std::printf("gamma0 = %.10f (a0(gamma0) = %.3e)\n", hns::q_monotonicity_gamma0(),
                hns::q_monotonicity_a0(hns::q_monotonicity_gamma0()));
    std::printf("%zu rows; ordering 0 < w_N < w_M < w_P <= w_Q: %s\n",
                rows.size(), ordered ? "PASS" : "FAIL");
    return ordered ? exit_ok : exit_failed;
}

hns::InitialData initial_from_config(const json& cfg) {
    const json j = cfg.value("initial", json::object());
    hns::InitialData init{};
    const std::string family = j.value("family", std::string("bump"));
    if (family == "bump") {
        init.family = hns::ProfileFamily::Bump;
    } else if (family == "skew_bump" || family == "skew-bump") {
        init.family = hns::ProfileFamily::SkewBump;
    } else {
        throw config_error("unknown profile family: " + family);
    }
    init.eps = get_num(j, "eps", init.eps);
    init.sigma = get_num(j, "sigma", init.sigma);
    init.x0 = get_num(j, "x0", init.x0);
    if (j.contains("direction")) {
        const auto d = j.at("direction").get<std::vector<double>>();
        if (d.size() != 5) throw config_error("direction must have 5 entries");
        hns::Vec5 dir{};
        std::copy(d.begin(), d.end(), dir.begin());
        init.direction = dir;
    }
    return init;
}

json initial_to_json(const hns::InitialData& init) {
    json j{{"family", init.family == hns::ProfileFamily::Bump ? "bump"
                                                              : "skew_bump"},
           {"eps", init.eps},
           {"sigma", init.sigma},
           {"x0", init.x0}};
    if (init.direction) j["direction"] = *init.direction;
    return j;
}

int cmd_sim_run(const Common& c) {
    const json cfg = load_config(c);
    const hns::PhysicalParams p = params_from_config(cfg);
    const hns::InitialData init = initial_from_config(cfg);
    const json jg = cfg.value("grid", json::object());
    hns::RunOptions opt{};
    opt.grid.n_cells = static_cast<std::size_t>(get_u64(jg, "n_cells", 2048));
    opt.grid.x_lo = get_num(jg, "x_lo", -20.0);
    opt.grid.x_hi = get_num(jg, "x_hi", 20.0);
    opt.t_end = get_num(cfg, "t_end", 1.0);
    opt.cfl = get_num(cfg, "cfl", 0.4);
    opt.output_every =
        static_cast<std::size_t>(get_u64(cfg, "output_every", 20));
    const bool svg = cfg.value("svg", false);

    hns::RunResult r;
    try {
        r = hns::run(init, p, opt);
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }

    const fs::path dir = prepare_out_dir(c);
    if (c.format == "csv") {
        std::ostringstream os;
        os << maybe_stamp_comment(c);
        hns::write_diagnostics_csv(os, r.diag);
        write_file(dir / "sim_diagnostics.csv", os.str());
        std::ostringstream snap;
        snap << maybe_stamp_comment(c);
        hns::write_snapshot_csv(snap, r.state, p);
        write_file(dir / "sim_final_state.csv", snap.str());
    } else {
        json rows = json::array();
        for (const auto& s : r.diag.series) {
            rows.push_back(json{{"t", s.t},
                                {"max_du", s.max_du},
                                {"max_dtheta", s.max_dtheta},
                                {"eta_integral", s.eta_integral},
                                {"s_integral", s.s_integral},
                                {"dissipation_integral",
                                 s.dissipation_integral},
                                {"eta_residual", s.eta_residual},
                                {"min_v", s.min_v},
                                {"min_theta", s.min_theta},
                                {"resolved", s.resolved}});
        }
        write_file(dir / "sim_diagnostics.json", rows.dump(2) + "\n");
        json cells = json::array();
        for (std::size_t i = 0; i < r.state.cells.size(); ++i) {
            const hns::Cell& cell = r.state.cells[i];
            const hns::ThermoState s = hns::cell_state(cell, p);
            cells.push_back(json{{"x", r.state.x_center(i)},
                                 {"v", cell.v},
                                 {"u", cell.u},
                                 {"theta", s.theta},
                                 {"q", cell.q},
                                 {"S", cell.S},
                                 {"E", cell.E}});
        }
        write_file(dir / "sim_final_state.json", cells.dump(2) + "\n");
    }

    std::string classification = "classical";
    if (r.diag.broke_down) classification = "breakdown";
    else if (!r.diag.classical) classification = "unresolved";

    const double final_residual =
        r.diag.series.empty() ? 0.0 : r.diag.series.back().eta_residual;
    json summary{{"classification", classification},
                 {"t_final", r.state.time},
                 {"eta_residual_final", final_residual},
                 {"boundary_touched", r.diag.boundary_touched},
                 {"theta_below_half", r.diag.theta_below_half},
                 {"initial_max_du", r.diag.initial_max_du}};
    if (r.diag.broke_down) {
        summary["breakdown"] = json{{"time", r.diag.breakdown_time},
                                    {"cell", r.diag.breakdown_cell}};
    }
    if (!c.no_timestamp) summary["generated_at"] = timestamp_now();
    write_file(dir / "sim_summary.json", summary.dump(2) + "\n");

    if (svg) {
        std::vector<double> t, g, res;
        for (const auto& [tt, gg] : r.diag.gradient_trace) {
            t.push_back(tt);
            g.push_back(gg);
        }
        std::vector<double> ts;
        for (const auto& s : r.diag.series) {
            ts.push_back(s.t);
            res.push_back(s.eta_residual);
        }
        {
            std::ostringstream os;
            hns::write_svg_line_plot(os, "max |du/dx| over time",
                                     {{"max_du", t, g}});
            write_file(dir / "max_gradient.svg", os.str());
        }
        {
            std::ostringstream os;
            hns::write_svg_line_plot(os, "relative-entropy balance residual",
                                     {{"eta_residual", ts, res}});
            write_file(dir / "eta_balance.svg", os.str());
        }
    }
    echo_config(c, dir, "sim-run",
                json{{"params", params_to_json(p)},
                     {"initial", initial_to_json(init)},
                     {"grid", json{{"n_cells", opt.grid.n_cells},
                                   {"x_lo", opt.grid.x_lo},
                                   {"x_hi", opt.grid.x_hi}}},
                     {"t_end", opt.t_end},
                     {"cfl", opt.cfl},
                     {"output_every", opt.output_every},
                     {"svg", svg}});

    std::printf("sim-run: %s, t_final %.4f, eta residual %.3e\n",
                classification.c_str(), r.state.time, final_residual);
    return exit_ok;
}

int cmd_sim_blowup_scan(const Common& c) {
    const json cfg = load_config(c);
    const hns::PhysicalParams p = params_from_config(cfg);
    const hns::InitialData family = initial_from_config(cfg);
    hns::ScanOptions opt{};
    opt.cfl = get_num(cfg, "cfl", opt.cfl);
    opt.t_max = get_num(cfg, "t_max", opt.t_max);
    opt.threshold = get_num(cfg, "threshold", opt.threshold);
    opt.x_lo = get_num(cfg, "x_lo", opt.x_lo);
    opt.x_hi = get_num(cfg, "x_hi", opt.x_hi);
    opt.rarefactive = cfg.value("rarefactive", true);
    std::vector<double> amplitudes{0.1, 0.2};
    if (cfg.contains("amplitudes")) {
        amplitudes = cfg.at("amplitudes").get<std::vector<double>>();
    }
    std::vector<std::size_t> resolutions{1024, 2048};
    if (cfg.contains("resolutions")) {
        resolutions = cfg.at("resolutions").get<std::vector<std::size_t>>();
    }

    hns::BlowupScanReport rep;
    try {
        rep = hns::blowup_scan(family, amplitudes, resolutions, p, opt);
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }

    const fs::path dir = prepare_out_dir(c);
    if (c.format == "csv") {
        std::ostringstream os;
        os << maybe_stamp_comment(c);
        hns::write_scan_csv(os, rep);
        write_file(dir / "blowup_scan.csv", os.str());
    } else {
        auto case_to_json = [](const hns::BlowupCase& bc) {
            json j{{"sign", bc.sign},       {"eps", bc.eps},
                   {"n_cells", bc.n_cells}, {"crossed", bc.crossed},
                   {"broke_down", bc.broke_down}, {"growth", bc.growth},
                   {"fit_r2", bc.fit_r2},   {"horizon", bc.horizon}};
            if (bc.t_star) j["t_star"] = *bc.t_star;
            return j;
        };
        json rows{{"compressive", json::array()},
                  {"rarefactive", json::array()}};
        for (const auto& bc : rep.cases) {
            rows["compressive"].push_back(case_to_json(bc));
        }
        for (const auto& bc : rep.rarefactive_cases) {
            rows["rarefactive"].push_back(case_to_json(bc));
        }
        write_file(dir / "blowup_scan.json", rows.dump(2) + "\n");
    }

    json amp_table = json::array();
    for (double eps : amplitudes) {
        json entry{{"eps", eps}};
        json t_stars = json::array();
        double lo = 1e300, hi = -1e300;
        bool all_crossed = true;
        for (const auto& bc : rep.cases) {
            if (bc.eps != eps) continue;
            if (bc.t_star) {
                t_stars.push_back(*bc.t_star);
                lo = std::min(lo, *bc.t_star);
                hi = std::max(hi, *bc.t_star);
            } else {
                all_crossed = false;
            }
        }
        entry["t_star"] = t_stars;
        if (all_crossed && !t_stars.empty()) {
            entry["t_star_spread"] = (hi - lo) / hi;
            entry["stable_under_refinement"] = (hi - lo) / hi < 0.1;
        }
        amp_table.push_back(entry);
    }
    json summary{{"compressive_sign", rep.compressive_sign},
                 {"threshold", opt.threshold},
                 {"amplitudes", amp_table}};
    if (!c.no_timestamp) summary["generated_at"] = timestamp_now();
    write_file(dir / "blowup_scan_summary.json", summary.dump(2) + "\n");
    echo_config(c, dir, "sim-blowup-scan",
                json{{"params", params_to_json(p)},
                     {"initial", initial_to_json(family)},
                     {"amplitudes", amplitudes},
                     {"resolutions", resolutions},
                     {"cfl", opt.cfl},
                     {"t_max", opt.t_max},
                     {"threshold", opt.threshold},
                     {"x_lo", opt.x_lo},
                     {"x_hi", opt.x_hi},
                     {"rarefactive", opt.rarefactive}});

    std::printf("blowup-scan: compressive sign %+d, %zu compressive cases, "
                "%zu rarefactive cases\n",
                rep.compressive_sign, rep.cases.size(),
                rep.rarefactive_cases.size());
    for (const auto& bc : rep.cases) {
        std::printf("  eps %.3g N %5zu: %s growth x%.2f fit R^2 %.3f\n",
                    bc.eps, bc.n_cells,
                    bc.t_star ? ("T* = " + std::to_string(*bc.t_star)).c_str()
                              : "no threshold crossing",
                    bc.growth, bc.fit_r2);
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification and simulation toolkit for the 1D hyperbolic "
                 "Navier-Stokes equations with Cattaneo heat conduction and "
                 "Maxwell stress relaxation"};
    app.require_subcommand(1);

    Common common;
    int (*handler)(const Common&) = nullptr;

    struct Entry {
        const char* name;
        const char* help;
        int (*fn)(const Common&);
    };
    const Entry entries[] = {
        {"eos-check", "equation-of-state identity checks", cmd_eos_check},
        {"eigen-sweep", "strict-hyperbolicity certificate sweep",
         cmd_eigen_sweep},
        {"invariant-certify", "negativity certificate for the invariant",
         cmd_invariant_certify},
        {"invariant-point", "evaluate the invariant at one (w, z, gamma)",
         cmd_invariant_point},
        {"roots", "tabulate w_N, w_M, w_P, w_Q and the monotonicity verdict",
         cmd_roots},
        {"sim-run", "finite-volume run with entropy diagnostics",
         cmd_sim_run},
        {"sim-blowup-scan", "gradient-steepening scan over amplitudes",
         cmd_sim_blowup_scan},
    };
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, common);
        sub->callback([&handler, fn = e.fn] { handler = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        return handler(common);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_usage;
    } catch (const io_error& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return exit_io;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_failed;
    }
}
