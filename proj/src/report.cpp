#include "hns/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hns {

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_sweep_csv(std::ostream& os, const SweepReport& rep) {
    os << "v,theta,q,S,lambda1,lambda2,lambda3,lambda4,lambda5,gap,residual,"
          "pass,note\n";
    for (const SweepSample& s : rep.samples) {
        os << num17(s.state.v) << ',' << num17(s.state.theta) << ','
           << num17(s.state.q) << ',' << num17(s.state.s_stress);
        for (double l : s.lambdas) os << ',' << num17(l);
        os << ',' << num17(s.gap) << ',' << num17(s.residual) << ','
           << (s.pass ? 1 : 0) << ",\"" << s.note << "\"\n";
    }
}

void write_certificate_csv(std::ostream& os, const CertificateReport& rep) {
    os << "gamma,z,w,M,N,P,Q,L,R_a,R_b,R_c,region,spread\n";
    for (const CertificateRow& r : rep.rows) {
        os << num17(r.gamma) << ',' << num17(r.z) << ',' << num17(r.w) << ','
           << num17(r.M) << ',' << num17(r.N) << ',' << num17(r.P) << ','
           << num17(r.Q) << ',' << num17(r.L) << ',' << num17(r.R_a) << ','
           << num17(r.R_b) << ','
           << (r.c_skipped ? "skipped" : num17(r.R_c)) << ','
           << region_name(r.region) << ',' << num17(r.spread) << '\n';
    }
}

void write_roots_csv(std::ostream& os, const std::vector<RootsRow>& rows) {
    os << "gamma,z,w_N,w_M,w_P,w_Q,monotone_Q,z_minus,z_plus,gamma0\n";
    for (const RootsRow& r : rows) {
        os << num17(r.gamma) << ',' << num17(r.z) << ',' << num17(r.roots.w_N)
           << ',' << num17(r.roots.w_M) << ',' << num17(r.roots.w_P) << ','
           << num17(r.roots.w_Q) << ',' << (r.verdict.monotone ? 1 : 0) << ','
           << num17(r.verdict.z_minus) << ',' << num17(r.verdict.z_plus)
           << ',' << num17(r.verdict.gamma0) << '\n';
    }
}

void write_diagnostics_csv(std::ostream& os, const RunDiagnostics& diag) {
    os << "t,max_du,max_dtheta,eta_integral,s_integral,dissipation_integral,"
          "eta_residual,min_v,min_theta,resolved\n";
    for (const DiagSample& s : diag.series) {
        os << num17(s.t) << ',' << num17(s.max_du) << ','
           << num17(s.max_dtheta) << ',' << num17(s.eta_integral) << ','
           << num17(s.s_integral) << ',' << num17(s.dissipation_integral)
           << ',' << num17(s.eta_residual) << ',' << num17(s.min_v) << ','
           << num17(s.min_theta) << ',' << (s.resolved ? 1 : 0) << '\n';
    }
}

void write_snapshot_csv(std::ostream& os, const GridState& state,
                        const PhysicalParams& p) {
    os << "x,v,u,theta,q,S,E\n";
    for (std::size_t i = 0; i < state.cells.size(); ++i) {
        const Cell& c = state.cells[i];
        const ThermoState s = cell_state(c, p);
        os << num17(state.x_center(i)) << ',' << num17(c.v) << ','
           << num17(c.u) << ',' << num17(s.theta) << ',' << num17(c.q) << ','
           << num17(c.S) << ',' << num17(c.E) << '\n';
    }
}

void write_scan_csv(std::ostream& os, const BlowupScanReport& rep) {
    os << "orientation,sign,eps,n_cells,t_star,crossed,broke_down,growth,"
          "fit_r2,horizon\n";
    auto emit = [&](const char* label, const BlowupCase& c) {
        os << label << ',' << c.sign << ',' << num17(c.eps) << ',' << c.n_cells
           << ',' << (c.t_star ? num17(*c.t_star) : std::string("-")) << ','
           << (c.crossed ? 1 : 0) << ',' << (c.broke_down ? 1 : 0) << ','
           << num17(c.growth) << ',' << num17(c.fit_r2) << ','
           << num17(c.horizon) << '\n';
    };
    for (const BlowupCase& c : rep.cases) emit("compressive", c);
    for (const BlowupCase& c : rep.rarefactive_cases) emit("rarefactive", c);
}

void write_svg_line_plot(std::ostream& os, const std::string& title,
                         const std::vector<SvgSeries>& series) {
    const double width = 900, height = 560;
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const SvgSeries& s : series) {
        for (double v : s.x) {
            x_min = std::min(x_min, v);
            x_max = std::max(x_max, v);
        }
        for (double v : s.y) {
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    }
    if (!(x_max > x_min)) x_max = x_min + 1.0;
    if (!(y_max > y_min)) y_max = y_min + 1.0;

    auto sx = [&](double x) {
        return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr);
    };
    auto sy = [&](double y) {
        return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
    };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
       << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">"
       << title << "</text>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
       << width - mr << "\" y2=\"" << height - mb
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
       << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    char lab[64];
    std::snprintf(lab, sizeof(lab), "%.6g", x_min);
    os << "<text x=\"" << ml << "\" y=\"" << height - mb + 20
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << lab
       << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.6g", x_max);
    os << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 20
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"12\">"
       << lab << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.6g", y_min);
    os << "<text x=\"" << ml - 6 << "\" y=\"" << height - mb
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"12\">"
       << lab << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.6g", y_max);
    os << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"12\">"
       << lab << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const SvgSeries& s = series[k];
        os << "<polyline fill=\"none\" stroke=\"" << colors[k % 4]
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            char pt[64];
            std::snprintf(pt, sizeof(pt), "%.2f,%.2f ", sx(s.x[i]),
                          sy(s.y[i]));
            os << pt;
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - mr - 8 << "\" y=\""
           << mt + 18 * static_cast<double>(k + 1)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
              "font-size=\"12\" fill=\""
           << colors[k % 4] << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
}

} // namespace hns
