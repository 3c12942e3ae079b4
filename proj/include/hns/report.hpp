#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hns/eigensystem.hpp"
#include "hns/invariant.hpp"
#include "hns/sim.hpp"

namespace hns {

// %.17g formatting: deterministic and round-trip exact.
std::string num17(double x);

void write_sweep_csv(std::ostream& os, const SweepReport& rep);

void write_certificate_csv(std::ostream& os, const CertificateReport& rep);

struct RootsRow {
    double gamma, z;
    RootTable roots;
    QMonotonicityVerdict verdict;
};

void write_roots_csv(std::ostream& os, const std::vector<RootsRow>& rows);

void write_diagnostics_csv(std::ostream& os, const RunDiagnostics& diag);

void write_snapshot_csv(std::ostream& os, const GridState& state,
                        const PhysicalParams& p);

void write_scan_csv(std::ostream& os, const BlowupScanReport& rep);

struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
};

void write_svg_line_plot(std::ostream& os, const std::string& title,
                         const std::vector<SvgSeries>& series);

} // namespace hns
