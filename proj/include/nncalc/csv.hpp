#pragma once

#include <string>
#include <vector>

#include "nncalc/noether.hpp"
#include "nncalc/variational.hpp"

namespace nncalc {

// Decimal CSV with 17 significant digits (round-trips doubles exactly),
// '.' decimal point, ',' separator, mandatory header row.

// Header: t,x,nn_velocity,el_residual_log,dbr_residual_log
// Residual columns hold the interior-node residuals; the two boundary rows
// carry 0 there (the residuals are defined at interior nodes only).
void write_extremal_csv(const std::string& path, const Trajectory& traj,
                        const std::vector<double>& el, const std::vector<double>& dbr);

// Header: t,quantity,log_deviation
void write_noether_csv(const std::string& path, const Trajectory& traj,
                       const ConservationReport& report);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

std::string format_double(double v); // %.17g

} // namespace nncalc
