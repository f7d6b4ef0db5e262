#include "nncalc/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nncalc {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_extremal_csv(const std::string& path, const Trajectory& traj,
                        const std::vector<double>& el, const std::vector<double>& dbr) {
    const std::size_t n = traj.size();
    if (el.size() != n - 2 || dbr.size() != n - 2)
        throw PreconditionError("write_extremal_csv: residual traces must cover the interior");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    out << "t,x,nn_velocity,el_residual_log,dbr_residual_log\n";
    for (std::size_t i = 0; i < n; ++i) {
        bool interior = i > 0 && i + 1 < n;
        out << format_double(traj.t()[i]) << ',' << format_double(traj.x()[i]) << ','
            << format_double(traj.v()[i]) << ','
            << format_double(interior ? el[i - 1] : 0.0) << ','
            << format_double(interior ? dbr[i - 1] : 0.0) << '\n';
    }
}

void write_noether_csv(const std::string& path, const Trajectory& traj,
                       const ConservationReport& report) {
    const std::size_t n = traj.size();
    if (report.quantity.size() != n)
        throw PreconditionError("write_noether_csv: quantity trace must cover the grid");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    out << "t,quantity,log_deviation\n";
    for (std::size_t i = 0; i < n; ++i) {
        double q = report.quantity[i].value();
        out << format_double(traj.t()[i]) << ',' << format_double(q) << ','
            << format_double(std::log(q) - report.log_mean) << '\n';
    }
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return columns[i];
    throw Error("csv: no column named '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw Error("csv: '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ','))
        table.header.push_back(cell);
    table.columns.resize(table.header.size());
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::stringstream rs(line);
        std::size_t col = 0;
        while (std::getline(rs, cell, ',')) {
            if (col >= table.columns.size())
                throw Error("csv: row wider than header in '" + path + "'");
            table.columns[col++].push_back(std::strtod(cell.c_str(), nullptr));
        }
        if (col != table.columns.size())
            throw Error("csv: ragged row in '" + path + "'");
    }
    return table;
}

} // namespace nncalc
