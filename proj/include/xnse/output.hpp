#pragma once

#include <string>
#include <vector>

#include "xnse/field.hpp"
#include "xnse/spaces.hpp"

namespace xnse {

/// One row per record, 17 significant digits.
void writeCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

CsvTable readCsv(const std::string& path);

/// Legacy ASCII VTK snapshot: vertex cloud on a per-cell (k+2)^2 lattice with
/// species id, velocity, pressure and phi; cut cells emit one sample set per
/// species so the sharp jump survives in the output.
void writeVtk(const std::string& path, const MixedSpace& space, const CutCellData& cc,
              const Eigen::VectorXd& x, const DgField& phi);

}  // namespace xnse
