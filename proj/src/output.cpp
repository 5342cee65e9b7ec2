#include "xnse/output.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace xnse {

void writeCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    out << std::setprecision(17);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::runtime_error("csv row width does not match the header");
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable readCsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv " + path);
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream rs(line);
        std::vector<double> row;
        while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != table.header.size())
            throw std::runtime_error("csv row width mismatch in " + path);
        table.rows.push_back(std::move(row));
    }
    return table;
}

void writeVtk(const std::string& path, const MixedSpace& space, const CutCellData& cc,
              const Eigen::VectorXd& x, const DgField& phi) {
    const BackgroundMesh& mesh = space.mesh();
    int n1 = space.degree() + 2;
    struct Sample {
        Vec2 p;
        int species;
        Vec2 u;
        double pres, ls;
    };
    std::vector<Sample> samples;
    for (int j = 0; j < mesh.numCells(); ++j) {
        for (int s = 0; s < 2; ++s) {
            if (!cc.active(j, s)) continue;
            for (int iy = 0; iy < n1; ++iy)
                for (int ix = 0; ix < n1; ++ix) {
                    Vec2 ref(-1.0 + 2.0 * ix / (n1 - 1), -1.0 + 2.0 * iy / (n1 - 1));
                    Sample sm;
                    sm.p = mesh.toPhysical(j, ref);
                    sm.species = s;
                    sm.u = space.velocity(x, j, s, ref);
                    sm.pres = space.pressure(x, j, s, ref);
                    sm.ls = phi.evalRef(j, ref.x(), ref.y());
                    samples.push_back(sm);
                }
        }
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    size_t n = samples.size();
    out << "# vtk DataFile Version 3.0\n"
        << "two-phase flow snapshot\n"
        << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << std::setprecision(12);
    out << "POINTS " << n << " double\n";
    for (const auto& s : samples) out << s.p.x() << " " << s.p.y() << " 0\n";
    out << "CELLS " << n << " " << 2 * n << "\n";
    for (size_t i = 0; i < n; ++i) out << "1 " << i << "\n";
    out << "CELL_TYPES " << n << "\n";
    for (size_t i = 0; i < n; ++i) out << "1\n";
    out << "POINT_DATA " << n << "\n";
    out << "SCALARS species int 1\nLOOKUP_TABLE default\n";
    for (const auto& s : samples) out << s.species << "\n";
    out << "VECTORS velocity double\n";
    for (const auto& s : samples) out << s.u.x() << " " << s.u.y() << " 0\n";
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (const auto& s : samples) out << s.pres << "\n";
    out << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
    for (const auto& s : samples) out << s.ls << "\n";
}

}  // namespace xnse
