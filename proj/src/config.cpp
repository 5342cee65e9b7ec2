#include "xnse/config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace xnse {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

SectionMap parseSections(const std::string& text) {
    SectionMap out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        if (section.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": key outside any section");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": empty key or value");
        if (!out[section].emplace(key, val).second)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": duplicate key " +
                                     key);
    }
    return out;
}

class SectionReader {
public:
    SectionReader(SectionMap& all, const std::string& name) : name_(name) {
        auto it = all.find(name);
        if (it != all.end()) kv_ = &it->second;
    }
    std::string str(const std::string& key, const std::string& dflt) {
        if (!kv_) return dflt;
        auto it = kv_->find(key);
        if (it == kv_->end()) return dflt;
        used_.push_back(key);
        return it->second;
    }
    double num(const std::string& key, double dflt) {
        std::string v = str(key, "");
        if (v.empty()) return dflt;
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::runtime_error("config [" + name_ + "] " + key + ": not a number: " + v);
        return x;
    }
    int integer(const std::string& key, int dflt) {
        double x = num(key, dflt);
        if (x != static_cast<int>(x))
            throw std::runtime_error("config [" + name_ + "] " + key + ": expected an integer");
        return static_cast<int>(x);
    }
    bool flag(const std::string& key, bool dflt) {
        std::string v = str(key, dflt ? "true" : "false");
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw std::runtime_error("config [" + name_ + "] " + key + ": expected true/false");
    }
    void finish() {
        if (!kv_) return;
        for (const auto& [k, v] : *kv_) {
            bool ok = false;
            for (const auto& u : used_) ok = ok || u == k;
            if (!ok) throw std::runtime_error("config [" + name_ + "]: unknown key " + k);
        }
    }

private:
    const std::string name_;
    std::map<std::string, std::string>* kv_ = nullptr;
    std::vector<std::string> used_;
};

// Canonical physics of the named benchmark setup; [physics] keys override.
void caseDefaults(CaseConfig& cfg) {
    PhysicalParams& p = cfg.physics;
    p.gravity = Vec2::Zero();
    if (cfg.name == "capillary-wave") {  // La = 3000 regime
        p.rhoA = p.rhoB = 1e-3;
        p.muA = p.muB = 1e-4;
        p.sigma = 3e-2;
    } else if (cfg.name == "static-droplet") {
        p.rhoA = p.rhoB = 1e4;
        p.muA = p.muB = 1.0;
        p.sigma = 1.0;
    } else if (cfg.name == "oscillating-droplet") {
        p.rhoA = p.rhoB = 1e4;
        p.muA = p.muB = 1.0;
        p.sigma = 0.1;
    } else if (cfg.name == "rising-bubble-tc1") {
        p.rhoA = 100.0;
        p.rhoB = 1000.0;
        p.muA = 1.0;
        p.muB = 10.0;
        p.sigma = 24.5;
        p.gravity = Vec2(0.0, -0.98);
    } else if (cfg.name == "single-phase-mms") {
        p.rhoA = p.rhoB = 1.0;
        p.muA = p.muB = 0.05;
        p.sigma = 0.0;
    } else {
        throw std::runtime_error("config [case]: unknown case " + cfg.name);
    }
}

}  // namespace

CaseConfig CaseConfig::parse(const std::string& text) {
    SectionMap all = parseSections(text);
    for (const auto& [sec, kv] : all)
        if (sec != "case" && sec != "mesh" && sec != "physics" && sec != "solver" &&
            sec != "output")
            throw std::runtime_error("config: unknown section [" + sec + "]");

    CaseConfig cfg;
    SectionReader cs(all, "case");
    cfg.name = cs.str("name", "");
    if (cfg.name.empty()) throw std::runtime_error("config [case]: name is required");
    caseDefaults(cfg);
    cfg.degree = cs.integer("degree", 2);
    std::string dt = cs.str("dt", "auto");
    cfg.dt = dt == "auto" ? -1.0 : std::stod(dt);
    std::string tend = cs.str("end_time", "auto");
    cfg.endTime = tend == "auto" ? -1.0 : std::stod(tend);
    std::string coupling = cs.str("coupling", "explicit");
    if (coupling == "implicit")
        cfg.solver.implicitLs = true;
    else if (coupling != "explicit")
        throw std::runtime_error("config [case] coupling: expected explicit or implicit");
    cs.finish();

    SectionReader ms(all, "mesh");
    cfg.resolution = ms.integer("resolution", cfg.resolution);
    if (cfg.resolution < 2) throw std::runtime_error("config [mesh] resolution: too coarse");
    ms.finish();

    SectionReader ps(all, "physics");
    cfg.physics.rhoA = ps.num("rho_a", cfg.physics.rhoA);
    cfg.physics.rhoB = ps.num("rho_b", cfg.physics.rhoB);
    cfg.physics.muA = ps.num("mu_a", cfg.physics.muA);
    cfg.physics.muB = ps.num("mu_b", cfg.physics.muB);
    cfg.physics.sigma = ps.num("sigma", cfg.physics.sigma);
    cfg.physics.gravity.y() = ps.num("gravity_y", cfg.physics.gravity.y());
    ps.finish();

    SectionReader ss(all, "solver");
    cfg.solver.epsNse = ss.num("eps_nse", cfg.solver.epsNse);
    cfg.solver.imax = ss.integer("imax", cfg.solver.imax);
    cfg.solver.epsLs = ss.num("eps_ls", cfg.solver.epsLs);
    cfg.solver.alpha = ss.num("alpha", cfg.solver.alpha);
    cfg.solver.quadOrder = ss.integer("quad_order", cfg.solver.quadOrder);
    cfg.solver.verbose = ss.flag("verbose", cfg.solver.verbose);
    ss.finish();

    SectionReader os(all, "output");
    cfg.outputDir = os.str("directory", cfg.outputDir);
    cfg.csvEvery = os.integer("csv_every", cfg.csvEvery);
    cfg.vtkEvery = os.integer("vtk_every", cfg.vtkEvery);
    os.finish();
    return cfg;
}

CaseConfig CaseConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace xnse
