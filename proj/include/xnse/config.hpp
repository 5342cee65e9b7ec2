#pragma once

#include <string>

#include "xnse/forms.hpp"
#include "xnse/timestepper.hpp"

namespace xnse {

/// Benchmark case description parsed from a flat sectioned key/value file.
/// Sections and keys:
///   [case]    name, degree, dt ("auto" = capillary-restricted), end_time,
///             coupling (explicit|implicit)
///   [mesh]    resolution (cells per unit length)
///   [physics] rho_a, rho_b, mu_a, mu_b, sigma, gravity_y
///   [solver]  eps_nse, imax, eps_ls, alpha, quad_order, verbose
///   [output]  directory, csv_every, vtk_every
/// Unknown sections or keys are errors.
struct CaseConfig {
    std::string name;
    int resolution = 20;  // 1/h
    int degree = 2;
    double dt = -1.0;  // < 0: auto via the capillary restriction
    double endTime = -1.0;  // < 0: case default
    PhysicalParams physics;
    SolverConfig solver;
    std::string outputDir = ".";
    int csvEvery = 1;
    int vtkEvery = 20;

    static CaseConfig parse(const std::string& text);
    static CaseConfig load(const std::string& path);
};

}  // namespace xnse
