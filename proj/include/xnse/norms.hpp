#pragma once

#include <vector>

namespace xnse {

/// Sampled scalar quantity over time.
struct Series {
    std::vector<double> t;
    std::vector<double> q;
};

/// Piecewise-linear evaluation of a series; clamps outside the covered range.
double interpolate(const Series& s, double time);

struct ErrorNorms {
    double l1 = 0.0, l2 = 0.0, linf = 0.0;
};

/// Normalized discrete error norms of q against a reference sampled on its
/// own (possibly finer) time grid; the reference is linearly interpolated
/// onto the query times.  Throws if the reference is identically zero.
ErrorNorms errorNorms(const Series& q, const Series& ref);

/// Per-level observed convergence rates log(e_{l-1}/e_l) / log(h_{l-1}/h_l);
/// entry l-1 belongs to refinement level l.
std::vector<double> roc(const std::vector<double>& errors, const std::vector<double>& h);

}  // namespace xnse
