#include "xnse/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xnse {

double interpolate(const Series& s, double time) {
    if (s.t.empty()) throw std::invalid_argument("empty series");
    if (s.t.size() != s.q.size()) throw std::invalid_argument("series size mismatch");
    if (time <= s.t.front()) return s.q.front();
    if (time >= s.t.back()) return s.q.back();
    auto it = std::upper_bound(s.t.begin(), s.t.end(), time);
    size_t i = it - s.t.begin();
    double w = (time - s.t[i - 1]) / (s.t[i] - s.t[i - 1]);
    return (1.0 - w) * s.q[i - 1] + w * s.q[i];
}

ErrorNorms errorNorms(const Series& q, const Series& ref) {
    if (q.t.empty()) throw std::invalid_argument("empty series");
    double s1 = 0, s2 = 0, sinf = 0, r1 = 0, r2 = 0, rinf = 0;
    for (size_t n = 0; n < q.t.size(); ++n) {
        double r = interpolate(ref, q.t[n]);
        double e = std::abs(q.q[n] - r);
        s1 += e;
        s2 += e * e;
        sinf = std::max(sinf, e);
        r1 += std::abs(r);
        r2 += r * r;
        rinf = std::max(rinf, std::abs(r));
    }
    if (r2 == 0.0) throw std::invalid_argument("reference series is identically zero");
    return {s1 / r1, std::sqrt(s2 / r2), sinf / rinf};
}

std::vector<double> roc(const std::vector<double>& errors, const std::vector<double>& h) {
    if (errors.size() != h.size() || errors.size() < 2)
        throw std::invalid_argument("need matching error/h sequences with at least two levels");
    std::vector<double> out;
    for (size_t l = 1; l < errors.size(); ++l)
        out.push_back(std::log10(errors[l - 1] / errors[l]) / std::log10(h[l - 1] / h[l]));
    return out;
}

}  // namespace xnse
