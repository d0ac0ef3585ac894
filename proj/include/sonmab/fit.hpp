#ifndef SONMAB_FIT_HPP
#define SONMAB_FIT_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sonmab {

struct CurvePoint {
    double t = 0.0;
    double value = 0.0;
};

struct LogSquareFit {
    double coefficient = 0.0;  // a in regret(t) ~ a * log(t)^2
    double r_squared = 0.0;
    bool within_band = true;   // against [a_lo, a_hi] * log(t)^2 at every point
};

// Least-squares fit of value ~ a * log(t)^2 (natural log) on points with
// t > tail_start. Expected-regret curves are non-decreasing; anything else is
// a data error.
inline LogSquareFit fit_log_square(const std::vector<CurvePoint>& curve, double tail_start,
                                   double band_lo = 0.0, double band_hi = 0.0) {
    std::vector<CurvePoint> tail;
    double prev = -1.0;
    for (const auto& p : curve) {
        if (p.value < prev - 1e-9) throw std::invalid_argument("fit_log_square: curve decreases");
        prev = p.value;
        if (p.t > tail_start && p.t > 1.0) tail.push_back(p);
    }
    if (tail.size() < 100) throw std::invalid_argument("fit_log_square: tail too short");
    double sxx = 0.0, sxy = 0.0, sy = 0.0;
    for (const auto& p : tail) {
        const double x = std::log(p.t) * std::log(p.t);
        sxx += x * x;
        sxy += x * p.value;
        sy += p.value;
    }
    LogSquareFit fit;
    fit.coefficient = sxy / sxx;
    const double mean_y = sy / static_cast<double>(tail.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& p : tail) {
        const double x = std::log(p.t) * std::log(p.t);
        const double e = p.value - fit.coefficient * x;
        ss_res += e * e;
        ss_tot += (p.value - mean_y) * (p.value - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (band_hi > band_lo) {
        for (const auto& p : tail) {
            const double x = std::log(p.t) * std::log(p.t);
            if (p.value < band_lo * x || p.value > band_hi * x) {
                fit.within_band = false;
                break;
            }
        }
    }
    return fit;
}

struct AggregateCurve {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> stddev;  // population std across runs
};

// Pointwise mean/std across runs; all runs must be sampled on the same grid.
inline AggregateCurve aggregate(const std::vector<std::vector<CurvePoint>>& runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
    const std::size_t n = runs.front().size();
    for (const auto& r : runs)
        if (r.size() != n) throw std::invalid_argument("aggregate: length mismatch");
    AggregateCurve out;
    out.t.resize(n);
    out.mean.assign(n, 0.0);
    out.stddev.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        out.t[i] = runs.front()[i].t;
        double s = 0.0;
        for (const auto& r : runs) {
            if (r[i].t != out.t[i]) throw std::invalid_argument("aggregate: grid mismatch");
            s += r[i].value;
        }
        out.mean[i] = s / static_cast<double>(runs.size());
        double v = 0.0;
        for (const auto& r : runs) {
            const double d = r[i].value - out.mean[i];
            v += d * d;
        }
        out.stddev[i] = std::sqrt(v / static_cast<double>(runs.size()));
    }
    return out;
}

}  // namespace sonmab

#endif
