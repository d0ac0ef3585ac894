#ifndef SONMAB_NOMA_HPP
#define SONMAB_NOMA_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sonmab {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// The L target SINRs of the uplink NOMA ladder, linear scale, strictly
// descending by default. A non-strict ladder can be allowed explicitly, in
// which case only the direct received-power check decides SIC stability.
struct SinrLadder {
    std::vector<double> gammas;

    explicit SinrLadder(std::vector<double> g, bool allow_non_strict = false)
        : gammas(std::move(g)) {
        if (gammas.empty()) throw std::invalid_argument("SinrLadder: empty");
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            if (!(gammas[i] > 0.0)) throw std::invalid_argument("SinrLadder: gamma <= 0");
            if (i > 0 && !allow_non_strict && !(gammas[i] < gammas[i - 1]))
                throw std::invalid_argument("SinrLadder: not strictly descending");
        }
    }

    static SinrLadder from_db(const std::vector<double>& db, bool allow_non_strict = false) {
        std::vector<double> lin(db.size());
        for (std::size_t i = 0; i < db.size(); ++i) lin[i] = db_to_linear(db[i]);
        return SinrLadder(std::move(lin), allow_non_strict);
    }

    std::size_t size() const { return gammas.size(); }
    double gamma_max() const { return gammas.front(); }
};

// Received power levels v_l (watts) aligned with a SinrLadder, together with
// the noise power N0*Bc they were derived against.
struct PowerLevelSet {
    std::vector<double> levels;
    double noise_power = 0.0;

    std::size_t size() const { return levels.size(); }

    // Residual interference V_l seen by level l (sum of lower levels).
    double interference_below(std::size_t l) const {
        double v = 0.0;
        for (std::size_t j = l + 1; j < levels.size(); ++j) v += levels[j];
        return v;
    }

    // Recovers the SINR each level actually provides.
    double sinr_of_level(std::size_t l) const {
        return levels[l] / (interference_below(l) + noise_power);
    }
};

// Shannon rate in bit/s for a linear SINR over bandwidth_hz.
inline double rate_for_sinr(double gamma_linear, double bandwidth_hz) {
    if (gamma_linear < 0.0 || bandwidth_hz <= 0.0)
        throw std::domain_error("rate_for_sinr: bad input");
    return bandwidth_hz * std::log2(1.0 + gamma_linear);
}

// v_l = Gamma_l * N0*Bc * prod_{l'>l} (Gamma_{l'} + 1), built backwards from
// v_L = Gamma_L * N0*Bc.
inline PowerLevelSet power_levels(const SinrLadder& ladder, double noise_power) {
    if (!(noise_power > 0.0)) throw std::invalid_argument("power_levels: noise <= 0");
    const std::size_t L = ladder.size();
    PowerLevelSet out;
    out.noise_power = noise_power;
    out.levels.resize(L);
    double prod = 1.0;
    for (std::size_t i = L; i-- > 0;) {
        out.levels[i] = ladder.gammas[i] * noise_power * prod;
        prod *= ladder.gammas[i] + 1.0;
    }
    return out;
}

struct SicLevelMargin {
    std::size_t level = 0;
    double gamma_lhs = 0.0;   // Gamma_l
    double gamma_rhs = 0.0;   // 2^(L-l-1) Gamma_L / prod_{l'>l}(Gamma_{l'}+1)
    double power_lhs = 0.0;   // v_l
    double power_rhs = 0.0;   // sum_{l'>l} v_{l'}
    bool gamma_ok = false;
    bool power_ok = false;
};

struct SicStabilityReport {
    bool stable = false;
    std::vector<SicLevelMargin> margins;  // one entry per l < L
};

// SIC stability: every level must dominate the aggregate interference of the
// levels decoded after it. Checks both the SINR-domain condition and the
// direct v_l > V_l condition on the generated power levels. For non-strict
// ladders only the power-domain check is meaningful.
inline SicStabilityReport check_sic_stability(const SinrLadder& ladder,
                                              double noise_power = 1.0) {
    const std::size_t L = ladder.size();
    const PowerLevelSet set = power_levels(ladder, noise_power);
    SicStabilityReport rep;
    rep.stable = true;
    for (std::size_t l = 0; l + 1 < L; ++l) {
        SicLevelMargin m;
        m.level = l;
        double prod = 1.0;
        for (std::size_t j = l + 1; j < L; ++j) prod *= ladder.gammas[j] + 1.0;
        m.gamma_lhs = ladder.gammas[l];
        m.gamma_rhs = std::pow(2.0, static_cast<double>(L - l) - 2.0) * ladder.gammas.back() / prod;
        m.gamma_ok = m.gamma_lhs > m.gamma_rhs;
        m.power_lhs = set.levels[l];
        m.power_rhs = set.interference_below(l);
        m.power_ok = m.power_lhs > m.power_rhs;
        rep.stable = rep.stable && m.power_ok;
        rep.margins.push_back(m);
    }
    return rep;
}

// Transmit power needed to land v_l at the receiver through amplitude gain h.
// A zero gain is reported as infeasible (infinite power), not an error.
inline double transmit_power(double v_l, double gain_estimate) {
    if (!(v_l > 0.0) || gain_estimate < 0.0)
        throw std::invalid_argument("transmit_power: bad input");
    if (gain_estimate == 0.0) return std::numeric_limits<double>::infinity();
    return v_l / (gain_estimate * gain_estimate);
}

// Indices l with p_{k,m,l} <= budget. Empty is a valid outcome.
inline std::vector<std::size_t> feasible_power_levels(const PowerLevelSet& set,
                                                      double gain_estimate,
                                                      double budget) {
    if (budget < 0.0) throw std::invalid_argument("feasible_power_levels: budget < 0");
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < set.size(); ++l)
        if (transmit_power(set.levels[l], gain_estimate) <= budget) out.push_back(l);
    return out;
}

}  // namespace sonmab

#endif
