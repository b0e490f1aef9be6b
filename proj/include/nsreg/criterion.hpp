#ifndef NSREG_CRITERION_HPP
#define NSREG_CRITERION_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "criterion_spec.hpp"
#include "solver.hpp"
#include "time_series.hpp"

namespace nsreg {

struct CriterionReport {
    CriterionSpec spec;
    TimeSeries instantaneous;
    TimeSeries running_integral;       ///< int_0^t value^theta ds, trapezoid at snapshot cadence
    std::optional<double> final_value;  ///< (last running integral)^{1/theta}; empty when diverged
    Verdict verdict = Verdict::Finite;
};

/// Build a report from an already-sampled instantaneous series.
inline CriterionReport evaluate_series(const CriterionSpec& spec, TimeSeries instantaneous) {
    CriterionReport rep;
    rep.spec = spec;
    rep.running_integral = running_integral(instantaneous, spec.theta);
    rep.instantaneous = std::move(instantaneous);
    if (rep.instantaneous.diverged()) {
        rep.verdict = Verdict::Diverged;
    } else {
        const double last = rep.running_integral.empty() ? 0.0 : rep.running_integral.values().back();
        rep.final_value = std::pow(last, 1.0 / spec.theta);
    }
    return rep;
}

namespace detail {

inline bool same_spec(const CriterionSpec& a, const CriterionSpec& b) {
    return a.id == b.id && a.target == b.target && a.norm == b.norm && a.theta == b.theta;
}

template <class F>
TimeSeries series_from_snapshots(const Trajectory& traj, F&& norm_of) {
    TimeSeries s;
    for (const auto& snap : traj.snapshots) s.push(snap.time, norm_of(snap.field));
    if (traj.diverged() && traj.diverged_at) s.mark_diverged(*traj.diverged_at);
    return s;
}

} // namespace detail

/// Evaluate a criterion on a trajectory. Reuses the monitor series recorded during the run
/// when the same criterion was registered, otherwise recomputes from the snapshots.
inline CriterionReport evaluate(const Trajectory& traj, const CriterionSpec& spec) {
    for (const auto& m : traj.monitors) {
        if (!detail::same_spec(m, spec)) continue;
        if (const auto* series = traj.diagnostic(spec.id)) return evaluate_series(spec, *series);
    }
    if (traj.snapshots.empty()) throw InsufficientData("trajectory has no snapshots to evaluate '" + spec.id + "' on");
    return evaluate_series(spec, detail::series_from_snapshots(
                                     traj, [&](const SpectralVectorField& u) { return instantaneous_norm(spec, u); }));
}

/// Running supremum of ||omega(t)||_{H^{-1,inf}}; it must blow up at a finite maximal existence time.
struct BlowupIndicator {
    TimeSeries running_sup;
    bool diverged() const noexcept { return running_sup.diverged(); }
    double sup() const { return running_sup.empty() ? 0.0 : running_sup.values().back(); }
};

inline BlowupIndicator blowup_indicator_from(const TimeSeries& omega_hm1_inf) {
    BlowupIndicator out;
    double sup = 0.0;
    for (std::size_t i = 0; i < omega_hm1_inf.size(); ++i) {
        sup = std::max(sup, omega_hm1_inf.values()[i]);
        out.running_sup.push(omega_hm1_inf.times()[i], sup);
    }
    if (omega_hm1_inf.diverged()) out.running_sup.mark_diverged(*omega_hm1_inf.diverged_at());
    return out;
}

inline BlowupIndicator blowup_indicator(const Trajectory& traj) {
    if (const auto* series = traj.diagnostic(diag::omega_hm1_inf)) return blowup_indicator_from(*series);
    if (traj.snapshots.empty()) throw InsufficientData("trajectory has no snapshots for the blow-up indicator");
    return blowup_indicator_from(detail::series_from_snapshots(traj, [](const SpectralVectorField& u) {
        return sobolev_norm(curl(u), -1.0, infinity);
    }));
}

struct NormPair {
    double p = 2.0;
    double velocity = 0.0;        ///< ||u||_p
    double vorticity_hm1 = 0.0;   ///< ||omega||_{H^{-1,p}} = ||A^{-1/2} curl u||_p
    double b1_image = 0.0;        ///< ||B1 u||_p
    double identity_defect = 0.0; ///< |vorticity_hm1 - b1_image| / max(b1_image, tiny)

    double ratio() const { return velocity > 0.0 ? vorticity_hm1 / velocity : 0.0; }
};

/// Compare ||u||_p with ||curl u||_{H^{-1,p}} for each p. The second equals ||B1 u||_p exactly;
/// its ratio to the first is 1 for Beltrami fields and at most 1 when p = 2.
inline std::vector<NormPair> norm_equivalence_probe(const SpectralVectorField& u, const std::vector<double>& p_list) {
    const auto vel = to_physical(u);
    const auto omega = curl(u);
    const auto b1 = to_physical(b1_apply(u));
    std::vector<NormPair> out;
    for (double p : p_list) {
        NormPair np;
        np.p = p;
        np.velocity = lp_norm(vel, p);
        np.vorticity_hm1 = sobolev_norm(omega, -1.0, p);
        np.b1_image = lp_norm(b1, p);
        const double scale = std::max(np.b1_image, std::numeric_limits<double>::min());
        np.identity_defect = std::abs(np.vorticity_hm1 - np.b1_image) / scale;
        out.push_back(np);
    }
    return out;
}

struct RatioStats {
    double p = 2.0;
    std::size_t count = 0;
    double min = 0.0, max = 0.0, mean = 0.0;
    double worst_identity_defect = 0.0;
};

/// Per-exponent ratio statistics over a corpus of probes (regression data for p != 2).
inline std::vector<RatioStats> summarize_ratios(const std::vector<std::vector<NormPair>>& corpus) {
    std::map<double, RatioStats> acc;
    for (const auto& probe : corpus)
        for (const auto& np : probe) {
            auto& st = acc[np.p];
            const double r = np.ratio();
            if (st.count == 0) {
                st.p = np.p;
                st.min = st.max = r;
            }
            st.min = std::min(st.min, r);
            st.max = std::max(st.max, r);
            st.mean += r;
            st.worst_identity_defect = std::max(st.worst_identity_defect, np.identity_defect);
            ++st.count;
        }
    std::vector<RatioStats> out;
    for (auto& [p, st] : acc) {
        st.mean /= static_cast<double>(st.count);
        out.push_back(st);
    }
    return out;
}

} // namespace nsreg

#endif
