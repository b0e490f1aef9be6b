#ifndef NSREG_TIME_SERIES_HPP
#define NSREG_TIME_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace nsreg {

enum class Verdict { Finite, Diverged };

inline const char* to_string(Verdict v) { return v == Verdict::Finite ? "FINITE" : "DIVERGED"; }

/// Nonnegative samples at strictly increasing times.
///
/// A non-finite sample does not enter the series; it marks the series diverged at that
/// time and every later push is dropped, so the finite prefix stays usable.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(std::vector<double> times, std::vector<double> values) {
        if (times.size() != values.size()) throw RangeError("time series needs equal-length times and values");
        for (std::size_t i = 0; i < times.size(); ++i) push(times[i], values[i]);
    }

    void push(double t, double v) {
        if (diverged_at_) return;
        if (!std::isfinite(t)) throw RangeError("time stamp must be finite");
        if (!times_.empty() && !(t > times_.back())) throw RangeError("time stamps must increase strictly");
        if (!std::isfinite(v)) {
            diverged_at_ = t;
            return;
        }
        if (v < 0.0) throw RangeError("time series values must be nonnegative");
        times_.push_back(t);
        values_.push_back(v);
    }

    void mark_diverged(double t) {
        if (!diverged_at_) diverged_at_ = t;
    }

    bool diverged() const noexcept { return diverged_at_.has_value(); }
    std::optional<double> diverged_at() const noexcept { return diverged_at_; }

    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }

private:
    std::vector<double> times_;
    std::vector<double> values_;
    std::optional<double> diverged_at_;
};

/// Composite trapezoid rule over the sample points.
inline double trapezoid(std::span<const double> t, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) sum += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    return sum;
}

/// Cumulative trapezoid integral of value^theta, sampled at the series' times. Finite theta only.
inline TimeSeries running_integral(const TimeSeries& s, double theta) {
    if (!(theta >= 1.0) || std::isinf(theta)) throw RangeError("running integral needs finite theta >= 1");
    TimeSeries out;
    const auto t = s.times();
    const auto v = s.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0) acc += 0.5 * (t[i] - t[i - 1]) * (std::pow(v[i], theta) + std::pow(v[i - 1], theta));
        out.push(t[i], acc);
    }
    if (s.diverged()) out.mark_diverged(*s.diverged_at());
    return out;
}

struct TimeNorm {
    Verdict verdict = Verdict::Finite;
    std::optional<double> value;  ///< empty when diverged
    double partial = 0.0;         ///< norm over the finite prefix
};

/// L^theta norm in time: trapezoid quadrature of value^theta for finite theta, the sample
/// maximum for theta = inf.
inline TimeNorm time_lebesgue_norm(const TimeSeries& s, double theta) {
    if (!(theta >= 1.0)) throw RangeError("time exponent theta must be >= 1");
    if (s.empty() && !s.diverged()) throw InsufficientData("time norm of an empty series");
    double partial = 0.0;
    if (std::isinf(theta)) {
        for (double v : s.values()) partial = std::max(partial, v);
    } else {
        std::vector<double> powered(s.values().begin(), s.values().end());
        for (auto& v : powered) v = std::pow(v, theta);
        partial = std::pow(trapezoid(s.times(), powered), 1.0 / theta);
    }
    TimeNorm out;
    out.partial = partial;
    if (s.diverged()) {
        out.verdict = Verdict::Diverged;
    } else {
        out.value = partial;
    }
    return out;
}

} // namespace nsreg

#endif
