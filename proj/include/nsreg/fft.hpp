#ifndef NSREG_FFT_HPP
#define NSREG_FFT_HPP

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace nsreg::fft {

enum class Direction { Forward = FFTW_FORWARD, Backward = FFTW_BACKWARD };

namespace detail {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// The FFTW planner is not reentrant; execution of an existing plan on new arrays is.
class PlanCache {
public:
    fftw_plan get(int n, Direction dir) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, static_cast<int>(dir));
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second.get();
        const auto count = static_cast<std::size_t>(n) * n * n;
        std::vector<std::complex<double>> scratch(count);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        // FFTW_ESTIMATE keeps plans (and therefore results) reproducible run to run.
        PlanHandle plan(fftw_plan_dft_3d(n, n, n, buf, buf, static_cast<int>(dir),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED));
        fftw_plan raw = plan.get();
        plans_.emplace(key, std::move(plan));
        return raw;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, PlanHandle> plans_;
};

inline PlanCache& cache() {
    static PlanCache c;
    return c;
}

} // namespace detail

/// Unnormalized in-place 3-D DFT of an n^3 row-major array.
inline void transform(int n, std::span<std::complex<double>> data, Direction dir) {
    fftw_plan plan = detail::cache().get(n, dir);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

} // namespace nsreg::fft

#endif
