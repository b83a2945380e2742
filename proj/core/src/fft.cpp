#include "lipsim/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "lipsim/errors.hpp"

namespace lipsim {

namespace {
// FFTW's planner is not thread-safe; executions of distinct plans are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft1d::Fft1d(std::size_t n) : n_(n) {
    if (n == 0) throw NumericalError("Fft1d: zero-length transform");
    buffer_ = fftw_alloc_complex(n);
    if (!buffer_) throw NumericalError("Fft1d: allocation failure");
    auto* buf = static_cast<fftw_complex*>(buffer_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_inv_) throw NumericalError("Fft1d: planner failure");
}

Fft1d::~Fft1d() {
    if (plan_fwd_ || plan_inv_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
        if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    }
    if (buffer_) fftw_free(buffer_);
}

Fft1d::Fft1d(Fft1d&& other) noexcept
    : n_(other.n_), buffer_(other.buffer_), plan_fwd_(other.plan_fwd_), plan_inv_(other.plan_inv_) {
    other.buffer_ = nullptr;
    other.plan_fwd_ = nullptr;
    other.plan_inv_ = nullptr;
    other.n_ = 0;
}

Fft1d& Fft1d::operator=(Fft1d&& other) noexcept {
    if (this != &other) {
        this->~Fft1d();
        n_ = other.n_;
        buffer_ = other.buffer_;
        plan_fwd_ = other.plan_fwd_;
        plan_inv_ = other.plan_inv_;
        other.n_ = 0;
        other.buffer_ = nullptr;
        other.plan_fwd_ = nullptr;
        other.plan_inv_ = nullptr;
    }
    return *this;
}

void Fft1d::forward(std::span<std::complex<double>> data) {
    if (data.size() != n_) throw NumericalError("Fft1d::forward: size mismatch");
    // std::complex<double> is array-compatible with fftw_complex.
    auto* buf = reinterpret_cast<std::complex<double>*>(buffer_);
    std::copy(data.begin(), data.end(), buf);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::copy(buf, buf + n_, data.begin());
}

void Fft1d::inverse(std::span<std::complex<double>> data) {
    if (data.size() != n_) throw NumericalError("Fft1d::inverse: size mismatch");
    auto* buf = reinterpret_cast<std::complex<double>*>(buffer_);
    std::copy(data.begin(), data.end(), buf);
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) data[j] = buf[j] * scale;
}

} // namespace lipsim
