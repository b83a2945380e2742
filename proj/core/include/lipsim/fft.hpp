#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace lipsim {

// Thin RAII wrapper around serial FFTW complex transforms of fixed size.
// Plans are created with FFTW_ESTIMATE on an internally fftw-allocated
// buffer so the plan choice (and therefore the rounding profile of every
// transform) is identical across runs and thread counts.
//
// forward():  x_k = sum_j x_j exp(-i 2 pi j k / n)   (unnormalized)
// inverse():  x_j = (1/n) sum_k x_k exp(+i 2 pi j k / n)
//
// Plan creation is serialized internally; execution is thread-safe as long
// as each Fft1d instance is used by one thread at a time.
class Fft1d {
  public:
    explicit Fft1d(std::size_t n);
    ~Fft1d();

    Fft1d(const Fft1d&) = delete;
    Fft1d& operator=(const Fft1d&) = delete;
    Fft1d(Fft1d&& other) noexcept;
    Fft1d& operator=(Fft1d&& other) noexcept;

    std::size_t size() const { return n_; }

    void forward(std::span<std::complex<double>> data);
    void inverse(std::span<std::complex<double>> data);

  private:
    std::size_t n_ = 0;
    void* buffer_ = nullptr; // fftw_complex[n]
    void* plan_fwd_ = nullptr;
    void* plan_inv_ = nullptr;
};

} // namespace lipsim
