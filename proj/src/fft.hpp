#pragma once

// Thin RAII layer over FFTW's real-to-halfcomplex transforms.  Plans are
// created once per length under a mutex and then executed through the
// new-array interface, which FFTW guarantees to be thread-safe.

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace taupint::detail {

template <typename T>
class AlignedBuffer {
public:
    AlignedBuffer() = default;
    explicit AlignedBuffer(std::size_t n) { reserve(n); }
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;
    AlignedBuffer(AlignedBuffer&& other) noexcept : data_(other.data_), cap_(other.cap_) {
        other.data_ = nullptr;
        other.cap_ = 0;
    }
    ~AlignedBuffer() { fftw_free(data_); }

    void reserve(std::size_t n);
    [[nodiscard]] T* data() noexcept { return data_; }
    [[nodiscard]] const T* data() const noexcept { return data_; }
    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

private:
    T* data_ = nullptr;
    std::size_t cap_ = 0;
};

/// Cached forward (r2c) and backward (c2r) plans for one transform length.
class RealDft {
public:
    static const RealDft& get(std::size_t n);

    RealDft(const RealDft&) = delete;
    RealDft& operator=(const RealDft&) = delete;
    ~RealDft();

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

    /// Unnormalized forward DFT; `in` has size(), `out` spectrum_size() entries.
    void forward(double* in, std::complex<double>* out) const;
    /// Unnormalized inverse DFT; destroys `in`.
    void backward(std::complex<double>* in, double* out) const;

private:
    explicit RealDft(std::size_t n);
    std::size_t n_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

/// Per-thread scratch used by the pencil kernels.
struct Scratch {
    AlignedBuffer<double> real_a;
    AlignedBuffer<double> real_b;
    AlignedBuffer<std::complex<double>> spec;
    AlignedBuffer<double> pencil_in;
    AlignedBuffer<double> pencil_out;
};

Scratch& thread_scratch();

}  // namespace taupint::detail
