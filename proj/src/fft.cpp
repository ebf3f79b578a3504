#include "fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <new>

namespace taupint::detail {

template <typename T>
void AlignedBuffer<T>::reserve(std::size_t n) {
    if (n <= cap_) return;
    T* fresh = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (fresh == nullptr) throw std::bad_alloc();
    fftw_free(data_);
    data_ = fresh;
    cap_ = n;
}

template class AlignedBuffer<double>;
template class AlignedBuffer<std::complex<double>>;

namespace {

std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

RealDft::RealDft(std::size_t n) : n_(n) {
    AlignedBuffer<double> real(n);
    AlignedBuffer<std::complex<double>> spec(n / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    const int len = static_cast<int>(n);
    forward_ = fftw_plan_dft_r2c_1d(len, real.data(), c, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(len, c, real.data(), FFTW_ESTIMATE);
    if (forward_ == nullptr || backward_ == nullptr) throw std::bad_alloc();
}

RealDft::~RealDft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
}

const RealDft& RealDft::get(std::size_t n) {
    // The mutex must outlive the cache: plans lock it while being destroyed.
    auto& mu = planner_mutex();
    static std::map<std::size_t, std::unique_ptr<RealDft>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::unique_ptr<RealDft>(new RealDft(n))).first;
    }
    return *it->second;
}

void RealDft::forward(double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(forward_, in, reinterpret_cast<fftw_complex*>(out));
}

void RealDft::backward(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in), out);
}

Scratch& thread_scratch() {
    thread_local Scratch scratch;
    return scratch;
}

}  // namespace taupint::detail
