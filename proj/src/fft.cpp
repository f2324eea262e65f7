#include "wavesim/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace wavesim {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft::Fft(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("fft size must be positive");
    std::vector<cd> din(n), dout(n);
    std::lock_guard<std::mutex> lock(planner_mutex());
    // planned out-of-place with FFTW_UNALIGNED so the plan can execute on any
    // caller-provided buffers
    fwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(din.data()),
                            reinterpret_cast<fftw_complex*>(dout.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(din.data()),
                            reinterpret_cast<fftw_complex*>(dout.data()), FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan creation failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

Fft::Fft(Fft&& other) noexcept : n_(other.n_), fwd_(other.fwd_), bwd_(other.bwd_) {
    other.fwd_ = nullptr;
    other.bwd_ = nullptr;
}

void Fft::forward(const cd* in, cd* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(fwd_),
                     reinterpret_cast<fftw_complex*>(const_cast<cd*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft::backward(const cd* in, cd* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(bwd_),
                     reinterpret_cast<fftw_complex*>(const_cast<cd*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

Eigen::VectorXcd Fft::forward(const Eigen::VectorXcd& in) const {
    Eigen::VectorXcd out(n_);
    forward(in.data(), out.data());
    return out;
}

Eigen::VectorXcd Fft::backward(const Eigen::VectorXcd& in) const {
    Eigen::VectorXcd out(n_);
    backward(in.data(), out.data());
    return out;
}

Eigen::VectorXcd Fft::unitary_forward(const Eigen::VectorXcd& in) const {
    return forward(in) / std::sqrt(double(n_));
}

Eigen::VectorXcd Fft::unitary_backward(const Eigen::VectorXcd& in) const {
    return backward(in) / std::sqrt(double(n_));
}

} // namespace wavesim
