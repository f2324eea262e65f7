#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wavesim/common.hpp"

namespace wavesim {

/// Thin FFTW wrapper. forward() computes X_k = sum_n x_n e^{-j2pi kn/N}
/// (unnormalized); backward() the conjugate sum. Plan creation is serialized
/// internally so Fft objects can be built and executed from parallel workers.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&& other) noexcept;
    Fft& operator=(Fft&&) = delete;

    int size() const { return n_; }

    void forward(const cd* in, cd* out) const;
    void backward(const cd* in, cd* out) const;

    Eigen::VectorXcd forward(const Eigen::VectorXcd& in) const;
    Eigen::VectorXcd backward(const Eigen::VectorXcd& in) const;

    // unitary versions (scaled by 1/sqrt(N))
    Eigen::VectorXcd unitary_forward(const Eigen::VectorXcd& in) const;
    Eigen::VectorXcd unitary_backward(const Eigen::VectorXcd& in) const;

private:
    int n_ = 0;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
};

} // namespace wavesim
