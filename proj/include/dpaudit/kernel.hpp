#pragma once

#include <cstddef>
#include <span>

namespace dpaudit {

enum class KernelShape { Gaussian };

// Smoothing kernel for density estimation. Only the Gaussian kernel ships;
// the shape enum leaves room for other spherically symmetric choices.
struct Kernel {
  KernelShape shape = KernelShape::Gaussian;
  int dim = 1;
};

// K(u) for a point u of length kernel.dim. Gaussian kernels factor into a
// product of 1-d standard normal densities.
double kernel_eval(const Kernel& kernel, std::span<const double> u);

// Convenience overload for d=1.
double kernel_eval(const Kernel& kernel, double u);

// The L2 norm integral of K^2 over R^d. Gaussian d=1: 1/(2 sqrt(pi)).
double kernel_l2_norm(const Kernel& kernel);

}  // namespace dpaudit
