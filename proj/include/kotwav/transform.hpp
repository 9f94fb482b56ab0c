#pragma once

#include <functional>

#include "kotwav/types.hpp"

namespace kotwav {

// Convention: x(t) = (1/2pi) * integral X(w) e^{jwt} dw,
//             X(w) = integral x(t) e^{-jwt} dt.
// Discretised on a centered grid t_k = -(n/2)*dt + k*dt with the dual
// frequency grid w_m = -(n/2)*dw + m*dw, dw = 2pi/(n*dt). n must be even.
struct TransformPlan {
  UniformTimeGrid time;
  UniformFreqGrid freq;

  static TransformPlan centered(double dt, std::size_t n);
  static TransformPlan for_grid(const UniformTimeGrid& grid);
};

using SpectrumFn = std::function<std::complex<double>(double)>;

// Sample an analytic spectrum on the plan's grid and invert to time.
// `jumps` lists frequencies where the evaluator is discontinuous; a bin that
// lands on a jump takes the midpoint (fn(s-d)+fn(s+d))/2, which is the Fourier
// coefficient the periodised signal actually has there. The result must be
// real: an imaginary residue above 1e-9 of the peak throws
// std::runtime_error("non-Hermitian spectrum").
RealSeries synthesize(const SpectrumFn& fn, const TransformPlan& plan,
                      const std::vector<double>& jumps = {});

// Invert an already-sampled spectrum (same reality check as above).
RealSeries synthesize(const ComplexSpectrum& spectrum, const TransformPlan& plan);

// Forward transform of a sampled series: X_m = dt * sum_k x_k e^{-j w_m t_k}.
ComplexSpectrum analyze(const RealSeries& series, const TransformPlan& plan);

// dt * sum_k a_k * b_k. On the periodic grid the trapezoid and rectangle
// rules coincide, and this makes Parseval exact up to rounding.
double inner_product(const RealSeries& a, const RealSeries& b);

// (1/2pi) * dw * sum_m A_m * conj(B_m), the spectral side of Parseval.
std::complex<double> spectral_inner_product(const ComplexSpectrum& a, const ComplexSpectrum& b);

// (1/2pi) * dw * sum_m |A_m|^2.
double spectral_energy(const ComplexSpectrum& a);

}  // namespace kotwav
