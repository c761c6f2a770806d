#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "gausson/fft.hpp"
#include "gausson/grid.hpp"

namespace gausson {

inline std::array<int, 2> fft_shape(const Grid& g) {
  const int n = static_cast<int>(g.points);
  return {n, n};
}

inline FftPlan make_plan(const Grid& g) {
  const auto shape = fft_shape(g);
  return FftPlan(std::span<const int>(shape.data(), static_cast<std::size_t>(g.dim)));
}

/// ||grad u||^2 via Parseval on the DFT.
inline double gradient_norm_sq(const WaveField& u) {
  std::vector<cplx> spec = u.values;
  make_plan(u.grid).forward(spec);
  double s = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) s += u.grid.wavenumber_sq(i) * std::norm(spec[i]);
  return s * u.grid.cell() / static_cast<double>(spec.size());
}

inline WaveField laplacian(const WaveField& u) {
  WaveField out = u;
  const FftPlan plan = make_plan(u.grid);
  plan.forward(out.values);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= -u.grid.wavenumber_sq(i);
  plan.backward(out.values);
  return out;
}

/// u(x - shift) by phase multiplication in frequency space.
inline WaveField spectral_shift(const WaveField& u, std::array<double, 2> shift) {
  const Grid& g = u.grid;
  WaveField out = u;
  const FftPlan plan = make_plan(g);
  plan.forward(out.values);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double phase;
    if (g.dim == 1) {
      phase = g.wavenumber(i) * shift[0];
    } else {
      phase = g.wavenumber(i / g.points) * shift[0] + g.wavenumber(i % g.points) * shift[1];
    }
    out.values[i] *= std::polar(1.0, -phase);
  }
  plan.backward(out.values);
  return out;
}

}  // namespace gausson
