#pragma once

#include <complex>
#include <vector>

namespace gazeaudit {

// Unnormalized real-to-complex DFT: out[k] = sum_n in[n] * exp(-2*pi*i*k*n/N),
// k = 0..N/2. Backed by FFTW with a per-length plan cache; safe to call from
// multiple threads.
std::vector<std::complex<double>> rdft(const std::vector<double>& in);

// Adjoint helper used by the spectral-feature backprop: given Z over the half
// spectrum (k = 0..N/2), returns r[n] = Re( sum_{k=0}^{N/2} Z[k] * exp(-2*pi*i*k*n/N) ).
std::vector<double> half_spectrum_real_sum(const std::vector<std::complex<double>>& z, std::size_t n);

}  // namespace gazeaudit
