#include "gazeaudit/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

#include "gazeaudit/error.hpp"

namespace gazeaudit {

namespace {

// One cached plan pair per transform length, with dedicated FFTW-aligned
// buffers. Execution copies through the buffers under the entry lock, which
// keeps the FFTW planner (not thread-safe) and buffer reuse both serialized.
struct PlanEntry {
    std::mutex mu;
    std::size_t n = 0;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    explicit PlanEntry(std::size_t len) : n(len) {
        real = fftw_alloc_real(n);
        cplx = fftw_alloc_complex(n / 2 + 1);
        if (!real || !cplx) throw NumericError("FFTW allocation failed");
        r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, cplx, FFTW_ESTIMATE);
        c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real, FFTW_ESTIMATE);
        if (!r2c || !c2r) throw NumericError("FFTW planning failed");
    }
};

PlanEntry& plan_for(std::size_t n) {
    static std::mutex cache_mu;
    static std::map<std::size_t, PlanEntry*> cache;
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, new PlanEntry(n)).first;
    return *it->second;
}

}  // namespace

std::vector<std::complex<double>> rdft(const std::vector<double>& in) {
    const std::size_t n = in.size();
    if (n == 0) return {};
    PlanEntry& e = plan_for(n);
    std::lock_guard<std::mutex> lock(e.mu);
    std::memcpy(e.real, in.data(), n * sizeof(double));
    fftw_execute(e.r2c);
    std::vector<std::complex<double>> out(n / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {e.cplx[k][0], e.cplx[k][1]};
    return out;
}

std::vector<double> half_spectrum_real_sum(const std::vector<std::complex<double>>& z, std::size_t n) {
    if (n == 0) return {};
    const std::size_t half = n / 2 + 1;
    if (z.size() != half) throw NumericError("half_spectrum_real_sum: spectrum size mismatch");

    // Interior bins go through FFTW's c2r, which for Hermitian input Y computes
    // out[m] = 2*sum_k Re(Y[k] e^{+2pi i km/N}) when Y[0] = Y[N/2] = 0. Feeding
    // Y = conj(Z) makes each term Re(Z[k] e^{-2pi i km/N}) counted twice. The DC
    // and (even N) Nyquist contributions are added analytically because c2r
    // requires those bins to be purely real.
    PlanEntry& e = plan_for(n);
    std::lock_guard<std::mutex> lock(e.mu);
    e.cplx[0][0] = 0.0;
    e.cplx[0][1] = 0.0;
    for (std::size_t k = 1; k < half; ++k) {
        e.cplx[k][0] = z[k].real();
        e.cplx[k][1] = -z[k].imag();
    }
    const bool even = (n % 2 == 0);
    if (even) {
        e.cplx[half - 1][0] = 0.0;
        e.cplx[half - 1][1] = 0.0;
    }
    fftw_execute(e.c2r);
    std::vector<double> out(n);
    const double z0 = z[0].real();
    const double zny = even ? z[half - 1].real() : 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        out[m] = 0.5 * e.real[m] + z0 + (even ? sign * zny : 0.0);
    }
    return out;
}

}  // namespace gazeaudit
