#pragma once

#include <complex>

namespace otfs::detail {

// Unnormalized 1D DFT on a strided buffer, backed by cached FFTW plans.
// forward:  X[k] = sum_n x[n] exp(-j 2 pi n k / len)
// backward: X[k] = sum_n x[n] exp(+j 2 pi n k / len)
// Plans are created with FFTW_ESTIMATE so results are reproducible
// run-to-run; plan creation is serialized, execution is thread-safe.
void dft_strided(std::complex<double>* data, int len, int stride, bool forward);

inline void dft(std::complex<double>* data, int len, bool forward) {
    dft_strided(data, len, 1, forward);
}

}  // namespace otfs::detail
