#include "otfslink/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace otfs::detail {

namespace {

std::mutex g_plan_mutex;

fftw_plan plan_for(int len, bool forward) {
    // Keyed plan cache. FFTW plan creation is not thread-safe; execution
    // via fftw_execute_dft on caller-owned buffers is.
    static std::map<std::pair<int, bool>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(len, forward);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> in(len), out(len);
    fftw_plan p = fftw_plan_dft_1d(len, reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()),
                                   forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

}  // namespace

void dft_strided(std::complex<double>* data, int len, int stride, bool forward) {
    if (len <= 1) return;
    fftw_plan p = plan_for(len, forward);
    thread_local std::vector<std::complex<double>> in, out;
    in.resize(len);
    out.resize(len);
    for (int i = 0; i < len; ++i) in[i] = data[i * static_cast<long>(stride)];
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    for (int i = 0; i < len; ++i) data[i * static_cast<long>(stride)] = out[i];
}

}  // namespace otfs::detail
