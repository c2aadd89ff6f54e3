#include "otfslink/multicarrier.hpp"

#include <cmath>

#include "otfslink/fft.hpp"

namespace otfs {

SampleStream modulate(const TimeFrequencyGrid& tf, const FrameParams& p) {
    p.validate();
    if (!tf.matches(p)) throw std::invalid_argument("modulate: grid dimensions do not match FrameParams");

    const double scale = 1.0 / std::sqrt(static_cast<double>(p.M));
    SampleStream out;
    out.sample_rate_hz = p.sample_rate_hz();
    out.samples.resize(static_cast<size_t>(p.samples_per_frame()));

    std::vector<cxd> body(p.M);
    for (int n = 0; n < p.N; ++n) {
        for (int m = 0; m < p.M; ++m) body[m] = tf(m, n);
        detail::dft(body.data(), p.M, /*forward=*/false);
        cxd* sym = out.samples.data() + static_cast<long>(n) * (p.M + p.cp_len);
        for (int i = 0; i < p.cp_len; ++i) sym[i] = body[p.M - p.cp_len + i] * scale;
        for (int i = 0; i < p.M; ++i) sym[p.cp_len + i] = body[i] * scale;
    }
    return out;
}

TimeFrequencyGrid demodulate(const SampleStream& s, const FrameParams& p) {
    p.validate();
    const size_t expected = static_cast<size_t>(p.samples_per_frame());
    if (s.samples.size() != expected)
        throw std::invalid_argument("demodulate: stream length does not match N*(M+cp_len)");

    const double scale = 1.0 / std::sqrt(static_cast<double>(p.M));
    TimeFrequencyGrid tf(p);
    std::vector<cxd> body(p.M);
    for (int n = 0; n < p.N; ++n) {
        const cxd* sym = s.samples.data() + static_cast<long>(n) * (p.M + p.cp_len) + p.cp_len;
        for (int i = 0; i < p.M; ++i) body[i] = sym[i];
        detail::dft(body.data(), p.M, /*forward=*/true);
        for (int m = 0; m < p.M; ++m) tf(m, n) = body[m] * scale;
    }
    return tf;
}

}  // namespace otfs
