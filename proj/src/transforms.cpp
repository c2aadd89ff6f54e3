#include "otfslink/transforms.hpp"

#include <cmath>

#include "otfslink/fft.hpp"

namespace otfs {

TimeFrequencyGrid isfft(const DelayDopplerGrid& dd, const FrameParams& p) {
    p.validate();
    if (!dd.matches(p)) throw std::invalid_argument("isfft: grid dimensions do not match FrameParams");

    Eigen::MatrixXcd work = dd.data;  // rows l (delay), cols k (doppler)
    // Doppler -> time: unnormalized inverse DFT along each delay row.
    for (int l = 0; l < p.M; ++l) detail::dft_strided(work.data() + l, p.N, p.M, /*forward=*/false);
    // Delay -> frequency: unnormalized forward DFT along each time column.
    for (int n = 0; n < p.N; ++n) detail::dft(work.data() + static_cast<long>(n) * p.M, p.M, /*forward=*/true);
    work *= 1.0 / std::sqrt(static_cast<double>(p.M) * p.N);
    return TimeFrequencyGrid(std::move(work));
}

DelayDopplerGrid sfft(const TimeFrequencyGrid& tf, const FrameParams& p) {
    p.validate();
    if (!tf.matches(p)) throw std::invalid_argument("sfft: grid dimensions do not match FrameParams");

    Eigen::MatrixXcd work = tf.data;  // rows m (freq), cols n (time)
    // Frequency -> delay: unnormalized inverse DFT along each time column.
    for (int n = 0; n < p.N; ++n) detail::dft(work.data() + static_cast<long>(n) * p.M, p.M, /*forward=*/false);
    // Time -> Doppler: unnormalized forward DFT along each delay row.
    for (int l = 0; l < p.M; ++l) detail::dft_strided(work.data() + l, p.N, p.M, /*forward=*/true);
    work *= 1.0 / std::sqrt(static_cast<double>(p.M) * p.N);
    return DelayDopplerGrid(std::move(work));
}

TimeFrequencyGrid basis_function(int doppler_k, int delay_l, const FrameParams& p) {
    p.validate();
    if (doppler_k < 0 || doppler_k >= p.N) throw std::invalid_argument("basis_function: doppler index out of range");
    if (delay_l < 0 || delay_l >= p.M) throw std::invalid_argument("basis_function: delay index out of range");
    DelayDopplerGrid impulse(p);
    impulse(delay_l, doppler_k) = 1.0;
    return isfft(impulse, p);
}

}  // namespace otfs
