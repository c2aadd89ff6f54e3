#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace otfs {

using cxd = std::complex<double>;

/// Frame geometry shared by every block of the chain.
///
/// M is both the number of subcarriers and the number of delay bins,
/// N is both the number of multicarrier symbols per frame and the number
/// of Doppler bins. The sample rate is fixed to M * delta_f.
struct FrameParams {
    int M = 64;              // subcarriers = delay bins
    int N = 16;              // multicarrier symbols per frame = Doppler bins
    double delta_f_hz = 15e3;
    int cp_len = 16;         // cyclic prefix, samples

    double sample_rate_hz() const { return static_cast<double>(M) * delta_f_hz; }
    double symbol_duration_s() const { return (M + cp_len) / sample_rate_hz(); }
    double frame_duration_s() const { return N * symbol_duration_s(); }
    double delay_resolution_s() const { return 1.0 / sample_rate_hz(); }
    double doppler_resolution_hz() const { return 1.0 / (N * symbol_duration_s()); }
    int samples_per_frame() const { return N * (M + cp_len); }
    int grid_size() const { return M * N; }

    void validate() const {
        if (M < 1 || N < 1) throw std::invalid_argument("FrameParams: M and N must be >= 1");
        if (delta_f_hz <= 0) throw std::invalid_argument("FrameParams: delta_f must be > 0");
        if (cp_len < 0) throw std::invalid_argument("FrameParams: cp_len must be >= 0");
    }
};

/// M x N complex grid in the Delay-Doppler plane.
/// Row index l in [0,M) is delay, column index k in [0,N) is Doppler.
/// Vectorization order is column-major: vec index = l + M*k.
struct DelayDopplerGrid {
    Eigen::MatrixXcd data;

    DelayDopplerGrid() = default;
    explicit DelayDopplerGrid(const FrameParams& p) : data(Eigen::MatrixXcd::Zero(p.M, p.N)) {}
    explicit DelayDopplerGrid(Eigen::MatrixXcd d) : data(std::move(d)) {}

    int delay_bins() const { return static_cast<int>(data.rows()); }
    int doppler_bins() const { return static_cast<int>(data.cols()); }
    cxd& operator()(int l, int k) { return data(l, k); }
    cxd operator()(int l, int k) const { return data(l, k); }

    bool matches(const FrameParams& p) const { return data.rows() == p.M && data.cols() == p.N; }
};

/// M x N complex grid of multicarrier resource elements.
/// Row index m in [0,M) is frequency (subcarrier), column index n in [0,N)
/// is time (multicarrier symbol). Vec index = m + M*n.
struct TimeFrequencyGrid {
    Eigen::MatrixXcd data;

    TimeFrequencyGrid() = default;
    explicit TimeFrequencyGrid(const FrameParams& p) : data(Eigen::MatrixXcd::Zero(p.M, p.N)) {}
    explicit TimeFrequencyGrid(Eigen::MatrixXcd d) : data(std::move(d)) {}

    int freq_bins() const { return static_cast<int>(data.rows()); }
    int time_bins() const { return static_cast<int>(data.cols()); }
    cxd& operator()(int m, int n) { return data(m, n); }
    cxd operator()(int m, int n) const { return data(m, n); }

    bool matches(const FrameParams& p) const { return data.rows() == p.M && data.cols() == p.N; }
};

/// Complex baseband waveform between the modulator and the channel.
struct SampleStream {
    std::vector<cxd> samples;
    double sample_rate_hz = 0.0;
};

}  // namespace otfs
