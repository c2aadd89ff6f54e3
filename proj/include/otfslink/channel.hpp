#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otfslink/frame.hpp"

namespace otfs {

/// One discrete Delay-Doppler point of the channel: the received signal
/// contains a copy of the transmit signal delayed by delay_s, frequency
/// shifted by doppler_hz and weighted by gain.
struct PathTap {
    cxd gain;
    double delay_s = 0.0;
    double doppler_hz = 0.0;
};

enum class DopplerModel {
    FixedPerTap,  // every tap at +doppler_max
    JakesAngle,   // per-tap doppler_max * cos(theta), theta uniform
};

/// Statistical tap profile (power-delay profile plus Doppler law).
struct ChannelProfile {
    std::vector<double> tap_delays_s;
    std::vector<double> tap_powers_db;
    double doppler_max_hz = 0.0;
    DopplerModel doppler_model = DopplerModel::JakesAngle;
    std::string name = "custom";

    void validate() const;
};

/// A drawn channel: fixed taps, unit total power.
struct ChannelRealization {
    std::vector<PathTap> taps;
    std::string profile_name;
    uint64_t seed = 0;
};

/// Doppler shift of a reflector moving at speed_mps seen on carrier_hz.
double doppler_shift(double speed_mps, double carrier_hz);

/// Built-in 3GPP TS 36.101 Annex B profiles plus two toy profiles.
/// Names: "ETU", "EVA", "single-tap", "two-tap".
ChannelProfile profile_by_name(const std::string& name, double doppler_max_hz,
                               DopplerModel model = DopplerModel::JakesAngle);

/// Draw one realization: gains with power proportional to the profile's dB
/// weights (total normalized to 1) and uniform phases; per-tap Doppler per
/// the profile's model. Deterministic given seed.
ChannelRealization realize_profile(const ChannelProfile& profile, uint64_t seed);

/// Pass a waveform through the channel:
///
///   r[n] = sum_i gain_i * s[n - d_i] * exp(j2pi doppler_i (n0 + n - d_i)/fs)
///
/// with d_i = round(delay_i * fs), s[.] zero outside its support, and output
/// truncated to the input length. start_sample n0 places the stream on the
/// channel's absolute time axis (0 for a lone frame; N*(M+cp) for the frame
/// after it, etc.).
SampleStream apply(const SampleStream& s, const ChannelRealization& ch, int64_t start_sample = 0);

/// Add circularly-symmetric complex Gaussian noise with variance
/// signal_power / 10^(snr_db/10). Deterministic given seed.
SampleStream add_awgn(const SampleStream& s, double snr_db, double signal_power, uint64_t seed);

/// Ground-truth end-to-end DD-domain channel matrix, built constructively:
/// column i is the vectorized response (vec index = l + M*k) of the chain
/// isfft -> modulate -> apply -> demodulate -> sfft to a unit impulse at DD
/// vec index i. No analytic approximation; this is the oracle everything
/// else is checked against.
Eigen::MatrixXcd dd_oracle_matrix(const ChannelRealization& ch, const FrameParams& p,
                                  int64_t start_sample = 0);

/// Same constructive map for the plain multicarrier chain (no SFFT pair):
/// column i is vec(demodulate(apply(modulate(impulse_i)))), vec = m + M*n.
Eigen::MatrixXcd tf_effective_matrix(const ChannelRealization& ch, const FrameParams& p,
                                     int64_t start_sample = 0);

}  // namespace otfs
