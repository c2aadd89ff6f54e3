#include "otfslink/channel.hpp"

#include <cmath>
#include <cstdio>

#include "otfslink/multicarrier.hpp"
#include "otfslink/rng.hpp"
#include "otfslink/transforms.hpp"

namespace otfs {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
}

void ChannelProfile::validate() const {
    if (tap_delays_s.empty()) throw std::invalid_argument("ChannelProfile: empty tap list");
    if (tap_delays_s.size() != tap_powers_db.size())
        throw std::invalid_argument("ChannelProfile: delay and power lists differ in length");
    for (size_t i = 0; i < tap_delays_s.size(); ++i) {
        if (tap_delays_s[i] < 0) throw std::invalid_argument("ChannelProfile: negative tap delay");
        if (i > 0 && tap_delays_s[i] < tap_delays_s[i - 1])
            throw std::invalid_argument("ChannelProfile: tap delays must be non-decreasing");
        if (!std::isfinite(tap_powers_db[i]))
            throw std::invalid_argument("ChannelProfile: non-finite tap power");
    }
}

double doppler_shift(double speed_mps, double carrier_hz) {
    if (speed_mps < 0) throw std::invalid_argument("doppler_shift: speed must be >= 0");
    if (carrier_hz <= 0) throw std::invalid_argument("doppler_shift: carrier must be > 0");
    return speed_mps * carrier_hz / kSpeedOfLight;
}

ChannelProfile profile_by_name(const std::string& name, double doppler_max_hz, DopplerModel model) {
    ChannelProfile p;
    p.doppler_max_hz = doppler_max_hz;
    p.doppler_model = model;
    p.name = name;
    if (name == "ETU") {
        // 3GPP TS 36.101 Annex B.2, Extended Typical Urban.
        p.tap_delays_s = {0, 50e-9, 120e-9, 200e-9, 230e-9, 500e-9, 1600e-9, 2300e-9, 5000e-9};
        p.tap_powers_db = {-1, -1, -1, 0, 0, 0, -3, -5, -7};
    } else if (name == "EVA") {
        // 3GPP TS 36.101 Annex B.2, Extended Vehicular A.
        p.tap_delays_s = {0, 30e-9, 150e-9, 310e-9, 370e-9, 710e-9, 1090e-9, 1730e-9, 2510e-9};
        p.tap_powers_db = {0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9};
    } else if (name == "single-tap") {
        p.tap_delays_s = {0};
        p.tap_powers_db = {0};
    } else if (name == "two-tap") {
        p.tap_delays_s = {0, 500e-9};
        p.tap_powers_db = {0, 0};
    } else {
        throw std::invalid_argument("profile_by_name: unknown profile '" + name + "'");
    }
    return p;
}

ChannelRealization realize_profile(const ChannelProfile& profile, uint64_t seed) {
    profile.validate();
    Rng rng(seed);
    ChannelRealization ch;
    ch.profile_name = profile.name;
    ch.seed = seed;
    ch.taps.reserve(profile.tap_delays_s.size());

    double total = 0.0;
    std::vector<double> lin(profile.tap_powers_db.size());
    for (size_t i = 0; i < lin.size(); ++i) {
        lin[i] = std::pow(10.0, profile.tap_powers_db[i] / 10.0);
        total += lin[i];
    }
    for (size_t i = 0; i < lin.size(); ++i) {
        PathTap tap;
        double phase = rng.uniform(0.0, 2.0 * M_PI);
        tap.gain = std::polar(std::sqrt(lin[i] / total), phase);
        tap.delay_s = profile.tap_delays_s[i];
        switch (profile.doppler_model) {
            case DopplerModel::FixedPerTap:
                tap.doppler_hz = profile.doppler_max_hz;
                break;
            case DopplerModel::JakesAngle:
                tap.doppler_hz = profile.doppler_max_hz * std::cos(rng.uniform(0.0, 2.0 * M_PI));
                break;
        }
        ch.taps.push_back(tap);
    }
    return ch;
}

SampleStream apply(const SampleStream& s, const ChannelRealization& ch, int64_t start_sample) {
    if (ch.taps.empty()) throw std::invalid_argument("apply: realization has no taps");
    if (s.sample_rate_hz <= 0) throw std::invalid_argument("apply: stream sample_rate not set");
    const long len = static_cast<long>(s.samples.size());
    const double fs = s.sample_rate_hz;

    SampleStream out;
    out.sample_rate_hz = fs;
    out.samples.assign(s.samples.size(), cxd(0.0, 0.0));

    for (const PathTap& tap : ch.taps) {
        const long d = std::lround(tap.delay_s * fs);
        if (d >= len) throw std::invalid_argument("apply: tap delay exceeds stream length");
        // Per-sample phasor updated iteratively, resynced periodically to the
        // closed form to bound rounding drift on long streams.
        const double step_angle = 2.0 * M_PI * tap.doppler_hz / fs;
        const cxd step = std::polar(1.0, step_angle);
        cxd phasor = std::polar(1.0, step_angle * static_cast<double>(start_sample));
        for (long n = d; n < len; ++n) {
            if (((n - d) & 1023) == 0)
                phasor = std::polar(1.0, step_angle * static_cast<double>(start_sample + n - d));
            out.samples[n] += tap.gain * s.samples[n - d] * phasor;
            phasor *= step;
        }
    }
    return out;
}

SampleStream add_awgn(const SampleStream& s, double snr_db, double signal_power, uint64_t seed) {
    if (!std::isfinite(snr_db)) throw std::invalid_argument("add_awgn: snr_db must be finite");
    const double noise_var = signal_power / std::pow(10.0, snr_db / 10.0);
    Rng rng(seed);
    SampleStream out = s;
    for (cxd& v : out.samples) v += rng.complex_gaussian(noise_var);
    return out;
}

namespace {

Eigen::MatrixXcd effective_matrix_impl(const ChannelRealization& ch, const FrameParams& p,
                                       int64_t start_sample, bool through_sfft) {
    p.validate();
    const int size = p.grid_size();
    const double cp_duration = p.cp_len / p.sample_rate_hz();
    for (const PathTap& tap : ch.taps) {
        if (tap.delay_s > cp_duration) {
            std::fprintf(stderr,
                         "warning: tap delay %.3g s exceeds cyclic prefix %.3g s; "
                         "inter-symbol leakage will corrupt the frame\n",
                         tap.delay_s, cp_duration);
            break;
        }
    }

    Eigen::MatrixXcd h(size, size);
    for (int i = 0; i < size; ++i) {
        Eigen::MatrixXcd impulse = Eigen::MatrixXcd::Zero(p.M, p.N);
        impulse(i % p.M, i / p.M) = 1.0;
        SampleStream tx = through_sfft ? modulate(isfft(DelayDopplerGrid(std::move(impulse)), p), p)
                                       : modulate(TimeFrequencyGrid(std::move(impulse)), p);
        SampleStream rx = apply(tx, ch, start_sample);
        TimeFrequencyGrid tf = demodulate(rx, p);
        if (through_sfft) {
            h.col(i) = sfft(tf, p).data.reshaped();
        } else {
            h.col(i) = tf.data.reshaped();
        }
    }
    return h;
}

}  // namespace

Eigen::MatrixXcd dd_oracle_matrix(const ChannelRealization& ch, const FrameParams& p,
                                  int64_t start_sample) {
    return effective_matrix_impl(ch, p, start_sample, /*through_sfft=*/true);
}

Eigen::MatrixXcd tf_effective_matrix(const ChannelRealization& ch, const FrameParams& p,
                                     int64_t start_sample) {
    return effective_matrix_impl(ch, p, start_sample, /*through_sfft=*/false);
}

}  // namespace otfs
