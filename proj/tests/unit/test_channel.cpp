#include <doctest.h>

#include <otfslink/channel.hpp>
#include <otfslink/multicarrier.hpp>
#include <otfslink/rng.hpp>
#include <otfslink/transforms.hpp>

using namespace otfs;

namespace {

FrameParams params(int m, int n, int cp, double df = 15e3) {
    FrameParams p;
    p.M = m;
    p.N = n;
    p.delta_f_hz = df;
    p.cp_len = cp;
    return p;
}

SampleStream random_stream(int len, double fs, uint64_t seed) {
    Rng rng(seed);
    SampleStream s;
    s.sample_rate_hz = fs;
    s.samples.resize(len);
    for (cxd& v : s.samples) v = rng.complex_gaussian(1.0);
    return s;
}

ChannelRealization taps_channel(std::vector<PathTap> taps) {
    ChannelRealization ch;
    ch.taps = std::move(taps);
    ch.profile_name = "fixed";
    return ch;
}

// On-grid tap helpers: delays in whole samples, Doppler in whole DD bins.
PathTap on_grid_tap(cxd gain, int delay_samples, int doppler_bins, const FrameParams& p) {
    PathTap tap;
    tap.gain = gain;
    tap.delay_s = delay_samples / p.sample_rate_hz();
    tap.doppler_hz = doppler_bins * p.doppler_resolution_hz();
    return tap;
}

}  // namespace

TEST_CASE("doppler_shift arithmetic") {
    const double c = 299792458.0;
    const double v100 = 100.0 / 3.6;  // 100 km/h
    const double f100 = doppler_shift(v100, 3.6e9);
    CHECK(f100 == doctest::Approx(v100 * 3.6e9 / c).epsilon(1e-12));
    CHECK(f100 > 300.0);  // the quoted "approximately 300 Hz"
    CHECK(f100 < 340.0);

    CHECK(doppler_shift(0.0, 28e9) == 0.0);

    const double v250 = 250.0 / 3.6;  // the 250 km/h at 4 GHz scenario
    const double f250 = doppler_shift(v250, 4e9);
    CHECK(f250 == doctest::Approx(926.57).epsilon(1e-3));

    CHECK_THROWS_AS(doppler_shift(-1.0, 1e9), std::invalid_argument);
    CHECK_THROWS_AS(doppler_shift(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("built-in profiles carry the 3GPP constants") {
    ChannelProfile etu = profile_by_name("ETU", 300.0);
    REQUIRE(etu.tap_delays_s.size() == 9);
    CHECK(etu.tap_delays_s.front() == 0.0);
    CHECK(etu.tap_delays_s.back() == doctest::Approx(5e-6));
    CHECK(etu.tap_powers_db[3] == 0.0);
    CHECK(etu.tap_powers_db[8] == -7.0);

    ChannelProfile eva = profile_by_name("EVA", 600.0);
    REQUIRE(eva.tap_delays_s.size() == 9);
    CHECK(eva.tap_delays_s.back() == doctest::Approx(2510e-9));
    CHECK(eva.tap_powers_db[8] == -16.9);

    CHECK(profile_by_name("single-tap", 0.0).tap_delays_s.size() == 1);
    CHECK(profile_by_name("two-tap", 0.0).tap_delays_s.size() == 2);
    CHECK_THROWS_AS(profile_by_name("EPA?", 0.0), std::invalid_argument);
}

TEST_CASE("realize_profile draws unit-power deterministic taps") {
    ChannelProfile etu = profile_by_name("ETU", 300.0);
    ChannelRealization a = realize_profile(etu, 77);
    ChannelRealization b = realize_profile(etu, 77);
    ChannelRealization c = realize_profile(etu, 78);

    double power = 0.0;
    for (const PathTap& tap : a.taps) {
        power += std::norm(tap.gain);
        CHECK(std::abs(tap.doppler_hz) <= 300.0 + 1e-9);
    }
    CHECK(power == doctest::Approx(1.0).epsilon(1e-9));

    REQUIRE(a.taps.size() == b.taps.size());
    for (size_t i = 0; i < a.taps.size(); ++i) {
        CHECK(a.taps[i].gain == b.taps[i].gain);
        CHECK(a.taps[i].doppler_hz == b.taps[i].doppler_hz);
    }
    CHECK(a.taps[0].gain != c.taps[0].gain);

    ChannelProfile single = profile_by_name("single-tap", 0.0);
    ChannelRealization s = realize_profile(single, 5);
    REQUIRE(s.taps.size() == 1);
    CHECK(std::abs(s.taps[0].gain) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.taps[0].doppler_hz == 0.0);

    ChannelProfile fixed = profile_by_name("ETU", 120.0, DopplerModel::FixedPerTap);
    for (const PathTap& tap : realize_profile(fixed, 9).taps)
        CHECK(tap.doppler_hz == doctest::Approx(120.0));

    ChannelProfile empty;
    CHECK_THROWS_AS(realize_profile(empty, 1), std::invalid_argument);
}

TEST_CASE("apply: identity, delay and pure Doppler") {
    SampleStream s = random_stream(64, 1e6, 4);

    SampleStream same = apply(s, taps_channel({{cxd(1, 0), 0.0, 0.0}}));
    for (size_t i = 0; i < s.samples.size(); ++i)
        CHECK(std::abs(same.samples[i] - s.samples[i]) < 1e-15);

    SampleStream shifted = apply(s, taps_channel({{cxd(1, 0), 3.0 / 1e6, 0.0}}));
    for (int i = 0; i < 3; ++i) CHECK(shifted.samples[i] == cxd(0.0, 0.0));
    for (size_t i = 3; i < s.samples.size(); ++i)
        CHECK(std::abs(shifted.samples[i] - s.samples[i - 3]) < 1e-15);

    SampleStream rotated = apply(s, taps_channel({{cxd(1, 0), 0.0, 0.25e6}}));
    for (size_t i = 0; i < s.samples.size(); ++i) {
        const cxd want = s.samples[i] * std::polar(1.0, M_PI * 0.5 * double(i));
        CHECK(std::abs(rotated.samples[i] - want) < 1e-12);
    }

    CHECK_THROWS_AS(apply(s, taps_channel({{cxd(1, 0), 100.0 / 1e6, 0.0}})),
                    std::invalid_argument);
}

TEST_CASE("apply is linear") {
    SampleStream s1 = random_stream(256, 1e6, 10);
    SampleStream s2 = random_stream(256, 1e6, 11);
    ChannelRealization ch = taps_channel({{cxd(0.8, 0.1), 2e-6, 140.0},
                                          {cxd(-0.3, 0.4), 5e-6, -90.0}});
    const cxd a(1.2, -0.5), b(0.3, 0.9);
    SampleStream mix;
    mix.sample_rate_hz = 1e6;
    mix.samples.resize(256);
    for (int i = 0; i < 256; ++i) mix.samples[i] = a * s1.samples[i] + b * s2.samples[i];

    SampleStream lhs = apply(mix, ch);
    SampleStream r1 = apply(s1, ch);
    SampleStream r2 = apply(s2, ch);
    for (int i = 0; i < 256; ++i)
        CHECK(std::abs(lhs.samples[i] - (a * r1.samples[i] + b * r2.samples[i])) < 1e-10);
}

TEST_CASE("unit-power doppler-free channels conserve average power") {
    ChannelProfile etu = profile_by_name("ETU", 0.0);
    ChannelRealization ch = realize_profile(etu, 31);
    SampleStream s = random_stream(100000, 10e6, 12);
    SampleStream r = apply(s, ch);
    double pin = 0.0, pout = 0.0;
    for (const cxd& v : s.samples) pin += std::norm(v);
    for (const cxd& v : r.samples) pout += std::norm(v);
    CHECK(pout / pin == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("add_awgn: negligible at huge SNR, calibrated variance, deterministic") {
    SampleStream s = random_stream(512, 1e6, 21);
    SampleStream quiet = add_awgn(s, 300.0, 1.0, 9);
    for (size_t i = 0; i < s.samples.size(); ++i)
        CHECK(std::abs(quiet.samples[i] - s.samples[i]) < 1e-10);

    SampleStream zeros;
    zeros.sample_rate_hz = 1e6;
    zeros.samples.assign(1000000, cxd(0.0, 0.0));
    SampleStream noisy = add_awgn(zeros, 0.0, 1.0, 77);
    double var = 0.0;
    for (const cxd& v : noisy.samples) var += std::norm(v);
    var /= noisy.samples.size();
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));

    SampleStream n1 = add_awgn(zeros, 10.0, 1.0, 5);
    SampleStream n2 = add_awgn(zeros, 10.0, 1.0, 5);
    for (size_t i = 0; i < 1000; ++i) CHECK(n1.samples[i] == n2.samples[i]);
}

TEST_CASE("dd_oracle_matrix of the identity channel is the identity") {
    FrameParams p = params(8, 4, 2);
    ChannelRealization ch = taps_channel({{cxd(1, 0), 0.0, 0.0}});
    Eigen::MatrixXcd h = dd_oracle_matrix(ch, p);
    CHECK((h - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dd_oracle_matrix localizes an on-grid tap at its circular shift") {
    FrameParams p = params(32, 16, 8);
    const int k0 = 3, l0 = 2;
    ChannelRealization ch = taps_channel({on_grid_tap(cxd(1, 0), l0, k0, p)});
    Eigen::MatrixXcd h = dd_oracle_matrix(ch, p);

    double worst = 1.0;
    for (int i = 0; i < h.cols(); ++i) {
        const int l = i % p.M, k = i / p.M;
        const int target = (l + l0) % p.M + p.M * ((k + k0) % p.N);
        const double frac = std::norm(h(target, i)) / h.col(i).squaredNorm();
        worst = std::min(worst, frac);
    }
    CHECK(worst >= 0.90);
    // Measured on this configuration; regression floor.
    CHECK(worst >= 0.93);
}

TEST_CASE("dd_oracle_matrix separates two on-grid taps with the right energy ratio") {
    FrameParams p = params(32, 16, 8);
    const cxd g1(0.85, 0.0), g2(0.0, 0.45);
    ChannelRealization ch =
        taps_channel({on_grid_tap(g1, 1, 2, p), on_grid_tap(g2, 4, -3, p)});
    Eigen::MatrixXcd h = dd_oracle_matrix(ch, p);

    Rng rng(2);
    for (int rep = 0; rep < 8; ++rep) {
        const int i = static_cast<int>(rng.below(h.cols()));
        const int l = i % p.M, k = i / p.M;
        const int t1 = (l + 1) % p.M + p.M * ((k + 2) % p.N);
        const int t2 = (l + 4) % p.M + p.M * (((k - 3) % p.N + p.N) % p.N);
        const double e1 = std::norm(h(t1, i));
        const double e2 = std::norm(h(t2, i));
        CHECK((e1 + e2) / h.col(i).squaredNorm() > 0.85);
        CHECK(e1 / e2 == doctest::Approx(std::norm(g1) / std::norm(g2)).epsilon(0.05));
    }
}

TEST_CASE("back-to-back frames see the same DD channel") {
    FrameParams p = params(16, 8, 4);

    // On-grid taps: the per-frame phase is a whole number of turns.
    ChannelRealization on_grid =
        taps_channel({on_grid_tap(cxd(0.9, 0.1), 1, 1, p), on_grid_tap(cxd(0.2, -0.4), 3, -2, p)});
    Eigen::MatrixXcd h0 = dd_oracle_matrix(on_grid, p, 0);
    Eigen::MatrixXcd h1 = dd_oracle_matrix(on_grid, p, p.samples_per_frame());
    CHECK((h1 - h0).cwiseAbs().maxCoeff() < 1e-9);

    // A single off-grid tap: same matrix up to one deterministic phase.
    PathTap tap;
    tap.gain = cxd(1.0, 0.0);
    tap.delay_s = 2.0 / p.sample_rate_hz();
    tap.doppler_hz = 0.37 * p.doppler_resolution_hz();
    Eigen::MatrixXcd g0 = dd_oracle_matrix(taps_channel({tap}), p, 0);
    Eigen::MatrixXcd g1 = dd_oracle_matrix(taps_channel({tap}), p, p.samples_per_frame());
    const cxd phase = std::polar(1.0, 2.0 * M_PI * tap.doppler_hz * p.samples_per_frame() /
                                          p.sample_rate_hz());
    CHECK((g1 - phase * g0).cwiseAbs().maxCoeff() < 1e-9);
}
