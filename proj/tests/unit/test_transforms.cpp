#include <doctest.h>

#include <otfslink/rng.hpp>
#include <otfslink/transforms.hpp>

using namespace otfs;

namespace {

FrameParams params(int m, int n) {
    FrameParams p;
    p.M = m;
    p.N = n;
    p.delta_f_hz = 15e3;
    p.cp_len = 0;
    return p;
}

DelayDopplerGrid random_dd(const FrameParams& p, Rng& rng) {
    DelayDopplerGrid g(p);
    for (int k = 0; k < p.N; ++k)
        for (int l = 0; l < p.M; ++l) g(l, k) = cxd(rng.gaussian(), rng.gaussian());
    return g;
}

// Direct double-sum evaluation of the transform definition; the independent
// oracle for the FFT-based implementation.
TimeFrequencyGrid isfft_direct(const DelayDopplerGrid& dd, const FrameParams& p) {
    TimeFrequencyGrid tf(p);
    const double norm = 1.0 / std::sqrt(static_cast<double>(p.M) * p.N);
    for (int n = 0; n < p.N; ++n) {
        for (int m = 0; m < p.M; ++m) {
            cxd acc = 0.0;
            for (int k = 0; k < p.N; ++k)
                for (int l = 0; l < p.M; ++l)
                    acc += dd(l, k) * std::polar(1.0, 2.0 * M_PI * (double(n) * k / p.N -
                                                                    double(m) * l / p.M));
            tf(m, n) = acc * norm;
        }
    }
    return tf;
}

}  // namespace

TEST_CASE("isfft of the corner impulse is the constant basis function") {
    FrameParams p = params(2, 2);
    DelayDopplerGrid dd(p);
    dd(0, 0) = 1.0;
    TimeFrequencyGrid tf = isfft(dd, p);
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) CHECK(std::abs(tf(m, n) - cxd(0.5, 0.0)) < 1e-15);
}

TEST_CASE("doppler impulse produces the +j phase ramp along time") {
    FrameParams p = params(2, 2);
    DelayDopplerGrid dd(p);
    dd(0, 1) = 1.0;  // (k=1, l=0)
    TimeFrequencyGrid tf = isfft(dd, p);
    // X[n,m] = 0.5 exp(j pi n): column n=0 all +0.5, column n=1 all -0.5.
    for (int m = 0; m < 2; ++m) {
        CHECK(std::abs(tf(m, 0) - cxd(0.5, 0.0)) < 1e-15);
        CHECK(std::abs(tf(m, 1) - cxd(-0.5, 0.0)) < 1e-15);
    }
}

TEST_CASE("delay impulse produces the -j phase ramp along frequency") {
    FrameParams p = params(4, 2);
    DelayDopplerGrid dd(p);
    dd(1, 0) = 1.0;  // (k=0, l=1)
    TimeFrequencyGrid tf = isfft(dd, p);
    const double amp = 1.0 / std::sqrt(8.0);
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 4; ++m) {
            const cxd want = amp * std::polar(1.0, -2.0 * M_PI * m / 4.0);
            CHECK(std::abs(tf(m, n) - want) < 1e-14);
        }
}

TEST_CASE("isfft matches the direct double-sum definition") {
    Rng rng(11);
    for (auto [m, n] : {std::pair{5, 3}, {8, 4}}) {
        FrameParams p = params(m, n);
        DelayDopplerGrid dd = random_dd(p, rng);
        TimeFrequencyGrid fast = isfft(dd, p);
        TimeFrequencyGrid slow = isfft_direct(dd, p);
        CHECK((fast.data - slow.data).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("unitarity on a random 8x4 grid") {
    FrameParams p = params(8, 4);
    Rng rng(5);
    DelayDopplerGrid dd = random_dd(p, rng);
    TimeFrequencyGrid tf = isfft(dd, p);
    CHECK(std::abs(tf.data.squaredNorm() - dd.data.squaredNorm()) <=
          1e-12 * dd.data.squaredNorm());
}

TEST_CASE("sfft inverts isfft") {
    FrameParams p = params(16, 8);
    Rng rng(7);
    DelayDopplerGrid dd = random_dd(p, rng);
    DelayDopplerGrid back = sfft(isfft(dd, p), p);
    CHECK((back.data - dd.data).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sfft of the all-zero and constant grids") {
    FrameParams p = params(2, 2);
    TimeFrequencyGrid zero(p);
    CHECK(sfft(zero, p).data.cwiseAbs().maxCoeff() == 0.0);

    TimeFrequencyGrid flat(p);
    flat.data.setConstant(cxd(0.5, 0.0));  // 1/sqrt(NM) for M=N=2
    DelayDopplerGrid dd = sfft(flat, p);
    CHECK(std::abs(dd(0, 0) - cxd(1.0, 0.0)) < 1e-14);
    dd(0, 0) = 0.0;
    CHECK(dd.data.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("basis functions are flat-magnitude and orthogonal") {
    FrameParams p = params(8, 4);
    const double want = 1.0 / std::sqrt(32.0);

    std::vector<TimeFrequencyGrid> basis;
    for (int k = 0; k < p.N; ++k)
        for (int l = 0; l < p.M; ++l) basis.push_back(basis_function(k, l, p));

    for (const auto& b : basis)
        for (int m = 0; m < p.M; ++m)
            for (int n = 0; n < p.N; ++n) CHECK(std::abs(std::abs(b(m, n)) - want) < 1e-14);

    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i + 1; j < basis.size(); ++j) {
            const cxd ip = (basis[i].data.conjugate().array() * basis[j].data.array()).sum();
            CHECK(std::abs(ip) < 1e-12);
        }

    // (k=0,l=0) is the constant grid.
    TimeFrequencyGrid dc = basis_function(0, 0, p);
    CHECK((dc.data.array() - cxd(want, 0.0)).abs().maxCoeff() < 1e-15);
}

TEST_CASE("transform property suite on random grids") {
    Rng rng(42);
    const std::pair<int, int> sizes[] = {{2, 2}, {3, 5}, {8, 4}, {16, 16}, {64, 32}};
    int done = 0;
    while (done < 100) {
        for (auto [m, n] : sizes) {
            FrameParams p = params(m, n);
            DelayDopplerGrid x = random_dd(p, rng);
            DelayDopplerGrid y = random_dd(p, rng);
            TimeFrequencyGrid fx = isfft(x, p);
            TimeFrequencyGrid fy = isfft(y, p);

            // Unitarity.
            CHECK(std::abs(fx.data.squaredNorm() - x.data.squaredNorm()) <=
                  1e-10 * x.data.squaredNorm());
            // Invertibility.
            CHECK((sfft(fx, p).data - x.data).cwiseAbs().maxCoeff() < 1e-10);
            // Linearity.
            const cxd a(0.7, -1.3), b(-0.2, 0.4);
            DelayDopplerGrid mix(Eigen::MatrixXcd(a * x.data + b * y.data));
            CHECK((isfft(mix, p).data - (a * fx.data + b * fy.data)).cwiseAbs().maxCoeff() <
                  1e-10);
            ++done;
        }
    }
}

TEST_CASE("transform argument validation") {
    FrameParams p = params(4, 4);
    DelayDopplerGrid small(params(2, 2));
    CHECK_THROWS_AS(isfft(small, p), std::invalid_argument);
    TimeFrequencyGrid small_tf(params(2, 2));
    CHECK_THROWS_AS(sfft(small_tf, p), std::invalid_argument);
    CHECK_THROWS_AS(basis_function(4, 0, p), std::invalid_argument);
    CHECK_THROWS_AS(basis_function(0, -1, p), std::invalid_argument);
}
