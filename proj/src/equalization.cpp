#include "otfslink/equalization.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <numeric>

namespace otfs {

std::string scheme_name(Scheme s) { return s == Scheme::Otfs ? "otfs" : "ofdm"; }

Scheme scheme_by_name(const std::string& name) {
    if (name == "otfs" || name == "OTFS") return Scheme::Otfs;
    if (name == "ofdm" || name == "OFDM") return Scheme::Ofdm;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string equalizer_name(EqualizerKind k) {
    switch (k) {
        case EqualizerKind::DdLmmse: return "dd-lmmse";
        case EqualizerKind::DdGenieDfe: return "dd-genie-dfe";
        case EqualizerKind::TfSingleTap: return "tf-single-tap";
        case EqualizerKind::TfGenieSic: return "tf-genie-sic";
    }
    return "?";
}

EqualizerKind equalizer_by_name(const std::string& name) {
    if (name == "dd-lmmse") return EqualizerKind::DdLmmse;
    if (name == "dd-genie-dfe") return EqualizerKind::DdGenieDfe;
    if (name == "tf-single-tap") return EqualizerKind::TfSingleTap;
    if (name == "tf-genie-sic") return EqualizerKind::TfGenieSic;
    throw std::invalid_argument("unknown equalizer '" + name + "'");
}

EffectiveChannelMatrix build_effective_matrix(const std::vector<ChannelRealization>& pairs,
                                              int tx_streams, int rx_streams,
                                              const FrameParams& p, Scheme scheme,
                                              int64_t start_sample) {
    p.validate();
    if (tx_streams < 1 || rx_streams < 1)
        throw std::invalid_argument("build_effective_matrix: stream counts must be >= 1");
    if (static_cast<int>(pairs.size()) != tx_streams * rx_streams)
        throw std::invalid_argument("build_effective_matrix: need one realization per antenna pair");

    const int s = p.grid_size();
    EffectiveChannelMatrix eff;
    eff.tx_streams = tx_streams;
    eff.rx_streams = rx_streams;
    eff.scheme = scheme;
    eff.frame = p;
    eff.entries.resize(static_cast<long>(rx_streams) * s, static_cast<long>(tx_streams) * s);
    for (int r = 0; r < rx_streams; ++r) {
        for (int t = 0; t < tx_streams; ++t) {
            const ChannelRealization& ch = pairs[static_cast<size_t>(r) * tx_streams + t];
            Eigen::MatrixXcd block = scheme == Scheme::Otfs
                                         ? dd_oracle_matrix(ch, p, start_sample)
                                         : tf_effective_matrix(ch, p, start_sample);
            eff.entries.block(static_cast<long>(r) * s, static_cast<long>(t) * s, s, s) =
                std::move(block);
        }
    }
    return eff;
}

namespace detail {

// ---------------------------------------------------------------------------
// Genie DFE via one Cholesky.
//
// Detecting natural-order symbol j with symbols 0..j-1 already cancelled is
// MMSE on the trailing column block {j..n-1}. Reversing the column order
// turns trailing blocks into leading blocks, and for A = R^H R (R upper
// triangular) the leading k x k block satisfies A_k = R_k^H R_k. From that:
//
//   [(A_k)^-1]_kk = 1 / R_kk^2
//   x_hat_k  = x_k + w_k / R_kk   with   R^H w = H^H y - A x_true
//   bias_k   = 1 - s2 / R_kk^2
//   sinr_k   = R_kk^2 / s2 - 1
//
// so every per-step MMSE quantity falls out of the factor diagonal and one
// forward substitution.
// ---------------------------------------------------------------------------

DdDfeEngine::DdDfeEngine(Eigen::MatrixXcd h) : h_(std::move(h)) {
    const long n = h_.cols();
    Eigen::MatrixXcd lower(n, n);
    lower.setZero();
    lower.selfadjointView<Eigen::Lower>().rankUpdate(h_.adjoint());
    gram_ = lower.selfadjointView<Eigen::Lower>();
}

void DdDfeEngine::set_noise(double noise_variance) {
    if (noise_variance <= 0)
        throw std::invalid_argument("genie_dfe: noise variance must be > 0");
    noise_variance_ = noise_variance;
    const long n = gram_.rows();
    Eigen::MatrixXcd a = gram_.reverse();
    a.diagonal().array() += noise_variance;
    chol_.compute(a);
    if (chol_.info() != Eigen::Success)
        throw std::runtime_error("genie_dfe: Cholesky factorization failed");
    diag_ = chol_.matrixLLT().diagonal().real();
    sinr_.resize(n);
    bias_.resize(n);
    for (long j = 0; j < n; ++j) {
        const double dd = diag_(n - 1 - j) * diag_(n - 1 - j);
        sinr_(j) = dd / noise_variance - 1.0;
        bias_(j) = 1.0 - noise_variance / dd;
    }
}

SymbolEstimates DdDfeEngine::equalize(const Eigen::VectorXcd& y,
                                      const Eigen::VectorXcd& true_x) const {
    const long n = gram_.rows();
    if (y.size() != h_.rows()) throw std::invalid_argument("genie_dfe: y length does not match H rows");
    if (true_x.size() != n) throw std::invalid_argument("genie_dfe: true_x length does not match H cols");

    Eigen::VectorXcd residual = h_.adjoint() * y - gram_ * true_x - noise_variance_ * true_x;
    Eigen::VectorXcd w = residual.reverse();
    chol_.matrixL().solveInPlace(w);

    SymbolEstimates est;
    est.raw.resize(n);
    for (long j = 0; j < n; ++j) est.raw(j) = true_x(j) + w(n - 1 - j) / diag_(n - 1 - j);
    est.bias = bias_;
    est.sinr = sinr_;
    return est;
}

DdLmmseEngine::DdLmmseEngine(Eigen::MatrixXcd h) : h_(std::move(h)) {
    const long n = h_.cols();
    Eigen::MatrixXcd lower(n, n);
    lower.setZero();
    lower.selfadjointView<Eigen::Lower>().rankUpdate(h_.adjoint());
    gram_ = lower.selfadjointView<Eigen::Lower>();
}

void DdLmmseEngine::set_noise(double noise_variance) {
    if (noise_variance < 0) throw std::invalid_argument("lmmse: negative noise variance");
    noise_variance_ = noise_variance;
    const long n = gram_.rows();
    Eigen::MatrixXcd a = gram_;
    a.diagonal().array() += noise_variance;
    chol_.compute(a);
    if (chol_.info() != Eigen::Success)
        throw std::runtime_error("lmmse: singular system (rank-deficient H with zero noise)");

    Eigen::MatrixXcd linv = Eigen::MatrixXcd::Identity(n, n);
    chol_.matrixL().solveInPlace(linv);
    Eigen::VectorXd diag_inv = linv.colwise().squaredNorm().transpose();
    bias_ = (1.0 - noise_variance * diag_inv.array()).matrix();
    sinr_ = (1.0 / (noise_variance * diag_inv.array()) - 1.0).matrix();
}

SymbolEstimates DdLmmseEngine::equalize(const Eigen::VectorXcd& y) const {
    if (y.size() != h_.rows()) throw std::invalid_argument("lmmse: y length does not match H rows");
    SymbolEstimates est;
    est.raw = chol_.solve(h_.adjoint() * y);
    est.bias = bias_;
    est.sinr = sinr_;
    return est;
}

SymbolEstimates lmmse_detailed(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h,
                               double noise_variance) {
    DdLmmseEngine engine(h);
    engine.set_noise(noise_variance);
    return engine.equalize(y);
}

SymbolEstimates genie_dfe_detailed(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h,
                                   double noise_variance, const Eigen::VectorXcd& true_x,
                                   DetectionOrder order) {
    if (true_x.size() != h.cols())
        throw std::invalid_argument("genie_dfe: true_x length does not match H cols");
    const int n = static_cast<int>(h.cols());

    std::vector<int> detect(n);
    std::iota(detect.begin(), detect.end(), 0);
    if (order == DetectionOrder::ColumnNormDescending) {
        std::vector<double> norms(n);
        for (int j = 0; j < n; ++j) norms[j] = h.col(j).squaredNorm();
        std::stable_sort(detect.begin(), detect.end(),
                         [&](int a, int b) { return norms[a] > norms[b]; });
    }

    if (order == DetectionOrder::Natural) {
        DdDfeEngine engine(h);
        engine.set_noise(noise_variance);
        return engine.equalize(y, true_x);
    }

    // Permute so that the requested order becomes the natural one.
    Eigen::MatrixXcd hp(h.rows(), n);
    Eigen::VectorXcd xp(n);
    for (int i = 0; i < n; ++i) {
        hp.col(i) = h.col(detect[i]);
        xp(i) = true_x(detect[i]);
    }
    DdDfeEngine engine(std::move(hp));
    engine.set_noise(noise_variance);
    SymbolEstimates permuted = engine.equalize(y, xp);

    SymbolEstimates est;
    est.raw.resize(n);
    est.bias.resize(n);
    est.sinr.resize(n);
    for (int i = 0; i < n; ++i) {
        est.raw(detect[i]) = permuted.raw(i);
        est.bias(detect[i]) = permuted.bias(i);
        est.sinr(detect[i]) = permuted.sinr(i);
    }
    return est;
}

SymbolEstimates tf_genie_sic_detailed(const std::vector<TimeFrequencyGrid>& y,
                                      const std::vector<Eigen::MatrixXcd>& bin_gains,
                                      int tx_streams, int rx_streams, double noise_variance,
                                      const Eigen::VectorXcd& true_x) {
    if (static_cast<int>(y.size()) != rx_streams)
        throw std::invalid_argument("tf_genie_sic: need one received grid per rx antenna");
    if (static_cast<int>(bin_gains.size()) != tx_streams * rx_streams)
        throw std::invalid_argument("tf_genie_sic: need per-pair bin gains");
    if (noise_variance <= 0) throw std::invalid_argument("tf_genie_sic: noise variance must be > 0");
    const long m = bin_gains[0].rows(), n = bin_gains[0].cols();
    const long grid = m * n;
    if (true_x.size() != grid * tx_streams)
        throw std::invalid_argument("tf_genie_sic: true_x length mismatch");

    SymbolEstimates est;
    est.raw.resize(grid * tx_streams);
    est.bias.resize(grid * tx_streams);
    est.sinr.resize(grid * tx_streams);

    Eigen::MatrixXcd hb(rx_streams, tx_streams);
    Eigen::VectorXcd yb(rx_streams);
    for (long bin = 0; bin < grid; ++bin) {
        const long bm = bin % m, bn = bin / m;
        for (int r = 0; r < rx_streams; ++r) {
            yb(r) = y[r].data(bm, bn);
            for (int t = 0; t < tx_streams; ++t)
                hb(r, t) = bin_gains[static_cast<size_t>(r) * tx_streams + t](bm, bn);
        }
        Eigen::VectorXcd residual = yb;
        for (int t = 0; t < tx_streams; ++t) {
            // MMSE on the layers not yet cancelled, then cancel the true symbol.
            const int rem = tx_streams - t;
            Eigen::MatrixXcd cov =
                noise_variance * Eigen::MatrixXcd::Identity(rx_streams, rx_streams);
            cov.selfadjointView<Eigen::Lower>().rankUpdate(hb.rightCols(rem));
            Eigen::VectorXcd f = Eigen::MatrixXcd(cov.selfadjointView<Eigen::Lower>())
                                     .llt()
                                     .solve(hb.col(t));
            const double alpha = f.dot(hb.col(t)).real();
            est.raw(static_cast<long>(t) * grid + bin) = f.dot(residual);
            est.bias(static_cast<long>(t) * grid + bin) = alpha;
            est.sinr(static_cast<long>(t) * grid + bin) = alpha / std::max(1.0 - alpha, 1e-300);
            residual -= hb.col(t) * true_x(static_cast<long>(t) * grid + bin);
        }
    }
    return est;
}

}  // namespace detail

Eigen::VectorXcd lmmse(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h,
                       double noise_variance) {
    if (y.size() != h.rows()) throw std::invalid_argument("lmmse: y length does not match H rows");
    if (noise_variance < 0) throw std::invalid_argument("lmmse: negative noise variance");
    const int n = static_cast<int>(h.cols());
    Eigen::MatrixXcd a(n, n);
    a.setZero();
    a.selfadjointView<Eigen::Lower>().rankUpdate(h.adjoint());
    a.diagonal().array() += noise_variance;
    Eigen::LLT<Eigen::MatrixXcd> chol(a);
    if (chol.info() != Eigen::Success)
        throw std::runtime_error("lmmse: singular system (rank-deficient H with zero noise)");
    return chol.solve(h.adjoint() * y);
}

Eigen::VectorXcd genie_dfe(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h,
                           double noise_variance, const Eigen::VectorXcd& true_x,
                           DetectionOrder order) {
    return detail::genie_dfe_detailed(y, h, noise_variance, true_x, order).raw;
}

TimeFrequencyGrid tf_single_tap(const TimeFrequencyGrid& y_tf, const Eigen::MatrixXcd& bin_gains,
                                double noise_variance) {
    if (y_tf.data.rows() != bin_gains.rows() || y_tf.data.cols() != bin_gains.cols())
        throw std::invalid_argument("tf_single_tap: gain grid dimensions mismatch");
    if (noise_variance < 0) throw std::invalid_argument("tf_single_tap: negative noise variance");
    TimeFrequencyGrid out;
    out.data = (bin_gains.conjugate().array() * y_tf.data.array() /
                (bin_gains.array().abs2() + noise_variance))
                   .matrix();
    return out;
}

Eigen::VectorXd per_symbol_sinr(const Eigen::MatrixXcd& h, double noise_variance,
                                EqualizerKind kind) {
    if (noise_variance <= 0)
        throw std::invalid_argument("per_symbol_sinr: noise variance must be > 0");
    switch (kind) {
        case EqualizerKind::TfSingleTap:
        case EqualizerKind::TfGenieSic:
            return (h.diagonal().array().abs2() / noise_variance).matrix();
        case EqualizerKind::DdLmmse: {
            detail::DdLmmseEngine engine(h);
            engine.set_noise(noise_variance);
            return engine.sinr();
        }
        case EqualizerKind::DdGenieDfe: {
            detail::DdDfeEngine engine(h);
            engine.set_noise(noise_variance);
            return engine.sinr();
        }
    }
    throw std::invalid_argument("per_symbol_sinr: unknown equalizer kind");
}

}  // namespace otfs
