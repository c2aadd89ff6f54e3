#pragma once

#include <vector>

#include "otfslink/channel.hpp"
#include "otfslink/frame.hpp"

namespace otfs {

enum class Scheme { Otfs, Ofdm };

std::string scheme_name(Scheme s);
Scheme scheme_by_name(const std::string& name);

enum class EqualizerKind { DdLmmse, DdGenieDfe, TfSingleTap, TfGenieSic };

std::string equalizer_name(EqualizerKind k);
EqualizerKind equalizer_by_name(const std::string& name);

enum class DetectionOrder { Natural, ColumnNormDescending };

/// End-to-end linear map y = H x + w between vectorized symbol grids.
/// For OTFS the grids live in the Delay-Doppler domain, for OFDM in the
/// Time-Frequency domain. MIMO streams are stacked: column t*M*N + i is the
/// noiseless received stack when a unit impulse occupies symbol i of
/// transmit stream t.
struct EffectiveChannelMatrix {
    Eigen::MatrixXcd entries;  // (R*M*N) x (T*M*N)
    int tx_streams = 1;
    int rx_streams = 1;
    Scheme scheme = Scheme::Otfs;
    FrameParams frame;
};

/// Assemble the MIMO effective matrix from per-antenna-pair realizations,
/// pairs indexed row-major: pair (r,t) at index r*T + t. Each block is built
/// constructively through the full transmit/channel/receive chain.
EffectiveChannelMatrix build_effective_matrix(const std::vector<ChannelRealization>& pairs,
                                              int tx_streams, int rx_streams,
                                              const FrameParams& p, Scheme scheme,
                                              int64_t start_sample = 0);

/// Linear MMSE: x_hat = (H^H H + noise_variance I)^-1 H^H y.
Eigen::VectorXcd lmmse(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h,
                       double noise_variance);

/// Genie-aided MMSE decision feedback: symbols are detected in the given
/// order and after each step the contribution of the *true* symbol is
/// cancelled, so there is no error propagation. Each step is the MMSE
/// estimate for the remaining (not yet cancelled) system.
Eigen::VectorXcd genie_dfe(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h,
                           double noise_variance, const Eigen::VectorXcd& true_x,
                           DetectionOrder order = DetectionOrder::Natural);

/// Per-bin MMSE scaling for a (near-)diagonal TF channel:
/// x_hat = conj(h) y / (|h|^2 + noise_variance), elementwise.
TimeFrequencyGrid tf_single_tap(const TimeFrequencyGrid& y_tf, const Eigen::MatrixXcd& bin_gains,
                                double noise_variance);

/// Post-equalization SINR per symbol.
///   DdLmmse:     1 / [(I + H^H H / s2)^-1]_ii - 1
///   DdGenieDfe:  the same formula on the reduced system at symbol i's
///                detection step (natural order)
///   TfSingleTap: |h_i|^2 / s2 using the matrix diagonal
Eigen::VectorXd per_symbol_sinr(const Eigen::MatrixXcd& h, double noise_variance,
                                EqualizerKind kind);

namespace detail {

/// Biased MMSE outputs plus the per-symbol statistics the demapper needs:
/// bias alpha_i (x_hat_i ~= alpha_i x_i + noise) and unbiased SINR gamma_i.
/// Dividing by alpha and demapping with variance 1/gamma is the standard
/// recipe for LLRs from MMSE-style equalizers.
struct SymbolEstimates {
    Eigen::VectorXcd raw;
    Eigen::VectorXd bias;
    Eigen::VectorXd sinr;
};

SymbolEstimates lmmse_detailed(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h,
                               double noise_variance);
SymbolEstimates genie_dfe_detailed(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h,
                                   double noise_variance, const Eigen::VectorXcd& true_x,
                                   DetectionOrder order);

/// Per-TF-bin MIMO MMSE with genie successive cancellation across spatial
/// layers (layer order natural). bin_gains[r*T+t] holds the per-bin complex
/// gains of pair (r,t) as an M x N matrix; y holds one received TF grid per
/// rx antenna. Returns stacked per-layer estimates in TF vec order.
SymbolEstimates tf_genie_sic_detailed(const std::vector<TimeFrequencyGrid>& y,
                                      const std::vector<Eigen::MatrixXcd>& bin_gains,
                                      int tx_streams, int rx_streams, double noise_variance,
                                      const Eigen::VectorXcd& true_x);

/// Cached natural-order genie-DFE factorization for one H: the Gram matrix
/// is computed once, each noise level costs one Cholesky, each frame one
/// forward substitution. Detecting symbols front to back over the natural
/// order is equivalent to factoring H with its columns reversed, which is
/// how the cache is laid out internally.
class DdDfeEngine {
public:
    explicit DdDfeEngine(Eigen::MatrixXcd h);
    void set_noise(double noise_variance);
    const Eigen::VectorXd& sinr() const { return sinr_; }
    const Eigen::VectorXd& bias() const { return bias_; }
    SymbolEstimates equalize(const Eigen::VectorXcd& y, const Eigen::VectorXcd& true_x) const;

private:
    Eigen::MatrixXcd h_;
    Eigen::MatrixXcd gram_;  // H^H H, full
    Eigen::LLT<Eigen::MatrixXcd> chol_;  // of reversed(gram) + s2 I
    Eigen::VectorXd diag_;               // Cholesky diagonal
    Eigen::VectorXd sinr_, bias_;        // natural order
    double noise_variance_ = 0.0;
};

/// Cached LMMSE factorization, same reuse pattern as DdDfeEngine.
class DdLmmseEngine {
public:
    explicit DdLmmseEngine(Eigen::MatrixXcd h);
    void set_noise(double noise_variance);
    const Eigen::VectorXd& sinr() const { return sinr_; }
    const Eigen::VectorXd& bias() const { return bias_; }
    SymbolEstimates equalize(const Eigen::VectorXcd& y) const;

private:
    Eigen::MatrixXcd h_;
    Eigen::MatrixXcd gram_;
    Eigen::LLT<Eigen::MatrixXcd> chol_;
    Eigen::VectorXd sinr_, bias_;
    double noise_variance_ = 0.0;
};

}  // namespace detail

}  // namespace otfs
