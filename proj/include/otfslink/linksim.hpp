#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "otfslink/channel.hpp"
#include "otfslink/equalization.hpp"
#include "otfslink/fec.hpp"
#include "otfslink/frame.hpp"
#include "otfslink/qam.hpp"

namespace otfs {

/// One modulation-and-coding point of the adaptation envelope.
struct McsSpec {
    Modulation modulation = Modulation::Qpsk;
    CodeId code = CodeId::ConvR12;
    std::string label;  // e.g. "16qam-r12"
};

McsSpec mcs_by_label(const std::string& label);

struct ChannelConfig {
    std::string profile = "ETU";  // ETU | EVA | single-tap | two-tap | custom
    std::vector<double> custom_delays_s;    // used when profile == "custom"
    std::vector<double> custom_powers_db;
    double doppler_max_hz = 0.0;
    DopplerModel doppler_model = DopplerModel::JakesAngle;

    ChannelProfile resolve() const;
};

/// Full scenario description for one Monte Carlo run.
struct LinkConfig {
    Scheme scheme = Scheme::Otfs;
    FrameParams frame;
    ChannelConfig channel;
    std::vector<McsSpec> mcs_set;  // at least one entry
    int codeblock_bits = 1000;
    std::vector<double> snr_sweep_db = {10.0};
    int tx_streams = 1;
    int rx_streams = 1;
    std::optional<EqualizerKind> equalizer;  // empty = per-scheme default
    int trials = 100;
    uint64_t master_seed = 1;
    int workers = 1;

    EqualizerKind resolved_equalizer() const;
    /// Symbols one stream carries per frame.
    int symbols_per_stream() const { return frame.grid_size(); }
    void validate() const;
};

/// One aggregated result row per (scheme, snr, mcs).
struct SimRow {
    std::string scheme;
    double snr_db = 0.0;
    std::string mcs;
    long trials = 0;
    long long bit_errors = 0;
    long long total_bits = 0;
    long block_errors = 0;
    long total_blocks = 0;
    double ber = 0.0;
    double bler = 0.0;
    double throughput = 0.0;  // information bits per channel use per stream
    uint64_t seed = 0;
};

struct SimResult {
    std::vector<SimRow> rows;

    /// max over the mcs set of (1-bler)*rate*bits_per_symbol at one SNR.
    double throughput_envelope(double snr_db) const;
};

/// Wilson 95% confidence interval for a binomial proportion.
struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 1.0;
};
ConfidenceInterval wilson_ci95(long long successes, long long n);

/// Monte Carlo link-level run: per trial draw a channel, push coded frames
/// through the full transmit/channel/receive chain, equalize with genie
/// channel knowledge, and aggregate BER/BLER/throughput per (snr, mcs).
/// Fully deterministic for a fixed config (including workers > 1).
SimResult run_link(const LinkConfig& cfg);

/// Codeblock-size study: the frame payload is segmented into codeblocks of
/// each given size; OFDM maps each codeblock onto a contiguous band of
/// subcarriers (all symbols), OTFS onto a contiguous band of delay bins (all
/// Doppler bins). Rows carry the mcs label with a "-cb<bits>" suffix.
SimResult run_codeblock_study(const LinkConfig& cfg, const std::vector<int>& codeblock_sizes);

/// CSV with the exact header
/// scheme,snr_db,mcs,trials,bit_errors,ber,block_errors,bler,throughput,seed
/// and floats printed to 6 significant digits.
void write_csv(const SimResult& result, std::ostream& out);

}  // namespace otfs
