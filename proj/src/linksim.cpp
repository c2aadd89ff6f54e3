#include "otfslink/linksim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <thread>

#include "otfslink/multicarrier.hpp"
#include "otfslink/rng.hpp"
#include "otfslink/transforms.hpp"

namespace otfs {

namespace {

// Seed-stream tags; every random draw in a run is keyed off
// (master_seed, tag, trial, aux) so trials are order-independent and the
// same trial index sees the same channel and noise under either scheme.
constexpr uint64_t kTagChannel = 1;
constexpr uint64_t kTagNoise = 2;
constexpr uint64_t kTagPayload = 3;
constexpr uint64_t kTagFiller = 4;

struct Layout {
    int n_cb = 0;
    int syms_per_cb = 0;  // includes pad symbols
    int pad_bits = 0;     // zero pad appended to the coded bits per codeblock
    std::vector<int> cb_positions;  // n_cb * syms_per_cb, grouped per codeblock
    std::vector<int> filler_positions;
};

Layout make_layout(const FrameParams& frame, int cb_bits, Modulation mod, CodeId code,
                   bool slab) {
    const int s = frame.grid_size();
    const int bps = bits_per_symbol(mod);
    const int coded = coded_bits(code, cb_bits);
    Layout layout;
    layout.syms_per_cb = (coded + bps - 1) / bps;
    layout.pad_bits = layout.syms_per_cb * bps - coded;
    if (layout.syms_per_cb > s)
        throw std::invalid_argument("codeblock_bits exceeds the frame capacity per layer");

    if (!slab) {
        layout.n_cb = s / layout.syms_per_cb;
        layout.cb_positions.resize(static_cast<size_t>(layout.n_cb) * layout.syms_per_cb);
        std::iota(layout.cb_positions.begin(), layout.cb_positions.end(), 0);
    } else {
        // One contiguous band of delay bins (OTFS) / subcarriers (OFDM) per
        // codeblock, spanning every symbol of the frame: small codeblocks
        // then occupy a narrow slice of the carrier grid.
        const int rows_per_cb = (layout.syms_per_cb + frame.N - 1) / frame.N;
        layout.n_cb = std::min(frame.M / rows_per_cb, s / layout.syms_per_cb);
        if (layout.n_cb < 1)
            throw std::invalid_argument("codeblock_bits exceeds the frame capacity per layer");
        layout.cb_positions.reserve(static_cast<size_t>(layout.n_cb) * layout.syms_per_cb);
        for (int c = 0; c < layout.n_cb; ++c) {
            int taken = 0;
            for (int n = 0; n < frame.N && taken < layout.syms_per_cb; ++n) {
                for (int r = 0; r < rows_per_cb && taken < layout.syms_per_cb; ++r) {
                    layout.cb_positions.push_back(c * rows_per_cb + r + frame.M * n);
                    ++taken;
                }
            }
        }
    }

    std::vector<char> used(s, 0);
    for (int pos : layout.cb_positions) used[pos] = 1;
    for (int pos = 0; pos < s; ++pos)
        if (!used[pos]) layout.filler_positions.push_back(pos);
    return layout;
}

struct PayloadPlan {
    McsSpec mcs;
    int cb_bits = 0;
    Layout layout;
    std::string label;
};

struct CellCounts {
    long long bit_errors = 0;
    long long total_bits = 0;
    long block_errors = 0;
    long total_blocks = 0;
};

struct TrialOutput {
    std::vector<CellCounts> cells;  // snr-major: snr_idx * n_plans + plan_idx
};

// Everything one stream transmits for one payload plan in one trial.
struct StreamPayload {
    std::vector<uint8_t> info_bits;    // n_cb * cb_bits
    std::vector<cxd> symbols;          // full grid, vec order
};

StreamPayload build_stream_payload(const PayloadPlan& plan, const FrameParams& frame,
                                   uint64_t payload_seed, uint64_t filler_seed) {
    const Layout& lay = plan.layout;
    StreamPayload out;
    out.symbols.assign(frame.grid_size(), cxd(0.0, 0.0));
    out.info_bits.resize(static_cast<size_t>(lay.n_cb) * plan.cb_bits);

    Rng payload_rng(payload_seed);
    for (auto& b : out.info_bits) b = payload_rng.bit() ? 1 : 0;

    const int bps = bits_per_symbol(plan.mcs.modulation);
    for (int c = 0; c < lay.n_cb; ++c) {
        std::vector<uint8_t> bits(out.info_bits.begin() + static_cast<long>(c) * plan.cb_bits,
                                  out.info_bits.begin() + static_cast<long>(c + 1) * plan.cb_bits);
        std::vector<uint8_t> coded = fec_encode(bits, plan.mcs.code);
        coded.resize(coded.size() + lay.pad_bits, 0);
        std::vector<cxd> syms = qam_map(coded, plan.mcs.modulation);
        for (int i = 0; i < lay.syms_per_cb; ++i)
            out.symbols[lay.cb_positions[static_cast<size_t>(c) * lay.syms_per_cb + i]] = syms[i];
    }

    if (!lay.filler_positions.empty()) {
        Rng filler_rng(filler_seed);
        std::vector<uint8_t> fill_bits(lay.filler_positions.size() * bps);
        for (auto& b : fill_bits) b = filler_rng.bit() ? 1 : 0;
        std::vector<cxd> fill = qam_map(fill_bits, plan.mcs.modulation);
        for (size_t i = 0; i < lay.filler_positions.size(); ++i)
            out.symbols[lay.filler_positions[i]] = fill[i];
    }
    return out;
}

// Decode every codeblock of one stream from the equalizer outputs and count
// errors into `cell`.
void count_stream_errors(const PayloadPlan& plan, const StreamPayload& payload,
                         const Eigen::VectorXcd& raw, const Eigen::VectorXd& bias,
                         const Eigen::VectorXd& sinr, long offset, CellCounts& cell) {
    const Layout& lay = plan.layout;
    const int bps = bits_per_symbol(plan.mcs.modulation);
    std::vector<cxd> est(lay.syms_per_cb);
    std::vector<double> nv(lay.syms_per_cb);
    for (int c = 0; c < lay.n_cb; ++c) {
        for (int i = 0; i < lay.syms_per_cb; ++i) {
            const long pos = offset + lay.cb_positions[static_cast<size_t>(c) * lay.syms_per_cb + i];
            const double alpha = std::max(bias(pos), 1e-12);
            est[i] = raw(pos) / alpha;
            nv[i] = 1.0 / std::max(sinr(pos), 1e-12);
        }
        std::vector<double> llrs = qam_demap_llr(est, plan.mcs.modulation, nv);
        llrs.resize(llrs.size() - lay.pad_bits);
        std::vector<uint8_t> decoded = fec_decode(llrs, plan.mcs.code, plan.cb_bits);

        long long errs = 0;
        const uint8_t* truth = payload.info_bits.data() + static_cast<long>(c) * plan.cb_bits;
        for (int i = 0; i < plan.cb_bits; ++i) errs += decoded[i] != truth[i];
        cell.bit_errors += errs;
        cell.total_bits += plan.cb_bits;
        cell.block_errors += errs > 0;
        cell.total_blocks += 1;
    }
}

struct RunSetup {
    const LinkConfig& cfg;
    std::vector<PayloadPlan> plans;
    ChannelProfile profile;
    EqualizerKind equalizer;
};

TrialOutput run_trial(const RunSetup& setup, int trial) {
    const LinkConfig& cfg = setup.cfg;
    const FrameParams& frame = cfg.frame;
    const int t_streams = cfg.tx_streams, r_streams = cfg.rx_streams;
    const int s = frame.grid_size();
    const int n_plans = static_cast<int>(setup.plans.size());
    const int n_snr = static_cast<int>(cfg.snr_sweep_db.size());
    const double rx_signal_power = static_cast<double>(t_streams);

    TrialOutput out;
    out.cells.assign(static_cast<size_t>(n_snr) * n_plans, CellCounts{});

    std::vector<ChannelRealization> pairs;
    pairs.reserve(static_cast<size_t>(t_streams) * r_streams);
    for (int pair = 0; pair < t_streams * r_streams; ++pair)
        pairs.push_back(realize_profile(
            setup.profile, derive_seed(cfg.master_seed, kTagChannel, trial, pair)));

    // Genie channel knowledge, per scheme.
    std::optional<detail::DdDfeEngine> dfe;
    std::optional<detail::DdLmmseEngine> lmmse_eng;
    std::vector<Eigen::MatrixXcd> bin_gains;
    if (cfg.scheme == Scheme::Otfs) {
        EffectiveChannelMatrix eff =
            build_effective_matrix(pairs, t_streams, r_streams, frame, Scheme::Otfs);
        if (setup.equalizer == EqualizerKind::DdGenieDfe) {
            dfe.emplace(std::move(eff.entries));
        } else {
            lmmse_eng.emplace(std::move(eff.entries));
        }
    } else {
        for (int pair = 0; pair < t_streams * r_streams; ++pair) {
            Eigen::VectorXcd diag = tf_effective_matrix(pairs[pair], frame).diagonal();
            bin_gains.push_back(Eigen::Map<const Eigen::MatrixXcd>(diag.data(), frame.M, frame.N));
        }
    }

    // Transmit once per plan; the channel is fixed within the trial.
    std::vector<std::vector<StreamPayload>> payloads(n_plans);
    std::vector<Eigen::VectorXcd> true_x(n_plans);
    std::vector<std::vector<SampleStream>> rx_clean(n_plans);
    for (int pl = 0; pl < n_plans; ++pl) {
        payloads[pl].resize(t_streams);
        true_x[pl].resize(static_cast<long>(t_streams) * s);
        std::vector<SampleStream> tx(t_streams);
        for (int t = 0; t < t_streams; ++t) {
            payloads[pl][t] = build_stream_payload(
                setup.plans[pl], frame,
                derive_seed(cfg.master_seed, kTagPayload, trial, pl * 64 + t),
                derive_seed(cfg.master_seed, kTagFiller, trial, pl * 64 + t));
            for (int i = 0; i < s; ++i)
                true_x[pl](static_cast<long>(t) * s + i) = payloads[pl][t].symbols[i];
            Eigen::MatrixXcd grid = Eigen::Map<const Eigen::MatrixXcd>(
                payloads[pl][t].symbols.data(), frame.M, frame.N);
            if (cfg.scheme == Scheme::Otfs) {
                tx[t] = modulate(isfft(DelayDopplerGrid(std::move(grid)), frame), frame);
            } else {
                tx[t] = modulate(TimeFrequencyGrid(std::move(grid)), frame);
            }
        }
        rx_clean[pl].resize(r_streams);
        for (int r = 0; r < r_streams; ++r) {
            SampleStream acc = apply(tx[0], pairs[static_cast<size_t>(r) * t_streams]);
            for (int t = 1; t < t_streams; ++t) {
                SampleStream part = apply(tx[t], pairs[static_cast<size_t>(r) * t_streams + t]);
                for (size_t i = 0; i < acc.samples.size(); ++i) acc.samples[i] += part.samples[i];
            }
            rx_clean[pl][r] = std::move(acc);
        }
    }

    for (int si = 0; si < n_snr; ++si) {
        const double snr_db = cfg.snr_sweep_db[si];
        const double noise_var = rx_signal_power / std::pow(10.0, snr_db / 10.0);
        if (dfe) dfe->set_noise(noise_var);
        if (lmmse_eng) lmmse_eng->set_noise(noise_var);

        for (int pl = 0; pl < n_plans; ++pl) {
            detail::SymbolEstimates est;
            if (cfg.scheme == Scheme::Otfs) {
                Eigen::VectorXcd y(static_cast<long>(r_streams) * s);
                for (int r = 0; r < r_streams; ++r) {
                    SampleStream noisy = add_awgn(
                        rx_clean[pl][r], snr_db, rx_signal_power,
                        derive_seed(cfg.master_seed, kTagNoise, trial,
                                    (static_cast<uint64_t>(si) * n_plans + pl) * 64 + r));
                    DelayDopplerGrid dd = sfft(demodulate(noisy, frame), frame);
                    y.segment(static_cast<long>(r) * s, s) = dd.data.reshaped();
                }
                est = dfe ? dfe->equalize(y, true_x[pl]) : lmmse_eng->equalize(y);
            } else {
                std::vector<TimeFrequencyGrid> y(r_streams);
                for (int r = 0; r < r_streams; ++r) {
                    SampleStream noisy = add_awgn(
                        rx_clean[pl][r], snr_db, rx_signal_power,
                        derive_seed(cfg.master_seed, kTagNoise, trial,
                                    (static_cast<uint64_t>(si) * n_plans + pl) * 64 + r));
                    y[r] = demodulate(noisy, frame);
                }
                est = detail::tf_genie_sic_detailed(y, bin_gains, t_streams, r_streams, noise_var,
                                                    true_x[pl]);
            }

            CellCounts& cell = out.cells[static_cast<size_t>(si) * n_plans + pl];
            for (int t = 0; t < t_streams; ++t)
                count_stream_errors(setup.plans[pl], payloads[pl][t], est.raw, est.bias, est.sinr,
                                    static_cast<long>(t) * s, cell);
        }
    }
    return out;
}

SimResult run_core(const LinkConfig& cfg, std::vector<PayloadPlan> plans) {
    cfg.validate();
    RunSetup setup{cfg, std::move(plans), cfg.channel.resolve(), cfg.resolved_equalizer()};
    setup.profile.validate();

    const double cp_duration = cfg.frame.cp_len / cfg.frame.sample_rate_hz();
    if (!setup.profile.tap_delays_s.empty() &&
        setup.profile.tap_delays_s.back() > cp_duration) {
        std::fprintf(stderr,
                     "warning: max channel delay %.3g s exceeds the cyclic prefix %.3g s\n",
                     setup.profile.tap_delays_s.back(), cp_duration);
    }

    const int n_plans = static_cast<int>(setup.plans.size());
    const int n_snr = static_cast<int>(cfg.snr_sweep_db.size());

    std::vector<TrialOutput> outputs(cfg.trials);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int trial = next.fetch_add(1);
            if (trial >= cfg.trials) return;
            outputs[trial] = run_trial(setup, trial);
        }
    };
    const int n_workers = std::max(1, std::min(cfg.workers, cfg.trials));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }

    // Fixed-order reduction keeps the result independent of worker count.
    SimResult result;
    for (int si = 0; si < n_snr; ++si) {
        for (int pl = 0; pl < n_plans; ++pl) {
            CellCounts total;
            for (int trial = 0; trial < cfg.trials; ++trial) {
                const CellCounts& c = outputs[trial].cells[static_cast<size_t>(si) * n_plans + pl];
                total.bit_errors += c.bit_errors;
                total.total_bits += c.total_bits;
                total.block_errors += c.block_errors;
                total.total_blocks += c.total_blocks;
            }
            SimRow row;
            row.scheme = scheme_name(cfg.scheme);
            row.snr_db = cfg.snr_sweep_db[si];
            row.mcs = setup.plans[pl].label;
            row.trials = cfg.trials;
            row.bit_errors = total.bit_errors;
            row.total_bits = total.total_bits;
            row.block_errors = total.block_errors;
            row.total_blocks = total.total_blocks;
            row.ber = total.total_bits > 0
                          ? static_cast<double>(total.bit_errors) / total.total_bits
                          : 0.0;
            row.bler = total.total_blocks > 0
                           ? static_cast<double>(total.block_errors) / total.total_blocks
                           : 0.0;
            const auto& lay = setup.plans[pl].layout;
            row.throughput = (1.0 - row.bler) * static_cast<double>(lay.n_cb) *
                             setup.plans[pl].cb_bits / cfg.frame.grid_size();
            row.seed = cfg.master_seed;
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

}  // namespace

McsSpec mcs_by_label(const std::string& label) {
    const auto dash = label.rfind('-');
    if (dash == std::string::npos)
        throw std::invalid_argument("mcs label '" + label + "' must look like '16qam-r12'");
    McsSpec spec;
    spec.modulation = modulation_by_name(label.substr(0, dash));
    const std::string code = label.substr(dash + 1);
    if (code == "r12") {
        spec.code = CodeId::ConvR12;
    } else if (code == "r13") {
        spec.code = CodeId::ConvR13;
    } else if (code == "none") {
        spec.code = CodeId::None;
    } else {
        throw std::invalid_argument("mcs label '" + label + "': unknown code suffix");
    }
    spec.label = modulation_name(spec.modulation) + "-" + code;
    return spec;
}

ChannelProfile ChannelConfig::resolve() const {
    if (profile == "custom") {
        ChannelProfile p;
        p.tap_delays_s = custom_delays_s;
        p.tap_powers_db = custom_powers_db;
        p.doppler_max_hz = doppler_max_hz;
        p.doppler_model = doppler_model;
        p.name = "custom";
        p.validate();
        return p;
    }
    return profile_by_name(profile, doppler_max_hz, doppler_model);
}

EqualizerKind LinkConfig::resolved_equalizer() const {
    if (equalizer) return *equalizer;
    return scheme == Scheme::Otfs ? EqualizerKind::DdGenieDfe : EqualizerKind::TfGenieSic;
}

void LinkConfig::validate() const {
    frame.validate();
    if (trials < 1) throw std::invalid_argument("LinkConfig: trials must be >= 1");
    if (snr_sweep_db.empty()) throw std::invalid_argument("LinkConfig: snr_sweep_db is empty");
    if (mcs_set.empty()) throw std::invalid_argument("LinkConfig: mcs list is empty");
    if (codeblock_bits < 1) throw std::invalid_argument("LinkConfig: codeblock_bits must be >= 1");
    if (tx_streams < 1 || rx_streams < 1)
        throw std::invalid_argument("LinkConfig: mimo stream counts must be >= 1");
    if (workers < 1) throw std::invalid_argument("LinkConfig: workers must be >= 1");
    channel.resolve();

    const EqualizerKind kind = resolved_equalizer();
    const bool dd_kind = kind == EqualizerKind::DdLmmse || kind == EqualizerKind::DdGenieDfe;
    if (scheme == Scheme::Otfs && !dd_kind)
        throw std::invalid_argument("LinkConfig: OTFS requires a dd-* equalizer");
    if (scheme == Scheme::Ofdm && dd_kind)
        throw std::invalid_argument("LinkConfig: OFDM requires a tf-* equalizer");
    if (kind == EqualizerKind::TfSingleTap && tx_streams > 1)
        throw std::invalid_argument("LinkConfig: tf-single-tap is single-stream only");

    if (frame.grid_size() > 4096)
        throw std::invalid_argument(
            "LinkConfig: dense effective-channel construction is capped at M*N <= 4096");
    if (scheme == Scheme::Otfs &&
        static_cast<long>(tx_streams) * frame.grid_size() > 4096)
        throw std::invalid_argument(
            "LinkConfig: dense DD equalization is capped at tx_streams*M*N <= 4096");

    for (const McsSpec& mcs : mcs_set) {
        const int coded = coded_bits(mcs.code, codeblock_bits);
        const int capacity = frame.grid_size() * bits_per_symbol(mcs.modulation);
        if (coded > capacity)
            throw std::invalid_argument("LinkConfig: codeblock_bits exceeds frame capacity for mcs " +
                                        mcs.label);
    }
}

double SimResult::throughput_envelope(double snr_db) const {
    double best = 0.0;
    for (const SimRow& row : rows)
        if (row.snr_db == snr_db) best = std::max(best, row.throughput);
    return best;
}

ConfidenceInterval wilson_ci95(long long successes, long long n) {
    if (n <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SimResult run_link(const LinkConfig& cfg) {
    cfg.validate();
    std::vector<PayloadPlan> plans;
    for (const McsSpec& mcs : cfg.mcs_set) {
        PayloadPlan plan;
        plan.mcs = mcs;
        plan.cb_bits = cfg.codeblock_bits;
        plan.layout = make_layout(cfg.frame, cfg.codeblock_bits, mcs.modulation, mcs.code,
                                  /*slab=*/false);
        plan.label = mcs.label;
        plans.push_back(std::move(plan));
    }
    return run_core(cfg, std::move(plans));
}

SimResult run_codeblock_study(const LinkConfig& cfg, const std::vector<int>& codeblock_sizes) {
    cfg.validate();
    if (codeblock_sizes.empty())
        throw std::invalid_argument("run_codeblock_study: no codeblock sizes given");
    std::vector<PayloadPlan> plans;
    for (const McsSpec& mcs : cfg.mcs_set) {
        for (int size : codeblock_sizes) {
            if (size < 1) throw std::invalid_argument("run_codeblock_study: size must be >= 1");
            PayloadPlan plan;
            plan.mcs = mcs;
            plan.cb_bits = size;
            plan.layout = make_layout(cfg.frame, size, mcs.modulation, mcs.code, /*slab=*/true);
            plan.label = mcs.label + "-cb" + std::to_string(size);
            plans.push_back(std::move(plan));
        }
    }
    return run_core(cfg, std::move(plans));
}

void write_csv(const SimResult& result, std::ostream& out) {
    out << "scheme,snr_db,mcs,trials,bit_errors,ber,block_errors,bler,throughput,seed\n";
    char buf[256];
    for (const SimRow& row : result.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.6g,%s,%ld,%lld,%.6g,%ld,%.6g,%.6g,%llu\n",
                      row.scheme.c_str(), row.snr_db, row.mcs.c_str(), row.trials,
                      row.bit_errors, row.ber, row.block_errors, row.bler, row.throughput,
                      static_cast<unsigned long long>(row.seed));
        out << buf;
    }
}

}  // namespace otfs
