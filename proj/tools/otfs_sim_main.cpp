#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "otfslink/config.hpp"
#include "otfslink/estimation.hpp"
#include "otfslink/linksim.hpp"
#include "otfslink/multicarrier.hpp"
#include "otfslink/svgplot.hpp"
#include "otfslink/transforms.hpp"

namespace {

using namespace otfs;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string plot_path;
    int workers = 0;          // 0 = from config
    long long master_seed = -1;  // <0 = from config
};

FileConfig load_and_override(const CommonArgs& args) {
    FileConfig cfg = load_config_file(args.config_path);
    if (args.workers > 0) cfg.link.workers = args.workers;
    if (args.master_seed >= 0) cfg.link.master_seed = static_cast<uint64_t>(args.master_seed);
    return cfg;
}

void write_result_csv(const SimResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
    write_csv(result, out);
}

void write_result_plot(const SimResult& result, const std::string& path) {
    // One BLER chart (log y) plus one throughput chart, stacked.
    std::map<std::string, PlotSeries> bler_series;
    std::map<std::string, std::map<double, double>> envelope;  // scheme -> snr -> max tp
    for (const SimRow& row : result.rows) {
        const std::string key = row.scheme + " " + row.mcs;
        bler_series[key].label = key;
        bler_series[key].points.emplace_back(row.snr_db, row.bler);
        auto& env = envelope[row.scheme][row.snr_db];
        env = std::max(env, row.throughput);
    }
    PlotSpec bler{"Block error rate", "SNR (dB)", "BLER", true, {}};
    for (auto& [key, series] : bler_series) bler.series.push_back(std::move(series));
    PlotSpec tp{"Throughput envelope (max over MCS)", "SNR (dB)",
                "info bits per channel use", false, {}};
    for (auto& [scheme, curve] : envelope) {
        PlotSeries s;
        s.label = scheme;
        for (auto [snr, val] : curve) s.points.emplace_back(snr, val);
        tp.series.push_back(std::move(s));
    }
    write_svg_plots(path, {bler, tp});
}

SimResult run_schemes(const FileConfig& cfg,
                      const std::function<SimResult(const LinkConfig&)>& runner) {
    if (!cfg.run_both_schemes) return runner(cfg.link);
    LinkConfig link = cfg.link;
    link.scheme = Scheme::Otfs;
    link.equalizer = cfg.link.equalizer;
    SimResult result = runner(link);
    link.scheme = Scheme::Ofdm;
    SimResult ofdm = runner(link);
    result.rows.insert(result.rows.end(), ofdm.rows.begin(), ofdm.rows.end());
    return result;
}

int cmd_sim(const CommonArgs& args) {
    FileConfig cfg = load_and_override(args);
    SimResult result = run_schemes(cfg, [](const LinkConfig& link) { return run_link(link); });
    write_result_csv(result, args.out_path);
    if (!args.plot_path.empty()) write_result_plot(result, args.plot_path);
    std::printf("wrote %zu rows to %s\n", result.rows.size(), args.out_path.c_str());
    return 0;
}

int cmd_codeblock_study(const CommonArgs& args, const std::vector<int>& sizes) {
    FileConfig cfg = load_and_override(args);
    SimResult result = run_schemes(cfg, [&](const LinkConfig& link) {
        return run_codeblock_study(link, sizes);
    });
    write_result_csv(result, args.out_path);
    if (!args.plot_path.empty()) write_result_plot(result, args.plot_path);
    std::printf("wrote %zu rows to %s\n", result.rows.size(), args.out_path.c_str());
    return 0;
}

const PilotSettings& require_pilots(const FileConfig& cfg) {
    if (!cfg.pilots)
        throw ConfigError("missing section [pilots] (required by this subcommand)");
    return *cfg.pilots;
}

int cmd_plan_pilots(const CommonArgs& args) {
    FileConfig cfg = load_config_file(args.config_path);
    const PilotSettings& ps = require_pilots(cfg);
    const FrameParams& frame = cfg.link.frame;
    PortPackingReport report = plan_ports(frame, ps.delay_spread_s, ps.doppler_spread_hz,
                                          ps.region_fraction, ps.pilot_amplitude);

    std::printf("pilot port packing for M=%d N=%d delta_f=%g Hz cp_len=%d\n", frame.M, frame.N,
                frame.delta_f_hz, frame.cp_len);
    std::printf("  delay spread %g s  -> guard %d delay bins\n", ps.delay_spread_s,
                report.guard_delay_bins);
    std::printf("  doppler spread %g Hz -> guard +-%d doppler bins\n", ps.doppler_spread_hz,
                report.guard_doppler_bins);
    std::printf("  region: %d x %d bins (doppler x delay)\n", report.plan.region.doppler_extent,
                report.plan.region.delay_extent);
    std::printf("  ports: %d, total overhead %s, per-port overhead %s\n", report.port_count,
                format_overhead_percent(report.overhead_total).c_str(),
                format_overhead_percent(report.overhead_per_port).c_str());
    std::printf("port_count,guard_delay_bins,guard_doppler_bins,overhead_total,overhead_per_port\n");
    std::printf("%d,%d,%d,%.6g,%.6g\n", report.port_count, report.guard_delay_bins,
                report.guard_doppler_bins, report.overhead_total, report.overhead_per_port);
    return 0;
}

int cmd_estimate_demo(const CommonArgs& args) {
    FileConfig cfg = load_and_override(args);
    const PilotSettings& ps = require_pilots(cfg);
    const FrameParams& frame = cfg.link.frame;

    PortPackingReport report = plan_ports(frame, ps.delay_spread_s, ps.doppler_spread_hz,
                                          ps.region_fraction, ps.pilot_amplitude);
    ChannelRealization ch = realize_profile(cfg.link.channel.resolve(), cfg.link.master_seed);

    DelayDopplerGrid pilot_frame = place_pilots(DelayDopplerGrid(frame), report.plan, frame);
    SampleStream tx = modulate(isfft(pilot_frame, frame), frame);
    SampleStream rx = apply(tx, ch);
    double threshold = 1e-3;
    if (ps.pilot_snr_db) {
        const double noise_var = std::pow(10.0, -*ps.pilot_snr_db / 10.0);
        rx = add_awgn(rx, *ps.pilot_snr_db, 1.0, cfg.link.master_seed ^ 0x5eedULL);
        threshold = 3.0 * std::sqrt(noise_var) / ps.pilot_amplitude;
    }
    DelayDopplerGrid received = sfft(demodulate(rx, frame), frame);

    std::printf("true channel taps (%s, seed %llu):\n", ch.profile_name.c_str(),
                static_cast<unsigned long long>(ch.seed));
    std::printf("  %-12s %-14s %-10s %s\n", "delay bins", "doppler bins", "|gain|", "phase");
    for (const PathTap& tap : ch.taps) {
        const double delay_bins = tap.delay_s * frame.sample_rate_hz();
        const double doppler_bins = tap.doppler_hz * frame.N * frame.symbol_duration_s();
        std::printf("  %-12.2f %-14.2f %-10.4f %+.3f\n", delay_bins, doppler_bins,
                    std::abs(tap.gain), std::arg(tap.gain));
    }
    for (int port = 0; port < report.port_count; ++port) {
        DDChannelEstimate est = estimate_channel(received, report.plan, port, frame, threshold);
        std::printf("port %d: %zu taps above threshold %.3g\n", port, est.taps.size(), threshold);
        std::printf("  %-12s %-14s %-10s %s\n", "delay bins", "doppler bins", "|gain|", "phase");
        for (const auto& tap : est.taps)
            std::printf("  %-12d %-14d %-10.4f %+.3f\n", tap.delay_shift_bins,
                        tap.doppler_shift_bins, std::abs(tap.gain), std::arg(tap.gain));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OTFS/OFDM link-level simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string sizes_arg;

    auto add_common = [&](CLI::App* cmd, bool needs_out) {
        cmd->add_option("--config", args.config_path, "configuration file")->required();
        if (needs_out) cmd->add_option("--out", args.out_path, "output CSV path")->required();
        cmd->add_option("--plot", args.plot_path, "optional SVG plot path");
        cmd->add_option("--workers", args.workers, "worker thread override");
        cmd->add_option("--master-seed", args.master_seed, "master seed override");
    };

    CLI::App* sim = app.add_subcommand("sim", "run the configured BER/BLER/throughput sweep");
    add_common(sim, true);
    CLI::App* study = app.add_subcommand("codeblock-study",
                                         "BLER as a function of FEC codeblock size");
    add_common(study, true);
    study->add_option("--sizes", sizes_arg, "comma-separated codeblock sizes in bits")->required();
    CLI::App* plan = app.add_subcommand("plan-pilots", "pilot port packing and overhead report");
    plan->add_option("--config", args.config_path, "configuration file")->required();
    CLI::App* demo = app.add_subcommand("estimate-demo",
                                        "one pilot frame through the channel, estimated vs true taps");
    demo->add_option("--config", args.config_path, "configuration file")->required();
    demo->add_option("--master-seed", args.master_seed, "master seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) return cmd_sim(args);
        if (study->parsed()) {
            std::vector<int> sizes;
            std::stringstream ss(sizes_arg);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    sizes.push_back(std::stoi(item));
                } catch (const std::exception&) {
                    std::fprintf(stderr, "error: --sizes entry '%s' is not an integer\n",
                                 item.c_str());
                    return 2;
                }
            }
            return cmd_codeblock_study(args, sizes);
        }
        if (plan->parsed()) return cmd_plan_pilots(args);
        if (demo->parsed()) return cmd_estimate_demo(args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
