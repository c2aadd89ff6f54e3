#include "otfslink/estimation.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace otfs {

void PilotPlan::validate(const FrameParams& p) const {
    p.validate();
    if (pilot_positions.empty()) throw std::invalid_argument("PilotPlan: no pilot positions");
    if (guard_delay_bins < 0 || guard_doppler_bins < 0)
        throw std::invalid_argument("PilotPlan: negative guard extent");
    if (pilot_amplitude <= 0) throw std::invalid_argument("PilotPlan: pilot amplitude must be > 0");
    if (region.doppler0 < 0 || region.delay0 < 0 || region.doppler_extent < 1 ||
        region.delay_extent < 1 || region.doppler0 + region.doppler_extent > p.N ||
        region.delay0 + region.delay_extent > p.M)
        throw std::invalid_argument("PilotPlan: region does not fit inside the grid");

    for (size_t i = 0; i < pilot_positions.size(); ++i) {
        const auto& pos = pilot_positions[i];
        if (!in_region(pos.doppler_k, pos.delay_l))
            throw std::invalid_argument("PilotPlan: pilot position outside the reserved region");
        // Edge wrap counts as a collision: the channel spreads circularly, so
        // a box crossing the grid edge would alias into other ports' space.
        if (pos.delay_l + guard_delay_bins >= region.delay0 + region.delay_extent ||
            pos.doppler_k - guard_doppler_bins < region.doppler0 ||
            pos.doppler_k + guard_doppler_bins >= region.doppler0 + region.doppler_extent)
            throw std::invalid_argument("PilotPlan: guard box leaves the reserved region");
    }
    // Pairwise disjoint guard boxes.
    for (size_t i = 0; i < pilot_positions.size(); ++i) {
        for (size_t j = i + 1; j < pilot_positions.size(); ++j) {
            const auto& a = pilot_positions[i];
            const auto& b = pilot_positions[j];
            const bool delay_overlap = a.delay_l <= b.delay_l + guard_delay_bins &&
                                       b.delay_l <= a.delay_l + guard_delay_bins;
            const bool doppler_overlap =
                std::abs(a.doppler_k - b.doppler_k) <= 2 * guard_doppler_bins;
            if (delay_overlap && doppler_overlap)
                throw std::invalid_argument("PilotPlan: guard boxes of distinct ports overlap");
        }
    }
}

DelayDopplerGrid place_pilots(const DelayDopplerGrid& data, const PilotPlan& plan,
                              const FrameParams& p) {
    plan.validate(p);
    if (!data.matches(p)) throw std::invalid_argument("place_pilots: grid dimensions mismatch");
    for (int k = plan.region.doppler0; k < plan.region.doppler0 + plan.region.doppler_extent; ++k)
        for (int l = plan.region.delay0; l < plan.region.delay0 + plan.region.delay_extent; ++l)
            if (data(l, k) != cxd(0.0, 0.0))
                throw std::invalid_argument("place_pilots: data grid nonzero inside pilot region");

    DelayDopplerGrid out = data;
    for (const auto& pos : plan.pilot_positions) out(pos.delay_l, pos.doppler_k) = plan.pilot_amplitude;
    return out;
}

DDChannelEstimate estimate_channel(const DelayDopplerGrid& received, const PilotPlan& plan,
                                   int port, const FrameParams& p, double threshold) {
    plan.validate(p);
    if (!received.matches(p)) throw std::invalid_argument("estimate_channel: grid dimensions mismatch");
    if (port < 0 || port >= static_cast<int>(plan.pilot_positions.size()))
        throw std::invalid_argument("estimate_channel: port index out of range");

    const auto& pos = plan.pilot_positions[port];
    DDChannelEstimate est;
    est.threshold = threshold;
    for (int dk = -plan.guard_doppler_bins; dk <= plan.guard_doppler_bins; ++dk) {
        for (int dl = 0; dl <= plan.guard_delay_bins; ++dl) {
            const int k = ((pos.doppler_k + dk) % p.N + p.N) % p.N;
            const int l = (pos.delay_l + dl) % p.M;
            const cxd gain = received(l, k) / plan.pilot_amplitude;
            if (std::abs(gain) >= threshold && gain != cxd(0.0, 0.0))
                est.taps.push_back({dk, dl, gain});
        }
    }
    return est;
}

PortPackingReport plan_ports(const FrameParams& p, double delay_spread_s,
                             double doppler_spread_hz, double region_fraction,
                             double pilot_amplitude) {
    p.validate();
    if (delay_spread_s < 0 || doppler_spread_hz < 0)
        throw std::invalid_argument("plan_ports: spreads must be >= 0");
    if (region_fraction <= 0 || region_fraction > 1)
        throw std::invalid_argument("plan_ports: region_fraction must be in (0, 1]");

    const int guard_delay = static_cast<int>(std::ceil(delay_spread_s * p.sample_rate_hz()));
    const int guard_doppler =
        static_cast<int>(std::ceil(doppler_spread_hz * p.N * p.symbol_duration_s()));
    const long budget = std::lround(region_fraction * p.M * p.N);
    const int pitch_delay = guard_delay + 1;
    const int pitch_doppler = 2 * guard_doppler + 1;

    // Brute-force the region shape: every (rows, cols) within the bin budget,
    // keeping the one that packs the most ports (smallest area on ties).
    int best_ports = 0;
    long best_area = 0;
    int best_rows = 0, best_cols = 0;
    for (int rows = 1; rows <= p.N; ++rows) {
        for (int cols = 1; cols <= p.M; ++cols) {
            if (static_cast<long>(rows) * cols > budget) break;
            const int ports = (rows / pitch_doppler) * (cols / pitch_delay);
            const long area = static_cast<long>(rows) * cols;
            if (ports > best_ports || (ports == best_ports && ports > 0 && area < best_area)) {
                best_ports = ports;
                best_area = area;
                best_rows = rows;
                best_cols = cols;
            }
        }
    }
    if (best_ports == 0)
        throw std::invalid_argument("plan_ports: region too small for one guard box");

    PortPackingReport report;
    report.guard_delay_bins = guard_delay;
    report.guard_doppler_bins = guard_doppler;
    report.port_count = best_ports;
    report.overhead_total = region_fraction;
    report.overhead_per_port = region_fraction / best_ports;

    PilotPlan& plan = report.plan;
    plan.guard_delay_bins = guard_delay;
    plan.guard_doppler_bins = guard_doppler;
    plan.pilot_amplitude = pilot_amplitude;
    plan.region = {0, 0, best_rows, best_cols};
    for (int kk = 0; kk + pitch_doppler <= best_rows; kk += pitch_doppler)
        for (int ll = 0; ll + pitch_delay <= best_cols; ll += pitch_delay)
            plan.pilot_positions.push_back({kk + guard_doppler, ll});
    plan.validate(p);
    return report;
}

std::string format_overhead_percent(double overhead) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", overhead * 100.0);
    return buf;
}

}  // namespace otfs
