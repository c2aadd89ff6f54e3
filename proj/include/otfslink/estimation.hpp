#pragma once

#include <utility>
#include <vector>

#include "otfslink/frame.hpp"

namespace otfs {

/// Impulse-pilot layout in the Delay-Doppler plane. Each port owns one
/// impulse at (doppler k, delay l) plus the guard box
/// [l, l+guard_delay] x [k-guard_doppler, k+guard_doppler] that absorbs the
/// channel's spreading. Boxes of distinct ports must be disjoint and must
/// not wrap around the grid edges.
struct PilotPlan {
    struct Position {
        int doppler_k = 0;
        int delay_l = 0;
    };
    struct Region {
        int doppler0 = 0;
        int delay0 = 0;
        int doppler_extent = 0;  // rows of the reserved rectangle
        int delay_extent = 0;    // cols of the reserved rectangle
    };

    std::vector<Position> pilot_positions;  // one per antenna port
    int guard_delay_bins = 0;               // L_tau, spreading goes to larger l only
    int guard_doppler_bins = 0;             // L_nu, symmetric +-
    double pilot_amplitude = 1.0;
    Region region;

    /// Throws invalid_argument on any violated layout rule.
    void validate(const FrameParams& p) const;

    bool in_region(int k, int l) const {
        return k >= region.doppler0 && k < region.doppler0 + region.doppler_extent &&
               l >= region.delay0 && l < region.delay0 + region.delay_extent;
    }
};

/// Taps read out of one port's guard box, bins relative to the pilot.
struct DDChannelEstimate {
    struct Tap {
        int doppler_shift_bins = 0;  // in [-L_nu, L_nu]
        int delay_shift_bins = 0;    // in [0, L_tau]
        cxd gain;
    };
    std::vector<Tap> taps;
    double threshold = 0.0;
};

/// Write the plan's pilot impulses into a data grid. The data grid must be
/// zero everywhere inside the reserved region.
DelayDopplerGrid place_pilots(const DelayDopplerGrid& data, const PilotPlan& plan,
                              const FrameParams& p);

/// Read one port's guard box out of a received DD grid:
/// gain(dk,dl) = received[pilot + (dk,dl)] / pilot_amplitude, dropping bins
/// with |gain| < threshold.
DDChannelEstimate estimate_channel(const DelayDopplerGrid& received, const PilotPlan& plan,
                                   int port, const FrameParams& p, double threshold = 0.0);

/// Result of the port packing planner.
struct PortPackingReport {
    PilotPlan plan;
    int port_count = 0;
    int guard_delay_bins = 0;
    int guard_doppler_bins = 0;
    double overhead_total = 0.0;
    double overhead_per_port = 0.0;
};

/// Pack as many antenna ports as possible into a reserved region of
/// region_fraction * M * N bins. Guard sizes follow the channel spreads:
/// L_tau = ceil(delay_spread * M * delta_f), L_nu = ceil(doppler_spread * N *
/// T_sym_total). Ports sit on a regular lattice with pitch
/// (L_tau+1, 2*L_nu+1); the region shape (rows x cols) is chosen by brute
/// force to maximize the port count. Throws "region too small" when not even
/// one guard box fits.
PortPackingReport plan_ports(const FrameParams& p, double delay_spread_s,
                             double doppler_spread_hz, double region_fraction,
                             double pilot_amplitude = 1.0);

/// "0.08%" style rendering used by the pilot overhead report.
std::string format_overhead_percent(double overhead);

}  // namespace otfs
