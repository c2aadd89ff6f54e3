#include "otfslink/qam.hpp"

#include <cmath>
#include <stdexcept>

namespace otfs {

namespace {

struct AxisSpec {
    int bits;      // bits per axis
    double scale;  // 1/sqrt(constellation power)
};

AxisSpec axis_spec(Modulation mod) {
    switch (mod) {
        case Modulation::Qpsk: return {1, 1.0 / std::sqrt(2.0)};
        case Modulation::Qam16: return {2, 1.0 / std::sqrt(10.0)};
        case Modulation::Qam64: return {3, 1.0 / std::sqrt(42.0)};
    }
    throw std::invalid_argument("unknown modulation");
}

int gray_to_binary(int g) {
    int t = g;
    for (int shift = 1; shift < 8; shift <<= 1) t ^= t >> shift;
    return t;
}

// Axis labels are reflected Gray over the level ladder, with the all-zero
// label on the most positive level (so QPSK bits 00 sit at (1+j)/sqrt(2)).
double axis_level(int label, int bits) {
    int levels = 1 << bits;
    return static_cast<double>(levels - 1 - 2 * gray_to_binary(label));
}

int axis_label_from_level_index(int t, int /*bits*/) { return t ^ (t >> 1); }

}  // namespace

int bits_per_symbol(Modulation mod) { return 2 * axis_spec(mod).bits; }

std::string modulation_name(Modulation mod) {
    switch (mod) {
        case Modulation::Qpsk: return "qpsk";
        case Modulation::Qam16: return "16qam";
        case Modulation::Qam64: return "64qam";
    }
    return "?";
}

Modulation modulation_by_name(const std::string& name) {
    if (name == "qpsk" || name == "QPSK") return Modulation::Qpsk;
    if (name == "16qam" || name == "16QAM") return Modulation::Qam16;
    if (name == "64qam" || name == "64QAM") return Modulation::Qam64;
    throw std::invalid_argument("unknown modulation '" + name + "'");
}

std::vector<cxd> qam_map(const std::vector<uint8_t>& bits, Modulation mod) {
    const AxisSpec ax = axis_spec(mod);
    const int bps = 2 * ax.bits;
    if (bits.size() % bps != 0)
        throw std::invalid_argument("qam_map: bit count not divisible by bits per symbol");

    std::vector<cxd> out(bits.size() / bps);
    for (size_t s = 0; s < out.size(); ++s) {
        int li = 0, lq = 0;
        for (int b = 0; b < ax.bits; ++b) {
            li = (li << 1) | bits[s * bps + 2 * b];
            lq = (lq << 1) | bits[s * bps + 2 * b + 1];
        }
        out[s] = cxd(axis_level(li, ax.bits), axis_level(lq, ax.bits)) * ax.scale;
    }
    return out;
}

std::vector<uint8_t> qam_demap_hard(const std::vector<cxd>& symbols, Modulation mod) {
    const AxisSpec ax = axis_spec(mod);
    const int levels = 1 << ax.bits;
    std::vector<uint8_t> out(symbols.size() * 2 * ax.bits);
    for (size_t s = 0; s < symbols.size(); ++s) {
        for (int axis = 0; axis < 2; ++axis) {
            double y = (axis == 0 ? symbols[s].real() : symbols[s].imag()) / ax.scale;
            // nearest level index: levels are {levels-1-2t}, t = 0..levels-1
            int t = static_cast<int>(std::lround((levels - 1 - y) / 2.0));
            t = std::min(std::max(t, 0), levels - 1);
            int label = axis_label_from_level_index(t, ax.bits);
            for (int b = 0; b < ax.bits; ++b)
                out[s * 2 * ax.bits + 2 * b + axis] =
                    static_cast<uint8_t>((label >> (ax.bits - 1 - b)) & 1);
        }
    }
    return out;
}

std::vector<double> qam_demap_llr(const std::vector<cxd>& symbols, Modulation mod,
                                  const std::vector<double>& noise_variance) {
    const AxisSpec ax = axis_spec(mod);
    if (noise_variance.size() != symbols.size())
        throw std::invalid_argument("qam_demap_llr: noise variance length mismatch");
    const int levels = 1 << ax.bits;

    std::vector<double> llrs(symbols.size() * 2 * ax.bits);
    for (size_t s = 0; s < symbols.size(); ++s) {
        const double nv = std::max(noise_variance[s], 1e-300);
        for (int axis = 0; axis < 2; ++axis) {
            const double y = axis == 0 ? symbols[s].real() : symbols[s].imag();
            for (int b = 0; b < ax.bits; ++b) {
                double best0 = 1e300, best1 = 1e300;
                for (int t = 0; t < levels; ++t) {
                    int label = axis_label_from_level_index(t, ax.bits);
                    double d = y - (levels - 1 - 2 * t) * ax.scale;
                    double metric = d * d;
                    if ((label >> (ax.bits - 1 - b)) & 1) {
                        best1 = std::min(best1, metric);
                    } else {
                        best0 = std::min(best0, metric);
                    }
                }
                llrs[s * 2 * ax.bits + 2 * b + axis] = (best1 - best0) / nv;
            }
        }
    }
    return llrs;
}

}  // namespace otfs
