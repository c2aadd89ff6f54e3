#include "otfslink/fec.hpp"

#include <array>
#include <limits>
#include <stdexcept>

namespace otfs {

namespace {

constexpr int kConstraint = 7;
constexpr int kMemory = kConstraint - 1;  // 6 tail bits
constexpr int kStates = 1 << kMemory;

const std::vector<int>& generators(CodeId code) {
    static const std::vector<int> r12 = {0133, 0171};
    static const std::vector<int> r13 = {0133, 0171, 0165};
    switch (code) {
        case CodeId::ConvR12: return r12;
        case CodeId::ConvR13: return r13;
        default: throw std::invalid_argument("generators: not a convolutional code");
    }
}

int parity(int v) { return __builtin_popcount(v) & 1; }

}  // namespace

std::string code_name(CodeId code) {
    switch (code) {
        case CodeId::None: return "none";
        case CodeId::ConvR12: return "conv-r12";
        case CodeId::ConvR13: return "conv-r13";
    }
    return "?";
}

CodeId code_by_name(const std::string& name) {
    if (name == "none") return CodeId::None;
    if (name == "conv-r12") return CodeId::ConvR12;
    if (name == "conv-r13") return CodeId::ConvR13;
    throw std::invalid_argument("unknown code '" + name + "'");
}

int coded_bits(CodeId code, int info_bits) {
    if (code == CodeId::None) return info_bits;
    return (info_bits + kMemory) * static_cast<int>(generators(code).size());
}

double code_rate(CodeId code, int info_bits) {
    return static_cast<double>(info_bits) / coded_bits(code, info_bits);
}

std::vector<uint8_t> fec_encode(const std::vector<uint8_t>& bits, CodeId code) {
    if (code == CodeId::None) return bits;
    const auto& gens = generators(code);
    std::vector<uint8_t> out;
    out.reserve((bits.size() + kMemory) * gens.size());
    int window = 0;  // current bit in the MSB-side, 7 bits total
    auto push = [&](int bit) {
        window = ((window << 1) | bit) & ((1 << kConstraint) - 1);
        for (int g : gens) out.push_back(static_cast<uint8_t>(parity(window & g)));
    };
    for (uint8_t b : bits) push(b & 1);
    for (int i = 0; i < kMemory; ++i) push(0);
    return out;
}

std::vector<uint8_t> fec_decode(const std::vector<double>& llrs, CodeId code, int info_bits) {
    if (code == CodeId::None) {
        if (static_cast<int>(llrs.size()) != info_bits)
            throw std::invalid_argument("fec_decode: llr length mismatch");
        std::vector<uint8_t> out(info_bits);
        for (int i = 0; i < info_bits; ++i) out[i] = llrs[i] < 0 ? 1 : 0;
        return out;
    }

    const auto& gens = generators(code);
    const int n_out = static_cast<int>(gens.size());
    const int steps = info_bits + kMemory;
    if (static_cast<int>(llrs.size()) != steps * n_out)
        throw std::invalid_argument("fec_decode: llr length mismatch");

    // State = the last kMemory input bits (newest in the LSB), matching the
    // encoder's window = state<<1 | input convention. Output bits per
    // (state, input) are precomputed and packed.
    std::vector<uint8_t> out_table(kStates * 2, 0);
    for (int st = 0; st < kStates; ++st) {
        for (int in = 0; in < 2; ++in) {
            int window = ((st << 1) | in) & ((1 << kConstraint) - 1);
            uint8_t packed = 0;
            for (size_t g = 0; g < gens.size(); ++g)
                packed |= static_cast<uint8_t>(parity(window & gens[g]) << g);
            out_table[st * 2 + in] = packed;
        }
    }

    constexpr double kNeg = -std::numeric_limits<double>::infinity();
    std::vector<double> metric(kStates, kNeg), next(kStates, kNeg);
    metric[0] = 0.0;  // encoder starts zeroed
    std::vector<uint8_t> decisions(static_cast<size_t>(steps) * kStates);

    for (int t = 0; t < steps; ++t) {
        // Per-output-bit correlation metric: +llr for coded bit 0, -llr for 1.
        std::array<double, 3> lam{};
        for (int g = 0; g < n_out; ++g) lam[g] = llrs[static_cast<size_t>(t) * n_out + g];
        std::fill(next.begin(), next.end(), kNeg);
        for (int st = 0; st < kStates; ++st) {
            if (metric[st] == kNeg) continue;
            for (int in = 0; in < 2; ++in) {
                int window = (st << 1) | in;
                int ns = window & (kStates - 1);
                uint8_t packed = out_table[st * 2 + in];
                double m = metric[st];
                for (int g = 0; g < n_out; ++g) m += ((packed >> g) & 1) ? -lam[g] : lam[g];
                if (m > next[ns]) {
                    next[ns] = m;
                    decisions[static_cast<size_t>(t) * kStates + ns] =
                        static_cast<uint8_t>((st >> (kMemory - 1)) & 1 ? 2 : 0) |
                        static_cast<uint8_t>(in);
                }
            }
        }
        metric.swap(next);
    }

    // Zero-tailed: trace back from state 0.
    std::vector<uint8_t> bits(steps);
    int st = 0;
    for (int t = steps - 1; t >= 0; --t) {
        uint8_t d = decisions[static_cast<size_t>(t) * kStates + st];
        bits[t] = d & 1;
        // previous state: shift the input out, shift the recorded MSB in
        st = ((st >> 1) | ((d & 2) ? (1 << (kMemory - 1)) : 0));
    }
    bits.resize(info_bits);
    return bits;
}

}  // namespace otfs
