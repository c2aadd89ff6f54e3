#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otfslink/frame.hpp"

namespace otfs {

enum class Modulation { Qpsk, Qam16, Qam64 };

int bits_per_symbol(Modulation mod);
std::string modulation_name(Modulation mod);
Modulation modulation_by_name(const std::string& name);

/// Gray-labeled square constellations with unit average power.
/// Bit order per symbol: I and Q axis bits interleaved, I first.
/// QPSK bits 00 map to (1+j)/sqrt(2).
std::vector<cxd> qam_map(const std::vector<uint8_t>& bits, Modulation mod);

/// Min-distance hard decisions.
std::vector<uint8_t> qam_demap_hard(const std::vector<cxd>& symbols, Modulation mod);

/// Max-log LLRs, positive = bit 0 more likely. noise_variance is per symbol
/// (complex, total over both dimensions).
std::vector<double> qam_demap_llr(const std::vector<cxd>& symbols, Modulation mod,
                                  const std::vector<double>& noise_variance);

}  // namespace otfs
