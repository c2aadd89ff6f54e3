#pragma once

#include "otfslink/frame.hpp"

namespace otfs {

/// CP-OFDM modulator: per time index n, the length-M inverse DFT of
/// tf column n (1/sqrt(M) normalized) prefixed by its last cp_len samples,
/// concatenated in time order. Output length N*(M+cp_len).
SampleStream modulate(const TimeFrequencyGrid& tf, const FrameParams& p);

/// CP-OFDM demodulator: per symbol, discard cp_len samples and take the
/// forward length-M DFT (1/sqrt(M) normalized) of the remaining M samples.
TimeFrequencyGrid demodulate(const SampleStream& s, const FrameParams& p);

}  // namespace otfs
