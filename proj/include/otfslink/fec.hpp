#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace otfs {

/// Convolutional stand-in codes, constraint length 7, zero-tailed.
/// ConvR12 uses generators 133/171 (octal); ConvR13 adds 165.
enum class CodeId { None, ConvR12, ConvR13 };

std::string code_name(CodeId code);
CodeId code_by_name(const std::string& name);

/// Coded bits produced for info_bits input bits (includes the 6 tail bits).
int coded_bits(CodeId code, int info_bits);

/// Effective rate info_bits / coded_bits.
double code_rate(CodeId code, int info_bits);

std::vector<uint8_t> fec_encode(const std::vector<uint8_t>& bits, CodeId code);

/// Soft-input maximum-likelihood sequence decode (Viterbi with full-block
/// traceback, terminated in the zero state). llrs follow the qam convention:
/// positive = bit 0.
std::vector<uint8_t> fec_decode(const std::vector<double>& llrs, CodeId code, int info_bits);

}  // namespace otfs
