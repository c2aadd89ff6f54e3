#pragma once

#include "otfslink/frame.hpp"

namespace otfs {

/// Inverse Symplectic Finite Fourier Transform, Delay-Doppler -> Time-Frequency:
///
///   X[n,m] = (1/sqrt(N*M)) * sum_k sum_l x[k,l] * exp(+j2pi (n*k/N - m*l/M))
///
/// The exponents carry opposing signs on the two axes: +j on the
/// Doppler->time axis, -j on the delay->frequency axis. That sign pair is
/// the repository convention; together with the symmetric 1/sqrt(N*M)
/// normalization it makes the transform unitary.
TimeFrequencyGrid isfft(const DelayDopplerGrid& dd, const FrameParams& p);

/// Forward SFFT, Time-Frequency -> Delay-Doppler; exact inverse of isfft:
///
///   x[k,l] = (1/sqrt(N*M)) * sum_n sum_m X[n,m] * exp(-j2pi (n*k/N - m*l/M))
DelayDopplerGrid sfft(const TimeFrequencyGrid& tf, const FrameParams& p);

/// The 2D complex-exponential basis function carried by the DD bin (k,l):
/// isfft of a unit impulse at Doppler k, delay l. Every entry has magnitude
/// exactly 1/sqrt(N*M), so one QAM symbol placed at (k,l) is spread evenly
/// over the whole Time-Frequency plane.
TimeFrequencyGrid basis_function(int doppler_k, int delay_l, const FrameParams& p);

}  // namespace otfs
