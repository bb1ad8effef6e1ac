/*
 * Copyright 2026 The bwx Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bwx/audio.hpp"

namespace bwx {

std::vector<double> kaiser_window(std::size_t length, double beta);

// Kaiser-windowed sinc designs. num_taps must be odd so the result is a
// type-I linear-phase filter with integer delay (num_taps-1)/2.
std::vector<double> design_lowpass(std::size_t num_taps, double cutoff_hz,
                                   double rate_hz, double beta);
std::vector<double> design_highpass(std::size_t num_taps, double cutoff_hz,
                                    double rate_hz, double beta);
std::vector<double> design_bandpass(std::size_t num_taps, double low_hz,
                                    double high_hz, double rate_hz,
                                    double beta);

// Frequency-sampling design from a (Hz, linear gain) table, linearly
// interpolated, Hann-windowed. Useful for building an inverse channel filter
// from a measured magnitude response.
FirFilter design_from_magnitude(std::span<const std::pair<double, double>> table,
                                std::size_t num_taps, double rate_hz);

// |H(e^{j 2 pi f / rate})| of an FIR.
double magnitude_response(std::span<const double> taps, double freq_hz,
                          double rate_hz);

// Fixed filters shared across the codec.
namespace filters {

// 300-3400 Hz telephone band at 16 kHz, applied before decimation on encode.
const FirFilter& telephone_bandpass();
// 127-tap 3400 Hz high-pass at 16 kHz that selects the regenerated high band.
const FirFilter& highband_split();
// 511-tap 0-350 Hz band limiter at 16 kHz used when extracting harmonic targets.
const FirFilter& lowband_target_lowpass();
// 253-tap 340 Hz low-pass applied to the regenerated low band. It removes the
// cross-fade sidebands and its delay of 126 samples aligns the low band with
// the other two paths.
const FirFilter& lowband_output_lowpass();
// 0-3400 Hz low-pass at 16 kHz used to compare excitation energies.
const FirFilter& gain_match_lowpass();

}  // namespace filters

}  // namespace bwx
