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

#include <complex>
#include <span>
#include <vector>

namespace bwx {

// In-place iterative radix-2 FFT. Size must be a power of two.
void fft_inplace(std::span<std::complex<double>> data, bool inverse = false);

// |X[k]|^2 for k = 0..n/2 of the zero-padded real input.
std::vector<double> power_spectrum(std::span<const double> x, std::size_t n);

}  // namespace bwx
