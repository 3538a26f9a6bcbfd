// Copyright 2026 The Afshar Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AFSHAR_FFT_H
#define AFSHAR_FFT_H

#include <complex>
#include <vector>

namespace afshar::detail {

// Unnormalized DFT: forward uses exp(-2 pi i k n / N).
std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>> &input);

// Inverse DFT including the 1/N factor.
std::vector<std::complex<double>> fft_inverse(const std::vector<std::complex<double>> &input);

// Signed frequency index of DFT bin k, in cycles per record: 0..N/2-1, -N/2..-1.
inline long frequency_index(std::size_t k, std::size_t n) {
    return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

}  // namespace afshar::detail

#endif  // AFSHAR_FFT_H
