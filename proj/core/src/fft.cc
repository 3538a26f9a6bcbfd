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

#include "fft.h"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace afshar::detail {
namespace {

// The FFTW planner is not thread-safe; execution of an existing plan on
// caller-owned arrays is. Plans are cached per (size, direction).
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan plan_for(std::size_t n, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto key = std::make_pair(n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) {
        return it->second;
    }
    fftw_complex *in = fftw_alloc_complex(n);
    fftw_complex *out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans.emplace(key, plan);
    return plan;
}

std::vector<std::complex<double>> transform(const std::vector<std::complex<double>> &input, int sign) {
    std::size_t n = input.size();
    std::vector<std::complex<double>> in = input;
    std::vector<std::complex<double>> out(n);
    if (n == 0) {
        return out;
    }
    fftw_plan plan = plan_for(n, sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex *>(in.data()), reinterpret_cast<fftw_complex *>(out.data()));
    return out;
}

}  // namespace

std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>> &input) {
    return transform(input, FFTW_FORWARD);
}

std::vector<std::complex<double>> fft_inverse(const std::vector<std::complex<double>> &input) {
    auto out = transform(input, FFTW_BACKWARD);
    double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
    for (auto &v : out) {
        v *= scale;
    }
    return out;
}

}  // namespace afshar::detail
