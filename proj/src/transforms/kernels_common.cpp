// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/transforms/kernels.hpp"

#include "ritual/core/error.hpp"

#include <cmath>

namespace ritual::kernels {

std::vector<double> gaussian_kernel_1d(int size, double sigma) {
    if (size < 1 || size % 2 == 0 || !(sigma > 0.0)) {
        throw Error(ErrorCode::InvalidParams, "gaussian kernel needs odd size and positive sigma");
    }
    std::vector<double> w(static_cast<std::size_t>(size));
    const double half = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double x = (i - half) / sigma;
        w[i] = std::exp(-0.5 * x * x);
        sum += w[i];
    }
    for (double &v : w) {
        v /= sum;
    }
    return w;
}

int reflect_index(int i, int n) noexcept {
    if (n == 1) {
        return 0;
    }
    const int period = 2 * (n - 1);
    i %= period;
    if (i < 0) {
        i += period;
    }
    return i < n ? i : period - i;
}

} // namespace ritual::kernels
