/*
 * Copyright 2026 The semisparse Authors. All rights reserved.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#pragma once

// Brute-force reference solutions for the per-element proximal problems.

#include <cmath>
#include <vector>

namespace oracles {

// Minimizer of f on [lo, hi] for unimodal f.
template <typename F>
inline double golden_section(F f, double lo, double hi)
{
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2;
}

// Golden-section bracket, then bisection on the sign of the subgradient
// alpha1 len sign(p) + rho1 len (p - a), which pins the minimizer to rounding level.
inline double lasso(double a, double alpha1, double rho1, double len)
{
    auto f = [&](double p) { return alpha1 * len * std::abs(p) + rho1 / 2 * len * (p - a) * (p - a); };
    const double c = golden_section(f, -std::abs(a) - 1, std::abs(a) + 1);
    if (alpha1 * len >= rho1 * len * std::abs(a)) return 0; // 0 lies in the subdifferential at 0
    auto slope = [&](double p) { return alpha1 * len * (p > 0 ? 1 : -1) + rho1 * len * (p - a); };
    double lo = c - 1e-4, hi = c + 1e-4;
        for (int i = 0; i < 200 && hi - lo > 0; ++i) {
        const double mid = lo + (hi - lo) / 2;
        if (mid == lo || mid == hi) break;
        (slope(mid) < 0 ? lo : hi) = mid;
    }
    return lo + (hi - lo) / 2;
}


// argmin over q of weight [q != 0] + rho / 2 (q - x)^2, by scanning a dense grid plus the
// points 0 and x. Ties resolve to 0.
inline double l0_prox(double x, double weight, double rho)
{
    auto f = [&](double q) { return (q != 0 ? weight : 0.0) + rho / 2 * (q - x) * (q - x); };
    const double half_width = 2 * std::abs(x) + 1;
    const int n = 2001;
    double best = 0, best_value = f(0);
    std::vector<double> candidates{x};
    for (int i = 0; i < n; ++i) candidates.push_back(-half_width + 2 * half_width * i / (n - 1));
    for (double q : candidates) {
        const double v = f(q);
        if (v < best_value) {
            best = q;
            best_value = v;
        }
    }
    return best;
}

} // namespace oracles
