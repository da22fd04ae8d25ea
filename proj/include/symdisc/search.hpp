/*
 *  Copyright 2026 The symdisc Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

// Derivative-free maximisation helpers: circle sweeps with golden-section
// polish, a bounded Nelder-Mead, and a small deterministic parallel_for.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <functional>
#include <numbers>
#include <thread>
#include <vector>

namespace symdisc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

/// Golden-section maximisation of f on [lo, hi]. Returns the argmax.
template <class F>
double golden_max(F&& f, double lo, double hi, int iterations, double& best_value) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations; ++i) {
        if (fc >= fd) {
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
    if (fc >= fd) {
        best_value = fc;
        return c;
    }
    best_value = fd;
    return d;
}

struct CircleMax {
    double angle = 0.0;
    double value = 0.0;
};

/// Maximum of f over [0, 2pi): `coarse` uniform samples, then golden-section
/// refinement on the arcs around the `arcs` best local maxima of the sample.
/// The sampled maximum is kept if refinement does not improve on it, so the
/// result never falls below the best sample. Ties go to the smallest angle.
template <class F>
CircleMax maximize_on_circle(F&& f, int coarse, int refine_iterations, int arcs = 4) {
    std::vector<double> vals(static_cast<std::size_t>(coarse));
    const double h = kTwoPi / coarse;
    for (int k = 0; k < coarse; ++k) vals[static_cast<std::size_t>(k)] = f(h * k);
    std::vector<int> peaks;
    for (int k = 0; k < coarse; ++k) {
        const double v = vals[static_cast<std::size_t>(k)];
        const double l = vals[static_cast<std::size_t>((k + coarse - 1) % coarse)];
        const double r = vals[static_cast<std::size_t>((k + 1) % coarse)];
        if (v >= l && v >= r) peaks.push_back(k);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](int a, int b) {
        return vals[static_cast<std::size_t>(a)] > vals[static_cast<std::size_t>(b)];
    });
    if (peaks.size() > static_cast<std::size_t>(arcs)) peaks.resize(static_cast<std::size_t>(arcs));

    CircleMax best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < coarse; ++k)
        if (vals[static_cast<std::size_t>(k)] > best.value) best = {h * k, vals[static_cast<std::size_t>(k)]};
    if (refine_iterations <= 0) return best;
    for (int k : peaks) {
        double v = 0.0;
        const double t = golden_max(f, h * (k - 1), h * (k + 1), refine_iterations, v);
        if (v > best.value || (v == best.value && wrap_angle(t) < best.angle)) best = {wrap_angle(t), v};
    }
    return best;
}

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

/// Nelder-Mead minimisation with an optional early-exit target.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, double step, int max_evals,
                             double target = -std::numeric_limits<double>::infinity(), double ftol = 1e-14) {
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> simplex(dim + 1, x0);
    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step;
    int evals = 0;
    for (std::size_t i = 0; i <= dim; ++i) {
        fv[i] = f(simplex[i]);
        ++evals;
    }
    std::vector<std::size_t> order(dim + 1);
    auto sort_simplex = [&] {
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2(dim + 1);
        std::vector<double> f2(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            s2[i] = simplex[order[i]];
            f2[i] = fv[order[i]];
        }
        simplex.swap(s2);
        fv.swap(f2);
    };
    sort_simplex();
    std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
    while (evals < max_evals && fv[0] > target) {
        if (std::abs(fv[dim] - fv[0]) <= ftol * (1.0 + std::abs(fv[0]))) break;
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / double(dim);
        for (std::size_t k = 0; k < dim; ++k) xr[k] = centroid[k] + (centroid[k] - simplex[dim][k]);
        const double fr = f(xr);
        ++evals;
        if (fr < fv[0]) {
            for (std::size_t k = 0; k < dim; ++k) xe[k] = centroid[k] + 2.0 * (centroid[k] - simplex[dim][k]);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                simplex[dim] = xe;
                fv[dim] = fe;
            } else {
                simplex[dim] = xr;
                fv[dim] = fr;
            }
        } else if (fr < fv[dim - 1]) {
            simplex[dim] = xr;
            fv[dim] = fr;
        } else {
            const bool outside = fr < fv[dim];
            for (std::size_t k = 0; k < dim; ++k)
                xc[k] = outside ? centroid[k] + 0.5 * (xr[k] - centroid[k])
                                : centroid[k] + 0.5 * (simplex[dim][k] - centroid[k]);
            const double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, fv[dim])) {
                simplex[dim] = xc;
                fv[dim] = fc;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t k = 0; k < dim; ++k) simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
                    fv[i] = f(simplex[i]);
                    ++evals;
                }
            }
        }
        sort_simplex();
    }
    return {simplex[0], fv[0], evals};
}

/// Worker count: hardware concurrency capped by SYMDISC_THREADS.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SYMDISC_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

/// Runs body(i) for i in [0, count). Each index writes only its own slot, so
/// results do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace symdisc
