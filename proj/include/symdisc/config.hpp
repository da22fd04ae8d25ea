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

#pragma once

#include <cstdint>

#include "symdisc/cx_poly.hpp"

namespace symdisc {

/// Sampling grid for maximisation over the circle or the torus.
struct GridConfig {
    int coarse = 256;          // points per angle
    int refine = 60;           // golden-section iterations per refined arc
    double tol = 1e-12;        // stop threshold for coordinate passes
    std::uint64_t seed = 20060301;
    bool closed_disc = false;  // debug: also sweep the interior of the disc

    void validate() const {
        if (coarse < 16) throw DomainError("GridConfig: coarse must be >= 16");
        if (refine < 0) throw DomainError("GridConfig: refine must be >= 0");
        if (!(tol > 0.0)) throw DomainError("GridConfig: tol must be positive");
    }

    /// Defaults used by the sup-based membership oracle.
    static GridConfig membership() { return GridConfig{}; }

    /// Defaults used by rho (4096 uniform samples on the circle).
    static GridConfig rho() {
        GridConfig g;
        g.coarse = 4096;
        return g;
    }
};

/// Budget of the analytic-disc searches behind the upper bounds.
struct SearchConfig {
    GridConfig grid{};
    int degree = 6;                 // polynomial disc degree
    int restarts = 16;              // independent restarts of the polynomial search
    int bisection_steps = 14;       // alpha bisection steps
    int max_evals = 400;            // Nelder-Mead evaluations per feasibility test
    int search_samples = 128;       // boundary samples while searching
    int validate_samples = 512;     // boundary samples for acceptance of a witness
    double delta_min = 1e-7;        // required validation margin
    double collapse_tol = 1e-9;     // stop once upper - lower falls below this
    int branched_starts = 64;       // starts per alpha for the branched lift search
    int chain_evals = 120;          // evaluations of the chain/decomposition refinement
};

}  // namespace symdisc
