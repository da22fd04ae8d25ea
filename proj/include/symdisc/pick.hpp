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

// Nevanlinna-Pick interpolation on the unit disc: does a holomorphic
// h: D -> D with h(nodes[k]) = values[k] exist, and if so, build one.

#pragma once

#include <Eigen/Eigenvalues>
#include <optional>
#include <vector>

#include "symdisc/cx_poly.hpp"

namespace symdisc {

/// Smallest eigenvalue of the Pick matrix (1 - w_p conj(w_q)) / (1 - z_p conj(z_q))
/// after scaling to unit diagonal. Non-negative iff the problem is solvable.
inline double pick_min_eigenvalue(std::span<const Cx> nodes, std::span<const Cx> values) {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (std::abs(nodes[i]) >= 1.0 || std::abs(values[i]) >= 1.0) return -1.0;
    Eigen::MatrixXcd P(n, n);
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < n; ++q) {
            const auto up = static_cast<std::size_t>(p), uq = static_cast<std::size_t>(q);
            P(p, q) = (1.0 - values[up] * std::conj(values[uq])) / (1.0 - nodes[up] * std::conj(nodes[uq]));
        }
    Eigen::VectorXd d(n);
    for (Eigen::Index p = 0; p < n; ++p) d(p) = 1.0 / std::sqrt(P(p, p).real());
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < n; ++q) P(p, q) *= d(p) * d(q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(P, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// Schur-algorithm interpolant: h = f_0 with
///     f_k = (g_k + m_k f_{k+1}) / (1 + conj(g_k) m_k f_{k+1}),  f_N = 0,
/// where m_k is the disc automorphism vanishing at nodes[k] and g_k are the
/// Schur parameters. |h| < 1 on the closed disc whenever every |g_k| < 1.
class SchurInterpolant {
public:
    /// nullopt if some Schur parameter reaches the unit circle.
    static std::optional<SchurInterpolant> build(std::vector<Cx> nodes, std::vector<Cx> values) {
        const std::size_t n = nodes.size();
        if (values.size() != n) throw DomainError("SchurInterpolant: size mismatch");
        std::vector<Cx> gamma(n);
        std::vector<Cx> w = values;
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(nodes[k]) >= 1.0) return std::nullopt;
            const Cx g = w[k];
            if (!(std::abs(g) < 1.0)) return std::nullopt;
            gamma[k] = g;
            for (std::size_t j = k + 1; j < n; ++j) {
                const Cx mz = disc_automorphism(nodes[k], nodes[j]);
                if (mz == Cx{0.0, 0.0}) return std::nullopt;
                w[j] = disc_automorphism(g, w[j]) / mz;
            }
        }
        return SchurInterpolant(std::move(nodes), std::move(gamma));
    }

    [[nodiscard]] Cx operator()(Cx zeta) const {
        Cx f{0.0, 0.0};
        for (std::size_t k = nodes_.size(); k-- > 0;) {
            const Cx t = disc_automorphism(nodes_[k], zeta) * f;
            f = (gamma_[k] + t) / (1.0 + std::conj(gamma_[k]) * t);
        }
        return f;
    }

    [[nodiscard]] const std::vector<Cx>& nodes() const { return nodes_; }
    [[nodiscard]] const std::vector<Cx>& parameters() const { return gamma_; }
    [[nodiscard]] double max_parameter() const {
        double m = 0.0;
        for (const Cx& g : gamma_) m = std::max(m, std::abs(g));
        return m;
    }

private:
    SchurInterpolant(std::vector<Cx> nodes, std::vector<Cx> gamma) : nodes_(std::move(nodes)), gamma_(std::move(gamma)) {}
    std::vector<Cx> nodes_;
    std::vector<Cx> gamma_;
};

}  // namespace symdisc
