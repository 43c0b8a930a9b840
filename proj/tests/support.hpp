// SPDX-License-Identifier: Apache-2.0
//
// wbf - narrowband and wideband distortionless beamformer synthesis
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <utility>

#include "wbf/types.hpp"

// Seeded generators and brute-force references shared by the unit tests. Nothing in here calls
// into the solvers under test.
namespace wbf::testing
{
    inline CMatrix<double> random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> g(0.0, std::sqrt(0.5));
        CMatrix<double> m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                m(i, j) = {g(rng), g(rng)};
        return m;
    }

    // G G^H / n + floor * I: Hermitian, positive definite, condition number of order 1e2..1e3.
    inline CMatrix<double> random_hpd(Eigen::Index n, std::mt19937_64 &rng, double floor = 0.05)
    {
        const CMatrix<double> g = random_complex(n, n, rng);
        CMatrix<double> r = g * g.adjoint() / double(n);
        r.diagonal().array() += floor;
        return (r + r.adjoint()) / 2.0;
    }

    // Explicit-inverse MVDR, the textbook formula evaluated the slow way.
    inline CVector<double> mvdr_by_inverse(const CMatrix<double> &r, const CVector<double> &a)
    {
        const CMatrix<double> ri = r.inverse();
        const std::complex<double> denom = (a.adjoint() * ri * a)(0);
        return ri * a / denom;
    }

    // Explicit-inverse LCMV: R^-1 A (A^H R^-1 A)^-1 B^H.
    inline CVector<double> lcmv_by_inverse(const CMatrix<double> &r, const CMatrix<double> &a, const CRowVector<double> &b)
    {
        const CMatrix<double> ri = r.inverse();
        const CMatrix<double> gram = a.adjoint() * ri * a;
        return ri * a * gram.inverse() * b.adjoint();
    }

    // Generic constraint data: Gaussian A (n x k) and a response row with entries of modulus in [0.5, 2].
    inline std::pair<CMatrix<double>, CRowVector<double>> random_constraint_data(Eigen::Index n, Eigen::Index k,
                                                                                 std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> mag(0.5, 2.0);
        std::uniform_real_distribution<double> phase(-3.14159265358979, 3.14159265358979);
        CRowVector<double> b(k);
        for (Eigen::Index i = 0; i < k; ++i)
            b(i) = std::polar(mag(rng), phase(rng));
        return {random_complex(n, k, rng), b};
    }

    inline double rel_diff(const CVector<double> &x, const CVector<double> &y)
    {
        return (x - y).norm() / std::max(y.norm(), 1e-300);
    }
}
