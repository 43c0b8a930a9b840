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


#include "catch_amalgamated.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "support.hpp"
#include "wbf/covariance.hpp"

using namespace wbf;

TEST_CASE("Sample covariance - single snapshot is the outer product")
{
    std::mt19937_64 rng(1);
    const CMatrix<double> x = testing::random_complex(6, 1, rng);
    const auto r = sample_covariance(x);
    const CMatrix<double> expect = x * x.adjoint();
    CHECK((r.matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(r.loading_factor() == 0.0);
}

TEST_CASE("Sample covariance - zero data with loading is delta * I")
{
    const CMatrix<double> x = CMatrix<double>::Zero(5, 12);
    const auto r = sample_covariance(x, 0.25);
    CHECK((r.matrix() - 0.25 * CMatrix<double>::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.loading_factor() == 0.25);
    CHECK(r.min_eigenvalue() > 0.0);
}

TEST_CASE("Sample covariance - white noise converges to identity")
{
    std::mt19937_64 rng(2024);
    const CMatrix<double> x = testing::random_complex(8, 10000, rng);
    const auto r = sample_covariance(x);
    CHECK((r.matrix() - CMatrix<double>::Identity(8, 8)).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("Sample covariance - Hermitian, PSD and permutation invariant")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Eigen::Index t = 1 + trial % 13;
        const CMatrix<double> x = testing::random_complex(8, t, rng) * double(1 + trial);
        const auto r = sample_covariance(x);
        CHECK(r.max_hermitian_defect() <= 1e-12);
        CHECK(r.min_eigenvalue() >= -1e-10 * std::max(1.0, r.matrix().cwiseAbs().maxCoeff()));

        std::vector<Eigen::Index> perm(static_cast<std::size_t>(t));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        CMatrix<double> shuffled(8, t);
        for (Eigen::Index j = 0; j < t; ++j)
            shuffled.col(j) = x.col(perm[std::size_t(j)]);
        const auto rs = sample_covariance(shuffled);
        CHECK((rs.matrix() - r.matrix()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, r.matrix().cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("Sample covariance - rejects empty input")
{
    CHECK_THROWS_AS(sample_covariance(CMatrix<double>(8, 0)), std::invalid_argument);
    CHECK_THROWS_AS(sample_covariance(CMatrix<double>(0, 4)), std::invalid_argument);
}

TEST_CASE("CovarianceMatrix - construction symmetrizes and validates")
{
    CMatrix<double> m(2, 2);
    m << 2.0, std::complex<double>(0.5, 0.5), std::complex<double>(0.5, -0.5 + 1e-9), 3.0;
    const CovarianceMatrix<double> r(m);
    CHECK(r.max_hermitian_defect() == 0.0);

    CMatrix<double> indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(CovarianceMatrix<double>(indefinite), std::invalid_argument);
    CHECK_NOTHROW(CovarianceMatrix<double>(indefinite, 1.5));
    CHECK_THROWS_AS(CovarianceMatrix<double>(CMatrix<double>(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(CovarianceMatrix<double>(CMatrix<double>::Identity(2, 2), -1.0), std::invalid_argument);
}

TEST_CASE("CovarianceMatrix - scaling and casting")
{
    std::mt19937_64 rng(5);
    const CovarianceMatrix<double> r(testing::random_hpd(4, rng), 0.1);
    const auto s = r.scaled(3.0);
    CHECK((s.matrix() - 3.0 * r.matrix()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(s.loading_factor() == Catch::Approx(0.3));
    const auto ld = r.cast<long double>();
    CHECK(ld.size() == 4);
}
