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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wbf
{
    template <typename Real>
    using Complex = std::complex<Real>;

    template <typename Real>
    using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

    template <typename Real>
    using CRowVector = Eigen::Matrix<std::complex<Real>, 1, Eigen::Dynamic>;

    template <typename Real>
    using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename Real>
    using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

    inline constexpr double speed_of_light_mps = 2.99792458e8;

    // Floor used wherever a gain or power ratio of exactly zero has to be shown in dB.
    inline constexpr double db_floor = -300.0;

    template <typename Real>
    constexpr Real deg_to_rad(Real deg) { return deg * std::numbers::pi_v<Real> / Real(180); }

    template <typename Real>
    constexpr Real rad_to_deg(Real rad) { return rad * Real(180) / std::numbers::pi_v<Real>; }

    // Base for every failure that originates in the numerics rather than in the inputs' shape.
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // The covariance matrix is singular (or indefinite) to working precision.
    class NumericalRankError : public NumericalError
    {
    public:
        using NumericalError::NumericalError;
    };

    // The constraint matrix is rank deficient, e.g. duplicate constraint frequencies or K > N.
    class DegenerateConstraintsError : public NumericalError
    {
    public:
        using NumericalError::NumericalError;
    };
}
