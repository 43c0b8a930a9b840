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
#include <numbers>
#include <stdexcept>
#include <string>

#include "wbf/types.hpp"

namespace wbf
{
    // Uniform linear array. Sensor n sits at n * spacing_m along the array axis.
    template <typename Real = double>
    struct ArrayGeometry
    {
        Eigen::Index num_sensors = 2;
        Real spacing_m = Real(0.5);
        Real propagation_speed_mps = Real(speed_of_light_mps);

        void validate() const
        {
            if (num_sensors < 2)
                throw std::invalid_argument("num_sensors must be at least 2, got " + std::to_string(num_sensors));
            if (!(spacing_m > Real(0)) || !std::isfinite(double(spacing_m)))
                throw std::invalid_argument("spacing_m must be a positive finite length");
            if (!(propagation_speed_mps > Real(0)) || !std::isfinite(double(propagation_speed_mps)))
                throw std::invalid_argument("propagation_speed_mps must be positive and finite");
        }

        template <typename To>
        ArrayGeometry<To> cast() const
        {
            return {num_sensors, To(spacing_m), To(propagation_speed_mps)};
        }
    };

    // How a direction of arrival is quoted in degrees. steering_vector itself always takes the
    // broadside angle; array_axis angles are 90 deg minus that (0 = endfire, 90 = broadside).
    enum class AngleReference
    {
        broadside,
        array_axis,
    };

    template <typename Real>
    Real doa_to_broadside_rad(Real doa_deg, AngleReference ref)
    {
        return deg_to_rad(ref == AngleReference::broadside ? doa_deg : Real(90) - doa_deg);
    }

    template <typename Real>
    Real broadside_rad_to_doa_deg(Real theta_rad, AngleReference ref)
    {
        const Real deg = rad_to_deg(theta_rad);
        return ref == AngleReference::broadside ? deg : Real(90) - deg;
    }

    template <typename Real = double>
    struct SteeringVector
    {
        CVector<Real> entries;
        Real theta_rad{};
        Real freq_hz{};

        Eigen::Index size() const { return entries.size(); }
    };

    template <typename Real>
    Real half_wavelength_spacing(Real freq_hz, Real propagation_speed_mps = Real(speed_of_light_mps))
    {
        if (!(freq_hz > Real(0)))
            throw std::invalid_argument("half_wavelength_spacing: frequency must be positive");
        if (!(propagation_speed_mps > Real(0)))
            throw std::invalid_argument("half_wavelength_spacing: propagation speed must be positive");
        return propagation_speed_mps / (Real(2) * freq_hz);
    }

    // Plane-wave response of the array. theta is measured from broadside, phase is referenced to
    // sensor 0 and entry n is exp(-i 2 pi f n d sin(theta) / c).
    template <typename Real>
    SteeringVector<Real> steering_vector(const ArrayGeometry<Real> &geom, Real theta_rad, Real freq_hz)
    {
        geom.validate();
        if (!(freq_hz > Real(0)) || !std::isfinite(double(freq_hz)))
            throw std::invalid_argument("steering_vector: frequency must be positive and finite");
        constexpr Real half_pi = std::numbers::pi_v<Real> / Real(2);
        // Allow a few ulps of slack so grids built from degrees can hit +-90 exactly.
        if (!(std::abs(theta_rad) <= half_pi * (Real(1) + Real(8) * std::numeric_limits<Real>::epsilon())))
            throw std::invalid_argument("steering_vector: theta must lie in [-pi/2, pi/2]");

        const Real step = Real(2) * std::numbers::pi_v<Real> * freq_hz * geom.spacing_m * std::sin(theta_rad) /
                          geom.propagation_speed_mps;

        SteeringVector<Real> sv{CVector<Real>(geom.num_sensors), theta_rad, freq_hz};
        sv.entries(0) = Complex<Real>(Real(1), Real(0));
        for (Eigen::Index n = 1; n < geom.num_sensors; ++n)
            sv.entries(n) = std::polar(Real(1), -Real(n) * step);
        return sv;
    }
}
