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

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "wbf/array_model.hpp"
#include "wbf/beamform.hpp"
#include "wbf/types.hpp"

namespace wbf
{
    enum class Normalization
    {
        none,
        global_peak,        // one reference for the whole family of frequencies
        per_frequency_peak, // every pattern peaks at 0 dB
    };

    template <typename Real = double>
    struct BeamPattern
    {
        RVector<Real> theta_grid_rad;
        Real freq_hz{};
        RVector<Real> gains_db; // 20 log10 |w^H a(theta, f)| minus the normalization reference
        Normalization normalization = Normalization::none;
    };

    template <typename Real>
    Real to_db(Real amplitude)
    {
        if (!(amplitude > Real(0)))
            return Real(db_floor);
        return std::max(Real(db_floor), Real(20) * std::log10(amplitude));
    }

    template <typename Real>
    Real power_to_db(Real power)
    {
        if (!(power > Real(0)))
            return Real(db_floor);
        return std::max(Real(db_floor), Real(10) * std::log10(power));
    }

    // count angles from -90 to +90 degrees inclusive, returned in radians.
    template <typename Real = double>
    RVector<Real> theta_grid(Eigen::Index count = 721)
    {
        if (count < 2)
            throw std::invalid_argument("theta_grid: need at least two points");
        RVector<Real> deg = RVector<Real>::LinSpaced(count, Real(-90), Real(90));
        return deg.unaryExpr([](Real d) { return deg_to_rad(d); });
    }

    // |w^H a(theta0, f)| for every f in the grid.
    template <typename Real>
    RVector<Real> soi_gain_profile(const CVector<Real> &w, const ArrayGeometry<Real> &geom, Real theta0_rad,
                                   std::span<const Real> freq_grid_hz)
    {
        if (freq_grid_hz.empty())
            throw std::invalid_argument("soi_gain_profile: empty frequency grid");
        if (w.size() != geom.num_sensors)
            throw std::invalid_argument("soi_gain_profile: weight length does not match the array");
        RVector<Real> out(Eigen::Index(freq_grid_hz.size()));
        for (Eigen::Index i = 0; i < out.size(); ++i)
            out(i) = std::abs(w.dot(steering_vector(geom, theta0_rad, freq_grid_hz[std::size_t(i)]).entries));
        return out;
    }

    template <typename Real>
    RVector<Real> soi_gain_profile(const WeightVector<Real> &w, const ArrayGeometry<Real> &geom, Real theta0_rad,
                                   std::span<const Real> freq_grid_hz)
    {
        return soi_gain_profile(w.weights, geom, theta0_rad, freq_grid_hz);
    }

    // Peak-to-trough spread of a linear gain profile, in dB.
    template <typename Derived>
    auto gain_ripple_db(const Eigen::DenseBase<Derived> &profile)
    {
        if (profile.size() == 0)
            throw std::invalid_argument("gain_ripple_db: empty profile");
        return to_db(profile.maxCoeff()) - to_db(profile.minCoeff());
    }

    // Patterns at several frequencies. global_peak subtracts the largest gain found across the
    // whole family so relative levels between frequencies survive.
    template <typename Real>
    std::vector<BeamPattern<Real>> beam_patterns(const CVector<Real> &w, const ArrayGeometry<Real> &geom,
                                                 std::span<const Real> freqs_hz, const RVector<Real> &theta_grid_rad,
                                                 Normalization normalization)
    {
        if (theta_grid_rad.size() == 0)
            throw std::invalid_argument("beam_pattern: empty theta grid");
        if (freqs_hz.empty())
            throw std::invalid_argument("beam_pattern: no frequencies");
        for (Eigen::Index i = 1; i < theta_grid_rad.size(); ++i)
            if (!(theta_grid_rad(i) >= theta_grid_rad(i - 1)))
                throw std::invalid_argument("beam_pattern: theta grid must be sorted");
        if (w.size() != geom.num_sensors)
            throw std::invalid_argument("beam_pattern: weight length does not match the array");

        std::vector<BeamPattern<Real>> family;
        family.reserve(freqs_hz.size());
        for (Real f : freqs_hz)
        {
            BeamPattern<Real> p{theta_grid_rad, f, RVector<Real>(theta_grid_rad.size()), normalization};
            for (Eigen::Index i = 0; i < theta_grid_rad.size(); ++i)
                p.gains_db(i) = to_db(std::abs(w.dot(steering_vector(geom, theta_grid_rad(i), f).entries)));
            family.push_back(std::move(p));
        }

        if (normalization == Normalization::per_frequency_peak)
        {
            for (auto &p : family)
                p.gains_db.array() -= p.gains_db.maxCoeff();
        }
        else if (normalization == Normalization::global_peak)
        {
            Real peak = family.front().gains_db.maxCoeff();
            for (const auto &p : family)
                peak = std::max(peak, p.gains_db.maxCoeff());
            for (auto &p : family)
                p.gains_db.array() -= peak;
        }
        return family;
    }

    template <typename Real>
    std::vector<BeamPattern<Real>> beam_patterns(const WeightVector<Real> &w, const ArrayGeometry<Real> &geom,
                                                 std::span<const Real> freqs_hz, const RVector<Real> &theta_grid_rad,
                                                 Normalization normalization)
    {
        return beam_patterns(w.weights, geom, freqs_hz, theta_grid_rad, normalization);
    }

    template <typename Real>
    BeamPattern<Real> beam_pattern(const WeightVector<Real> &w, const ArrayGeometry<Real> &geom, Real freq_hz,
                                   const RVector<Real> &theta_grid_rad, Normalization normalization)
    {
        const Real f[1] = {freq_hz};
        return std::move(beam_patterns(w.weights, geom, std::span<const Real>(f), theta_grid_rad, normalization).front());
    }
}
