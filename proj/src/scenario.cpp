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


#include "wbf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace wbf
{
    namespace
    {
        bool valid_doa(double theta) { return std::isfinite(theta) && std::abs(theta) <= std::numbers::pi / 2.0; }

        // Steering columns of every synthesized component and their per-component powers.
        struct ComponentModel
        {
            CMatrix<double> steering;
            Eigen::VectorXd power;
        };

        ComponentModel build_components(const Scenario &scn, bool include_soi, bool include_interferers)
        {
            const double ps = scn.soi_power();
            const double pi = scn.interferer_power();
            const auto ks = Eigen::Index(scn.sim_freqs_hz.size());
            const auto ki = Eigen::Index(scn.interferer_freqs_hz.size());
            const auto j = Eigen::Index(scn.interferer_doas_rad.size());

            Eigen::Index count = 0;
            if (include_soi && ps > 0.0)
                count += ks;
            if (include_interferers && pi > 0.0)
                count += j * ki;

            ComponentModel m{CMatrix<double>(scn.geometry.num_sensors, count), Eigen::VectorXd(count)};
            Eigen::Index c = 0;
            if (include_soi && ps > 0.0)
                for (double f : scn.sim_freqs_hz)
                {
                    m.steering.col(c) = steering_vector(scn.geometry, scn.soi_doa_rad, f).entries;
                    m.power(c++) = ps / double(ks);
                }
            if (include_interferers && pi > 0.0)
                for (double doa : scn.interferer_doas_rad)
                    for (double f : scn.interferer_freqs_hz)
                    {
                        m.steering.col(c) = steering_vector(scn.geometry, doa, f).entries;
                        m.power(c++) = pi / double(ki);
                    }
            return m;
        }

        CMatrix<double> component_covariance(const ComponentModel &m)
        {
            return m.steering * m.power.cast<Complex<double>>().asDiagonal() * m.steering.adjoint();
        }
    }

    double Scenario::soi_power() const
    {
        return std::pow(10.0, snr_db / 10.0);
    }

    double Scenario::interferer_power() const
    {
        return soi_power() / std::pow(10.0, sir_db / 10.0);
    }

    void Scenario::validate() const
    {
        try
        {
            geometry.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ScenarioError("array", e.what());
        }
        if (!valid_doa(soi_doa_rad))
            throw ScenarioError("soi_doa_deg", "must lie in the visible region ([-90, 90] from broadside, [0, 180] from the axis)");
        for (double doa : interferer_doas_rad)
            if (!valid_doa(doa))
                throw ScenarioError("interferer_doas_deg", "every entry must lie in the visible region");

        if (!(band_lo_hz > 0.0) || !std::isfinite(band_hi_hz) || !(band_lo_hz < band_hi_hz))
            throw ScenarioError("band_hz", "need 0 < lo < hi");

        if (constraint_freqs_hz.empty())
            throw ScenarioError("constraint_freqs_hz", "at least one constraint frequency is required");
        for (std::size_t i = 0; i < constraint_freqs_hz.size(); ++i)
        {
            const double f = constraint_freqs_hz[i];
            if (!(f >= band_lo_hz && f <= band_hi_hz))
            {
                char buf[96];
                std::snprintf(buf, sizeof buf, "frequency %.12g Hz lies outside the band [%.12g, %.12g]", f,
                              band_lo_hz, band_hi_hz);
                throw ScenarioError("constraint_freqs_hz", buf);
            }
            if (i > 0 && !(f > constraint_freqs_hz[i - 1]))
                throw ScenarioError("constraint_freqs_hz", "frequencies must be strictly increasing (no duplicates)");
        }
        if (Eigen::Index(constraint_freqs_hz.size()) > geometry.num_sensors)
            throw ScenarioError("constraint_freqs_hz", "more constraint frequencies than sensors");

        if (sim_freqs_hz.empty())
            throw ScenarioError("sim_freqs_hz", "at least one synthesis frequency is required");
        for (double f : sim_freqs_hz)
            if (!(f > 0.0) || !std::isfinite(f))
                throw ScenarioError("sim_freqs_hz", "frequencies must be positive and finite");
        if (!interferer_doas_rad.empty() && interferer_freqs_hz.empty())
            throw ScenarioError("interferer_freqs_hz", "interferers need at least one synthesis frequency");
        for (double f : interferer_freqs_hz)
            if (!(f > 0.0) || !std::isfinite(f))
                throw ScenarioError("interferer_freqs_hz", "frequencies must be positive and finite");

        if (!(mvdr_freq_hz > 0.0) || !std::isfinite(mvdr_freq_hz))
            throw ScenarioError("mvdr_freq_hz", "must be positive and finite");
        if (std::isnan(snr_db) || snr_db == std::numeric_limits<double>::infinity())
            throw ScenarioError("snr_db", "must be finite or -inf");
        if (!std::isfinite(sir_db))
            throw ScenarioError("sir_db", "must be finite");
        if (num_snapshots < 1)
            throw ScenarioError("num_snapshots", "must be at least 1");
        if (num_trials < 1)
            throw ScenarioError("num_trials", "must be at least 1");
        if (constraint_gain_b == Complex<double>(0.0) || !std::isfinite(constraint_gain_b.real()) ||
            !std::isfinite(constraint_gain_b.imag()))
            throw ScenarioError("constraint_gain_b", "must be nonzero and finite");
        if (!(loading_rel >= 0.0) || !std::isfinite(loading_rel))
            throw ScenarioError("diagonal_loading", "must be nonnegative and finite");
        if (sweep_points < 2)
            throw ScenarioError("sweep_points", "must be at least 2");
    }

    std::vector<double> linspace(double lo, double hi, int count)
    {
        if (count < 1)
            throw std::invalid_argument("linspace: count must be positive");
        if (count == 1)
            return {lo};
        std::vector<double> out(static_cast<std::size_t>(count));
        const double step = (hi - lo) / double(count - 1);
        for (int i = 0; i < count; ++i)
            out[std::size_t(i)] = lo + step * double(i);
        out.back() = hi;
        return out;
    }

    Scenario paper_scenario()
    {
        Scenario s;
        s.geometry = {8, half_wavelength_spacing(3.6e9), speed_of_light_mps};
        s.angle_reference = AngleReference::array_axis;
        s.soi_doa_rad = doa_to_broadside_rad(50.0, s.angle_reference);
        s.interferer_doas_rad = {doa_to_broadside_rad(80.0, s.angle_reference)};
        s.band_lo_hz = 3.50e9;
        s.band_hi_hz = 3.60e9;
        s.constraint_freqs_hz = {3.50e9, 3.52e9, 3.55e9, 3.57e9, 3.60e9};
        s.sim_freqs_hz = linspace(s.band_lo_hz, s.band_hi_hz, 21);
        s.interferer_freqs_hz = s.sim_freqs_hz;
        s.mvdr_freq_hz = 3.55e9;
        s.snr_db = 20.0;
        s.sir_db = 10.0 * std::log10(0.5);
        s.num_snapshots = 64;
        s.num_trials = 500;
        s.rng_seed = 20100501;
        return s;
    }

    SnapshotMatrix generate_snapshots(const Scenario &scn, std::uint64_t trial_index)
    {
        return generate_snapshots(scn, trial_index, scn.num_snapshots);
    }

    SnapshotMatrix generate_snapshots(const Scenario &scn, std::uint64_t trial_index, Eigen::Index num_snapshots)
    {
        if (num_snapshots < 1)
            throw std::invalid_argument("generate_snapshots: need at least one snapshot");

        std::seed_seq seq{std::uint32_t(scn.rng_seed), std::uint32_t(scn.rng_seed >> 32),
                          std::uint32_t(trial_index), std::uint32_t(trial_index >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss(0.0, 1.0);

        const ComponentModel m = build_components(scn, true, true);
        const Eigen::Index n = scn.geometry.num_sensors;
        const Eigen::Index c = m.power.size();
        // Circular complex Gaussian with variance p: real and imaginary parts each carry p/2.
        const Eigen::VectorXd amp_scale = (m.power / 2.0).cwiseSqrt();
        const double noise_scale = std::sqrt(0.5);

        SnapshotMatrix x(n, num_snapshots);
        constexpr Eigen::Index block = 4096;
        CMatrix<double> amps(c, block);
        for (Eigen::Index start = 0; start < num_snapshots; start += block)
        {
            const Eigen::Index len = std::min(block, num_snapshots - start);
            for (Eigen::Index t = 0; t < len; ++t)
                for (Eigen::Index i = 0; i < c; ++i)
                {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    amps(i, t) = Complex<double>(re, im) * amp_scale(i);
                }
            auto xb = x.middleCols(start, len);
            for (Eigen::Index t = 0; t < len; ++t)
                for (Eigen::Index r = 0; r < n; ++r)
                {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    xb(r, t) = Complex<double>(re, im) * noise_scale;
                }
            if (c > 0)
                xb.noalias() += m.steering * amps.leftCols(len);
        }
        return x;
    }

    CMatrix<double> signal_covariance(const Scenario &scn)
    {
        return component_covariance(build_components(scn, true, false));
    }

    CMatrix<double> interference_plus_noise_covariance(const Scenario &scn)
    {
        CMatrix<double> r = component_covariance(build_components(scn, false, true));
        r.diagonal().array() += 1.0;
        return r;
    }

    CovarianceMatrix<double> ideal_covariance(const Scenario &scn)
    {
        const ComponentModel m = build_components(scn, true, true);
        CMatrix<double> r = component_covariance(m);
        r.diagonal().array() += 1.0;
        return CovarianceMatrix<double>(std::move(r));
    }

    CovarianceMatrix<double> loaded_sample_covariance(const SnapshotMatrix &x, double loading_rel)
    {
        const auto raw = sample_covariance(x);
        const double delta = loading_rel * raw.matrix().trace().real() / double(raw.size());
        return CovarianceMatrix<double>(raw.matrix(), delta);
    }
}
