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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wbf/array_model.hpp"
#include "wbf/covariance.hpp"
#include "wbf/types.hpp"

namespace wbf
{
    // Sensors along rows, snapshots along columns.
    using SnapshotMatrix = CMatrix<double>;

    // Invalid scenario description. field() names the offending entry.
    class ScenarioError : public std::invalid_argument
    {
    public:
        ScenarioError(std::string field, const std::string &message)
            : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

        const std::string &field() const { return field_; }

    private:
        std::string field_;
    };

    // A complete wideband array experiment. Noise is unit-power per sensor, so the SOI's total
    // power is 10^(snr_db/10) and each interferer carries that divided by 10^(sir_db/10). Every
    // source's power is split equally across its synthesis frequencies.
    struct Scenario
    {
        ArrayGeometry<double> geometry{8, half_wavelength_spacing(3.6e9), speed_of_light_mps};
        double soi_doa_rad = 0.0;
        std::vector<double> interferer_doas_rad;
        double band_lo_hz = 1.0;
        double band_hi_hz = 2.0;
        std::vector<double> constraint_freqs_hz;
        std::vector<double> sim_freqs_hz;        // SOI synthesis components
        std::vector<double> interferer_freqs_hz; // interferer synthesis components
        double mvdr_freq_hz = 0.0;               // single-frequency reference for MVDR
        double snr_db = 0.0;
        double sir_db = 0.0;
        int num_snapshots = 64;
        int num_trials = 1;
        std::uint64_t rng_seed = 0;
        Complex<double> constraint_gain_b{1.0, 0.0};
        double loading_rel = 1e-6; // diagonal loading in units of trace(R)/N for sample covariances
        int sweep_points = 101;    // dense frequency grid for ripple and mean gain
        // Convention for DOAs quoted in degrees (config files, reports). Angles stored above are
        // always broadside radians.
        AngleReference angle_reference = AngleReference::broadside;

        double soi_power() const;
        double interferer_power() const;

        // Throws ScenarioError naming the first violated field.
        void validate() const;
    };

    // count equally spaced points covering [lo, hi] inclusive.
    std::vector<double> linspace(double lo, double hi, int count);

    // The reference experiment: 8-sensor half-wavelength ULA at 3.6 GHz, SOI at 50 deg and one
    // interferer at 80 deg (both from the array axis), 20 dB SNR, SIR 1/2, 64 snapshots, 500
    // trials, band 3.50-3.60 GHz, five constraint frequencies and 21 synthesis components.
    Scenario paper_scenario();

    // Seeded draw of num_snapshots snapshots. The generator state depends only on
    // (scn.rng_seed, trial_index), so distinct trials can be generated in any order or concurrently.
    SnapshotMatrix generate_snapshots(const Scenario &scn, std::uint64_t trial_index);

    // As above with an explicit snapshot count.
    SnapshotMatrix generate_snapshots(const Scenario &scn, std::uint64_t trial_index, Eigen::Index num_snapshots);

    // Exact covariance of the generative model: signal + interference + identity.
    CovarianceMatrix<double> ideal_covariance(const Scenario &scn);

    // SOI-only part of ideal_covariance.
    CMatrix<double> signal_covariance(const Scenario &scn);

    // Interferers plus unit noise.
    CMatrix<double> interference_plus_noise_covariance(const Scenario &scn);

    // Sample covariance with the scenario's default relative loading (loading_rel * trace / N).
    CovarianceMatrix<double> loaded_sample_covariance(const SnapshotMatrix &x, double loading_rel);
}
