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

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wbf/beamform.hpp"
#include "wbf/covariance.hpp"
#include "wbf/scenario.hpp"

namespace wbf
{
    enum class CovarianceSource
    {
        ideal,
        sample,
    };

    // SINR of the array output with the exact source covariances:
    // (w^H Rs w) / (w^H (Ri + I) w), in dB. A zero numerator maps to db_floor.
    double output_sinr_db(const CVector<double> &w, const Scenario &scn);

    struct MethodWeights
    {
        WeightVector<double> mvdr;   // single distortionless constraint at scn.mvdr_freq_hz
        WeightVector<double> mvmfdr; // one constraint per scn.constraint_freqs_hz
    };

    MethodWeights solve_methods(const Scenario &scn, const CovarianceMatrix<double> &cov);

    // Figures of merit for one weight vector. Frequencies listed per-entry follow
    // scn.constraint_freqs_hz; ripple and mean gain use a sweep_points grid over the band.
    struct TrialMetrics
    {
        double soi_gain_ripple_db{};
        double soi_mean_gain_db{};
        std::vector<double> soi_gain_db;                      // [constraint freq]
        std::vector<std::vector<double>> interferer_gain_db;  // [interferer][constraint freq]
        double output_sinr_db{};
        double objective_value{};
    };

    TrialMetrics evaluate_metrics(const WeightVector<double> &w, const Scenario &scn);

    struct MetricStats
    {
        double mean{};
        double std{}; // population standard deviation over trials

        bool operator==(const MetricStats &) const = default;
    };

    struct MethodSummary
    {
        std::string method;
        MetricStats soi_gain_ripple_db;
        MetricStats soi_mean_gain_db;
        std::vector<MetricStats> soi_gain_db;
        std::vector<std::vector<MetricStats>> interferer_gain_db;
        MetricStats output_sinr_db;
        MetricStats objective_value;

        // Flattened (metric name, stats) rows, e.g. "soi_gain_db@3.5e+09".
        std::vector<std::pair<std::string, MetricStats>> rows(const std::vector<double> &freqs_hz) const;

        bool operator==(const MethodSummary &) const = default;
    };

    struct ComparisonReport
    {
        std::vector<double> report_freqs_hz;
        std::size_t num_trials = 0;
        CovarianceSource covariance_source = CovarianceSource::ideal;
        MethodSummary mvdr;
        MethodSummary mvmfdr;

        bool operator==(const ComparisonReport &) const = default;
    };

    // Single-shot comparison on a given covariance (all std fields are zero).
    ComparisonReport analyze(const Scenario &scn, const CovarianceMatrix<double> &cov,
                             CovarianceSource source = CovarianceSource::ideal);

    struct MonteCarloOptions
    {
        CovarianceSource covariance_source = CovarianceSource::sample;
        unsigned threads = 0; // 0 picks the hardware concurrency
        // Overrides scn.num_snapshots when positive.
        Eigen::Index snapshots_override = 0;
    };

    // Runs scn.num_trials independent trials. Each trial draws snapshots, forms the loaded sample
    // covariance (or uses the ideal one), solves both beamformers and scores them. Results are
    // reduced in trial order, so the report does not depend on scheduling. A numerical failure
    // in any trial throws TrialError.
    ComparisonReport monte_carlo_compare(const Scenario &scn, const MonteCarloOptions &options = {});

    class TrialError : public NumericalError
    {
    public:
        TrialError(std::size_t trial, const std::string &what)
            : NumericalError("trial " + std::to_string(trial) + ": " + what), trial_(trial) {}

        std::size_t trial() const { return trial_; }

    private:
        std::size_t trial_;
    };
}
