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


#include "wbf/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "wbf/pattern.hpp"

namespace wbf
{
    namespace
    {
        std::string freq_label(double f)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12g", f);
            return buf;
        }

        // Accumulates one scalar across trials in index order.
        struct Series
        {
            std::vector<double> values;

            MetricStats stats() const
            {
                double sum = 0.0;
                for (double v : values)
                    sum += v;
                const double mean = sum / double(values.size());
                double ss = 0.0;
                for (double v : values)
                    ss += (v - mean) * (v - mean);
                return {mean, std::sqrt(ss / double(values.size()))};
            }
        };

        MethodSummary summarize(std::string method, const std::vector<TrialMetrics> &trials)
        {
            const auto pick = [&](auto &&get) {
                Series s;
                s.values.reserve(trials.size());
                for (const auto &t : trials)
                    s.values.push_back(get(t));
                return s.stats();
            };

            MethodSummary out;
            out.method = std::move(method);
            out.soi_gain_ripple_db = pick([](const TrialMetrics &t) { return t.soi_gain_ripple_db; });
            out.soi_mean_gain_db = pick([](const TrialMetrics &t) { return t.soi_mean_gain_db; });
            out.output_sinr_db = pick([](const TrialMetrics &t) { return t.output_sinr_db; });
            out.objective_value = pick([](const TrialMetrics &t) { return t.objective_value; });

            const std::size_t nf = trials.front().soi_gain_db.size();
            for (std::size_t f = 0; f < nf; ++f)
                out.soi_gain_db.push_back(pick([f](const TrialMetrics &t) { return t.soi_gain_db[f]; }));

            const std::size_t nj = trials.front().interferer_gain_db.size();
            out.interferer_gain_db.resize(nj);
            for (std::size_t j = 0; j < nj; ++j)
                for (std::size_t f = 0; f < nf; ++f)
                    out.interferer_gain_db[j].push_back(
                        pick([j, f](const TrialMetrics &t) { return t.interferer_gain_db[j][f]; }));
            return out;
        }

        struct TrialResult
        {
            TrialMetrics mvdr;
            TrialMetrics mvmfdr;
        };

        TrialResult run_trial(const Scenario &scn, const CovarianceMatrix<double> &cov)
        {
            const MethodWeights w = solve_methods(scn, cov);
            return {evaluate_metrics(w.mvdr, scn), evaluate_metrics(w.mvmfdr, scn)};
        }

        ComparisonReport reduce(const Scenario &scn, const std::vector<TrialResult> &results, CovarianceSource src)
        {
            std::vector<TrialMetrics> a, b;
            a.reserve(results.size());
            b.reserve(results.size());
            for (const auto &r : results)
            {
                a.push_back(r.mvdr);
                b.push_back(r.mvmfdr);
            }
            ComparisonReport rep;
            rep.report_freqs_hz = scn.constraint_freqs_hz;
            rep.num_trials = results.size();
            rep.covariance_source = src;
            rep.mvdr = summarize("mvdr", a);
            rep.mvmfdr = summarize("mvmfdr", b);
            return rep;
        }
    }

    double output_sinr_db(const CVector<double> &w, const Scenario &scn)
    {
        if (w.size() != scn.geometry.num_sensors)
            throw std::invalid_argument("output_sinr_db: weight length does not match the array");
        const double signal = (w.adjoint() * signal_covariance(scn) * w)(0).real();
        const double rest = (w.adjoint() * interference_plus_noise_covariance(scn) * w)(0).real();
        if (!(rest > 0.0))
            throw NumericalError("output_sinr_db: interference-plus-noise power is zero (zero weights?)");
        return power_to_db(signal / rest);
    }

    MethodWeights solve_methods(const Scenario &scn, const CovarianceMatrix<double> &cov)
    {
        const auto a = steering_vector(scn.geometry, scn.soi_doa_rad, scn.mvdr_freq_hz);
        const auto cs = distortionless_constraints(scn.geometry, scn.soi_doa_rad,
                                                   std::span<const double>(scn.constraint_freqs_hz),
                                                   scn.constraint_gain_b);
        return {mvdr_weights(cov, a), mvmfdr_weights(cov, cs)};
    }

    TrialMetrics evaluate_metrics(const WeightVector<double> &w, const Scenario &scn)
    {
        const auto &geom = scn.geometry;
        const std::vector<double> sweep = linspace(scn.band_lo_hz, scn.band_hi_hz, scn.sweep_points);
        const Eigen::VectorXd profile = soi_gain_profile(w, geom, scn.soi_doa_rad, std::span<const double>(sweep));

        TrialMetrics m;
        m.soi_gain_ripple_db = gain_ripple_db(profile);
        m.soi_mean_gain_db = profile.unaryExpr([](double g) { return to_db(g); }).mean();

        const auto &freqs = scn.constraint_freqs_hz;
        const Eigen::VectorXd at_freqs = soi_gain_profile(w, geom, scn.soi_doa_rad, std::span<const double>(freqs));
        for (Eigen::Index i = 0; i < at_freqs.size(); ++i)
            m.soi_gain_db.push_back(to_db(at_freqs(i)));

        for (double doa : scn.interferer_doas_rad)
        {
            const Eigen::VectorXd g = soi_gain_profile(w, geom, doa, std::span<const double>(freqs));
            std::vector<double> row;
            for (Eigen::Index i = 0; i < g.size(); ++i)
                row.push_back(to_db(g(i)));
            m.interferer_gain_db.push_back(std::move(row));
        }

        m.output_sinr_db = output_sinr_db(w.weights, scn);
        m.objective_value = w.objective_value;
        return m;
    }

    std::vector<std::pair<std::string, MetricStats>> MethodSummary::rows(const std::vector<double> &freqs_hz) const
    {
        std::vector<std::pair<std::string, MetricStats>> out;
        out.emplace_back("soi_gain_ripple_db", soi_gain_ripple_db);
        out.emplace_back("soi_mean_gain_db", soi_mean_gain_db);
        for (std::size_t f = 0; f < soi_gain_db.size() && f < freqs_hz.size(); ++f)
            out.emplace_back("soi_gain_db@" + freq_label(freqs_hz[f]), soi_gain_db[f]);
        for (std::size_t j = 0; j < interferer_gain_db.size(); ++j)
            for (std::size_t f = 0; f < interferer_gain_db[j].size() && f < freqs_hz.size(); ++f)
                out.emplace_back("interferer_gain_db[" + std::to_string(j) + "]@" + freq_label(freqs_hz[f]),
                                 interferer_gain_db[j][f]);
        out.emplace_back("output_sinr_db", output_sinr_db);
        out.emplace_back("objective_value", objective_value);
        return out;
    }

    ComparisonReport analyze(const Scenario &scn, const CovarianceMatrix<double> &cov, CovarianceSource source)
    {
        scn.validate();
        return reduce(scn, {run_trial(scn, cov)}, source);
    }

    ComparisonReport monte_carlo_compare(const Scenario &scn, const MonteCarloOptions &options)
    {
        scn.validate();
        const auto trials = std::size_t(scn.num_trials);
        const Eigen::Index snapshots = options.snapshots_override > 0 ? options.snapshots_override : scn.num_snapshots;

        std::optional<CovarianceMatrix<double>> ideal;
        if (options.covariance_source == CovarianceSource::ideal)
            ideal = ideal_covariance(scn);

        std::vector<TrialResult> results(trials);
        std::vector<std::exception_ptr> errors(trials);
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};

        const auto worker = [&] {
            for (std::size_t t; !failed.load() && (t = next.fetch_add(1)) < trials;)
            {
                try
                {
                    if (ideal)
                        results[t] = run_trial(scn, *ideal);
                    else
                        results[t] = run_trial(
                            scn, loaded_sample_covariance(generate_snapshots(scn, t, snapshots), scn.loading_rel));
                }
                catch (...)
                {
                    errors[t] = std::current_exception();
                    failed.store(true);
                }
            }
        };

        unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
        threads = unsigned(std::min<std::size_t>(threads, trials));
        if (threads <= 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            for (unsigned i = 0; i < threads; ++i)
                pool.emplace_back(worker);
        }

        // Lowest failing index wins so the reported trial does not depend on scheduling.
        for (std::size_t t = 0; t < trials; ++t)
            if (errors[t])
            {
                try
                {
                    std::rethrow_exception(errors[t]);
                }
                catch (const std::exception &e)
                {
                    throw TrialError(t, e.what());
                }
            }

        return reduce(scn, results, options.covariance_source);
    }
}
