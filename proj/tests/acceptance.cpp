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


// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "wbf/analysis.hpp"
#include "wbf/beamform.hpp"
#include "wbf/cli.hpp"
#include "wbf/pattern.hpp"
#include "wbf/scenario.hpp"

using namespace wbf;

namespace
{
    using Clock = std::chrono::steady_clock;

    int failures = 0;

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    void report(int id, const char *name, bool ok, const std::string &detail)
    {
        std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
        std::fflush(stdout);
        if (!ok)
            ++failures;
    }

    std::string fmt(const char *f, auto... args)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, f, args...);
        return buf;
    }

    std::span<const double> as_span(const std::vector<double> &v) { return {v.data(), v.size()}; }

    const ArrayGeometry<double> ula8{8, half_wavelength_spacing(3.6e9), speed_of_light_mps};

    ConstraintSet<double> random_constraints(Eigen::Index k, std::mt19937_64 &rng)
    {
        auto [a, b] = testing::random_constraint_data(8, k, rng);
        return {std::move(a), std::move(b)};
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    void constraint_satisfaction()
    {
        const auto t0 = Clock::now();
        const Scenario s = paper_scenario();
        const auto cs = distortionless_constraints(s.geometry, s.soi_doa_rad, as_span(s.constraint_freqs_hz));
        const auto w = mvmfdr_weights(ideal_covariance(s), cs);
        double worst = 0.0;
        for (double f : s.constraint_freqs_hz)
            worst = std::max(worst, std::abs(w.response(steering_vector(s.geometry, s.soi_doa_rad, f).entries) - 1.0));
        const double dt = seconds_since(t0);
        report(1, "constraint satisfaction", worst < 1e-8 && dt < 1.0,
               fmt("max_k |w^H a - 1| = %.3e (< 1e-8), %.3f s (< 1 s)", worst, dt));
    }

    void closed_form_vs_kkt()
    {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(20100501);
        const Eigen::Index ks[3] = {1, 3, 5};
        double worst = 0.0;
        for (int i = 0; i < 100; ++i)
        {
            const CovarianceMatrix<double> r(testing::random_hpd(8, rng));
            const auto cs = random_constraints(ks[i % 3], rng);
            const auto w = mvmfdr_weights(r, cs);
            const auto k = kkt_oracle(r, cs);
            worst = std::max(worst, testing::rel_diff(w.weights, k.weights));
        }
        const double dt = seconds_since(t0);
        report(2, "closed form vs KKT", worst < 1e-10 && dt < 5.0,
               fmt("max relative weight difference = %.3e over 100 instances (< 1e-10), %.3f s (< 5 s)", worst, dt));
    }

    void mvdr_collapse()
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> angle(deg_to_rad(-80.0), deg_to_rad(80.0));
        std::uniform_real_distribution<double> freq(1.8e9, 3.6e9);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i)
        {
            const CovarianceMatrix<double> r(testing::random_hpd(8, rng));
            const double th = angle(rng);
            const double f[1] = {freq(rng)};
            const auto a = steering_vector(ula8, th, f[0]);
            const auto w1 = mvdr_weights(r, a);
            const auto wk = mvmfdr_weights(r, distortionless_constraints(ula8, th, std::span<const double>(f)));
            worst = std::max(worst, testing::rel_diff(wk.weights, w1.weights));
        }
        report(3, "MVDR collapse", worst < 1e-12,
               fmt("max relative difference K=1 MVMFDR vs MVDR = %.3e over 100 instances (< 1e-12)", worst));
    }

    struct SweepResult
    {
        double ripple_mvdr, ripple_mvmfdr;
        double edge_mvdr[2], edge_mvmfdr[2];
    };

    SweepResult paper_sweep()
    {
        const Scenario s = paper_scenario();
        const auto m = solve_methods(s, ideal_covariance(s));
        const auto sweep = linspace(s.band_lo_hz, s.band_hi_hz, 101);
        const auto g1 = soi_gain_profile(m.mvdr, s.geometry, s.soi_doa_rad, as_span(sweep));
        const auto g2 = soi_gain_profile(m.mvmfdr, s.geometry, s.soi_doa_rad, as_span(sweep));
        return {gain_ripple_db(g1), gain_ripple_db(g2), {g1(0), g1(100)}, {g2(0), g2(100)}};
    }

    void flatness()
    {
        const auto t0 = Clock::now();
        const SweepResult r = paper_sweep();
        const double dt = seconds_since(t0);
        // Golden values from a 40-digit KKT solve of the paper scenario.
        const double golden_mvdr = 0.0307554104801095;
        const bool golden = std::abs(r.ripple_mvdr - golden_mvdr) < 1e-9 * golden_mvdr && r.ripple_mvmfdr < 1e-7;
        report(4, "band flatness", r.ripple_mvmfdr < r.ripple_mvdr && r.ripple_mvmfdr < 0.5 && golden && dt < 1.0,
               fmt("ripple MVMFDR = %.3e dB, MVDR = %.10f dB (golden %.10f), %.3f s (< 1 s)", r.ripple_mvmfdr,
                   r.ripple_mvdr, golden_mvdr, dt));
    }

    void band_edge_gain()
    {
        const SweepResult r = paper_sweep();
        const bool ok = r.edge_mvmfdr[0] >= r.edge_mvdr[0] && r.edge_mvmfdr[1] >= r.edge_mvdr[1];
        report(5, "band-edge SOI gain", ok,
               fmt("3.50 GHz: MVMFDR %.9f vs MVDR %.9f; 3.60 GHz: MVMFDR %.9f vs MVDR %.9f", r.edge_mvmfdr[0],
                   r.edge_mvdr[0], r.edge_mvmfdr[1], r.edge_mvdr[1]));
    }

    void nesting()
    {
        const Scenario s = paper_scenario();
        const auto ideal = solve_methods(s, ideal_covariance(s));
        double margin = ideal.mvmfdr.objective_value - ideal.mvdr.objective_value;
        std::mt19937_64 rng(6);
        for (std::uint64_t t = 0; t < 100; ++t)
        {
            const auto cov = loaded_sample_covariance(generate_snapshots(s, t), s.loading_rel);
            const auto m = solve_methods(s, cov);
            margin = std::min(margin, m.mvmfdr.objective_value - m.mvdr.objective_value);
            const CovarianceMatrix<double> r(testing::random_hpd(8, rng));
            const auto m2 = solve_methods(s, r);
            margin = std::min(margin, m2.mvmfdr.objective_value - m2.mvdr.objective_value);
        }
        report(6, "nesting monotonicity", margin >= -1e-12,
               fmt("min (obj MVMFDR - obj MVDR) = %.3e over ideal + 200 covariances (>= -1e-12)", margin));
    }

    void full_monte_carlo()
    {
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path() / "wbf_acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);

        cli::RunConfig cfg;
        cfg.scenario = paper_scenario();
        cfg.command = cli::Command::montecarlo;
        cfg.output_path = dir / "mc_a.csv";

        const auto t0 = Clock::now();
        const int rc_a = cli::run(cfg);
        const double dt = seconds_since(t0);
        cfg.output_path = dir / "mc_b.csv";
        const int rc_b = cli::run(cfg);
        const bool identical = rc_a == 0 && rc_b == 0 && slurp(dir / "mc_a.csv") == slurp(dir / "mc_b.csv");

        const auto rep = monte_carlo_compare(cfg.scenario);
        const auto &a = rep.mvdr;
        const auto &b = rep.mvmfdr;
        const bool flat = b.soi_gain_ripple_db.mean < a.soi_gain_ripple_db.mean && b.soi_gain_ripple_db.mean < 0.5;
        const double lo_gap = b.soi_gain_db.front().mean - a.soi_gain_db.front().mean;
        const double hi_gap = b.soi_gain_db.back().mean - a.soi_gain_db.back().mean;
        const bool edges = lo_gap >= 0.0 && hi_gap >= 0.0;
        // Standard error of the MVDR trial mean, for reading the edge gaps.
        const double se = std::max(a.soi_gain_db.front().std, a.soi_gain_db.back().std) / std::sqrt(double(rep.num_trials));

        report(7, "full Monte Carlo", identical && dt < 60.0 && flat && edges,
               fmt("500 trials in %.2f s (< 60 s), byte-identical=%s; mean ripple MVMFDR %.3e dB vs MVDR %.4f dB; "
                   "mean edge gain MVMFDR - MVDR: 3.50 GHz %+.4f dB, 3.60 GHz %+.4f dB (both >= 0; MVDR mean s.e. %.4f dB)",
                   dt, identical ? "yes" : "no", b.soi_gain_ripple_db.mean, a.soi_gain_ripple_db.mean, lo_gap, hi_gap,
                   se));
        fs::remove_all(dir);
    }

    void statistical_sanity()
    {
        Scenario noise = paper_scenario();
        noise.snr_db = -std::numeric_limits<double>::infinity();
        noise.interferer_doas_rad.clear();
        const auto r = sample_covariance(generate_snapshots(noise, 0, 10000));
        const double err_noise = (r.matrix() - CMatrix<double>::Identity(8, 8)).cwiseAbs().maxCoeff();

        const Scenario s = paper_scenario();
        const auto ideal = ideal_covariance(s);
        const auto sample = sample_covariance(generate_snapshots(s, 0, 1000000));
        // Compared relative to the largest covariance entry (~301): the absolute entry error of a
        // 1e6-snapshot estimate of a 300-power field is ~0.3.
        const double scale = ideal.matrix().cwiseAbs().maxCoeff();
        const double err_abs = (sample.matrix() - ideal.matrix()).cwiseAbs().maxCoeff();
        report(8, "statistical sanity", err_noise < 0.1 && err_abs / scale < 0.05,
               fmt("noise-only T=1e4: ||R - I||_max = %.4f (< 0.1); T=1e6: ||R_hat - R||_max / ||R||_max = %.2e "
                   "(< 0.05, absolute %.3f)",
                   err_noise, err_abs / scale, err_abs));
    }
}

int main()
{
    const auto t0 = Clock::now();
    const std::pair<int, void (*)()> checks[] = {
        {1, constraint_satisfaction}, {2, closed_form_vs_kkt}, {3, mvdr_collapse}, {4, flatness},
        {5, band_edge_gain},          {6, nesting},            {7, full_monte_carlo}, {8, statistical_sanity},
    };
    for (const auto &[id, check] : checks)
    {
        try
        {
            check();
        }
        catch (const std::exception &e)
        {
            report(id, "exception", false, e.what());
        }
    }
    std::printf("%d of 8 criteria passed (%.1f s)\n", 8 - failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
