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

#include "wbf/analysis.hpp"
#include "wbf/scenario.hpp"

using namespace wbf;
using Catch::Approx;

TEST_CASE("Analysis - metric shapes and row names")
{
    const Scenario s = paper_scenario();
    const auto rep = analyze(s, ideal_covariance(s));
    CHECK(rep.num_trials == 1);
    CHECK(rep.mvdr.soi_gain_db.size() == 5);
    REQUIRE(rep.mvdr.interferer_gain_db.size() == 1);
    CHECK(rep.mvdr.interferer_gain_db[0].size() == 5);
    CHECK(rep.mvdr.output_sinr_db.std == 0.0);

    const auto rows = rep.mvmfdr.rows(rep.report_freqs_hz);
    REQUIRE(rows.size() == 2 + 5 + 5 + 2);
    CHECK(rows[0].first == "soi_gain_ripple_db");
    CHECK(rows[2].first == "soi_gain_db@3500000000");
    CHECK(rows[7].first == "interferer_gain_db[0]@3500000000");
    CHECK(rows.back().first == "objective_value");
    for (const auto &v : rep.mvmfdr.soi_gain_db)
        CHECK(v.mean == Approx(0.0).margin(1e-7));
}

TEST_CASE("Analysis - evaluate_metrics agrees with direct computation")
{
    const Scenario s = paper_scenario();
    const auto m = solve_methods(s, ideal_covariance(s));
    const auto t = evaluate_metrics(m.mvdr, s);
    CHECK(t.objective_value == m.mvdr.objective_value);
    CHECK(t.soi_gain_db[2] == Approx(0.0).margin(1e-10)); // 3.55 GHz is the MVDR design frequency
    CHECK(t.soi_gain_ripple_db == Approx(0.0307554104801095).epsilon(1e-9));
    CHECK(t.output_sinr_db == Approx(output_sinr_db(m.mvdr.weights, s)));
}

TEST_CASE("Monte Carlo - one trial on the ideal covariance equals the single-shot analysis")
{
    Scenario s = paper_scenario();
    s.num_trials = 1;
    MonteCarloOptions opt;
    opt.covariance_source = CovarianceSource::ideal;
    auto mc = monte_carlo_compare(s, opt);
    const auto single = analyze(s, ideal_covariance(s));
    CHECK(mc == single);
}

TEST_CASE("Monte Carlo - results do not depend on the thread count")
{
    Scenario s = paper_scenario();
    s.num_trials = 24;
    MonteCarloOptions one;
    one.threads = 1;
    MonteCarloOptions four;
    four.threads = 4;
    const auto a = monte_carlo_compare(s, one);
    const auto b = monte_carlo_compare(s, four);
    CHECK(a == b);
    CHECK(monte_carlo_compare(s, four) == b);

    s.rng_seed += 1;
    CHECK_FALSE(monte_carlo_compare(s, one) == a);
}

TEST_CASE("Monte Carlo - long records converge to the ideal-covariance figures")
{
    Scenario s = paper_scenario();
    s.num_trials = 10;
    MonteCarloOptions opt;
    opt.snapshots_override = 100000;
    const auto mc = monte_carlo_compare(s, opt);
    const auto ideal = analyze(s, ideal_covariance(s));

    CHECK(mc.mvdr.output_sinr_db.mean == Approx(ideal.mvdr.output_sinr_db.mean).epsilon(0.02));
    CHECK(mc.mvmfdr.output_sinr_db.mean == Approx(ideal.mvmfdr.output_sinr_db.mean).epsilon(0.02));
    CHECK(mc.mvdr.objective_value.mean == Approx(ideal.mvdr.objective_value.mean).epsilon(0.02));
    CHECK(mc.mvmfdr.objective_value.mean == Approx(ideal.mvmfdr.objective_value.mean).epsilon(0.02));
    CHECK(mc.mvdr.soi_gain_ripple_db.mean == Approx(ideal.mvdr.soi_gain_ripple_db.mean).margin(0.02));
}

TEST_CASE("Monte Carlo - a rank-deficient trial reports its index")
{
    Scenario s = paper_scenario();
    s.num_trials = 3;
    s.num_snapshots = 2;
    s.loading_rel = 0.0;
    try
    {
        monte_carlo_compare(s);
        FAIL("expected a TrialError");
    }
    catch (const TrialError &e)
    {
        CHECK(e.trial() == 0);
        CHECK(std::string(e.what()).rfind("trial 0:", 0) == 0);
    }
}

TEST_CASE("Monte Carlo - invalid scenarios are rejected before any trial runs")
{
    Scenario s = paper_scenario();
    s.num_trials = 0;
    CHECK_THROWS_AS(monte_carlo_compare(s), ScenarioError);
}
