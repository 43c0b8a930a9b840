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


#include "wbf/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

using json = nlohmann::json;

namespace wbf::cli
{
    namespace
    {
        double round12(double v) { return std::strtod(fmt(v).c_str(), nullptr); }

        struct Outputs
        {
            std::optional<MethodWeights> weights;
            std::vector<std::pair<std::string, std::vector<BeamPattern<double>>>> patterns;
            std::vector<std::pair<std::string, Eigen::VectorXd>> sweep;
            std::vector<double> sweep_freqs_hz;
            std::optional<ComparisonReport> report;
        };

        CovarianceMatrix<double> covariance_for(const RunConfig &cfg)
        {
            if (cfg.effective_covariance() == CovarianceSource::ideal)
                return ideal_covariance(cfg.scenario);
            return loaded_sample_covariance(generate_snapshots(cfg.scenario, 0), cfg.scenario.loading_rel);
        }

        void add_patterns(Outputs &out, const RunConfig &cfg)
        {
            const auto &s = cfg.scenario;
            const auto grid = theta_grid<double>(cfg.theta_points);
            const std::span<const double> freqs(s.constraint_freqs_hz);
            out.patterns.emplace_back("mvdr", beam_patterns(out.weights->mvdr, s.geometry, freqs, grid, cfg.normalization));
            out.patterns.emplace_back("mvmfdr",
                                      beam_patterns(out.weights->mvmfdr, s.geometry, freqs, grid, cfg.normalization));
        }

        void add_sweep(Outputs &out, const RunConfig &cfg)
        {
            const auto &s = cfg.scenario;
            out.sweep_freqs_hz = linspace(s.band_lo_hz, s.band_hi_hz, s.sweep_points);
            const std::span<const double> freqs(out.sweep_freqs_hz);
            out.sweep.emplace_back("mvdr", soi_gain_profile(out.weights->mvdr, s.geometry, s.soi_doa_rad, freqs));
            out.sweep.emplace_back("mvmfdr", soi_gain_profile(out.weights->mvmfdr, s.geometry, s.soi_doa_rad, freqs));
        }

        Outputs compute(const RunConfig &cfg)
        {
            const auto &s = cfg.scenario;
            Outputs out;
            switch (cfg.command)
            {
            case Command::solve:
                out.weights = solve_methods(s, covariance_for(cfg));
                break;
            case Command::pattern:
                out.weights = solve_methods(s, covariance_for(cfg));
                add_patterns(out, cfg);
                break;
            case Command::sweep:
                out.weights = solve_methods(s, covariance_for(cfg));
                add_sweep(out, cfg);
                break;
            case Command::montecarlo:
                out.report = monte_carlo_compare(s, {.covariance_source = cfg.effective_covariance()});
                break;
            case Command::compare:
            {
                const auto cov = covariance_for(cfg);
                out.weights = solve_methods(s, cov);
                add_patterns(out, cfg);
                if (cfg.effective_covariance() == CovarianceSource::ideal)
                    out.report = analyze(s, cov, CovarianceSource::ideal);
                else
                    out.report = monte_carlo_compare(s, {.covariance_source = CovarianceSource::sample});
                break;
            }
            }
            return out;
        }

        std::string weights_csv(const MethodWeights &w)
        {
            std::ostringstream os;
            os << "method,sensor,real,imag\n";
            for (const auto &[name, wv] : {std::pair<const char *, const WeightVector<double> *>{"mvdr", &w.mvdr},
                                           {"mvmfdr", &w.mvmfdr}})
                for (Eigen::Index n = 0; n < wv->size(); ++n)
                    os << name << ',' << n << ',' << fmt(wv->weights(n).real()) << ',' << fmt(wv->weights(n).imag())
                       << '\n';
            return os.str();
        }

        // Grid indices in ascending order of the reported angle.
        std::vector<Eigen::Index> report_order(Eigen::Index n, AngleReference ref)
        {
            std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i)
                idx[std::size_t(i)] = ref == AngleReference::broadside ? i : n - 1 - i;
            return idx;
        }

        std::string patterns_csv(const Outputs &out, const Scenario &s)
        {
            std::ostringstream os;
            os << "method,freq_hz,theta_deg,gain_db\n";
            for (const auto &[name, family] : out.patterns)
                for (const auto &p : family)
                    for (Eigen::Index i : report_order(p.theta_grid_rad.size(), s.angle_reference))
                        os << name << ',' << fmt(p.freq_hz) << ','
                           << fmt(broadside_rad_to_doa_deg(p.theta_grid_rad(i), s.angle_reference)) << ','
                           << fmt(p.gains_db(i)) << '\n';
            return os.str();
        }

        std::string sweep_csv(const Outputs &out, const Scenario &s)
        {
            std::ostringstream os;
            os << "method,freq_hz,theta_deg,gain_db\n";
            const std::string theta = fmt(broadside_rad_to_doa_deg(s.soi_doa_rad, s.angle_reference));
            for (const auto &[name, profile] : out.sweep)
                for (Eigen::Index i = 0; i < profile.size(); ++i)
                    os << name << ',' << fmt(out.sweep_freqs_hz[std::size_t(i)]) << ',' << theta << ','
                       << fmt(to_db(profile(i))) << '\n';
            return os.str();
        }

        std::string report_csv(const ComparisonReport &rep)
        {
            std::ostringstream os;
            os << "method,metric,mean,std\n";
            for (const MethodSummary *m : {&rep.mvdr, &rep.mvmfdr})
                for (const auto &[metric, st] : m->rows(rep.report_freqs_hz))
                    os << m->method << ',' << metric << ',' << fmt(st.mean) << ',' << fmt(st.std) << '\n';
            return os.str();
        }

        json structured(const Outputs &out, const RunConfig &cfg)
        {
            const auto &s = cfg.scenario;
            json doc;
            doc["command"] = to_string(cfg.command);
            doc["covariance"] = to_string(cfg.effective_covariance());
            doc["scenario"] = {
                {"num_sensors", s.geometry.num_sensors},
                {"spacing_m", round12(s.geometry.spacing_m)},
                {"angle_reference", to_string(s.angle_reference)},
                {"soi_doa_deg", round12(broadside_rad_to_doa_deg(s.soi_doa_rad, s.angle_reference))},
                {"band_hz", {round12(s.band_lo_hz), round12(s.band_hi_hz)}},
                {"constraint_freqs_hz", s.constraint_freqs_hz},
                {"num_snapshots", s.num_snapshots},
                {"num_trials", s.num_trials},
                {"rng_seed", s.rng_seed},
            };
            if (out.weights)
            {
                json w;
                for (const auto &[name, wv] : {std::pair<const char *, const WeightVector<double> *>{"mvdr", &out.weights->mvdr},
                                               {"mvmfdr", &out.weights->mvmfdr}})
                {
                    json arr = json::array();
                    for (Eigen::Index n = 0; n < wv->size(); ++n)
                        arr.push_back({round12(wv->weights(n).real()), round12(wv->weights(n).imag())});
                    w[name] = {{"weights", arr},
                               {"objective_value", round12(wv->objective_value)},
                               {"gram_condition", round12(wv->gram_condition)}};
                }
                doc["weights"] = w;
            }
            if (!out.patterns.empty())
            {
                json arr = json::array();
                for (const auto &[name, family] : out.patterns)
                    for (const auto &p : family)
                    {
                        std::vector<double> th, g;
                        for (Eigen::Index i : report_order(p.theta_grid_rad.size(), s.angle_reference))
                        {
                            th.push_back(round12(broadside_rad_to_doa_deg(p.theta_grid_rad(i), s.angle_reference)));
                            g.push_back(round12(p.gains_db(i)));
                        }
                        arr.push_back({{"method", name},
                                       {"freq_hz", round12(p.freq_hz)},
                                       {"normalization", to_string(p.normalization)},
                                       {"theta_deg", th},
                                       {"gain_db", g}});
                    }
                doc["patterns"] = arr;
            }
            if (!out.sweep.empty())
            {
                json arr = json::array();
                for (const auto &[name, profile] : out.sweep)
                {
                    std::vector<double> g;
                    for (Eigen::Index i = 0; i < profile.size(); ++i)
                        g.push_back(round12(to_db(profile(i))));
                    arr.push_back({{"method", name}, {"theta_deg", round12(broadside_rad_to_doa_deg(s.soi_doa_rad, s.angle_reference))},
                                   {"freq_hz", out.sweep_freqs_hz}, {"gain_db", g}});
                }
                doc["sweep"] = arr;
            }
            if (out.report)
            {
                json rows = json::array();
                for (const MethodSummary *m : {&out.report->mvdr, &out.report->mvmfdr})
                    for (const auto &[metric, st] : m->rows(out.report->report_freqs_hz))
                        rows.push_back({{"method", m->method}, {"metric", metric}, {"mean", round12(st.mean)},
                                        {"std", round12(st.std)}});
                doc["report"] = {{"num_trials", out.report->num_trials},
                                 {"covariance", to_string(out.report->covariance_source)},
                                 {"rows", rows}};
            }
            return doc;
        }

        void ensure_writable_dir(const std::filesystem::path &p)
        {
            const auto dir = p.parent_path();
            std::error_code ec;
            if (!dir.empty() && !std::filesystem::is_directory(dir, ec))
                throw IoError("output directory does not exist: " + dir.string());
            if (std::filesystem::is_directory(p, ec))
                throw IoError("output path is a directory: " + p.string());
        }

        void write_file(const std::filesystem::path &p, const std::string &content)
        {
            std::ofstream os(p, std::ios::binary | std::ios::trunc);
            if (!os)
                throw IoError("cannot open output file " + p.string());
            os << content;
            os.close();
            if (!os)
                throw IoError("failed writing output file " + p.string());
        }

        int fail(int code, const std::string &kind, const std::string &field, std::string reason)
        {
            for (char &c : reason)
                if (c == '"' || c == '\n')
                    c = '\'';
            std::cerr << "wbf: error=" << kind << " field=" << (field.empty() ? "-" : field) << " reason=\"" << reason
                      << "\"\n";
            return code;
        }
    }

    int report_config_error(const ConfigError &e)
    {
        const char *kind = e.kind() == ConfigError::Kind::syntax         ? "config_syntax"
                           : e.kind() == ConfigError::Kind::missing_file ? "io"
                                                                         : "config";
        return fail(e.exit_code(), kind, e.field(), e.what());
    }

    std::filesystem::path sibling_path(const std::filesystem::path &out, const std::string &tag)
    {
        auto p = out;
        p.replace_filename(out.stem().string() + "." + tag + out.extension().string());
        return p;
    }

    int run(const RunConfig &cfg)
    {
        try
        {
            validate(cfg);
            std::vector<std::pair<std::filesystem::path, std::string>> files;
            ensure_writable_dir(cfg.output_path);

            const Outputs out = compute(cfg);

            if (cfg.output_format == OutputFormat::structured)
                files.emplace_back(cfg.output_path, structured(out, cfg).dump(2) + "\n");
            else
                switch (cfg.command)
                {
                case Command::solve:
                    files.emplace_back(cfg.output_path, weights_csv(*out.weights));
                    break;
                case Command::pattern:
                    files.emplace_back(cfg.output_path, patterns_csv(out, cfg.scenario));
                    break;
                case Command::sweep:
                    files.emplace_back(cfg.output_path, sweep_csv(out, cfg.scenario));
                    break;
                case Command::montecarlo:
                    files.emplace_back(cfg.output_path, report_csv(*out.report));
                    break;
                case Command::compare:
                    files.emplace_back(cfg.output_path, patterns_csv(out, cfg.scenario));
                    files.emplace_back(sibling_path(cfg.output_path, "report"), report_csv(*out.report));
                    files.emplace_back(sibling_path(cfg.output_path, "weights"), weights_csv(*out.weights));
                    break;
                }
            for (const auto &[path, content] : files)
                write_file(path, content);
            return exit_ok;
        }
        catch (const ConfigError &e)
        {
            return report_config_error(e);
        }
        catch (const ScenarioError &e)
        {
            return fail(exit_config, "config", e.field(), e.what());
        }
        catch (const IoError &e)
        {
            return fail(exit_io, "io", "output", e.what());
        }
        catch (const NumericalError &e)
        {
            return fail(exit_numerical, "numerical", "", e.what());
        }
        catch (const std::invalid_argument &e)
        {
            return fail(exit_config, "config", "", e.what());
        }
        catch (const std::exception &e)
        {
            return fail(exit_numerical, "numerical", "", e.what());
        }
    }

    std::map<std::string, CVector<double>> read_weights_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open weights file " + path.string());
        std::string line;
        if (!std::getline(in, line) || line != "method,sensor,real,imag")
            throw IoError("unexpected weights header in " + path.string());

        std::map<std::string, std::vector<std::pair<long, Complex<double>>>> rows;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            std::stringstream ls(line);
            std::string method, sensor, re, im;
            if (!std::getline(ls, method, ',') || !std::getline(ls, sensor, ',') || !std::getline(ls, re, ',') ||
                !std::getline(ls, im))
                throw IoError("malformed weights row: " + line);
            rows[method].emplace_back(std::stol(sensor), Complex<double>(std::stod(re), std::stod(im)));
        }

        std::map<std::string, CVector<double>> out;
        for (const auto &[method, entries] : rows)
        {
            CVector<double> w(Eigen::Index(entries.size()));
            for (const auto &[n, v] : entries)
            {
                if (n < 0 || n >= w.size())
                    throw IoError("sensor index out of range in weights file");
                w(n) = v;
            }
            out[method] = std::move(w);
        }
        return out;
    }
}
