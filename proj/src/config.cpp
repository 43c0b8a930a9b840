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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

using json = nlohmann::json;

namespace wbf::cli
{
    namespace
    {
        [[noreturn]] void invalid(const std::string &field, const std::string &message)
        {
            throw ConfigError(ConfigError::Kind::invalid, field, field + ": " + message);
        }

        double number(const json &j, const std::string &field)
        {
            if (j.is_number())
                return j.get<double>();
            if (j.is_string())
            {
                const auto s = j.get<std::string>();
                if (s == "-inf")
                    return -std::numeric_limits<double>::infinity();
            }
            invalid(field, "expected a number");
        }

        std::vector<double> number_list(const json &j, const std::string &field)
        {
            if (!j.is_array())
                invalid(field, "expected a list of numbers");
            std::vector<double> out;
            for (const auto &v : j)
                out.push_back(number(v, field));
            return out;
        }

        std::int64_t integer(const json &j, const std::string &field)
        {
            if (!j.is_number_integer())
                invalid(field, "expected an integer");
            return j.get<std::int64_t>();
        }

        std::string text(const json &j, const std::string &field)
        {
            if (!j.is_string())
                invalid(field, "expected a string");
            return j.get<std::string>();
        }

        void reject_unknown(const json &obj, const std::set<std::string> &known, const std::string &prefix)
        {
            for (const auto &[key, _] : obj.items())
                if (!known.contains(key))
                    invalid(prefix + key, "unknown key");
        }

        ArrayGeometry<double> parse_array(const json &j, double band_hi_hz)
        {
            if (!j.is_object())
                invalid("array", "expected an object");
            reject_unknown(j, {"num_sensors", "spacing_m", "half_wavelength_at_hz", "propagation_speed_mps"}, "array.");
            ArrayGeometry<double> g;
            if (!j.contains("num_sensors"))
                invalid("array.num_sensors", "required");
            g.num_sensors = Eigen::Index(integer(j["num_sensors"], "array.num_sensors"));
            if (j.contains("propagation_speed_mps"))
                g.propagation_speed_mps = number(j["propagation_speed_mps"], "array.propagation_speed_mps");
            if (!(g.propagation_speed_mps > 0.0))
                invalid("array.propagation_speed_mps", "must be positive");
            if (j.contains("spacing_m") && j.contains("half_wavelength_at_hz"))
                invalid("array.spacing_m", "give either spacing_m or half_wavelength_at_hz, not both");
            if (j.contains("spacing_m"))
                g.spacing_m = number(j["spacing_m"], "array.spacing_m");
            else
            {
                const double f = j.contains("half_wavelength_at_hz")
                                     ? number(j["half_wavelength_at_hz"], "array.half_wavelength_at_hz")
                                     : band_hi_hz;
                if (!(f > 0.0))
                    invalid("array.half_wavelength_at_hz", "must be positive");
                g.spacing_m = half_wavelength_spacing(f, g.propagation_speed_mps);
            }
            return g;
        }

        Complex<double> parse_gain(const json &j)
        {
            if (j.is_number())
                return {j.get<double>(), 0.0};
            if (j.is_array() && j.size() == 2)
                return {number(j[0], "constraint_gain_b"), number(j[1], "constraint_gain_b")};
            invalid("constraint_gain_b", "expected a number or [re, im]");
        }
    }

    int ConfigError::exit_code() const
    {
        switch (kind_)
        {
        case Kind::missing_file:
            return exit_io;
        case Kind::syntax:
            return exit_config_syntax;
        case Kind::invalid:
            break;
        }
        return exit_config;
    }

    CovarianceSource RunConfig::effective_covariance() const
    {
        if (covariance_source)
            return *covariance_source;
        return command == Command::montecarlo ? CovarianceSource::sample : CovarianceSource::ideal;
    }

    Command parse_command(const std::string &name)
    {
        if (name == "solve")
            return Command::solve;
        if (name == "pattern")
            return Command::pattern;
        if (name == "sweep")
            return Command::sweep;
        if (name == "montecarlo")
            return Command::montecarlo;
        if (name == "compare")
            return Command::compare;
        invalid("command", "unknown command '" + name + "'");
    }

    std::string to_string(Command c)
    {
        switch (c)
        {
        case Command::solve:
            return "solve";
        case Command::pattern:
            return "pattern";
        case Command::sweep:
            return "sweep";
        case Command::montecarlo:
            return "montecarlo";
        case Command::compare:
            return "compare";
        }
        return "?";
    }

    CovarianceSource parse_covariance(const std::string &name)
    {
        if (name == "ideal")
            return CovarianceSource::ideal;
        if (name == "sample")
            return CovarianceSource::sample;
        invalid("covariance", "expected 'ideal' or 'sample', got '" + name + "'");
    }

    std::string to_string(CovarianceSource c)
    {
        return c == CovarianceSource::ideal ? "ideal" : "sample";
    }

    OutputFormat parse_format(const std::string &name)
    {
        if (name == "csv")
            return OutputFormat::csv;
        if (name == "structured")
            return OutputFormat::structured;
        invalid("output.format", "expected 'csv' or 'structured', got '" + name + "'");
    }

    Normalization parse_normalization(const std::string &name)
    {
        if (name == "none")
            return Normalization::none;
        if (name == "global_peak")
            return Normalization::global_peak;
        if (name == "per_frequency_peak")
            return Normalization::per_frequency_peak;
        invalid("normalization", "expected none, global_peak or per_frequency_peak");
    }

    std::string to_string(Normalization n)
    {
        switch (n)
        {
        case Normalization::none:
            return "none";
        case Normalization::global_peak:
            return "global_peak";
        case Normalization::per_frequency_peak:
            return "per_frequency_peak";
        }
        return "?";
    }

    AngleReference parse_angle_reference(const std::string &name)
    {
        if (name == "broadside")
            return AngleReference::broadside;
        if (name == "array_axis")
            return AngleReference::array_axis;
        invalid("angle_reference", "expected 'broadside' or 'array_axis'");
    }

    std::string to_string(AngleReference r)
    {
        return r == AngleReference::broadside ? "broadside" : "array_axis";
    }

    RunConfig parse_config_text(const std::string &text_in)
    {
        json doc;
        try
        {
            doc = json::parse(text_in);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(ConfigError::Kind::syntax, "", std::string("malformed config: ") + e.what());
        }
        if (!doc.is_object())
            throw ConfigError(ConfigError::Kind::syntax, "", "malformed config: top level must be an object");

        reject_unknown(doc,
                       {"command", "array", "soi_doa_deg", "interferer_doas_deg", "band_hz", "constraint_freqs_hz",
                        "num_sim_freqs", "sim_freqs_hz", "interferer_wideband", "mvdr_freq_hz", "snr_db", "sir_db",
                        "sir_linear", "num_snapshots", "num_trials", "rng_seed", "constraint_gain_b",
                        "diagonal_loading", "sweep_points", "theta_points", "angle_reference", "normalization", "covariance", "output"},
                       "");

        for (const char *key : {"array", "soi_doa_deg", "band_hz", "constraint_freqs_hz", "snr_db"})
            if (!doc.contains(key))
                invalid(key, "required");

        RunConfig cfg;
        Scenario &s = cfg.scenario;

        const auto band = number_list(doc["band_hz"], "band_hz");
        if (band.size() != 2)
            invalid("band_hz", "expected [lo, hi]");
        s.band_lo_hz = band[0];
        s.band_hi_hz = band[1];
        if (!(s.band_lo_hz > 0.0 && s.band_lo_hz < s.band_hi_hz && std::isfinite(s.band_hi_hz)))
            invalid("band_hz", "need 0 < lo < hi");

        s.geometry = parse_array(doc["array"], s.band_hi_hz);

        if (doc.contains("angle_reference"))
            s.angle_reference = parse_angle_reference(text(doc["angle_reference"], "angle_reference"));
        s.soi_doa_rad = doa_to_broadside_rad(number(doc["soi_doa_deg"], "soi_doa_deg"), s.angle_reference);
        if (doc.contains("interferer_doas_deg"))
            for (double d : number_list(doc["interferer_doas_deg"], "interferer_doas_deg"))
                s.interferer_doas_rad.push_back(doa_to_broadside_rad(d, s.angle_reference));
        s.constraint_freqs_hz = number_list(doc["constraint_freqs_hz"], "constraint_freqs_hz");

        if (doc.contains("num_sim_freqs") && doc.contains("sim_freqs_hz"))
            invalid("sim_freqs_hz", "give either num_sim_freqs or sim_freqs_hz, not both");
        if (doc.contains("sim_freqs_hz"))
            s.sim_freqs_hz = number_list(doc["sim_freqs_hz"], "sim_freqs_hz");
        else
        {
            const auto count = doc.contains("num_sim_freqs") ? integer(doc["num_sim_freqs"], "num_sim_freqs") : 21;
            if (count < 1)
                invalid("num_sim_freqs", "must be at least 1");
            s.sim_freqs_hz = count == 1 ? std::vector<double>{0.5 * (s.band_lo_hz + s.band_hi_hz)}
                                        : linspace(s.band_lo_hz, s.band_hi_hz, int(count));
        }

        bool wideband = true;
        if (doc.contains("interferer_wideband"))
        {
            if (!doc["interferer_wideband"].is_boolean())
                invalid("interferer_wideband", "expected true or false");
            wideband = doc["interferer_wideband"].get<bool>();
        }
        const double center = 0.5 * (s.band_lo_hz + s.band_hi_hz);
        s.interferer_freqs_hz = wideband ? s.sim_freqs_hz : std::vector<double>{center};

        s.mvdr_freq_hz = doc.contains("mvdr_freq_hz") ? number(doc["mvdr_freq_hz"], "mvdr_freq_hz") : center;
        s.snr_db = number(doc["snr_db"], "snr_db");

        if (doc.contains("sir_db") && doc.contains("sir_linear"))
            invalid("sir_db", "give either sir_db or sir_linear, not both");
        if (doc.contains("sir_linear"))
        {
            const double r = number(doc["sir_linear"], "sir_linear");
            if (!(r > 0.0) || !std::isfinite(r))
                invalid("sir_linear", "must be a positive ratio");
            s.sir_db = 10.0 * std::log10(r);
        }
        else
            s.sir_db = doc.contains("sir_db") ? number(doc["sir_db"], "sir_db") : 0.0;

        if (doc.contains("num_snapshots"))
            s.num_snapshots = int(integer(doc["num_snapshots"], "num_snapshots"));
        if (doc.contains("num_trials"))
            s.num_trials = int(integer(doc["num_trials"], "num_trials"));
        if (doc.contains("rng_seed"))
        {
            if (!doc["rng_seed"].is_number_unsigned() && !(doc["rng_seed"].is_number_integer() && doc["rng_seed"].get<std::int64_t>() >= 0))
                invalid("rng_seed", "expected a nonnegative integer");
            s.rng_seed = doc["rng_seed"].get<std::uint64_t>();
        }
        if (doc.contains("constraint_gain_b"))
            s.constraint_gain_b = parse_gain(doc["constraint_gain_b"]);
        if (doc.contains("diagonal_loading"))
            s.loading_rel = number(doc["diagonal_loading"], "diagonal_loading");
        if (doc.contains("sweep_points"))
            s.sweep_points = int(integer(doc["sweep_points"], "sweep_points"));

        if (doc.contains("command"))
            cfg.command = parse_command(text(doc["command"], "command"));
        if (doc.contains("covariance"))
            cfg.covariance_source = parse_covariance(text(doc["covariance"], "covariance"));
        if (doc.contains("normalization"))
            cfg.normalization = parse_normalization(text(doc["normalization"], "normalization"));
        if (doc.contains("theta_points"))
            cfg.theta_points = int(integer(doc["theta_points"], "theta_points"));
        if (doc.contains("output"))
        {
            const json &o = doc["output"];
            if (!o.is_object())
                invalid("output", "expected an object");
            reject_unknown(o, {"path", "format"}, "output.");
            if (o.contains("path"))
                cfg.output_path = text(o["path"], "output.path");
            if (o.contains("format"))
                cfg.output_format = parse_format(text(o["format"], "output.format"));
        }

        validate(cfg);
        return cfg;
    }

    RunConfig parse_config(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError(ConfigError::Kind::missing_file, "config", "cannot open config file " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_config_text(buf.str());
    }

    void validate(const RunConfig &cfg)
    {
        try
        {
            cfg.scenario.validate();
        }
        catch (const ScenarioError &e)
        {
            throw ConfigError(ConfigError::Kind::invalid, e.field(), e.what());
        }
        if (cfg.theta_points < 2)
            invalid("theta_points", "must be at least 2");
        if (cfg.output_path.empty())
            invalid("output.path", "must not be empty");
    }

    std::string fmt(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return buf;
    }
}
