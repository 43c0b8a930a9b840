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

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "wbf/analysis.hpp"
#include "wbf/pattern.hpp"
#include "wbf/scenario.hpp"

namespace wbf::cli
{
    enum class Command
    {
        solve,
        pattern,
        sweep,
        montecarlo,
        compare,
    };

    enum class OutputFormat
    {
        csv,
        structured,
    };

    // Process exit statuses.
    enum ExitCode : int
    {
        exit_ok = 0,
        exit_config = 2,        // config fails validation, or bad command-line values
        exit_numerical = 3,
        exit_io = 4,            // unreadable config, unwritable output
        exit_config_syntax = 5, // config file is not well-formed JSON
    };

    class ConfigError : public std::runtime_error
    {
    public:
        enum class Kind
        {
            missing_file,
            syntax,
            invalid,
        };

        ConfigError(Kind kind, std::string field, const std::string &message)
            : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}

        Kind kind() const { return kind_; }
        const std::string &field() const { return field_; }
        int exit_code() const;

    private:
        Kind kind_;
        std::string field_;
    };

    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct RunConfig
    {
        Scenario scenario;
        Command command = Command::compare;
        std::optional<CovarianceSource> covariance_source; // unset: sample for montecarlo, ideal otherwise
        std::filesystem::path output_path = "wbf_out.csv";
        OutputFormat output_format = OutputFormat::csv;
        Normalization normalization = Normalization::global_peak;
        int theta_points = 721;

        CovarianceSource effective_covariance() const;
    };

    Command parse_command(const std::string &name);
    std::string to_string(Command c);
    CovarianceSource parse_covariance(const std::string &name);
    std::string to_string(CovarianceSource c);
    OutputFormat parse_format(const std::string &name);
    Normalization parse_normalization(const std::string &name);
    std::string to_string(Normalization n);
    AngleReference parse_angle_reference(const std::string &name);
    std::string to_string(AngleReference r);

    // Reads and fully validates a JSON scenario file. Throws ConfigError.
    RunConfig parse_config(const std::filesystem::path &path);

    // Same, from an in-memory document (path-free variant used by tests and parse_config).
    RunConfig parse_config_text(const std::string &text);

    // Re-validates after command-line overrides. Throws ConfigError.
    void validate(const RunConfig &cfg);

    // Executes the configured command and writes its outputs. Returns an ExitCode; failures also
    // print one line "wbf: error=<kind> field=<field> reason=\"...\"" to stderr.
    int run(const RunConfig &cfg);

    // Prints the one-line diagnostic for a config failure and returns its exit code.
    int report_config_error(const ConfigError &e);

    // Sibling paths used by `compare` for the report and weights next to the pattern file.
    std::filesystem::path sibling_path(const std::filesystem::path &out, const std::string &tag);

    // Reads a weights CSV (method,sensor,real,imag) back into per-method weight vectors.
    std::map<std::string, CVector<double>> read_weights_csv(const std::filesystem::path &path);

    // "%.12g" formatting used for every floating-point value written.
    std::string fmt(double v);
}
