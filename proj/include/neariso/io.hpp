// SPDX-License-Identifier: MIT
#pragma once

#include "neariso/selection.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace neariso {

enum class Format { Csv, Json };

struct Dataset {
    std::vector<long> index;
    std::vector<double> value;
    std::vector<double> weight; // empty when the file has no weight column
    std::map<std::string, std::vector<double>> extra;
    std::string provenance;     // leading '#' comment lines
    std::optional<std::string> family;

    std::size_t size() const { return value.size(); }
    std::vector<double> weights_or(double w) const;
};

// CSV: '#' comment lines, then a header containing index and value
// (optionally weight; other numeric columns go to `extra`).
Dataset read_dataset(std::istream& in, Format fmt);
Dataset read_dataset(const std::string& path, Format fmt);
Dataset read_dataset(const std::string& path); // format from extension

struct ReportKnot {
    double lambda = 0.0;
    std::size_t pieces = 0;
    std::vector<double> eta;
    std::vector<double> theta;
    std::optional<double> criterion;
};

struct PathReport {
    std::string tool_version;
    std::string input_digest;
    std::string family;
    std::string direction;
    std::string criterion; // "aic", "cp", "lambda" or "" when none
    std::vector<ReportKnot> knots;
    std::optional<double> selected_lambda;
};

std::string format_double(double v); // 17 significant digits
std::string digest(const std::vector<double>& x, const std::vector<double>& w);

PathReport make_report(const SolutionPath& path, const Family& f, const std::vector<double>& x,
                       const std::vector<double>& w, const std::optional<CriterionTrace>& trace,
                       const std::string& criterion_name);
PathReport make_fit_report(const Fit& fit, const Family& f, const std::vector<double>& x,
                           const std::vector<double>& w, Direction d, const std::string& criterion_name);

void write_report(const PathReport& r, Format fmt, std::ostream& out);
PathReport read_report(std::istream& in); // JSON only

using Config = std::map<std::string, std::string>;
// key = value lines; '#' starts a comment.
Config read_config(std::istream& in);
Config read_config(const std::string& path);
BiasStudyConfig bias_config(const Config& c);

std::string version();

} // namespace neariso
