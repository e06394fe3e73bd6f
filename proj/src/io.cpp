// SPDX-License-Identifier: MIT
#include "neariso/io.hpp"
#include "neariso/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace neariso {
namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line, long lineno) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (quoted) throw ParseError("unterminated quote", lineno);
    out.push_back(trim(cur));
    return out;
}

double parse_number(const std::string& s, long lineno, const std::string& col) {
    if (s.empty()) throw ParseError("empty field in column '" + col + "'", lineno);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ParseError("bad number '" + s + "' in column '" + col + "'", lineno);
    return v;
}

void check_dataset(const Dataset& d) {
    if (d.value.empty()) throw SchemaError("dataset has no rows");
    for (std::size_t i = 1; i < d.index.size(); ++i)
        if (d.index[i] <= d.index[i - 1]) throw SchemaError("indices must be strictly increasing");
    for (double w : d.weight)
        if (!(w > 0.0) || !std::isfinite(w)) throw SchemaError("nonpositive weight");
}

Dataset read_csv(std::istream& in) {
    Dataset d;
    std::string line;
    long lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (header.empty()) {
                if (!d.provenance.empty()) d.provenance += '\n';
                d.provenance += trim(t.substr(1));
            }
            continue;
        }
        if (header.empty()) {
            header = split_csv(t, lineno);
            if (std::find(header.begin(), header.end(), "index") == header.end() ||
                std::find(header.begin(), header.end(), "value") == header.end())
                throw SchemaError("CSV header must contain index and value columns");
            continue;
        }
        auto f = split_csv(t, lineno);
        if (f.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()),
                             lineno);
        for (std::size_t k = 0; k < f.size(); ++k) {
            double v = parse_number(f[k], lineno, header[k]);
            if (header[k] == "index") {
                if (v != std::floor(v)) throw ParseError("index must be an integer", lineno);
                d.index.push_back(static_cast<long>(v));
            } else if (header[k] == "value") {
                d.value.push_back(v);
            } else if (header[k] == "weight") {
                if (!(v > 0.0)) throw SchemaError("nonpositive weight at line " + std::to_string(lineno));
                d.weight.push_back(v);
            } else {
                d.extra[header[k]].push_back(v);
            }
        }
    }
    if (header.empty()) throw SchemaError("missing CSV header");
    check_dataset(d);
    return d;
}

Dataset read_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON: ") + e.what(), static_cast<long>(e.byte));
    }
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) throw SchemaError("JSON dataset needs a rows array");
    Dataset d;
    if (j.contains("provenance")) d.provenance = j["provenance"].get<std::string>();
    if (j.contains("family")) d.family = j["family"].get<std::string>();
    bool weighted = false;
    long row = 0;
    for (const auto& r : j["rows"]) {
        ++row;
        if (!r.contains("index") || !r.contains("value")) throw SchemaError("row " + std::to_string(row) + " lacks index or value");
        d.index.push_back(r["index"].get<long>());
        d.value.push_back(r["value"].get<double>());
        if (row == 1) weighted = r.contains("weight");
        if (weighted != r.contains("weight")) throw SchemaError("weight must be present on all rows or none");
        if (weighted) {
            double w = r["weight"].get<double>();
            if (!(w > 0.0)) throw SchemaError("nonpositive weight in row " + std::to_string(row));
            d.weight.push_back(w);
        }
    }
    check_dataset(d);
    return d;
}

void put_array(std::ostream& out, const std::vector<double>& v) {
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        if (std::isfinite(v[i])) out << format_double(v[i]);
        else out << '"' << format_double(v[i]) << '"';
    }
    out << ']';
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

double json_number(const nlohmann::json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        if (s == "nan") return NAN;
        throw SchemaError("bad number string '" + s + "'");
    }
    return j.get<double>();
}

} // namespace

std::vector<double> Dataset::weights_or(double w) const {
    return weight.empty() ? std::vector<double>(value.size(), w) : weight;
}

Dataset read_dataset(std::istream& in, Format fmt) { return fmt == Format::Csv ? read_csv(in) : read_json(in); }

Dataset read_dataset(const std::string& path, Format fmt) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_dataset(in, fmt);
}

Dataset read_dataset(const std::string& path) {
    bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    return read_dataset(path, json ? Format::Json : Format::Csv);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string digest(const std::vector<double>& x, const std::vector<double>& w) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    auto feed = [&](const std::vector<double>& v) {
        for (double d : v) {
            unsigned char b[sizeof d];
            std::memcpy(b, &d, sizeof d);
            for (unsigned char c : b) {
                h ^= c;
                h *= 1099511628211ull;
            }
        }
    };
    feed(x);
    feed(w);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::string version() { return "1.0.0"; }

PathReport make_report(const SolutionPath& path, const Family& f, const std::vector<double>& x,
                       const std::vector<double>& w, const std::optional<CriterionTrace>& trace,
                       const std::string& criterion_name) {
    PathReport r;
    r.tool_version = version();
    r.input_digest = digest(x, w);
    r.family = to_string(f.kind);
    r.direction = path.series.direction == Direction::Decreasing ? "dec" : "inc";
    r.criterion = trace ? criterion_name : "";
    for (std::size_t k = 0; k < path.knots.size(); ++k) {
        Fit fit = fit_generalized(path, f, path.knots[k].lambda);
        ReportKnot rk{fit.lambda, fit.pieces, fit.eta, fit.theta, std::nullopt};
        if (trace) rk.criterion = trace->entries.at(k).value;
        r.knots.push_back(std::move(rk));
    }
    if (trace) r.selected_lambda = trace->selected_lambda();
    return r;
}

PathReport make_fit_report(const Fit& fit, const Family& f, const std::vector<double>& x,
                           const std::vector<double>& w, Direction d, const std::string& criterion_name) {
    PathReport r;
    r.tool_version = version();
    r.input_digest = digest(x, w);
    r.family = to_string(f.kind);
    r.direction = d == Direction::Decreasing ? "dec" : "inc";
    r.criterion = criterion_name;
    r.knots.push_back({fit.lambda, fit.pieces, fit.eta, fit.theta, std::nullopt});
    r.selected_lambda = fit.lambda;
    return r;
}

void write_report(const PathReport& r, Format fmt, std::ostream& out) {
    if (fmt == Format::Csv) {
        out << "lambda,index,eta,theta\n";
        for (const auto& k : r.knots)
            for (std::size_t i = 0; i < k.eta.size(); ++i)
                out << format_double(k.lambda) << ',' << (i + 1) << ',' << format_double(k.eta[i]) << ','
                    << format_double(k.theta[i]) << '\n';
    } else {
        out << "{\n  \"tool_version\": " << quoted(r.tool_version) << ",\n  \"input_digest\": " << quoted(r.input_digest)
            << ",\n  \"family\": " << quoted(r.family) << ",\n  \"direction\": " << quoted(r.direction)
            << ",\n  \"criterion\": " << quoted(r.criterion) << ",\n  \"selected_lambda\": ";
        if (r.selected_lambda) out << format_double(*r.selected_lambda);
        else out << "null";
        out << ",\n  \"knots\": [";
        for (std::size_t k = 0; k < r.knots.size(); ++k) {
            const auto& kn = r.knots[k];
            out << (k ? ",\n" : "\n") << "    {\"lambda\": " << format_double(kn.lambda) << ", \"pieces\": " << kn.pieces
                << ", \"criterion\": " << (kn.criterion ? format_double(*kn.criterion) : std::string("null"))
                << ", \"eta\": ";
            put_array(out, kn.eta);
            out << ", \"theta\": ";
            put_array(out, kn.theta);
            out << '}';
        }
        out << "\n  ]\n}\n";
    }
    if (!out) throw IoError("write failed");
}

PathReport read_report(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON: ") + e.what(), static_cast<long>(e.byte));
    }
    PathReport r;
    try {
        r.tool_version = j.at("tool_version").get<std::string>();
        r.input_digest = j.at("input_digest").get<std::string>();
        r.family = j.at("family").get<std::string>();
        r.direction = j.at("direction").get<std::string>();
        r.criterion = j.at("criterion").get<std::string>();
        if (!j.at("selected_lambda").is_null()) r.selected_lambda = json_number(j["selected_lambda"]);
        for (const auto& k : j.at("knots")) {
            ReportKnot rk;
            rk.lambda = json_number(k.at("lambda"));
            rk.pieces = k.at("pieces").get<std::size_t>();
            if (!k.at("criterion").is_null()) rk.criterion = json_number(k["criterion"]);
            for (const auto& v : k.at("eta")) rk.eta.push_back(json_number(v));
            for (const auto& v : k.at("theta")) rk.theta.push_back(json_number(v));
            r.knots.push_back(std::move(rk));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("report: ") + e.what());
    }
    return r;
}

Config read_config(std::istream& in) {
    Config c;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", lineno);
        c[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return c;
}

Config read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_config(in);
}

namespace {

std::vector<double> number_list(const std::string& s, const std::string& key) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        char* end = nullptr;
        double d = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size()) throw SchemaError("bad number in '" + key + "'");
        v.push_back(d);
    }
    return v;
}

double number(const Config& c, const std::string& key, double dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    auto v = number_list(it->second, key);
    if (v.size() != 1) throw SchemaError("'" + key + "' needs one number");
    return v[0];
}

} // namespace

BiasStudyConfig bias_config(const Config& c) {
    BiasStudyConfig b;
    auto fam = c.find("family");
    if (fam == c.end()) throw SchemaError("config needs 'family'");
    const std::size_t n = static_cast<std::size_t>(number(c, "n", 100));
    double w = 1.0;
    if (fam->second == "binomial") {
        b.family = Family::binomial();
        w = number(c, "trials", 10);
    } else if (fam->second == "chisq") {
        b.family = Family::chisq(number(c, "dof", 2));
        w = b.family.shape;
    } else if (fam->second == "gamma") {
        b.family = Family::gamma(number(c, "shape", 1));
        w = b.family.shape;
    } else {
        b.family = Family{kind_from_string(fam->second), 1.0};
        w = number(c, "weight", 1.0);
    }
    b.weights.assign(n, w);
    if (c.count("truth")) {
        b.eta_true = number_list(c.at("truth"), "truth");
    } else if (c.count("truth_sawtooth")) {
        auto s = number_list(c.at("truth_sawtooth"), "truth_sawtooth");
        if (s.size() != 3) throw SchemaError("truth_sawtooth = lo, hi, period");
        b.eta_true = sawtooth(s[0], s[1], static_cast<std::size_t>(s[2]), n);
    } else {
        throw SchemaError("config needs 'truth' or 'truth_sawtooth'");
    }
    // chi-square truth is given as the scale s; the mean parameter is 2s
    if (fam->second == "chisq")
        for (double& e : b.eta_true) e *= 2.0;
    if (b.eta_true.size() != n) throw SchemaError("truth length differs from n");
    if (c.count("grid")) b.grid = number_list(c.at("grid"), "grid");
    else b.grid = doubling_grid(static_cast<int>(number(c, "grid_doubling", 10)));
    b.replications = static_cast<std::size_t>(number(c, "replications", 1000));
    b.inner = static_cast<std::size_t>(number(c, "inner", 100));
    b.threads = static_cast<unsigned>(number(c, "threads", 1));
    if (c.count("seed")) b.seed = std::stoull(c.at("seed"));
    if (c.count("direction")) b.direction = c.at("direction") == "dec" ? Direction::Decreasing : Direction::Increasing;
    return b;
}

} // namespace neariso
