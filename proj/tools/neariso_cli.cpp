// SPDX-License-Identifier: MIT
// neariso command-line driver.
#include "neariso/neariso.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace neariso;

namespace {

struct Options {
    std::string input;
    std::string output;
    std::string family = "normal";
    std::string direction = "inc";
    std::string format = "json";
    std::string select;
    std::string bounds;
    std::string config;
    std::optional<double> lambda;
    double sigma2 = 1.0;
    double dof = 0.0;   // chisq
    double shape = 1.0; // gamma
    std::size_t blocks = 3;
    double gamma2 = 0.0;
    std::size_t length = 0; // spectrum: series length behind the ordinates
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    bool verify = false;
    bool ordinates = false;
    bool demo = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Family make_family(const Options& o) {
    switch (kind_from_string(o.family)) {
    case Kind::Normal: return Family::normal();
    case Kind::Binomial: return Family::binomial();
    case Kind::Poisson: return Family::poisson();
    case Kind::GammaScale:
        if (o.family == "chisq") {
            if (!(o.dof > 0.0)) throw UsageError("--dof: chisq needs a positive degrees-of-freedom value");
            return Family::chisq(o.dof);
        }
        return Family::gamma(o.shape);
    }
    return Family::normal();
}

Direction make_direction(const Options& o) { return o.direction == "dec" ? Direction::Decreasing : Direction::Increasing; }
Format make_format(const Options& o) { return o.format == "csv" ? Format::Csv : Format::Json; }

std::optional<Bounds> make_bounds(const Options& o) {
    if (o.bounds.empty()) return std::nullopt;
    auto comma = o.bounds.find(',');
    if (comma == std::string::npos) throw UsageError("--bounds: expected <a>,<b>");
    auto num = [](std::string s) {
        if (s == "inf" || s == "+inf") return HUGE_VAL;
        if (s == "-inf") return -HUGE_VAL;
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    };
    try {
        Bounds b{num(o.bounds.substr(0, comma)), num(o.bounds.substr(comma + 1))};
        if (!(b.alpha <= b.beta)) throw UsageError("--bounds: need a <= b");
        return b;
    } catch (const std::invalid_argument&) {
        throw UsageError("--bounds: cannot parse '" + o.bounds + "'");
    }
}

Criterion make_criterion(const Options& o) {
    if (o.lambda && !o.select.empty()) throw UsageError("--lambda and --select are exclusive");
    if (o.lambda) {
        if (!(*o.lambda >= 0.0)) throw UsageError("--lambda: must be nonnegative");
        return Criterion::lambda(*o.lambda);
    }
    if (o.select == "cp") return Criterion::cp(o.sigma2);
    return Criterion::aic();
}

std::string criterion_name(const Criterion& c) {
    switch (c.kind) {
    case CriterionKind::Aic: return "aic";
    case CriterionKind::Cp: return "cp";
    default: return "lambda";
    }
}

std::uint64_t resolve_seed(const Options& o) {
    if (o.seed) return *o.seed;
    if (const char* e = std::getenv("NEARISO_SEED")) {
        try {
            return std::stoull(e);
        } catch (const std::exception&) {
            throw UsageError(std::string("NEARISO_SEED: not an unsigned integer: ") + e);
        }
    }
    return 1;
}

// Writes to --output or stdout.
template <class F>
void emit(const Options& o, F&& body) {
    if (o.output.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw IoError("cannot write " + o.output);
    body(out);
    if (!out) throw IoError("write failed: " + o.output);
}

struct Loaded {
    Dataset data;
    Family family;
    std::vector<double> w;
};

Loaded load(const Options& o) {
    if (o.input.empty()) throw UsageError("--input is required");
    Loaded l{read_dataset(o.input), make_family(o), {}};
    l.w = l.data.weights_or(l.family.default_weight());
    return l;
}

// Binomial lambdas are often quoted per trial; only meaningful when every
// row has the same number of trials.
std::optional<double> common_weight(const std::vector<double>& w) {
    for (double v : w)
        if (v != w.front()) return std::nullopt;
    return w.front();
}

Fit fit_with(const Options& o, const Loaded& l, const SolutionPath& p, const Criterion& c,
             std::optional<CriterionTrace>* trace = nullptr) {
    auto b = make_bounds(o);
    double lam;
    if (c.kind == CriterionKind::Aic || c.kind == CriterionKind::Cp) {
        auto tr = select_lambda(l.data.value, l.w, l.family, p, c, b);
        lam = tr.selected_lambda();
        if (trace) *trace = std::move(tr);
    } else {
        lam = resolve_lambda(l.data.value, l.w, l.family, p, c, b);
    }
    Fit f = fit_generalized(p, l.family, lam);
    if (b) f = clip_bounds(f, b->alpha, b->beta);
    return f;
}

// Certifies a fit against the unconstrained/constrained objective oracle.
bool verify_fit(const Options& o, const Loaded& l, const Fit& fit, std::ostream& log) {
    ObjectiveSpec spec{l.family, l.data.value, l.w, fit.lambda, make_bounds(o), make_direction(o)};
    double mine = objective_value(spec, fit.theta);
    auto dual = dual_ascent_minimize(spec, 200000, 1e-12);
    double ref = std::isfinite(dual.objective) ? dual.objective : HUGE_VAL;
    if (!dual.converged) {
        auto sg = subgradient_minimize(spec, 20000, 1e-12);
        ref = std::min(ref, sg.objective);
    }
    bool ok = mine <= ref + 1e-6 * (1.0 + std::abs(ref));
    log << "verify: objective " << format_double(mine) << " oracle " << format_double(ref) << " gap "
        << format_double(dual.gap) << (ok ? " ok" : " MISMATCH") << "\n";
    if (!spec.bounds) {
        WeightedSeries s = mean_scale_series(l.data.value, l.w, l.family, make_direction(o));
        auto cert = kkt_check(s, fit.lambda, fit.eta);
        log << "verify: kkt max violation " << format_double(cert.max_violation) << " tolerance "
            << format_double(cert.tolerance) << (cert.valid ? " ok" : " FAILED") << "\n";
        ok = ok && cert.valid;
    }
    return ok;
}

int cmd_fit(const Options& o) {
    Loaded l = load(o);
    Direction d = make_direction(o);
    auto p = solve_path(l.data.value, l.w, l.family, d);
    Criterion c = make_criterion(o);
    Fit f = fit_with(o, l, p, c);
    std::string name = o.lambda ? "lambda" : criterion_name(c);
    emit(o, [&](std::ostream& out) { write_report(make_fit_report(f, l.family, l.data.value, l.w, d, name), make_format(o), out); });
    if (o.verify && !verify_fit(o, l, f, std::cerr)) return 1;
    return 0;
}

int cmd_path(const Options& o) {
    Loaded l = load(o);
    auto p = solve_path(l.data.value, l.w, l.family, make_direction(o));
    std::optional<CriterionTrace> tr;
    std::string name;
    if (!o.select.empty()) {
        Criterion c = make_criterion(o);
        tr = select_lambda(l.data.value, l.w, l.family, p, c, make_bounds(o));
        name = criterion_name(c);
    }
    emit(o, [&](std::ostream& out) { write_report(make_report(p, l.family, l.data.value, l.w, tr, name), make_format(o), out); });
    return 0;
}

int cmd_select(const Options& o) {
    if (o.lambda) throw UsageError("--lambda: select chooses lambda itself");
    Loaded l = load(o);
    Direction d = make_direction(o);
    auto p = solve_path(l.data.value, l.w, l.family, d);
    Criterion c = make_criterion(o);
    std::optional<CriterionTrace> tr;
    Fit f = fit_with(o, l, p, c, &tr);
    const TraceEntry& e = tr->entries[tr->selected];
    std::printf("lambda_hat=%s K=%zu %s=%s", format_double(e.lambda).c_str(), e.pieces, criterion_name(c).c_str(),
                format_double(e.value).c_str());
    if (l.family.kind == Kind::Binomial)
        if (auto n = common_weight(l.w)) std::printf(" lambda_per_trial=%s", format_double(e.lambda / *n).c_str());
    std::printf("\n");
    if (!o.output.empty())
        emit(o, [&](std::ostream& out) {
            write_report(make_fit_report(f, l.family, l.data.value, l.w, d, criterion_name(c)), make_format(o), out);
        });
    return 0;
}

int cmd_spectrum(const Options& o) {
    if (o.input.empty()) throw UsageError("--input is required");
    Dataset ds = read_dataset(o.input);
    Criterion c = make_criterion(o);
    SpectrumFit sf;
    if (o.ordinates) {
        std::size_t T = o.length;
        if (T == 0) {
            auto it = ds.extra.find("freq");
            if (it == ds.extra.end() || it->second.empty() || !(it->second.front() > 0.0))
                throw UsageError("--length: needed when the ordinates carry no freq column");
            T = static_cast<std::size_t>(std::llround(1.0 / it->second.front()));
        }
        sf = spectrum_fit(periodogram_from_ordinates(ds.value, T), c);
    } else {
        sf = spectrum_fit(ds.value, c);
    }
    emit(o, [&](std::ostream& out) {
        if (make_format(o) == Format::Csv) {
            out << "freq,logfit\n";
            for (std::size_t i = 0; i < sf.freqs.size(); ++i)
                out << format_double(sf.freqs[i]) << "," << format_double(std::log(sf.fitted[i])) << "\n";
        } else {
            nlohmann::ordered_json j;
            j["lambda"] = sf.lambda;
            j["pieces"] = sf.fit.pieces;
            j["freq"] = sf.freqs;
            j["fitted"] = sf.fitted;
            out << j.dump(2) << "\n";
        }
    });
    return 0;
}

int cmd_rdd(const Options& o) {
    if (o.input.empty()) throw UsageError("--input is required");
    Dataset ds = read_dataset(o.input);
    auto r = rdd_fit(ds.value, ds.weights_or(1.0), make_criterion(o));
    auto age = ds.extra.find("age");
    auto where = [&](std::size_t i) {
        return age != ds.extra.end() ? format_double(age->second[i]) : std::to_string(ds.index[i]);
    };
    std::printf("lambda=%s pieces=%zu jumps=%zu\n", format_double(r.lambda).c_str(), r.fit.pieces, r.jumps.size());
    for (const Jump& j : r.jumps)
        std::printf("jump from=%s to=%s magnitude=%s\n", where(j.index).c_str(), where(j.index + 1).c_str(),
                    format_double(j.magnitude).c_str());
    if (!o.output.empty())
        emit(o, [&](std::ostream& out) {
            write_report(make_fit_report(r.fit, Family::poisson(), ds.value, ds.weights_or(1.0), Direction::Decreasing,
                                         criterion_name(make_criterion(o))),
                         make_format(o), out);
        });
    return 0;
}

int cmd_ode_error(const Options& o) {
    Criterion c = make_criterion(o);
    OdeErrorResult r;
    BlockResiduals b;
    if (o.demo) {
        FnDemoConfig cfg;
        cfg.d = o.blocks;
        cfg.seed = resolve_seed(o);
        FnDemo demo = fn_demo(cfg, c);
        r = demo.result;
        b = demo.blocks;
    } else {
        if (o.input.empty()) throw UsageError("--input: residual file required (or --demo)");
        if (!(o.gamma2 > 0.0)) throw UsageError("--gamma2: must be positive");
        Dataset ds = read_dataset(o.input);
        b = block_residuals(ds.value, o.blocks, o.gamma2);
        r = ode_error_quantify(b, c);
    }
    std::fprintf(stderr, "blocks=%zu dropped=%zu lambda=%s\n", b.sums.size(), b.dropped, format_double(r.lambda).c_str());
    emit(o, [&](std::ostream& out) {
        if (make_format(o) == Format::Csv) {
            out << "block,c_hat,sigma_tilde\n";
            for (std::size_t i = 0; i < r.c_hat.size(); ++i)
                out << i + 1 << "," << format_double(r.c_hat[i]) << "," << format_double(r.sigma_tilde[i]) << "\n";
        } else {
            nlohmann::ordered_json j;
            j["lambda"] = r.lambda;
            j["gamma2"] = b.gamma2;
            j["d"] = b.d;
            j["dropped"] = b.dropped;
            j["c_hat"] = r.c_hat;
            j["sigma_tilde"] = r.sigma_tilde;
            out << j.dump(2) << "\n";
        }
    });
    return 0;
}

int cmd_simulate(const Options& o) {
    if (o.config.empty()) throw UsageError("--config is required");
    Config cf = read_config(o.config);
    if (o.seed || std::getenv("NEARISO_SEED")) cf["seed"] = std::to_string(resolve_seed(o));
    if (o.threads > 1) cf["threads"] = std::to_string(o.threads);
    auto r = bias_study(bias_config(cf));
    emit(o, [&](std::ostream& out) {
        if (make_format(o) == Format::Csv) {
            out << "lambda,mean_aic,mean_2d,sd_aic,sd_2d\n";
            for (std::size_t k = 0; k < r.grid.size(); ++k)
                out << format_double(r.grid[k]) << "," << format_double(r.mean_aic[k]) << ","
                    << format_double(r.mean_2d[k]) << "," << format_double(r.sd_aic[k]) << ","
                    << format_double(r.sd_2d[k]) << "\n";
        } else {
            nlohmann::ordered_json j;
            j["replications"] = r.replications;
            j["inner"] = r.inner;
            j["lambda"] = r.grid;
            j["mean_aic"] = r.mean_aic;
            j["mean_2d"] = r.mean_2d;
            j["sd_aic"] = r.sd_aic;
            j["sd_2d"] = r.sd_2d;
            out << j.dump(2) << "\n";
        }
    });
    return 0;
}

int cmd_verify(const Options& o) {
    Loaded l = load(o);
    auto p = solve_path(l.data.value, l.w, l.family, make_direction(o));
    Fit f = fit_with(o, l, p, make_criterion(o));
    return verify_fit(o, l, f, std::cout) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nearly isotonic regression for exponential families"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);
    Options o;

    const std::vector<std::string> families{"normal", "binomial", "poisson", "chisq", "gamma"};
    auto common = [&](CLI::App* s, bool family = true) {
        s->add_option("--input", o.input, "CSV or JSON dataset")->check(CLI::ExistingFile);
        s->add_option("--output", o.output, "output file (default stdout)");
        s->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
        if (family) {
            s->add_option("--family", o.family, "exponential family")->check(CLI::IsMember(families));
            s->add_option("--dof", o.dof, "chi-square degrees of freedom");
            s->add_option("--shape", o.shape, "gamma shape");
            s->add_option("--direction", o.direction, "trend direction")->check(CLI::IsMember({"inc", "dec"}));
            s->add_option("--bounds", o.bounds, "natural-parameter bounds a,b");
        }
    };
    auto choose = [&](CLI::App* s) {
        s->add_option("--lambda", o.lambda, "fixed lambda");
        s->add_option("--select", o.select, "selection criterion")->check(CLI::IsMember({"aic", "cp"}));
        s->add_option("--sigma2", o.sigma2, "noise variance for cp")->check(CLI::PositiveNumber);
    };

    auto* fit = app.add_subcommand("fit", "fit at one lambda");
    common(fit);
    choose(fit);
    fit->add_flag("--verify", o.verify, "certify the fit against the objective oracle");

    auto* path = app.add_subcommand("path", "whole solution path");
    common(path);
    choose(path);

    auto* select = app.add_subcommand("select", "choose lambda over the knots");
    common(select);
    choose(select);

    auto* spectrum = app.add_subcommand("spectrum", "decreasing spectral density estimate");
    common(spectrum, false);
    choose(spectrum);
    spectrum->add_flag("--periodogram", o.ordinates, "input values are periodogram ordinates");
    spectrum->add_option("--length", o.length, "series length behind the ordinates");

    auto* rdd = app.add_subcommand("rdd", "decreasing Poisson trend and its upward jumps");
    common(rdd, false);
    choose(rdd);

    auto* ode = app.add_subcommand("ode-error", "blockwise discretization-error scale");
    common(ode, false);
    choose(ode);
    ode->add_option("--blocks", o.blocks, "block length d")->check(CLI::PositiveNumber);
    ode->add_option("--gamma2", o.gamma2, "observation noise variance");
    ode->add_option("--seed", o.seed, "seed for --demo");
    ode->add_flag("--demo", o.demo, "run the FitzHugh-Nagumo demonstration");

    auto* sim = app.add_subcommand("simulate", "AIC bias study");
    sim->add_option("--config", o.config, "key = value study description")->check(CLI::ExistingFile);
    sim->add_option("--output", o.output, "output file (default stdout)");
    sim->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sim->add_option("--seed", o.seed, "master seed (env NEARISO_SEED)");
    sim->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "certify a fit with the objective oracle and KKT conditions");
    common(verify);
    choose(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    }

    try {
        if (*fit) return cmd_fit(o);
        if (*path) return cmd_path(o);
        if (*select) return cmd_select(o);
        if (*spectrum) return cmd_spectrum(o);
        if (*rdd) return cmd_rdd(o);
        if (*ode) return cmd_ode_error(o);
        if (*sim) return cmd_simulate(o);
        if (*verify) return cmd_verify(o);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
