#include "commcap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "commcap/boolfn.hpp"
#include "commcap/bounds.hpp"
#include "commcap/capacity.hpp"
#include "commcap/optimizer.hpp"
#include "commcap/protocol.hpp"
#include "commcap/randfn.hpp"
#include "commcap/spectral.hpp"

#ifndef COMMCAP_VERSION
#define COMMCAP_VERSION "0.0.0"
#endif

namespace commcap::cli {

namespace {

using nlohmann::json;

// Flag misuse detected after CLI11 parsing (exit 2, like parse errors).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Outputs round floats to 12 significant digits: enough to re-derive the
// double, stable across runs, no noise churn in diffs.
double round_sig(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

json jfloat(double v) { return round_sig(v); }

json jfloats(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(jfloat(x));
    return arr;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json make_manifest(const std::string& command, json parameters, json results) {
    return json{{"command", command},
                {"artifact_version", COMMCAP_VERSION},
                {"parameters", std::move(parameters)},
                {"results", std::move(results)}};
}

struct FnOpts {
    std::string fn;
    std::string file;
    int n = 0;
    std::optional<uint64_t> seed;
};

// --fn/--file function selection shared by most subcommands.
void add_fn_options(CLI::App* sub, FnOpts& o, int max_n,
                    const std::string& seed_help = "seed for the random family") {
    auto* fn = sub->add_option("--fn", o.fn, "built-in family")
                   ->check(CLI::IsMember({"ip", "eq", "ne", "disj", "const0", "const1", "random"}));
    auto* file = sub->add_option("--file", o.file, "CCF1 truth-table file");
    auto* n = sub->add_option("--n", o.n, "bits per side")->check(CLI::Range(1, max_n));
    sub->add_option("--seed", o.seed, seed_help);
    fn->excludes(file);
    file->excludes(fn);
    file->excludes(n);
    fn->needs(n);
}

BooleanFunction resolve_function(const FnOpts& o, int max_n) {
    if (!o.file.empty()) {
        std::ifstream in(o.file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open file: " + o.file);
        std::ostringstream buf;
        buf << in.rdbuf();
        BooleanFunction f = parse_ccf(buf.str());
        if (f.n() > max_n) {
            throw std::runtime_error("function in " + o.file + " has n = " +
                                     std::to_string(f.n()) + ", limit here is " +
                                     std::to_string(max_n));
        }
        return f;
    }
    if (o.fn.empty()) throw UsageError("one of --fn or --file is required");
    const Family family = *family_from_name(o.fn);
    if (family == Family::random && !o.seed.has_value()) {
        throw UsageError("--fn random requires --seed");
    }
    return make_family(family, o.n, o.seed);
}

json fn_parameters(const FnOpts& o) {
    json p;
    p["fn"] = o.fn.empty() ? json(nullptr) : json(o.fn);
    p["file"] = o.file.empty() ? json(nullptr) : json(o.file);
    p["n"] = o.n > 0 ? json(o.n) : json(nullptr);
    p["seed"] = o.seed ? json(*o.seed) : json(nullptr);
    return p;
}

json optimizer_parameters(const OptimizerConfig& cfg) {
    return json{{"max_iters", cfg.max_iters}, {"step_init", jfloat(cfg.step_init)},
                {"tol", jfloat(cfg.tol)},     {"restarts", cfg.restarts},
                {"seed", cfg.seed},           {"fd_step", jfloat(cfg.fd_step)}};
}

FannesVariant parse_variant(const std::string& name) {
    return name == "paper" ? FannesVariant::paper : FannesVariant::conservative;
}

json bounds_json(const BoundReport& r) {
    json vacuous = json::array();
    if (r.q_eps_fannes < 0.0) vacuous.push_back("q_eps_fannes");
    if (r.q_eps_ent_fannes < 0.0) vacuous.push_back("q_eps_ent_fannes");
    if (r.q_eps_repeated < 0.0) vacuous.push_back("q_eps_repeated");
    return json{{"entropy_bits", jfloat(r.entropy_bits)},
                {"n", r.n},
                {"epsilon", jfloat(r.epsilon)},
                {"fannes_variant", std::string(fannes_variant_name(r.fannes_variant))},
                {"distribution_provenance",
                 std::string(provenance_name(r.distribution_provenance))},
                {"q_exact", jfloat(r.q_exact)},
                {"q_exact_ent", jfloat(r.q_exact_ent)},
                {"q_eps_fannes", jfloat(r.q_eps_fannes)},
                {"q_eps_ent_fannes", jfloat(r.q_eps_ent_fannes)},
                {"q_eps_repeated", jfloat(r.q_eps_repeated)},
                {"repetition_k", r.repetition_k},
                {"vacuous", std::move(vacuous)}};
}

// ---- bound ---------------------------------------------------------------

struct BoundOpts {
    FnOpts fn;
    std::string dist = "uniform";
    double eps = 0.0;
    std::string fannes = "conservative";
    std::string format = "json";
    OptimizerConfig opt;
};

int do_bound(const BoundOpts& o, std::ostream& out) {
    const BooleanFunction f = resolve_function(o.fn, kMaxBits);
    const SignMatrix m = sign_matrix(f);
    const int d = m.dim();

    SimplexVector a = SimplexVector::uniform(d);
    SimplexVector b = SimplexVector::uniform(d);
    json optimizer_result = nullptr;
    DistProvenance provenance = DistProvenance::uniform;
    if (o.dist == "optimize") {
        OptimizerResult r = optimize_distributions(m, o.opt);
        a = r.a;
        b = r.b;
        provenance = DistProvenance::optimized;
        optimizer_result = json{{"iterations_used", r.iterations_used},
                                {"start_index", r.start_index}};
    }

    const SpectrumResult spectrum = capacity_entropy(m, a, b);
    const Renyi2Result renyi = provenance == DistProvenance::uniform
                                   ? renyi2_uniform_fast(m)
                                   : renyi2_of_spectrum(spectrum.sigma_sq);
    const BoundReport report =
        theorem1_report(spectrum.entropy_bits, f.n(), o.eps, parse_variant(o.fannes), provenance);

    if (o.format == "csv") {
        out << "n,epsilon,fannes_variant,distribution_provenance,entropy_bits,s2_bits,"
               "q_exact,q_exact_ent,q_eps_fannes,q_eps_ent_fannes,q_eps_repeated,repetition_k\n";
        out << report.n << ',' << csv_num(report.epsilon) << ','
            << fannes_variant_name(report.fannes_variant) << ','
            << provenance_name(report.distribution_provenance) << ','
            << csv_num(report.entropy_bits) << ',' << csv_num(renyi.s2_bits) << ','
            << csv_num(report.q_exact) << ',' << csv_num(report.q_exact_ent) << ','
            << csv_num(report.q_eps_fannes) << ',' << csv_num(report.q_eps_ent_fannes) << ','
            << csv_num(report.q_eps_repeated) << ',' << report.repetition_k << '\n';
        return 0;
    }

    json params = fn_parameters(o.fn);
    params["dist"] = o.dist;
    params["eps"] = jfloat(o.eps);
    params["fannes"] = o.fannes;
    params["format"] = o.format;
    params["optimizer"] = optimizer_parameters(o.opt);

    json results{{"n", f.n()},
                 {"spectrum", json{{"sigma_sq", jfloats(spectrum.sigma_sq)},
                                   {"entropy_bits", jfloat(spectrum.entropy_bits)}}},
                 {"renyi2", json{{"s2_bits", jfloat(renyi.s2_bits)},
                                 {"method", renyi.method == Renyi2Method::uniform_fast
                                                ? "uniform_fast"
                                                : "from_spectrum"}}},
                 {"bounds", bounds_json(report)},
                 {"distributions", json{{"a", jfloats(a.weights())}, {"b", jfloats(b.weights())}}},
                 {"optimizer", std::move(optimizer_result)}};
    out << make_manifest("bound", std::move(params), std::move(results)).dump(2) << '\n';
    return 0;
}

// ---- renyi2 --------------------------------------------------------------

int do_renyi2(const FnOpts& o, std::ostream& out) {
    const BooleanFunction f = resolve_function(o, kMaxBits);
    const Renyi2Result r = renyi2_uniform_fast(sign_matrix(f));
    json results{{"n", f.n()}, {"s2_bits", jfloat(r.s2_bits)}, {"method", "uniform_fast"}};
    out << make_manifest("renyi2", fn_parameters(o), std::move(results)).dump(2) << '\n';
    return 0;
}

// ---- optimize ------------------------------------------------------------

struct OptimizeOpts {
    FnOpts fn;
    OptimizerConfig cfg;
};

int do_optimize(const OptimizeOpts& o, std::ostream& out) {
    FnOpts fn = o.fn;
    OptimizerConfig cfg = o.cfg;
    if (fn.seed) cfg.seed = *fn.seed;  // one seed drives the run
    const BooleanFunction f = resolve_function(fn, kMaxBits);
    const OptimizerResult r = optimize_distributions(sign_matrix(f), cfg);

    json params = fn_parameters(fn);
    params["optimizer"] = optimizer_parameters(cfg);
    json results{{"n", f.n()},
                 {"entropy_bits", jfloat(r.entropy_bits)},
                 {"iterations_used", r.iterations_used},
                 {"start_index", r.start_index},
                 {"a", jfloats(r.a.weights())},
                 {"b", jfloats(r.b.weights())}};
    out << make_manifest("optimize", std::move(params), std::move(results)).dump(2) << '\n';
    return 0;
}

// ---- protocol-check ------------------------------------------------------

struct ProtocolOpts {
    FnOpts fn;
    double eps = 0.01;
    int trials = 20;
};

int do_protocol_check(const ProtocolOpts& o, std::ostream& out) {
    const BooleanFunction f = resolve_function(o.fn, 6);
    const int d = f.dim();
    const SimplexVector a = SimplexVector::uniform(d);
    const SimplexVector b = SimplexVector::uniform(d);
    const uint64_t seed = o.fn.seed.value_or(0);

    // Clean algebra: the register simulation must reproduce the closed form.
    bool clean_pass = true;
    double worst_clean_dist = 0.0;
    for (int x = 0; x < d; ++x) {
        const double dist = l2_distance(simulate_clean_protocol(f, x, b).canonical(),
                                        clean_state(f, x, b).canonical());
        worst_clean_dist = std::max(worst_clean_dist, dist);
        if (dist > 1e-10) clean_pass = false;
    }

    const double fidelity_floor = (1.0 - 2.0 * o.eps) * (1.0 - 2.0 * o.eps);
    const double trace_ceiling = 4.0 * std::sqrt(o.eps);
    int eq15_violations = 0;
    int eq16_violations = 0;
    double min_fid = 1.0;
    double max_trace = 0.0;
    double s_clean = 0.0;
    double s_noisy_min = std::numeric_limits<double>::infinity();
    double s_noisy_max = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < o.trials; ++trial) {
        const NoisyAnswerModel model =
            NoisyAnswerModel::sample(f.n(), o.eps, seed ^ static_cast<uint64_t>(trial));
        const EnsembleReport rep = ensemble_trace_distance(f, a, b, model);
        if (rep.min_fidelity_sq < fidelity_floor - 1e-12) ++eq15_violations;
        if (rep.trace_distance > trace_ceiling + 1e-9) ++eq16_violations;
        min_fid = std::min(min_fid, rep.min_fidelity_sq);
        max_trace = std::max(max_trace, rep.trace_distance);
        s_clean = rep.s_clean;
        s_noisy_min = std::min(s_noisy_min, rep.s_noisy);
        s_noisy_max = std::max(s_noisy_max, rep.s_noisy);
    }

    json params = fn_parameters(o.fn);
    params["eps"] = jfloat(o.eps);
    params["trials"] = o.trials;

    json results{{"n", f.n()},
                 {"trials", o.trials},
                 {"clean_algebra_pass", clean_pass},
                 {"max_clean_l2_distance", jfloat(worst_clean_dist)},
                 {"fidelity_floor", jfloat(fidelity_floor)},
                 {"min_fidelity_sq", jfloat(min_fid)},
                 {"eq15_pass", eq15_violations == 0},
                 {"eq15_violations", eq15_violations},
                 {"trace_distance_ceiling", jfloat(trace_ceiling)},
                 {"max_trace_distance", jfloat(max_trace)},
                 {"eq16_pass", eq16_violations == 0},
                 {"eq16_violations", eq16_violations},
                 {"s_clean", jfloat(s_clean)},
                 {"s_noisy_min", jfloat(s_noisy_min)},
                 {"s_noisy_max", jfloat(s_noisy_max)}};
    out << make_manifest("protocol-check", std::move(params), std::move(results)).dump(2) << '\n';
    return 0;
}

// ---- tail ----------------------------------------------------------------

struct TailOpts {
    int n = 4;
    double delta = 0.5;
    int trials = 1000;
    uint64_t seed = 0;
};

int do_tail(const TailOpts& o, std::ostream& out) {
    TailExperimentConfig cfg{o.n, o.delta, o.trials, o.seed};
    const TailExperimentResult r = tail_experiment(cfg);

    json params{{"n", o.n}, {"delta", jfloat(o.delta)}, {"trials", o.trials}, {"seed", o.seed}};
    json results{{"empirical_freq", jfloat(r.empirical_freq)},
                 {"tail_count", r.tail_count},
                 {"trials", r.trials},
                 {"analytic_bound", jfloat(r.analytic_bound)},
                 {"analytic_bound_factor2", jfloat(2.0 * r.analytic_bound)},
                 {"s2_min", jfloat(r.s2_min)},
                 {"s2_mean", jfloat(r.s2_mean)},
                 {"s2_max", jfloat(r.s2_max)}};
    out << make_manifest("tail", std::move(params), std::move(results)).dump(2) << '\n';
    return 0;
}

// ---- sweep ---------------------------------------------------------------

struct SweepOpts {
    std::string fn;
    int n_min = 2;
    int n_max = 8;
    std::string dist = "uniform";
    std::optional<uint64_t> seed;
};

int do_sweep(const SweepOpts& o, std::ostream& out) {
    if (o.n_min > o.n_max) throw UsageError("--n-min must be <= --n-max");
    const Family family = *family_from_name(o.fn);
    if (family == Family::random && !o.seed.has_value()) {
        throw UsageError("--fn random requires --seed");
    }
    out << "n,h_bits,s2_bits,q_exact,q_exact_ent\n";
    for (int n = o.n_min; n <= o.n_max; ++n) {
        const SignMatrix m = sign_matrix(make_family(family, n, o.seed));
        double h;
        if (o.dist == "optimize") {
            OptimizerConfig cfg;
            if (o.seed) cfg.seed = *o.seed;
            h = optimize_distributions(m, cfg).entropy_bits;
        } else {
            const SimplexVector u = SimplexVector::uniform(m.dim());
            h = capacity_entropy(m, u, u).entropy_bits;
        }
        const double s2 = renyi2_uniform_fast(m).s2_bits;
        out << n << ',' << csv_num(h) << ',' << csv_num(s2) << ',' << csv_num(h) << ','
            << csv_num(0.5 * h) << '\n';
    }
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"communication-capacity lower bounds for two-party Boolean functions"};
    app.name("commcap");
    app.require_subcommand(1);

    BoundOpts bound;
    auto* bound_cmd = app.add_subcommand(
        "bound", "spectrum, capacity entropy and the four lower bounds for one function");
    add_fn_options(bound_cmd, bound.fn, kMaxBits);
    bound_cmd->add_option("--dist", bound.dist, "input distributions")
        ->check(CLI::IsMember({"uniform", "optimize"}));
    bound_cmd->add_option("--eps", bound.eps, "allowed protocol error")
        ->check(CLI::Range(0.0, 0.4999999));
    bound_cmd->add_option("--fannes", bound.fannes, "bounded-error correction variant")
        ->check(CLI::IsMember({"paper", "conservative"}));
    bound_cmd->add_option("--format", bound.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    FnOpts renyi;
    auto* renyi_cmd =
        app.add_subcommand("renyi2", "fast Renyi-2 lower bound under uniform distributions");
    add_fn_options(renyi_cmd, renyi, kMaxBits);

    OptimizeOpts optimize;
    auto* optimize_cmd = app.add_subcommand(
        "optimize", "maximize the capacity entropy over the two input distributions");
    add_fn_options(optimize_cmd, optimize.fn, kMaxBits,
                   "seed for the optimizer restarts (and the random family)");
    optimize_cmd->add_option("--restarts", optimize.cfg.restarts, "extra Dirichlet starts")
        ->check(CLI::Range(0, 1000));
    optimize_cmd->add_option("--max-iters", optimize.cfg.max_iters, "iteration cap per start")
        ->check(CLI::Range(1, 1000000));
    optimize_cmd->add_option("--tol", optimize.cfg.tol, "per-iteration gain stop threshold");
    optimize_cmd->add_option("--step", optimize.cfg.step_init, "initial ascent step");

    ProtocolOpts protocol;
    auto* protocol_cmd = app.add_subcommand(
        "protocol-check", "simulate the clean and noisy protocols and verify their guarantees");
    add_fn_options(protocol_cmd, protocol.fn, 6,
                   "seed for the noise models (and the random family)");
    protocol_cmd->add_option("--eps", protocol.eps, "protocol error rate")
        ->check(CLI::Range(0.0, 0.4999999));
    protocol_cmd->add_option("--trials", protocol.trials, "number of sampled noise models")
        ->check(CLI::Range(1, 1000000));

    TailOpts tail;
    auto* tail_cmd = app.add_subcommand(
        "tail", "sample random functions and compare the S2 tail against the analytic bound");
    tail_cmd->add_option("--n", tail.n, "bits per side")->check(CLI::Range(1, 8));
    tail_cmd->add_option("--delta", tail.delta, "tail fraction")
        ->check(CLI::Range(1e-9, 0.999999999));
    tail_cmd->add_option("--trials", tail.trials, "number of random functions")
        ->check(CLI::Range(1, 100000000));
    tail_cmd->add_option("--seed", tail.seed, "master seed (trial t uses seed XOR t)");

    SweepOpts sweep;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "CSV of capacity entropy and bounds across input sizes");
    sweep_cmd->add_option("--fn", sweep.fn, "built-in family")
        ->required()
        ->check(CLI::IsMember({"ip", "eq", "ne", "disj", "const0", "const1", "random"}));
    sweep_cmd->add_option("--n-min", sweep.n_min, "smallest n")->check(CLI::Range(1, kMaxBits));
    sweep_cmd->add_option("--n-max", sweep.n_max, "largest n")->check(CLI::Range(1, kMaxBits));
    sweep_cmd->add_option("--dist", sweep.dist, "input distributions")
        ->check(CLI::IsMember({"uniform", "optimize"}));
    sweep_cmd->add_option("--seed", sweep.seed, "seed for the random family / optimizer");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("commcap");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        if (bound_cmd->parsed()) return do_bound(bound, out);
        if (renyi_cmd->parsed()) return do_renyi2(renyi, out);
        if (optimize_cmd->parsed()) return do_optimize(optimize, out);
        if (protocol_cmd->parsed()) return do_protocol_check(protocol, out);
        if (tail_cmd->parsed()) return do_tail(tail, out);
        if (sweep_cmd->parsed()) return do_sweep(sweep, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;  // no subcommand (require_subcommand should already have caught this)
}

}  // namespace commcap::cli
