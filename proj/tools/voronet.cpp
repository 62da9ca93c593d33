// voronet command-line tool: build, evaluate, verify and benchmark
// piecewise-constant threshold networks.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 equivalence failure.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "voronet/voronet.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEquivalence = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form; byte-stable for identical inputs.
std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

voronet::TieMode parse_tie_mode(const std::string& s) {
    if (s == "lowest") return voronet::TieMode::LowestIndex;
    if (s == "paper") return voronet::TieMode::PaperFaithful;
    throw UsageError("invalid --tie-mode '" + s + "' (expected paper or lowest)");
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || v < 2)
            throw UsageError("invalid --n-list entry '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--n-list is empty");
    return out;
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw UsageError("invalid coordinate '" + tok + "' in --point");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--point is empty");
    return out;
}

struct Common {
    std::uint64_t seed = 0;
    std::string tie_mode = "lowest";
    double epsilon = 0.5;
};

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw voronet::CsvError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw voronet::CsvError("write failed: " + path.string());
}

// ---------------------------------------------------------------- build

int cmd_build(const std::string& csv, const std::string& model_out, bool has_header,
              const Common& common) {
    const voronet::SampleSet samples = voronet::load_samples_csv(csv, has_header);
    const voronet::NetworkParams params =
        voronet::build_network(samples, parse_tie_mode(common.tie_mode), common.epsilon);
    voronet::save_model(params, model_out);
    std::cout << "n: " << params.size() << "\n"
              << "d: " << params.dim() << "\n"
              << "first layer: " << params.first_layer_size() << " neurons\n"
              << "second layer: " << params.size() << " neurons\n"
              << "tie mode: " << voronet::to_string(params.tie_mode())
              << ", epsilon: " << fmt(params.epsilon()) << "\n"
              << "model written to " << model_out << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- eval

int cmd_eval(const std::string& model_path, const std::string& point_arg,
             const std::string& points_csv, bool has_header, const std::string& out_path) {
    const voronet::NetworkParams params = voronet::load_model(model_path);
    std::vector<double> flat;
    std::size_t count = 0;
    if (!point_arg.empty() && !points_csv.empty())
        throw UsageError("use either --point or --points-csv, not both");
    if (!point_arg.empty()) {
        flat = parse_point(point_arg);
        count = 1;
        if (flat.size() != params.dim())
            throw voronet::CsvError("point has dimension " + std::to_string(flat.size()) +
                                    ", model expects " + std::to_string(params.dim()));
    } else if (!points_csv.empty()) {
        std::tie(flat, count) = voronet::load_points_csv(points_csv, has_header, params.dim());
    } else {
        throw UsageError("eval needs --point or --points-csv");
    }

    const std::vector<double> y = voronet::eval_batch(params, flat, count);
    std::string csv_text = "prediction\n";
    for (double v : y) {
        std::cout << fmt(v) << "\n";
        csv_text += fmt(v) + "\n";
    }
    if (!out_path.empty()) write_text_file(out_path, csv_text);
    return kExitOk;
}

// ---------------------------------------------------------------- check

int cmd_check(const std::string& model_path, const std::string& csv, bool has_header,
              std::uint64_t queries, double near_tie_tol, const std::string& domain_arg,
              const Common& common) {
    const voronet::SampleSet samples = voronet::load_samples_csv(csv, has_header);
    voronet::NetworkParams params = voronet::load_model(model_path);
    if (params.tie_mode() != voronet::TieMode::LowestIndex) {
        // The oracle realizes the lowest-index partition; compare in that mode.
        const voronet::SampleSet from_model(
            params.dim(),
            std::vector<double>(params.generators_flat().begin(), params.generators_flat().end()),
            std::vector<double>(params.output_weights().begin(), params.output_weights().end()));
        params = voronet::build_network(from_model, voronet::TieMode::LowestIndex, params.epsilon());
    }

    std::cout << "# cmd=check seed=" << common.seed << " queries=" << queries
              << " near-tie-tol=" << fmt(near_tie_tol) << "\n";
    if (queries == 0) {
        std::cout << "0/0 match\n"
                  << "warning: no queries requested; trivial pass\n";
        return kExitOk;
    }

    std::optional<voronet::AxisBox> domain;
    if (!domain_arg.empty()) {
        const std::vector<double> lohi = parse_point(domain_arg);
        if (lohi.size() != 2 || !(lohi[0] < lohi[1]))
            throw UsageError("--domain expects 'lo,hi' with lo < hi");
        domain = voronet::AxisBox::cube(samples.dim(), lohi[0], lohi[1]);
    } else {
        domain = samples.bounding_box();
    }

    const std::vector<double> pts =
        voronet::draw_uniform(*domain, queries, common.seed, voronet::kStreamQueries);
    const voronet::EquivalenceReport rep = voronet::check_equivalence(
        samples, params, pts, queries, voronet::EquivalenceOptions{near_tie_tol});

    std::cout << rep.matched << "/" << rep.total << " match\n"
              << "exact ties: " << rep.ties << "\n"
              << "near ties: " << rep.near_ties << "\n"
              << "hard mismatches: " << rep.hard_mismatches << "\n";
    if (!rep.passed()) {
        std::size_t shown = 0;
        for (std::size_t q = 0; q < rep.queries.size() && shown < 10; ++q) {
            const auto& c = rep.queries[q];
            if (c.match || c.near_tie) continue;
            std::cout << "mismatch at query " << q << ": network " << fmt(c.network_output)
                      << ", oracle " << fmt(c.oracle_output) << "\n";
            ++shown;
        }
        return kExitEquivalence;
    }
    return kExitOk;
}

// ---------------------------------------------------------- convergence

int cmd_convergence(const std::string& target_spec, const std::string& n_list_arg,
                    const std::string& sampling_arg, std::uint64_t m, std::size_t reps,
                    std::uint64_t bound_mc, const std::string& out_path, const Common& common) {
    voronet::TargetFunction target;
    try {
        target = voronet::parse_target(target_spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    voronet::ConvergenceConfig cfg{target.domain};
    cfg.n_list = parse_n_list(n_list_arg);
    if (sampling_arg == "grid1d") cfg.sampling = voronet::SamplingMode::UniformGrid1D;
    else if (sampling_arg == "random") cfg.sampling = voronet::SamplingMode::Random;
    else throw UsageError("invalid --sampling '" + sampling_arg + "' (expected random or grid1d)");
    cfg.m = m;
    cfg.seed = common.seed;
    cfg.repetitions = reps;
    cfg.tie_mode = parse_tie_mode(common.tie_mode);
    cfg.epsilon = common.epsilon;
    cfg.bound_mc_points = bound_mc;

    const voronet::ConvergenceSeries series = voronet::run_convergence(target, cfg);

    std::string csv_text = "n,eps_inf,eps_2,rms,theorem_bound,corollary_bound\n";
    for (const auto& e : series.entries) {
        csv_text += fmt(static_cast<std::uint64_t>(e.n)) + "," + fmt(e.report.eps_inf) + "," +
                    fmt(e.report.eps_2) + "," + fmt(e.report.rms) + "," + fmt(e.theorem_bound) +
                    "," + fmt(e.corollary_bound) + "\n";
    }

    std::cout << "# cmd=convergence target=" << target.name << " d=" << target.dim
              << " sampling=" << voronet::to_string(cfg.sampling) << " n-list=" << n_list_arg
              << " m=" << m << " reps=" << reps << " seed=" << common.seed
              << " tie=" << common.tie_mode << " epsilon=" << fmt(common.epsilon)
              << " bound-mc=" << bound_mc << "\n"
              << csv_text << "# fitted_slope=" << fmt(series.fitted_slope)
              << " reference_slope=" << fmt(series.reference_slope) << "\n";
    if (!out_path.empty()) write_text_file(out_path, csv_text);
    return kExitOk;
}

// ---------------------------------------------------------------- bound

int cmd_bound(const std::string& csv, bool has_header, const std::string& target_spec,
              double grad_sup_arg, const std::string& domain_arg, std::uint64_t mc_points,
              const Common& common) {
    const voronet::SampleSet samples = voronet::load_samples_csv(csv, has_header);

    double grad_sup = grad_sup_arg;
    std::optional<voronet::AxisBox> domain;
    if (!target_spec.empty()) {
        voronet::TargetFunction target;
        try {
            target = voronet::parse_target(target_spec);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (!target.grad_sup)
            throw UsageError("target '" + target.name + "' has no gradient bound");
        if (target.dim != samples.dim())
            throw voronet::CsvError("target dimension " + std::to_string(target.dim) +
                                    " does not match samples dimension " +
                                    std::to_string(samples.dim()));
        grad_sup = *target.grad_sup;
        domain = target.domain;
    } else if (!(grad_sup >= 0.0)) {
        throw UsageError("bound needs --grad-sup >= 0 or --target");
    }
    if (!domain_arg.empty()) {
        const std::vector<double> lohi = parse_point(domain_arg);
        if (lohi.size() != 2 || !(lohi[0] < lohi[1]))
            throw UsageError("--domain expects 'lo,hi' with lo < hi");
        domain = voronet::AxisBox::cube(samples.dim(), lohi[0], lohi[1]);
    }
    if (!domain) domain = samples.bounding_box();

    const voronet::BoundEstimate tb =
        voronet::theorem_bound_detail(samples, grad_sup, *domain, mc_points, common.seed);
    const double cb = voronet::corollary_bound(samples, grad_sup, *domain, mc_points, common.seed);
    std::cout << "# cmd=bound seed=" << common.seed << " mc=" << mc_points
              << " grad-sup=" << fmt(grad_sup) << "\n"
              << "theorem_bound=" << fmt(tb.value) << "\n"
              << "theorem_bound_std_error=" << fmt(tb.std_error) << "\n"
              << "corollary_bound=" << fmt(cb) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voronet: explicit piecewise-constant threshold networks"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--seed", common.seed, "RNG seed (all randomness derives from it)");
    app.add_option("--tie-mode", common.tie_mode, "tie rule: paper | lowest")->default_str("lowest");
    app.add_option("--epsilon", common.epsilon, "second-layer threshold slack in [0,1)");

    // build
    std::string b_csv, b_model;
    bool b_header = false;
    auto* build = app.add_subcommand("build", "build a model from a samples CSV");
    build->add_option("samples", b_csv, "training CSV (d coordinate columns, then value)")->required();
    build->add_option("model", b_model, "output model path")->required();
    build->add_flag("--has-header", b_header, "skip one header row");

    // eval
    std::string e_model, e_point, e_csv, e_out;
    bool e_header = false;
    auto* eval = app.add_subcommand("eval", "evaluate a model at query points");
    eval->add_option("model", e_model, "model path")->required();
    eval->add_option("--point", e_point, "single query point 'x1,x2,...'");
    eval->add_option("--points-csv", e_csv, "CSV of query points, d columns per row");
    eval->add_flag("--has-header", e_header, "query CSV has a header row");
    eval->add_option("--out", e_out, "also write predictions as CSV");

    // check
    std::string c_model, c_csv, c_domain;
    bool c_header = false;
    std::uint64_t c_queries = 10000;
    double c_tol = 1e-12;
    auto* check = app.add_subcommand("check", "verify the model against the brute-force oracle");
    check->add_option("model", c_model, "model path")->required();
    check->add_option("samples", c_csv, "training CSV the model was built from")->required();
    check->add_flag("--has-header", c_header, "samples CSV has a header row");
    check->add_option("--queries", c_queries, "number of random queries");
    check->add_option("--near-tie-tol", c_tol, "relative squared-distance gap for near-ties");
    check->add_option("--domain", c_domain, "query box 'lo,hi' (default: samples bounding box)");

    // convergence
    std::string v_target, v_nlist, v_sampling = "random", v_out;
    std::uint64_t v_m = 10000, v_bound_mc = 20000;
    std::size_t v_reps = 3;
    auto* conv = app.add_subcommand("convergence", "error-versus-n study for a named target");
    conv->add_option("--target", v_target, "target spec, e.g. cos1d | sine:d=2:omega=6.283 | gauss:d=4")->required();
    conv->add_option("--n-list", v_nlist, "comma-separated training sizes, strictly increasing")->required();
    conv->add_option("--sampling", v_sampling, "random | grid1d");
    conv->add_option("--m", v_m, "validation points per run");
    conv->add_option("--reps", v_reps, "repetitions averaged per n");
    conv->add_option("--bound-mc", v_bound_mc, "MC points for bound columns (0 disables)");
    conv->add_option("--out", v_out, "write the CSV table to this path");

    // bound
    std::string d_csv, d_target, d_domain;
    bool d_header = false;
    double d_grad_sup = -1.0;
    std::uint64_t d_mc = 100000;
    auto* bound = app.add_subcommand("bound", "error bounds for a sample set");
    bound->add_option("samples", d_csv, "training CSV")->required();
    bound->add_flag("--has-header", d_header, "samples CSV has a header row");
    bound->add_option("--grad-sup", d_grad_sup, "sup of ||grad f|| over the domain");
    bound->add_option("--target", d_target, "named target supplying grad-sup and domain");
    bound->add_option("--domain", d_domain, "box 'lo,hi' (default: target domain or bounding box)");
    bound->add_option("--mc", d_mc, "Monte-Carlo points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed()) return cmd_build(b_csv, b_model, b_header, common);
        if (eval->parsed()) return cmd_eval(e_model, e_point, e_csv, e_header, e_out);
        if (check->parsed())
            return cmd_check(c_model, c_csv, c_header, c_queries, c_tol, c_domain, common);
        if (conv->parsed())
            return cmd_convergence(v_target, v_nlist, v_sampling, v_m, v_reps, v_bound_mc, v_out,
                                   common);
        if (bound->parsed())
            return cmd_bound(d_csv, d_header, d_target, d_grad_sup, d_domain, d_mc, common);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
