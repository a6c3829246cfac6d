// qgeom: validate presets, classify metrics, and verify Levi-Civita
// connections on quantum homogeneous spaces.
//
//   qgeom validate <preset>
//   qgeom metrics  <preset> [--lambda1 S --lambda2 S] [--samples N]
//   qgeom lc       <preset> --lambda1 S --lambda2 S [--degree N]
//   qgeom verify   <preset> --suite all|metrics|connection [--degree N]
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 input error.

#include "qgeom/connection.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

using namespace qgeom;
using nlohmann::json;

namespace {

struct Config {
    std::string command;
    std::string preset;
    std::string lambda1, lambda2;
    int degree = 4;
    int samples = 0;
    std::string suite = "all";
    std::string format = "text";
    std::vector<std::string> eval;
    bool eval_requested = false;
    bool force = false;
    bool timing = false;
};

struct InputError : Error {
    using Error::Error;
};

Scalar parse_scalar(const std::string &what, const std::string &text) {
    try {
        return Scalar::parse(text);
    } catch (const Error &e) {
        throw InputError(what + ": " + e.what());
    }
}

std::vector<mpq_class> eval_points(const Config &cfg) {
    std::vector<mpq_class> out;
    if (!cfg.eval_requested) return out;
    std::vector<std::string> pts;
    for (auto &e : cfg.eval)
        if (!e.empty()) pts.push_back(e);
    if (pts.empty()) pts = {"1/2", "9/10"};
    for (auto &p : pts) {
        try {
            mpq_class v(p);
            v.canonicalize();
            out.push_back(v);
        } catch (const std::exception &) {
            throw InputError("--eval: '" + p + "' is not a rational number");
        }
    }
    return out;
}

/** {"q0": value} for each evaluation point; poles render as null. */
json evaluated(const Scalar &s, const std::vector<mpq_class> &pts) {
    json j = json::object();
    for (auto &p : pts) {
        try {
            j[p.get_str()] = s.eval(p).str();
        } catch (const Error &) {
            j[p.get_str()] = nullptr;
        }
    }
    return j;
}

std::unique_ptr<Calculus> load(const Config &cfg, Report *validation) {
    std::string path;
    PresetData data;
    try {
        path = resolve_preset(cfg.preset);
        data = load_preset_file(path);
    } catch (const ParseError &e) {
        throw InputError(path + ": " + e.what());
    } catch (const Error &e) {
        throw InputError(e.what());
    }
    std::unique_ptr<Calculus> c;
    try {
        c = std::make_unique<Calculus>(data);
    } catch (const Error &e) {
        throw InputError(path + ": " + e.what());
    }
    Report v = validate_preset(*c, cfg.degree);
    if (!v.pass()) {
        if (!cfg.force) {
            std::string first;
            for (auto &ch : v.checks)
                if (!ch.passed()) {
                    first = ch.name + (ch.witness.empty() ? "" : " (" + ch.witness + ")");
                    break;
                }
            if (validation) {
                *validation = v;
                return c;
            }
            throw InputError("preset fails validation: " + first + "; use --force to load anyway");
        }
        std::cerr << "warning: preset " << cfg.preset << " fails validation; continuing because of --force\n";
    }
    if (validation) *validation = v;
    return c;
}

void print_text(const Report &r) {
    size_t failed = 0, skipped = 0;
    for (auto &ch : r.checks) {
        std::string tag = ch.status == "pass" ? "PASS" : ch.status == "skip" ? "SKIP" : "FAIL";
        std::cout << tag << "  " << ch.name;
        if (ch.degree_bound) std::cout << "  [degree ≤ " << ch.degree_bound << "]";
        if (ch.status != "pass" && !ch.witness.empty()) std::cout << "\n      " << (ch.status == "fail" ? "witness: " : "note: ") << ch.witness;
        std::cout << "\n";
        failed += ch.status == "fail";
        skipped += ch.status == "skip";
    }
    std::cout << r.checks.size() << " checks, " << failed << " failed, " << skipped << " skipped\n";
}

int emit(const Config &cfg, json payload, const Report &r, const std::vector<std::string> &text_lines = {}) {
    Report sorted = r;
    sorted.sort_by_name();
    bool ok = sorted.pass();
    if (cfg.format == "json") {
        payload["checks"] = report_json(sorted, cfg.timing);
        payload["pass"] = ok;
        std::cout << payload.dump(2) << "\n";
    } else {
        for (auto &l : text_lines) std::cout << l << "\n";
        print_text(sorted);
    }
    return ok ? 0 : 1;
}

json header(const Config &cfg) { return json{{"command", cfg.command}, {"preset", cfg.preset}}; }

// ---------------------------------------------------------------- commands

int cmd_validate(const Config &cfg) {
    Report v;
    auto c = load(cfg, &v);
    auto dims = form_dimensions(*c);
    std::string ds;
    for (auto d : dims) ds += (ds.empty() ? "" : ", ") + std::to_string(d);
    bool binom = dims.size() == 3 && dims[0] == 1 && dims[1] == 2 && dims[2] == 1;
    v.add("calculus.form_dimensions", binom, "(" + ds + ")");
    json p = header(cfg);
    p["degree_bound"] = cfg.degree;
    p["form_dimensions"] = dims;
    int code = emit(cfg, p, v, {"preset " + cfg.preset + ": form dimensions (" + ds + ")"});
    if (code != 0 && cfg.force) {
        std::cerr << "warning: validation failures ignored because of --force\n";
        return 0;
    }
    return code;
}

int cmd_metrics(const Config &cfg) {
    auto c = load(cfg, nullptr);
    auto pts = eval_points(cfg);
    BaseMetrics b = base_metrics(*c);
    Scalar lambda = qsym_lambda(*c, b);
    auto samples = default_lambda_samples(*c, b);
    if (cfg.samples > 0 && size_t(cfg.samples) < samples.size()) samples.resize(size_t(cfg.samples));
    Report r = qsym_uniqueness_scan(*c, b, samples);
    json p = header(cfg);
    p["base_metrics"] = {{"g10", b.g10.g.str()}, {"g01", b.g01.g.str()}};
    p["lambda_qsym"] = lambda.str();
    Scalar ray = -lambda;
    p["quantum_symmetric_ray"] = "lambda2 = " + ray.str() + " * lambda1";
    p["samples"] = samples.size();
    std::vector<std::string> lines = {"g10 = " + b.g10.g.str(), "g01 = " + b.g01.g.str(),
                                      "lambda_qsym = " + lambda.str(),
                                      "quantum-symmetric ray: lambda2 = " + ray.str() + " * lambda1"};
    if (!pts.empty()) p["lambda_qsym_eval"] = evaluated(lambda, pts);
    if (!cfg.lambda1.empty() || !cfg.lambda2.empty()) {
        if (cfg.lambda1.empty() || cfg.lambda2.empty()) throw InputError("--lambda1 and --lambda2 go together");
        Scalar l1 = parse_scalar("--lambda1", cfg.lambda1), l2 = parse_scalar("--lambda2", cfg.lambda2);
        if (l1.is_zero() || l2.is_zero()) throw InputError("metric parameters must be nonzero");
        Metric m = metric_family(b, l1, l2);
        json d = metric_descriptor(*c, b, m);
        if (!pts.empty()) d["eval"] = {{"lambda1", evaluated(l1, pts)}, {"lambda2", evaluated(l2, pts)}};
        p["metric"] = d;
        r.merge(metric_axioms(*c, m, cfg.degree));
        lines.push_back("metric (" + l1.str() + ", " + l2.str() + "): real " + (d["real"].get<bool>() ? "yes" : "no") +
                        ", quantum symmetric " + (d["quantum_symmetric"].get<bool>() ? "yes" : "no"));
    }
    return emit(cfg, p, r, lines);
}

int cmd_lc(const Config &cfg) {
    if (cfg.lambda1.empty() || cfg.lambda2.empty()) throw InputError("lc needs --lambda1 and --lambda2");
    Scalar l1 = parse_scalar("--lambda1", cfg.lambda1), l2 = parse_scalar("--lambda2", cfg.lambda2);
    if (l1.is_zero() || l2.is_zero()) throw InputError("metric parameters must be nonzero");
    auto c = load(cfg, nullptr);
    auto pts = eval_points(cfg);
    BaseMetrics b = base_metrics(*c);
    Metric m = metric_family(b, l1, l2);
    Reality re = is_real(*c, m);
    if (!re.real()) throw InputError("metric (" + l1.str() + ", " + l2.str() + ") is not real: " + re.witness);
    Report r = verify_levi_civita(*c, b, m, "", cfg.degree);
    r.merge(uniqueness_certificate(*c));
    json p = header(cfg);
    json d = metric_descriptor(*c, b, m);
    if (!pts.empty()) d["eval"] = {{"lambda1", evaluated(l1, pts)}, {"lambda2", evaluated(l2, pts)}};
    p["metric"] = d;
    std::vector<std::string> lines = {"Levi-Civita connection for (" + l1.str() + ", " + l2.str() + ")"};
    if (!r.find("lc.assembly")) {
        Connection lc = levi_civita(*c, m);
        json gamma = json::array();
        for (auto &row : lc.gamma) {
            json jr = json::array();
            for (auto &x : row) jr.push_back(x.str());
            gamma.push_back(jr);
        }
        p["christoffel"] = gamma;
        p["sigma"] = matrix_str(lc.sigma->m);
        lines.push_back("Christoffel symbols: " + form_matrix_str(lc.gamma));
        lines.push_back("sigma: " + matrix_str(lc.sigma->m));
    }
    return emit(cfg, p, r, lines);
}

int cmd_verify(const Config &cfg) {
    auto c = load(cfg, nullptr);
    VerifyOptions opt;
    opt.degree_bound = cfg.degree;
    opt.suite = cfg.suite;
    Report r = verify(*c, opt);
    json p = header(cfg);
    p["suite"] = cfg.suite;
    return emit(cfg, p, r);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Exact verification of metrics and connections on quantum homogeneous spaces"};
    app.require_subcommand(1);
    Config cfg;
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--degree", cfg.degree, "Degree bound for spanning-set sweeps")->check(CLI::PositiveNumber);
    app.add_flag("--force", cfg.force, "Load presets that fail validation (with a warning)");
    app.add_flag("--timing", cfg.timing, "Include per-check timings in JSON output");
    auto *ev = app.add_option("--eval", cfg.eval, "Evaluate exact scalars at q = q0 (default 1/2 9/10)")
                   ->expected(0, -1);

    auto preset_arg = [&](CLI::App *sub) { sub->add_option("preset", cfg.preset, "Preset name or path")->required(); };
    auto lambdas = [&](CLI::App *sub) {
        sub->add_option("--lambda1", cfg.lambda1, "First metric parameter (exact scalar)");
        sub->add_option("--lambda2", cfg.lambda2, "Second metric parameter (exact scalar)");
    };
    auto *validate = app.add_subcommand("validate", "Check preset soundness");
    preset_arg(validate);
    auto *metrics = app.add_subcommand("metrics", "Base metrics, quantum-symmetric ray, classification scan");
    preset_arg(metrics);
    lambdas(metrics);
    metrics->add_option("--samples", cfg.samples, "Number of (lambda1, lambda2) samples")->check(CLI::PositiveNumber);
    auto *lc = app.add_subcommand("lc", "Assemble and verify the Levi-Civita connection of a real metric");
    preset_arg(lc);
    lambdas(lc);
    auto *verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    preset_arg(verify_cmd);
    verify_cmd->add_option("--suite", cfg.suite, "Suite to run")->check(CLI::IsMember({"all", "metrics", "connection"}));
    for (auto *sub : {validate, metrics, lc, verify_cmd}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.eval_requested = ev->count() > 0;
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (cfg.command == "validate") return cmd_validate(cfg);
        if (cfg.command == "metrics") return cmd_metrics(cfg);
        if (cfg.command == "lc") return cmd_lc(cfg);
        return cmd_verify(cfg);
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
