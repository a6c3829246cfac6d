// Acceptance harness: one PASS/FAIL line per criterion, exact arithmetic throughout.
// Exit status is non-zero when any criterion fails.

#include "qgeom/connection.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace qgeom;
using nlohmann::json;

namespace {

constexpr const char *kTolerance = "exact (zero tolerance)";

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome run_cli(const std::string &args) {
    std::string cmd = std::string(QGEOM_CLI) + " " + args + " 2>/dev/null";
    Outcome r;
    FILE *p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

/** Accumulates the evidence for one criterion; the first failed requirement is kept as the reason. */
struct Verdict {
    bool ok = true;
    std::string detail, reason;
    void require(bool cond, const std::string &why) {
        if (!cond && ok) {
            ok = false;
            reason = why;
        }
    }
};

const Calculus &cp1() {
    static std::unique_ptr<Calculus> c = std::make_unique<Calculus>(load_preset_file(QGEOM_TEST_PRESET));
    return *c;
}

const BaseMetrics &metrics() {
    static BaseMetrics b = base_metrics(cp1());
    return b;
}

Scalar lambda_qsym() { return qsym_lambda(cp1(), metrics()); }
Metric qsym_metric() { return metric_family(metrics(), 1, -lambda_qsym()); }
Metric generic_metric() { return metric_family(metrics(), 2, Scalar::parse("5/3")); }

const Connection &lc_qsym() {
    static Connection lc = levi_civita(cp1(), qsym_metric());
    return lc;
}

std::string first_failure(const Report &r) {
    for (auto &ch : r.checks)
        if (!ch.passed()) return ch.name + (ch.witness.empty() ? "" : " [" + ch.witness.substr(0, 160) + "]");
    return "";
}

bool failed_with_witness(const Report &r) {
    for (auto &ch : r.checks)
        if (!ch.passed() && !ch.witness.empty()) return true;
    return false;
}

/** The two canonical `verify --suite all` payloads, produced once and shared by criteria 9, 10 and 12. */
const std::array<Outcome, 2> &verify_runs() {
    static std::array<Outcome, 2> runs = [] {
        std::array<Outcome, 2> r;
        for (auto &o : r) o = run_cli("--format json verify " + std::string(QGEOM_TEST_PRESET) + " --suite all");
        return r;
    }();
    return runs;
}

std::optional<json> verify_payload() {
    const Outcome &o = verify_runs()[0];
    try {
        return json::parse(o.out);
    } catch (const json::exception &) {
        return std::nullopt;
    }
}

std::map<std::string, std::string> check_status(const json &payload) {
    std::map<std::string, std::string> m;
    for (auto &ch : payload["checks"]) m[ch["check"].get<std::string>()] = ch["status"].get<std::string>();
    return m;
}

// ---------------------------------------------------------------- criteria

Verdict preset_soundness() {
    Verdict v;
    Outcome o = run_cli("--format json validate " + std::string(QGEOM_TEST_PRESET));
    v.require(o.code == 0, "validate exited with status " + std::to_string(o.code));
    json j = json::parse(o.out, nullptr, false);
    v.require(!j.is_discarded() && j["pass"] == true, "validate payload is not a pass");
    size_t n = j.is_discarded() ? 0 : j["checks"].size();
    std::set<std::string> names;
    if (!j.is_discarded())
        for (auto &ch : j["checks"]) names.insert(ch["check"].get<std::string>());
    for (const char *need : {"calculus.leibniz", "calculus.d_squared", "calculus.star_compatibility",
                             "calculus.form_dimensions"})
        v.require(names.count(need), std::string("missing check ") + need);
    v.detail = std::to_string(n) + " checks at degree 4, confluence 6";
    return v;
}

Verdict dimensions() {
    Verdict v;
    auto dims = form_dimensions(cp1());
    // classical dimension of CP^M with M = 1: binom(2M, k)
    std::vector<size_t> expect;
    for (size_t k = 0, b = 1; k <= 2; ++k) {
        expect.push_back(b);
        b = b * (2 - k) / (k + 1);
    }
    v.require(dims == expect, "form dimensions differ from binom(2, k)");
    std::ostringstream s;
    s << "dim = (";
    for (size_t k = 0; k < dims.size(); ++k) s << (k ? ", " : "") << dims[k];
    s << ")";
    v.detail = s.str();
    return v;
}

Verdict metric_moduli() {
    Verdict v;
    auto samples = default_lambda_samples(cp1(), metrics());
    v.require(samples.size() >= 20, "fewer than 20 samples");
    for (auto &[l1, l2] : samples) {
        Report r = metric_axioms(cp1(), metric_family(metrics(), l1, l2), 4);
        v.require(r.pass(), "axioms fail at (" + l1.str() + ", " + l2.str() + "): " + first_failure(r));
    }
    auto pert = metric_perturbations(cp1(), metrics());
    v.require(pert.size() >= 5, "fewer than 5 perturbations");
    for (auto &[name, m] : pert) {
        Report r = metric_axioms(cp1(), m, 4);
        v.require(!r.pass() && failed_with_witness(r), "perturbation '" + name + "' is not rejected with a witness");
    }
    v.detail = std::to_string(samples.size()) + " samples accepted, " + std::to_string(pert.size()) +
               " perturbations rejected";
    return v;
}

Verdict qsym_uniqueness() {
    Verdict v;
    Scalar l = lambda_qsym();
    // independent oracle: g(λ1, λ2) = λ1·m⊗p + λ2·p⊗m wedges to λ1·w(m,p) + λ2·w(p,m), read off the preset's wedge table
    const PresetSection *w = cp1().preset.section("wedge");
    Scalar wmp = Scalar::parse(w->get("m@p").substr(0, w->get("m@p").rfind('v')) + "1");
    Scalar wpm = Scalar::parse(w->get("p@m").substr(0, w->get("p@m").rfind('v')) + "1");
    Scalar ratio = -(wmp / wpm); // λ2/λ1 on the quantum-symmetric ray
    v.require(ratio == -l, "wedge-table ratio " + ratio.str() + " differs from -lambda_qsym");
    v.require(l == Scalar::parse("-q^-2"), "lambda_qsym moved from its pinned value -q^-2");
    v.require(l.conj() == l, "lambda_qsym is not conjugation-fixed");
    v.require(l.is_unit_monomial(), "lambda_qsym is not a unit monomial");
    auto samples = default_lambda_samples(cp1(), metrics());
    size_t on_ray = 0;
    for (auto &[l1, l2] : samples) {
        bool expect = l2 == ratio * l1;
        on_ray += expect;
        bool got = wedge_vanishes(cp1(), metric_family(metrics(), l1, l2));
        v.require(got == expect, "wedge of g(" + l1.str() + ", " + l2.str() + ") contradicts the ray");
    }
    v.require(on_ray > 0 && on_ray < samples.size(), "sample grid does not cover both sides of the ray");
    Report scan = qsym_uniqueness_scan(cp1(), metrics(), samples);
    v.require(scan.pass(), "engine scan: " + first_failure(scan));
    v.detail = "lambda_qsym = " + l.str() + ", " + std::to_string(on_ray) + "/" + std::to_string(samples.size()) +
               " samples on the ray";
    return v;
}

Verdict reality() {
    Verdict v;
    size_t real = 0, complex = 0, total = 0;
    std::vector<Metric> ms;
    for (auto &[l1, l2] : default_lambda_samples(cp1(), metrics())) ms.push_back(metric_family(metrics(), l1, l2));
    // the biconditional concerns metrics; perturbations off the family are not metrics and are excluded
    for (const char *l1 : {"i", "1 + i", "q", "2"})
        for (const char *l2 : {"1", "q^-2", "i*q"}) ms.push_back(metric_family(metrics(), Scalar::parse(l1), Scalar::parse(l2)));
    for (auto &m : ms) {
        Reality r = is_real(cp1(), m);
        ++total;
        v.require(r.agree(), "the two reality forms disagree: " + r.witness);
        (r.real() ? real : complex) += 1;
    }
    // fixed witnesses on both sides
    v.require(is_real(cp1(), qsym_metric()).real(), "qsym metric is not real");
    v.require(!is_real(cp1(), metric_family(metrics(), Scalar::imag_unit(), 1)).real(), "(i, 1) is real");
    v.require(real > 0 && complex > 0, "need at least one real and one non-real metric");
    v.detail = std::to_string(total) + " metrics (" + std::to_string(real) + " real, " + std::to_string(complex) +
               " non-real)";
    return v;
}

Verdict hermitian() {
    Verdict v;
    const Calculus &c = cp1();
    size_t n = 0;
    for (auto [tag, m] : {std::pair<const char *, Metric>{"qsym", qsym_metric()}, {"generic", generic_metric()}}) {
        HermitianData hd = hermitian_from_real(c, m);
        for (auto *H : {&hd.H1, &hd.H2}) {
            std::string where = std::string(tag) + " " + H->on;
            Report r = hermitian_identities(c, *H, "");
            v.require(r.pass(), where + ": " + first_failure(r));
            for (const char *need : {"h_htilde_is_P", "htilde_h_is_Pdagger", "h_hermitian", "htilde_hermitian",
                                     "htilde_P", "P_h", "htilde_dP_h_zero"})
                v.require(r.find(need) != nullptr, where + ": missing identity " + need);
            n += r.checks.size();
            // direct recomputation of the two defining products
            EMatrix P = c.projector(c.basis(H->basis));
            v.require(emat_equal(emat_mul(H->h, H->htilde), P), where + ": h·h̃ ≠ P");
            v.require(emat_equal(emat_mul(H->htilde, H->h), emat_dagger(*c.A, P)), where + ": h̃·h ≠ P†");
        }
    }
    v.detail = std::to_string(n) + " identities for H1, H2 of the qsym and a generic real metric";
    return v;
}

Verdict christoffel() {
    Verdict v;
    const Calculus &c = cp1();
    const Connection &lc = lc_qsym();
    Report r = christoffel_identities(c, lc, "");
    v.require(r.pass(), first_failure(r));
    for (const char *need : {"GammaP", "Gamma_projected", "Gamma10P", "Gamma10_projected"})
        v.require(r.find(need) != nullptr, std::string("missing identity ") + need);
    // direct: ΓP = Γ on the assembled connection
    EMatrix P = c.projector(c.basis(lc.basis));
    v.require(form_matrix_equal(form_mul(c, lc.gamma, P), lc.gamma), "ΓP ≠ Γ");
    v.detail = std::to_string(r.checks.size()) + " identities on the Levi-Civita connection and its (1,0)-part";
    return v;
}

Verdict two_route() {
    Verdict v;
    const Calculus &c = cp1();
    size_t entries = 0;
    for (auto m : {qsym_metric(), generic_metric()}) {
        HermitianData hd = hermitian_from_real(c, m);
        Connection d10 = dbar_connection_10(c), d01 = dbar_connection_op(c);
        FormMatrix a = nabla_hat(c, hd.H1, d10).gamma, b = part10(c, chern(c, hd.H1, d10).gamma);
        FormMatrix a2 = nabla_hat(c, hd.H2, d01).gamma, b2 = part01(c, chern(c, hd.H2, d01).gamma);
        for (auto [x, y] : {std::pair{&a, &b}, std::pair{&a2, &b2}}) {
            v.require(x->size() == y->size(), "shape mismatch");
            for (size_t i = 0; i < x->size() && i < y->size(); ++i)
                for (size_t j = 0; j < (*x)[i].size(); ++j) {
                    ++entries;
                    v.require((*x)[i][j] == (*y)[i][j], "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
                }
        }
    }
    v.detail = std::to_string(entries) + " Christoffel entries agree (qsym and generic, both holomorphic types)";
    return v;
}

Verdict levi_civita_instances() {
    Verdict v;
    auto j = verify_payload();
    v.require(j.has_value(), "verify --suite all produced no JSON");
    if (!j) return v;
    auto st = check_status(*j);
    std::set<std::string> prefixes;
    for (auto &[name, _] : st)
        if (name.rfind("lc[", 0) == 0) prefixes.insert(name.substr(0, name.find("].") + 2));
    std::string qsym = "lc[1," + (-lambda_qsym()).str() + "].";
    v.require(prefixes.count(qsym), "no Levi-Civita run for the qsym metric");
    v.require(prefixes.size() >= 4, "fewer than three generic real metrics");
    size_t n = 0;
    for (auto &p : prefixes)
        for (const char *sub : {"lc.torsion", "lc.nabla_g", "lc.cotorsion", "lc.bimodule", "lc.hermitian_compatibility",
                                "lc.covariance"}) {
            auto it = st.find(p + sub);
            v.require(it != st.end(), "missing " + p + sub);
            v.require(it == st.end() || it->second == "pass", p + sub + " is " + (it == st.end() ? "" : it->second));
            ++n;
        }
    v.detail = std::to_string(prefixes.size()) + " metrics x 6 sub-checks = " + std::to_string(n) + " passes";
    return v;
}

Verdict uniqueness() {
    Verdict v;
    const Calculus &c = cp1();
    Fiber one = trivial_fiber(c.H.get());
    Fiber VV = tensor_fiber(c.V1, c.V1);
    v.require(hom_space(one, tensor_fiber({c.V1, c.V1, c.V1})).empty(), "Hom(C, V⊗V⊗V) ≠ 0");
    v.require(hom_space(c.V10, c.V2).empty(), "Hom(V10, V2) ≠ 0");
    v.require(hom_space(c.V01, c.V2).empty(), "Hom(V01, V2) ≠ 0");
    v.require(hom_space(c.V1, VV).empty(), "Hom(V, V⊗V) ≠ 0");
    // independent oracle for the sl_2 instance: (ϖ, α) = 1 and det of the Cartan matrix (2) = 2
    const int pairing = 1, det_cartan = 2;
    std::set<std::string> seen;
    auto z = z_characters(c, 3);
    for (auto &x : z) {
        Scalar expect = Scalar::q_pow((x.b - x.a) * pairing * det_cartan);
        v.require(x.engine == expect, "character for (a, b) = (" + std::to_string(x.a) + ", " + std::to_string(x.b) +
                                          "): " + x.engine.str() + " ≠ " + expect.str());
        v.require(x.engine.is_unit_monomial(), x.engine.str() + " is not a monomial");
        seen.insert(x.engine.str());
    }
    v.require(z.size() == 4 && seen.size() == 4, "characters are not four distinct values");
    if (auto j = verify_payload()) {
        for (auto &[name, status] : check_status(*j))
            if (name.rfind("uniqueness.", 0) == 0) v.require(status == "pass", name + " is " + status);
    } else {
        v.require(false, "verify --suite all produced no JSON");
    }
    std::string list;
    for (auto &x : z) list += (list.empty() ? "" : ", ") + x.engine.str();
    v.detail = "four Hom spaces zero, characters {" + list + "}";
    return v;
}

Verdict mutations() {
    Verdict v;
    struct Mutation {
        std::string name;
        std::function<Report()> run;
    };
    auto preset_mutation = [](std::string sec, std::string key, std::string value, int bound) {
        return [=] {
            PresetData p = cp1().preset;
            p.set(sec, key, value);
            try {
                Calculus c(p);
                return validate_preset(c, bound);
            } catch (const Error &e) {
                Report r;
                r.add("preset.load", false, e.what());
                return r;
            }
        };
    };
    std::vector<Mutation> ms = {
        {"wedge sign m@p", preset_mutation("wedge", "m@p", "-v", 3)},
        {"rewrite coefficient ba", preset_mutation("algebra A", "relation ba", "q^-2*ab", 3)},
        {"Maurer-Cartan constant 10/1", preset_mutation("maurer_cartan", "10 1", "-(1 + q^-1)*ab@v", 3)},
        {"star entry v", preset_mutation("star", "v", "v", 3)},
        {"action entry E b", preset_mutation("action", "E b", "q*a", 3)},
        {"Christoffel entry (0,1)",
         [] {
             const Calculus &c = cp1();
             Connection bad = lc_qsym();
             bad.gamma[0][1] = bad.gamma[0][1] + c.d(c.A->parse("ad"));
             Report r = christoffel_identities(c, bad, "lc.");
             Cot ng = nabla_g(c, qsym_metric(), bad);
             r.add("lc.nabla_g", ng.is_zero(), ng.str());
             r.merge(compatibility_check(c, hermitian_from_real(c, qsym_metric()).H, bad, "lc."));
             return r;
         }},
    };
    size_t caught = 0;
    for (auto &m : ms) {
        Report r = m.run();
        bool hit = !r.pass() && failed_with_witness(r);
        caught += hit;
        v.require(hit, "mutation '" + m.name + "' passed every check or left no witness");
    }
    v.require(ms.size() >= 5, "fewer than five mutations");
    v.detail = std::to_string(caught) + "/" + std::to_string(ms.size()) + " mutations caught with a witness";
    return v;
}

Verdict determinism() {
    Verdict v;
    auto &runs = verify_runs();
    v.require(runs[0].code == 0 && runs[1].code == 0, "verify --suite all did not pass");
    json a = json::parse(runs[0].out, nullptr, false), b = json::parse(runs[1].out, nullptr, false);
    v.require(!a.is_discarded() && !b.is_discarded(), "verify output is not JSON");
    v.require(a.dump() == b.dump(), "payloads differ");
    v.require(runs[0].out == runs[1].out, "raw outputs differ");
    v.detail = std::to_string(a.is_discarded() ? 0 : a["checks"].size()) + " checks, payloads byte-identical";
    return v;
}

} // namespace

int main() {
    struct Criterion {
        const char *title;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria = {
        {"preset soundness", preset_soundness},
        {"form dimensions", dimensions},
        {"metric moduli", metric_moduli},
        {"quantum-symmetric uniqueness", qsym_uniqueness},
        {"reality biconditional", reality},
        {"Hermitian matrix identities", hermitian},
        {"Christoffel identities", christoffel},
        {"two-route agreement", two_route},
        {"Levi-Civita instances", levi_civita_instances},
        {"uniqueness certificate", uniqueness},
        {"mutation sensitivity", mutations},
        {"determinism", determinism},
    };
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].run();
        } catch (const std::exception &e) {
            v.ok = false;
            v.reason = std::string("exception: ") + e.what();
        }
        failed += !v.ok;
        std::cout << (v.ok ? "PASS" : "FAIL") << " criterion " << (k + 1) << " (" << criteria[k].title
                  << "): " << (v.ok ? v.detail : v.reason) << " [tolerance: " << kTolerance << "]" << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
    return failed ? 1 : 0;
}
