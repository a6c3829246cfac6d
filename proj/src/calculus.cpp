#include "qgeom/calculus.hpp"

#include "qgeom/expr_parser.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace qgeom {

// ---------------------------------------------------------------- preset files

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string collapse_spaces(std::string_view s) {
    std::string out;
    bool space = false;
    for (char ch : trim(s)) {
        if (ch == ' ' || ch == '\t') {
            space = true;
            continue;
        }
        if (space && !out.empty()) out += ' ';
        space = false;
        out += ch;
    }
    return out;
}

std::vector<std::string> split_ws(const std::string &s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

/** Runs f, re-raising parse and data errors with the entry's line number. */
template <class F>
auto at_line(const PresetEntry &e, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError &err) {
        throw ParseError(std::string(err.what()) + " (key '" + e.key + "')", e.line, err.column);
    } catch (const Error &err) {
        throw ParseError(std::string(err.what()) + " (key '" + e.key + "')", e.line, 1);
    }
}

} // namespace

const PresetEntry *PresetSection::find(const std::string &key) const {
    for (auto &e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

const std::string &PresetSection::get(const std::string &key) const {
    if (auto *e = find(key)) return e->value;
    throw ParseError("section [" + name + "] is missing key '" + key + "'", line, 1);
}

PresetData PresetData::parse(std::string_view text) {
    PresetData p;
    std::set<std::string> names;
    std::set<std::string> keys;
    int lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        std::string line(raw.substr(0, raw.find('#')));
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError("unterminated section header", lineno, int(t.size()) + 1);
            std::string name = collapse_spaces(t.substr(1, t.size() - 2));
            if (name.empty()) throw ParseError("empty section name", lineno, 2);
            if (!names.insert(name).second) throw ParseError("duplicate section [" + name + "]", lineno, 1);
            p.sections.push_back({name, {}, lineno});
            keys.clear();
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno, int(line.size()) + 1);
        std::string key = collapse_spaces(line.substr(0, eq));
        std::string value = collapse_spaces(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", lineno, 1);
        if (value.empty()) throw ParseError("empty value for key '" + key + "'", lineno, int(eq) + 2);
        if (!keys.insert(key).second) throw ParseError("duplicate key '" + key + "'", lineno, 1);
        (p.sections.empty() ? p.header : p.sections.back().entries).push_back({key, value, lineno});
    }
    return p;
}

std::string PresetData::render() const {
    std::string out;
    for (auto &e : header) out += e.key + " = " + e.value + "\n";
    for (auto &s : sections) {
        if (!out.empty()) out += "\n";
        out += "[" + s.name + "]\n";
        for (auto &e : s.entries) out += e.key + " = " + e.value + "\n";
    }
    return out;
}

const PresetSection *PresetData::section(const std::string &name) const {
    for (auto &s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

PresetSection *PresetData::section(const std::string &name) {
    for (auto &s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

void PresetData::set(const std::string &sec, const std::string &key, const std::string &value) {
    PresetSection *s = section(sec);
    if (!s) throw Error("no section [" + sec + "]");
    for (auto &e : s->entries)
        if (e.key == key) {
            e.value = value;
            return;
        }
    throw Error("no key '" + key + "' in section [" + sec + "]");
}

std::string resolve_preset(const std::string &name) {
    namespace fs = std::filesystem;
    if (fs::is_regular_file(name)) return name;
    std::vector<std::string> dirs;
    if (const char *env = std::getenv(kPresetPathEnv)) {
        std::string s = env;
        size_t b = 0;
        while (b <= s.size()) {
            size_t e = s.find(':', b);
            std::string d = s.substr(b, e == std::string::npos ? std::string::npos : e - b);
            if (!d.empty()) dirs.push_back(d);
            if (e == std::string::npos) break;
            b = e + 1;
        }
    }
    dirs.push_back("presets");
#ifdef QGEOM_PRESET_DIR
    dirs.push_back(QGEOM_PRESET_DIR);
#endif
    for (auto &d : dirs)
        for (const char *ext : {"", ".preset"}) {
            fs::path p = fs::path(d) / (name + ext);
            if (fs::is_regular_file(p)) return p.string();
        }
    throw Error("preset '" + name + "' not found (set " + std::string(kPresetPathEnv) + ")");
}

PresetData load_preset_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read preset file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return PresetData::parse(ss.str());
}

// ---------------------------------------------------------------- reports

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed(); });
}

const Check *Report::find(const std::string &name) const {
    for (auto &c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

void Report::add(const std::string &name, bool ok, const std::string &witness, int degree_bound) {
    Check c;
    c.name = name;
    c.status = ok ? "pass" : "fail";
    if (!ok) c.witness = witness.empty() ? "(no witness recorded)" : witness;
    c.degree_bound = degree_bound;
    checks.push_back(std::move(c));
}

void Report::merge(const Report &other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

void Report::sort_by_name() {
    std::stable_sort(checks.begin(), checks.end(), [](const Check &a, const Check &b) { return a.name < b.name; });
}

// ---------------------------------------------------------------- EMatrix helpers

EMatrix emat_mul(const EMatrix &a, const EMatrix &b) {
    size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    const Algebra *alg = nullptr;
    for (auto &row : a)
        for (auto &e : row)
            if (e.alg) alg = e.alg;
    EMatrix r(n, std::vector<Elem>(m, Elem(alg)));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t].is_zero()) continue;
            for (size_t j = 0; j < m; ++j)
                if (!b[t][j].is_zero()) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

EMatrix emat_dagger(const Algebra &A, const EMatrix &a) {
    size_t n = a.size(), m = n ? a[0].size() : 0;
    EMatrix r(m, std::vector<Elem>(n, Elem(&A)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) r[j][i] = A.star(a[i][j]);
    return r;
}

bool emat_equal(const EMatrix &a, const EMatrix &b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    }
    return true;
}

std::string emat_str(const EMatrix &a) {
    std::string s = "[";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += "; ";
        for (size_t j = 0; j < a[i].size(); ++j) s += (j ? ", " : "") + a[i][j].str();
    }
    return s + "]";
}

// ---------------------------------------------------------------- cotensor parsing

namespace {

/** Label-sequence ↦ coefficient; labels are single letters. */
struct CotSem {
    using Value = std::map<std::string, Elem>;
    const Algebra *A;
    std::set<char> labels;

    Value scalar(const Scalar &s) { return s.is_zero() ? Value{} : Value{{"", Elem(A, s)}}; }
    Value number(const std::string &digits) { return scalar(Scalar(GaussRat(mpq_class(digits)))); }
    bool known_letter(char ch) const { return ch == 'q' || ch == 'i' || A->has_gen(ch) || labels.count(ch); }
    Value letter(char ch) {
        if (ch == 'q') return scalar(Scalar::q_pow(1));
        if (ch == 'i') return scalar(Scalar::imag_unit());
        if (labels.count(ch)) return {{std::string(1, ch), A->one()}};
        return {{"", A->gen(ch)}};
    }
    static void add_into(Value &v, const std::string &k, const Elem &e) {
        auto it = v.find(k);
        if (it == v.end()) {
            if (!e.is_zero()) v.emplace(k, e);
            return;
        }
        it->second += e;
        if (it->second.is_zero()) v.erase(it);
    }
    Value add(const Value &a, const Value &b) {
        Value r = a;
        for (auto &[k, e] : b) add_into(r, k, e);
        return r;
    }
    Value neg(const Value &a) {
        Value r = a;
        for (auto &[k, e] : r) e = -e;
        return r;
    }
    Value sub(const Value &a, const Value &b) { return add(a, neg(b)); }
    Value mul(const Value &a, const Value &b) {
        Value r;
        for (auto &[ka, ea] : a)
            for (auto &[kb, eb] : b) add_into(r, ka + kb, ea * eb);
        return r;
    }
    Value tensor(const Value &a, const Value &b) { return mul(a, b); }
    static bool is_scalar(const Value &v) { return v.empty() || (v.size() == 1 && v.begin()->first.empty() && v.begin()->second.is_scalar()); }
    static Scalar scalar_of(const Value &v) { return v.empty() ? Scalar() : v.begin()->second.coeff(Word()); }
    Value div(const Value &a, const Value &b) {
        if (!is_scalar(b) || b.empty()) throw ParseError("division by a non-scalar or zero");
        Scalar inv = scalar_of(b).inv();
        Value r = a;
        for (auto &[k, e] : r) e = inv * e;
        return r;
    }
    Value pow(const Value &a, long e) {
        if (is_scalar(a)) return scalar(scalar_of(a).pow(int(e)));
        if (e < 0) throw ParseError("negative power of a non-scalar");
        Value r = scalar(Scalar(1));
        for (long k = 0; k < e; ++k) r = mul(r, a);
        return r;
    }
};

} // namespace

Cot Calculus::parse_cot(std::string_view text, const Fiber &fib) const {
    CotSem sem{A.get(), {}};
    for (auto &f : fib->factor_list(fib))
        for (auto &l : f->labels) {
            if (l.size() != 1) throw ParseError("fiber labels must be single letters");
            sem.labels.insert(l[0]);
        }
    auto v = detail::ExprParser<CotSem>(text, sem).parse_all();
    Cot x(fib, A.get());
    size_t nf = fib->factor_list(fib).size();
    for (auto &[k, e] : v) {
        if (k.size() != nf)
            throw ParseError("term with " + std::to_string(k.size()) + " fiber labels in \"" + std::string(text) +
                             "\"; expected " + std::to_string(nf));
        std::string label;
        for (size_t t = 0; t < k.size(); ++t) label += (t ? "@" : "") + std::string(1, k[t]);
        x.c[fib->index(label)] += e;
    }
    return x;
}

// ---------------------------------------------------------------- construction

namespace {

const PresetSection &need_section(const PresetData &p, const std::string &name) {
    if (auto *s = p.section(name)) return *s;
    throw ParseError("missing section [" + name + "]");
}

std::vector<char> parse_generators(const PresetSection &s) {
    const PresetEntry *e = s.find("generators");
    if (!e) throw ParseError("section [" + s.name + "] is missing key 'generators'", s.line, 1);
    std::vector<char> gens;
    for (auto &t : split_ws(e->value)) {
        if (t.size() != 1 || !std::isalpha(static_cast<unsigned char>(t[0])) || t == "q" || t == "i")
            throw ParseError("generator names are single letters other than q and i: '" + t + "'", e->line, 1);
        if (std::find(gens.begin(), gens.end(), t[0]) != gens.end())
            throw ParseError("duplicate generator '" + t + "'", e->line, 1);
        gens.push_back(t[0]);
    }
    return gens;
}

/** Fills an algebra from its section; target is the projection algebra (may be null). */
void build_algebra(Algebra &alg, const PresetSection &s, const Algebra *target) {
    alg.gens = parse_generators(s);
    size_t n = alg.gens.size();
    alg.star_img.assign(n, Elem());
    alg.coproduct_img.assign(n, Tensor());
    alg.counit_img.assign(n, Scalar());
    alg.antipode_img.assign(n, Elem());
    std::vector<bool> have_star(n), have_cop(n), have_eps(n), have_s(n), have_proj(n);
    if (target) {
        alg.proj_target = target;
        alg.proj_img.assign(n, Elem(target));
    }
    // relations first so every later image is normal-formed against them
    for (auto &e : s.entries) {
        auto parts = split_ws(e.key);
        if (parts.size() == 2 && parts[0] == "relation")
            at_line(e, [&] {
                alg.add_rule(alg.word_from_letters(parts[1]), alg.parse_raw(e.value));
                return 0;
            });
    }
    for (auto &e : s.entries) {
        auto parts = split_ws(e.key);
        if (parts.empty() || parts[0] == "relation" || parts[0] == "generators" || parts[0] == "projection") continue;
        if (parts.size() != 2 || parts[1].size() != 1)
            throw ParseError("unrecognized key '" + e.key + "' in [" + s.name + "]", e.line, 1);
        int g = alg.gen_index(parts[1][0]);
        if (g < 0) throw ParseError("undeclared generator '" + parts[1] + "'", e.line, 1);
        size_t k = size_t(g);
        at_line(e, [&] {
            if (parts[0] == "star") {
                alg.star_img[k] = alg.parse(e.value);
                have_star[k] = true;
            } else if (parts[0] == "coproduct") {
                alg.coproduct_img[k] = alg.parse_tensor(e.value, 2);
                have_cop[k] = true;
            } else if (parts[0] == "counit") {
                Elem v = alg.parse(e.value);
                if (!v.is_scalar()) throw ParseError("counit value must be a scalar");
                alg.counit_img[k] = v.coeff(Word());
                have_eps[k] = true;
            } else if (parts[0] == "antipode") {
                alg.antipode_img[k] = alg.parse(e.value);
                have_s[k] = true;
            } else if (parts[0] == "project") {
                if (!target) throw ParseError("project entry without a projection target");
                alg.proj_img[k] = target->parse(e.value);
                have_proj[k] = true;
            } else {
                throw ParseError("unrecognized key '" + e.key + "'");
            }
            return 0;
        });
    }
    for (size_t k = 0; k < n; ++k) {
        std::string g(1, alg.gens[k]);
        if (!have_star[k]) throw ParseError("[" + s.name + "] has no star image for " + g, s.line, 1);
        if (!have_cop[k]) throw ParseError("[" + s.name + "] has no coproduct for " + g, s.line, 1);
        if (!have_eps[k]) throw ParseError("[" + s.name + "] has no counit for " + g, s.line, 1);
        if (!have_s[k]) throw ParseError("[" + s.name + "] has no antipode for " + g, s.line, 1);
        if (target && !have_proj[k]) throw ParseError("[" + s.name + "] has no projection image for " + g, s.line, 1);
    }
}

Fiber build_fiber(const PresetData &p, const std::string &name, const Algebra *H,
                  const std::set<char> &reserved) {
    const PresetSection &s = need_section(p, "fiber " + name);
    auto labels = split_ws(s.get("basis"));
    for (auto &l : labels)
        if (l.size() != 1 || !std::isalpha(static_cast<unsigned char>(l[0])) || reserved.count(l[0]))
            throw ParseError("fiber labels must be unused single letters: '" + l + "'", s.find("basis")->line, 1);
    auto bd = split_ws(s.get("bideg"));
    if (bd.size() != 2) throw ParseError("bideg needs two integers", s.find("bideg")->line, 1);
    Bideg b{std::stoi(bd[0]), std::stoi(bd[1])};
    size_t n = labels.size();
    std::vector<std::vector<Elem>> co(n, std::vector<Elem>(n, Elem(H)));
    for (auto &e : s.entries) {
        auto parts = split_ws(e.key);
        if (parts[0] != "coaction") continue;
        if (parts.size() != 3) throw ParseError("coaction key is 'coaction <target> <source>'", e.line, 1);
        auto idx = [&](const std::string &l) {
            auto it = std::find(labels.begin(), labels.end(), l);
            if (it == labels.end()) throw ParseError("unknown basis label '" + l + "'", e.line, 1);
            return size_t(it - labels.begin());
        };
        co[idx(parts[1])][idx(parts[2])] = at_line(e, [&] { return H->parse(e.value); });
    }
    return make_fiber(name, H, labels, co, std::vector<Bideg>(n, b));
}

} // namespace

Calculus::Calculus(const PresetData &p) : preset(p) { build(); }

const DualBasis &Calculus::basis(const std::string &key) const {
    auto it = bases.find(key);
    if (it == bases.end()) throw Error("no dual basis '" + key + "'");
    return it->second;
}

void Calculus::build() {
    for (auto &e : preset.header)
        if (e.key == "name") name = e.value;
    if (name.empty()) throw ParseError("preset has no 'name' entry", 1, 1);

    H = std::make_unique<Algebra>("H");
    A = std::make_unique<Algebra>("A");
    U = std::make_unique<Algebra>("U");
    build_algebra(*H, need_section(preset, "algebra H"), nullptr);
    const PresetSection &sa = need_section(preset, "algebra A");
    if (sa.get("projection") != "H") throw ParseError("algebra A must project onto H", sa.line, 1);
    build_algebra(*A, sa, H.get());
    build_algebra(*U, need_section(preset, "algebra U"), nullptr);

    // action tables
    act.U = U.get();
    act.A = A.get();
    const PresetSection &sact = need_section(preset, "action");
    for (auto &e : sact.entries) {
        auto parts = split_ws(e.key);
        if (parts.size() != 2 || parts[0].size() != 1 || parts[1].size() != 1)
            throw ParseError("action key is '<U generator> <A generator>'", e.line, 1);
        int ug = U->gen_index(parts[0][0]), ag = A->gen_index(parts[1][0]);
        if (ug < 0 || ag < 0) throw ParseError("undeclared generator in action key '" + e.key + "'", e.line, 1);
        act.table[{ug, ag}] = at_line(e, [&] { return A->parse(e.value); });
    }
    for (size_t u = 0; u < U->gens.size(); ++u)
        for (size_t a = 0; a < A->gens.size(); ++a)
            if (!act.table.count({int(u), int(a)}))
                throw ParseError(std::string("action table has no entry for ") + U->gens[u] + " on " + A->gens[a],
                                 sact.line, 1);

    const PresetSection &sb = need_section(preset, "base");
    for (auto &w : split_ws(sb.get("generators")))
        base_gens.push_back(at_line(*sb.find("generators"), [&] { return A->parse(w); }));

    // fibers
    std::set<char> reserved{'q', 'i'};
    for (char g : H->gens) reserved.insert(g);
    for (char g : A->gens) reserved.insert(g);
    const PresetSection &sc = need_section(preset, "calculus");
    triv = trivial_fiber(H.get());
    V10 = build_fiber(preset, sc.get("holomorphic"), H.get(), reserved);
    V01 = build_fiber(preset, sc.get("antiholomorphic"), H.get(), reserved);
    V2 = build_fiber(preset, sc.get("top"), H.get(), reserved);
    V1 = direct_sum("V1", V10, V01);
    size_t n10 = V10->dim(), n01 = V01->dim();
    inc10 = {V10, V1, zero_matrix(n10 + n01, n10)};
    pr10 = {V1, V10, zero_matrix(n10, n10 + n01)};
    for (size_t k = 0; k < n10; ++k) inc10.m[k][k] = pr10.m[k][k] = Scalar(1);
    inc01 = {V01, V1, zero_matrix(n10 + n01, n01)};
    pr01 = {V1, V01, zero_matrix(n01, n10 + n01)};
    for (size_t k = 0; k < n01; ++k) inc01.m[n10 + k][k] = pr01.m[k][n10 + k] = Scalar(1);

    // tangent operators
    const PresetSection &st = need_section(preset, "tangent");
    del_ops.assign(n10, Elem(U.get()));
    delbar_ops.assign(n01, Elem(U.get()));
    for (auto &e : st.entries) {
        auto parts = split_ws(e.key);
        if (parts.size() != 2) throw ParseError("tangent key is 'del <label>' or 'delbar <label>'", e.line, 1);
        Elem op = at_line(e, [&] { return U->parse(e.value); });
        if (parts[0] == "del")
            del_ops[at_line(e, [&] { return V10->index(parts[1]); })] = op;
        else if (parts[0] == "delbar")
            delbar_ops[at_line(e, [&] { return V01->index(parts[1]); })] = op;
        else
            throw ParseError("unrecognized tangent key '" + e.key + "'", e.line, 1);
    }

    // star on forms
    const PresetSection &ss = need_section(preset, "star");
    J1 = zero_matrix(V1->dim(), V1->dim());
    J2 = zero_matrix(V2->dim(), V2->dim());
    std::vector<bool> seen1(V1->dim()), seen2(V2->dim());
    for (auto &e : ss.entries) {
        at_line(e, [&] {
            bool one = std::find(V1->labels.begin(), V1->labels.end(), e.key) != V1->labels.end();
            Fiber f = one ? V1 : V2;
            size_t k = f->index(e.key);
            Cot img = parse_cot(e.value, f);
            for (size_t l = 0; l < f->dim(); ++l) {
                if (!img.c[l].is_scalar()) throw ParseError("star images are scalar combinations of labels");
                (one ? J1 : J2)[l][k] = img.c[l].coeff(Word());
            }
            (one ? seen1 : seen2)[k] = true;
            return 0;
        });
    }
    for (size_t k = 0; k < V1->dim(); ++k)
        if (!seen1[k]) throw ParseError("[star] has no image for " + V1->labels[k], ss.line, 1);
    for (size_t k = 0; k < V2->dim(); ++k)
        if (!seen2[k]) throw ParseError("[star] has no image for " + V2->labels[k], ss.line, 1);

    // wedge
    const PresetSection &sw = need_section(preset, "wedge");
    Fiber V11 = tensor_fiber(V1, V1);
    wedge = {V11, V2, zero_matrix(V2->dim(), V11->dim())};
    std::vector<bool> seenw(V11->dim());
    for (auto &e : sw.entries) {
        at_line(e, [&] {
            size_t k = V11->index(e.key);
            Cot img = parse_cot(e.value, V2);
            for (size_t l = 0; l < V2->dim(); ++l) {
                if (!img.c[l].is_scalar()) throw ParseError("wedge images are scalar combinations of labels");
                wedge.m[l][k] = img.c[l].coeff(Word());
            }
            seenw[k] = true;
            return 0;
        });
    }
    for (size_t k = 0; k < V11->dim(); ++k)
        if (!seenw[k]) throw ParseError("[wedge] has no entry for " + V11->labels[k], sw.line, 1);

    // factorizability inverses
    FiberMap wl = compose(wedge, tensor_maps(inc01, inc10));
    FiberMap wr = compose(wedge, tensor_maps(inc10, inc01));
    factorizable = false;
    theta_l = {V2, wl.src, zero_matrix(wl.src->dim(), V2->dim())};
    theta_r = {V2, wr.src, zero_matrix(wr.src->dim(), V2->dim())};
    if (wl.m.size() == wl.src->dim() && wr.m.size() == wr.src->dim()) {
        try {
            theta_l.m = inverse(wl.m);
            theta_r.m = inverse(wr.m);
            factorizable = true;
        } catch (const Error &) {
            factorizable = false;
        }
    }

    // central character
    const PresetSection &sz = need_section(preset, "center");
    for (auto &e : sz.entries) {
        auto parts = split_ws(e.key);
        if (parts.size() == 2 && parts[0] == "character") {
            if (parts[1].size() != 1 || !H->has_gen(parts[1][0]))
                throw ParseError("character key names a generator of H", e.line, 1);
            center_char[parts[1][0]] = at_line(e, [&] { return Scalar::parse(e.value); });
        } else if (e.key == "exponent") {
            center_exponent = at_line(e, [&] { return std::stoi(e.value); });
        } else {
            throw ParseError("unrecognized key '" + e.key + "' in [center]", e.line, 1);
        }
    }

    // dual bases
    for (auto &s : preset.sections) {
        if (s.name.rfind("dual_basis.", 0) != 0) continue;
        DualBasis b;
        b.name = s.name.substr(11);
        const std::string &fname = s.get("fiber");
        b.fib = fname == V10->name ? V10 : fname == V01->name ? V01 : nullptr;
        if (!b.fib) throw ParseError("dual basis fiber must be the holomorphic or antiholomorphic fiber", s.line, 1);
        std::map<int, Cot> el, fn;
        for (auto &e : s.entries) {
            auto parts = split_ws(e.key);
            if (parts[0] == "fiber") continue;
            if (parts.size() != 2) throw ParseError("unrecognized key '" + e.key + "'", e.line, 1);
            int idx = at_line(e, [&] { return std::stoi(parts[1]); });
            if (parts[0] == "element")
                el[idx] = at_line(e, [&] { return parse_cot(e.value, b.fib); });
            else if (parts[0] == "functional")
                fn[idx] = at_line(e, [&] { return parse_cot(e.value, b.fib); });
            else
                throw ParseError("unrecognized key '" + e.key + "'", e.line, 1);
        }
        int n = int(el.size());
        for (int i = 1; i <= n; ++i) {
            if (!el.count(i) || !fn.count(i))
                throw ParseError("dual basis " + b.name + " needs element and functional " + std::to_string(i), s.line, 1);
            b.elems.push_back(el[i]);
            b.funcs.push_back(fn[i]);
        }
        bases[b.name] = std::move(b);
    }
    // Maurer–Cartan constants: "<basis> <index> = two-form"
    const PresetSection &smc = need_section(preset, "maurer_cartan");
    std::map<std::string, std::map<int, Cot>> mcs;
    for (auto &e : smc.entries) {
        auto parts = split_ws(e.key);
        if (parts.size() != 2 || !bases.count(parts[0]))
            throw ParseError("maurer_cartan key is '<dual basis> <index>'", e.line, 1);
        int idx = at_line(e, [&] { return std::stoi(parts[1]); });
        if (idx < 1 || size_t(idx) > bases[parts[0]].size())
            throw ParseError("maurer_cartan index out of range", e.line, 1);
        mcs[parts[0]][idx] = at_line(e, [&] { return parse_cot(e.value, V2); });
    }
    for (auto &[key, m] : mcs) {
        DualBasis &b = bases[key];
        if (m.size() != b.size())
            throw ParseError("dual basis " + key + " has Maurer-Cartan constants for only some elements", smc.line, 1);
        for (auto &[i, x] : m) b.mc.push_back(x);
    }
    if (!bases.count("10") || !bases.count("01"))
        throw ParseError("preset needs dual bases named 10 and 01");
    // Ω¹ bases as unions of the bidegree bases
    auto unite = [&](const std::string &key, const std::string &k10, const std::string &k01) {
        if (!bases.count(k10) || !bases.count(k01)) return;
        DualBasis u;
        u.name = key;
        u.fib = V1;
        for (auto *part : {&bases.at(k10), &bases.at(k01)}) {
            for (auto &x : part->elems) u.elems.push_back(embed(x));
            for (auto &y : part->funcs) u.funcs.push_back(embed(y));
            for (auto &m : part->mc) u.mc.push_back(m);
        }
        if (u.mc.size() != u.elems.size()) u.mc.clear();
        bases[key] = std::move(u);
    };
    unite("1", "10", "01");
    unite("1alt", "10alt", "01alt");

    graded_ = true;
    for (size_t g = 0; g < A->gens.size() && graded_; ++g) {
        Word w(1, char(g));
        Tensor t = A->coact_right(A->word(w));
        if (t.terms.size() != 1 || t.terms.begin()->first[0] != w || !t.terms.begin()->second.is_one() ||
            t.terms.begin()->first[1].size() != 1)
            graded_ = false;
        else
            grade_.push_back(t.terms.begin()->first[1]);
    }
}

// ---------------------------------------------------------------- differentials

bool Calculus::is_coinvariant(const Elem &x) const {
    if (!graded_) return A->coact_right(x) == tensor(x, H->one());
    // a grading: x is coinvariant iff every monomial has trivial weight
    for (auto &[w, _] : x.terms) {
        Word h;
        for (char g : w) h += grade_[size_t(static_cast<unsigned char>(g))];
        if (!(H->word(h) == H->one())) return false;
    }
    return true;
}

static void require_coinvariant(const Calculus &c, const Elem &b) {
    if (!c.is_coinvariant(b)) throw Error("element " + b.str() + " is not in the coinvariant subalgebra B");
}

Cot Calculus::del(const Elem &b) const {
    require_coinvariant(*this, b);
    Cot r(V10, A.get());
    for (size_t k = 0; k < del_ops.size(); ++k) r.c[k] = act.act(del_ops[k], b);
    return r;
}

Cot Calculus::delbar(const Elem &b) const {
    require_coinvariant(*this, b);
    Cot r(V01, A.get());
    for (size_t k = 0; k < delbar_ops.size(); ++k) r.c[k] = act.act(delbar_ops[k], b);
    return r;
}

Cot Calculus::d(const Elem &b) const { return embed(del(b)) + embed(delbar(b)); }

Cot Calculus::differential(std::string_view which, const Elem &b) const {
    if (which == "d") return d(b);
    if (which == "del") return embed(del(b));
    if (which == "delbar") return embed(delbar(b));
    throw Error("unknown differential '" + std::string(which) + "'");
}

Cot Calculus::embed(const Cot &x) const {
    if (x.fib == V10 || (x.fib != V1 && same_fiber(x.fib, V10))) return apply_map(inc10, x);
    if (x.fib == V01 || (x.fib != V1 && same_fiber(x.fib, V01))) return apply_map(inc01, x);
    return x;
}

static Cot star_with(const Cot &x, const Matrix &J, const Fiber &fib) {
    Cot r(fib, x.A);
    for (size_t k = 0; k < x.dim(); ++k) {
        if (x.c[k].is_zero()) continue;
        Elem s = x.A->star(x.c[k]);
        for (size_t l = 0; l < fib->dim(); ++l)
            if (!J[l][k].is_zero()) r.c[l] += J[l][k] * s;
    }
    return r;
}

Cot Calculus::star_form(const Cot &x) const {
    if (same_fiber(x.fib, V2)) return star_with(x, J2, V2);
    if (x.fib == V1) return star_with(x, J1, V1);
    if (same_fiber(x.fib, V10)) return part01(star_with(embed(x), J1, V1));
    if (same_fiber(x.fib, V01)) return part10(star_with(embed(x), J1, V1));
    throw Error("star is defined on one- and two-forms, not on fiber " + x.fib->name);
}

Cot Calculus::dagger(const Cot &x) const {
    size_t n = V1->dim();
    if (x.dim() != n * n) throw Error("dagger expects an element of Ω¹⊗Ω¹");
    Cot r(x.fib, A.get());
    for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l) {
            const Elem &c = x.c[k * n + l];
            if (c.is_zero()) continue;
            Elem s = A->star(c);
            for (size_t a = 0; a < n; ++a)
                for (size_t b = 0; b < n; ++b) {
                    Scalar f = J1[a][l] * J1[b][k];
                    if (!f.is_zero()) r.c[a * n + b] += f * s;
                }
        }
    return r;
}

Cot Calculus::wedge_tensor(const Cot &t) const { return apply_map(wedge, t); }

Cot Calculus::wedge_forms(const Cot &x, const Cot &y) const {
    return wedge_tensor(tensor_over_B(embed(x), embed(y)));
}

Cot Calculus::theta(char side, const Cot &x) const {
    if (!factorizable) throw Error("the calculus is not factorizable");
    return apply_map(side == 'l' ? theta_l : theta_r, x);
}

// ---------------------------------------------------------------- dual bases

Elem Calculus::apply_functional(const Cot &y, const Cot &x) const {
    Cot xx = x;
    if (xx.fib != y.fib && !same_fiber(xx.fib, y.fib)) {
        if (y.fib == V1)
            xx = embed(xx);
        else if (same_fiber(y.fib, V10))
            xx = part10(embed(xx));
        else if (same_fiber(y.fib, V01))
            xx = part01(embed(xx));
    }
    if (xx.dim() != y.dim()) throw Error("functional applied to an element of the wrong module");
    Elem r(A.get());
    for (size_t k = 0; k < y.dim(); ++k)
        if (!xx.c[k].is_zero() && !y.c[k].is_zero()) r += xx.c[k] * y.c[k];
    return r;
}

std::vector<Elem> Calculus::left_decompose(const Cot &x, const DualBasis &b) const {
    std::vector<Elem> out;
    for (auto &y : b.funcs) out.push_back(apply_functional(y, x));
    return out;
}

Cot Calculus::reconstruct(const std::vector<Elem> &coeffs, const DualBasis &b) const {
    Cot r(b.fib, A.get());
    for (size_t i = 0; i < b.size(); ++i)
        if (!coeffs[i].is_zero()) r += coeffs[i] * b.elems[i];
    return r;
}

Cot Calculus::d_one_form(const Cot &x, const DualBasis &b) const {
    if (b.mc.size() != b.size()) throw Error("dual basis " + b.name + " has no Maurer-Cartan constants");
    auto coeffs = left_decompose(x, b);
    Cot r(V2, A.get());
    for (size_t i = 0; i < b.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        r += wedge_forms(d(coeffs[i]), b.elems[i]);
        r += coeffs[i] * b.mc[i];
    }
    return r;
}

EMatrix Calculus::projector(const DualBasis &b) const {
    EMatrix P(b.size(), std::vector<Elem>(b.size(), Elem(A.get())));
    for (size_t i = 0; i < b.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) P[i][j] = apply_functional(b.funcs[j], b.elems[i]);
    return P;
}

std::vector<Elem> Calculus::base_monomials(int n) const {
    std::vector<Elem> out{A->one()};
    std::vector<Elem> layer{A->one()};
    for (int k = 0; k < n; ++k) {
        std::vector<Elem> next;
        for (auto &m : layer)
            for (auto &g : base_gens) next.push_back(m * g);
        for (auto &x : next)
            if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        layer = std::move(next);
    }
    return out;
}

std::vector<Cot> Calculus::spanning_set(const DualBasis &b, int degree_bound) const {
    std::vector<Cot> out;
    int gdeg = 0;
    for (auto &g : base_gens) gdeg = std::max(gdeg, g.degree());
    for (auto &e : b.elems) {
        int room = gdeg > 0 ? (degree_bound - e.degree()) / gdeg : 0;
        for (auto &m : base_monomials(std::max(room, 0))) {
            out.push_back(m * e);
            if (!m.is_scalar()) out.push_back(e * m);
        }
    }
    return out;
}

// ---------------------------------------------------------------- validation

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
    Clock::time_point t0 = Clock::now();
    double ms() const { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }
};

/** Apply a coproduct-like map to factor k of a tensor, producing one more factor. */
Tensor expand_factor(const Tensor &t, size_t k, const Algebra *alg) {
    Tensor r;
    r.algs = t.algs;
    r.algs.insert(r.algs.begin() + long(k) + 1, alg);
    for (auto &[ws, c] : t.terms) {
        Tensor d = alg->coproduct_word(ws[k]);
        for (auto &[ds, dc] : d.terms) {
            auto w = ws;
            w[k] = ds[0];
            w.insert(w.begin() + long(k) + 1, ds[1]);
            Tensor one;
            one.algs = r.algs;
            one.terms.emplace(w, c * dc);
            r = r + one;
        }
    }
    return r;
}

Elem raw_word(const Algebra &alg, const Word &w) {
    Elem e(&alg);
    e.terms.emplace(w, Scalar(1));
    return e;
}

std::vector<Word> monomials_upto(const Algebra &alg, int deg) {
    std::vector<Word> out;
    for (int d = 0; d <= deg; ++d)
        for (auto &w : alg.irreducible_words(d)) out.push_back(w);
    return out;
}

void hopf_checks(Report &rep, const Algebra &alg, int mono_deg, int conf_bound) {
    const std::string p = "hopf." + alg.name + ".";
    {
        Timer t;
        ConfluenceReport cr = alg.confluence_report(conf_bound);
        Check c;
        c.name = "confluence." + alg.name;
        c.status = cr.pass ? "pass" : "fail";
        if (!cr.pass) c.witness = cr.witness;
        c.degree_bound = conf_bound;
        c.millis = t.ms();
        rep.add(c);
    }
    // structure maps respect the relations
    std::string wit;
    bool ok = true;
    for (auto &r : alg.rules) {
        Elem lhs = raw_word(alg, r.lhs);
        bool good = alg.coproduct(lhs) == alg.coproduct(r.rhs) && alg.counit(lhs) == alg.counit(r.rhs) &&
                    alg.antipode(lhs) == alg.antipode(r.rhs) && alg.star(lhs) == alg.star(r.rhs) &&
                    (!alg.proj_target || alg.project(lhs) == alg.project(r.rhs));
        if (!good && ok) {
            ok = false;
            wit = "relation " + alg.word_str(r.lhs) + " = " + r.rhs.str();
        }
    }
    rep.add(p + "relations_respected", ok, wit, 2);

    bool coassoc = true, counit = true, antipode = true, star_inv = true, star_cop = true, s_star = true;
    std::string w1, w2, w3, w4, w5, w6;
    for (auto &w : monomials_upto(alg, mono_deg)) {
        Elem x = alg.word(w);
        Tensor dx = alg.coproduct(x);
        if (coassoc && !(expand_factor(dx, 0, &alg) == expand_factor(dx, 1, &alg))) {
            coassoc = false;
            w1 = x.str();
        }
        Elem l(&alg), r(&alg), sl(&alg), sr(&alg);
        for (auto &[ws, c] : dx.terms) {
            l += (c * alg.counit(alg.word(ws[0]))) * alg.word(ws[1]);
            r += (c * alg.counit(alg.word(ws[1]))) * alg.word(ws[0]);
            sl += c * (alg.antipode(alg.word(ws[0])) * alg.word(ws[1]));
            sr += c * (alg.word(ws[0]) * alg.antipode(alg.word(ws[1])));
        }
        if (counit && !(l == x && r == x)) {
            counit = false;
            w2 = x.str();
        }
        Elem eps = Elem(&alg, alg.counit(x));
        if (antipode && !(sl == eps && sr == eps)) {
            antipode = false;
            w3 = x.str();
        }
        Elem xs = alg.star(x);
        if (star_inv && !(alg.star(xs) == x)) {
            star_inv = false;
            w4 = x.str();
        }
        Tensor starred;
        starred.algs = {&alg, &alg};
        for (auto &[ws, c] : dx.terms) starred = starred + tensor(alg.star(c * alg.word(ws[0])), alg.star(alg.word(ws[1])));
        if (star_cop && !(alg.coproduct(xs) == starred)) {
            star_cop = false;
            w5 = x.str();
        }
        if (s_star && !(alg.antipode(alg.star(alg.antipode(xs))) == x)) {
            s_star = false;
            w6 = x.str();
        }
    }
    rep.add(p + "coassociativity", coassoc, w1, mono_deg);
    rep.add(p + "counit", counit, w2, mono_deg);
    rep.add(p + "antipode", antipode, w3, mono_deg);
    rep.add(p + "star_involutive", star_inv, w4, mono_deg);
    rep.add(p + "star_coproduct", star_cop, w5, mono_deg);
    rep.add(p + "antipode_star", s_star, w6, mono_deg);
}

void projection_checks(Report &rep, const Algebra &A) {
    const Algebra &H = *A.proj_target;
    bool cop = true, eps = true, anti = true, star = true;
    std::string w;
    for (size_t g = 0; g < A.gens.size(); ++g) {
        Elem x = A.gen(A.gens[g]);
        Elem px = A.project(x);
        Tensor lhs = H.coproduct(px);
        Tensor rhs = map_factor(map_factor(A.coproduct(x), 0, &H, [&](const Elem &e) { return A.project(e); }), 1, &H,
                                [&](const Elem &e) { return A.project(e); });
        bool c1 = lhs == rhs, c2 = H.counit(px) == A.counit(x), c3 = H.antipode(px) == A.project(A.antipode(x)),
             c4 = H.star(px) == A.project(A.star(x));
        if ((!c1 || !c2 || !c3 || !c4) && w.empty()) w = "generator " + std::string(1, A.gens[g]);
        cop &= c1;
        eps &= c2;
        anti &= c3;
        star &= c4;
    }
    rep.add("projection.coalgebra_map", cop && eps, w, 1);
    rep.add("projection.antipode", anti, w, 1);
    rep.add("projection.star", star, w, 1);
}

void action_checks(Report &rep, const Calculus &c) {
    const Algebra &A = *c.A, &U = *c.U;
    bool ok = true;
    std::string w;
    for (size_t u = 0; u < U.gens.size(); ++u)
        for (auto &r : A.rules) {
            Elem lhs = c.act.act_gen(int(u), r.lhs);
            Elem rhs = c.act.act(Word(1, char(u)), r.rhs);
            if (!(A.normal_form(lhs) == A.normal_form(rhs)) && ok) {
                ok = false;
                w = std::string(1, U.gens[u]) + " on relation " + A.word_str(r.lhs);
            }
        }
    rep.add("action.respects_relations_of_A", ok, w, 2);
    ok = true;
    w.clear();
    std::vector<Elem> targets;
    for (char g : A.gens) targets.push_back(A.gen(g));
    for (char g : A.gens)
        for (char h : A.gens) targets.push_back(A.gen(g) * A.gen(h));
    for (auto &r : U.rules)
        for (auto &x : targets) {
            if (!(c.act.act(r.lhs, x) == c.act.act(r.rhs, x)) && ok) {
                ok = false;
                w = "relation " + U.word_str(r.lhs) + " on " + x.str();
            }
        }
    rep.add("action.respects_relations_of_U", ok, w, 2);
}

} // namespace

// A preset that violates the axioms can make an evaluation leave its domain (e.g. a differential
// landing outside B); that is a failed check, not an abort.
template <class F> static void guarded(Report &rep, const std::string &name, int bound, F &&f) {
    try {
        f();
    } catch (const Error &e) {
        rep.add(name, false, e.what(), bound);
    }
}

Report validate_preset(const Calculus &c, int bound, int conf_bound) {
    Report rep;
    const Algebra &A = *c.A;
    hopf_checks(rep, *c.H, 3, conf_bound);
    hopf_checks(rep, A, 3, conf_bound);
    hopf_checks(rep, *c.U, 3, conf_bound);
    projection_checks(rep, A);
    action_checks(rep, c);

    std::string w;
    bool ok = true;
    for (auto &f : {c.V10, c.V01, c.V2}) {
        std::string wf;
        if (!coaction_is_valid(f, &wf) && ok) {
            ok = false;
            w = f->name + ": " + wf;
        }
    }
    rep.add("fibers.coaction", ok, w);

    // the base algebra
    ok = true;
    w.clear();
    for (auto &b : c.base_gens)
        if (!c.is_coinvariant(b) && ok) {
            ok = false;
            w = b.str();
        }
    rep.add("base.coinvariant_generators", ok, w);
    if (!ok) return rep; // the differentials below need coinvariant inputs

    int gdeg = 0;
    for (auto &g : c.base_gens) gdeg = std::max(gdeg, g.degree());
    int mono_len = std::max(1, bound / std::max(gdeg, 1));
    std::vector<Elem> mons = c.base_monomials(mono_len);
    std::vector<Elem> gens1 = c.base_monomials(1);

    // differentials
    guarded(rep, "calculus.differentials", bound, [&] {
        Timer t;
        bool cons = true, leib = true, star = true;
        std::string wc, wl, ws;
        for (auto &b : mons) {
            std::string wf;
            if (cons && (!satisfies_constraint(c.del(b), &wf) || !satisfies_constraint(c.delbar(b), &wf))) {
                cons = false;
                wc = b.str() + ": " + wf;
            }
            Elem bs = A.star(b);
            if (star && (!c.is_coinvariant(bs) || !(c.star_form(c.del(b)) == c.delbar(bs)))) {
                star = false;
                ws = b.str();
            }
        }
        for (auto &x : gens1)
            for (auto &y : mons) {
                if ((x * y).degree() > bound) continue;
                if (leib && !(c.d(x * y) == c.d(x) * y + x * c.d(y))) {
                    leib = false;
                    wl = x.str() + " * " + y.str();
                }
            }
        rep.add("calculus.tangent_constraint", cons, wc, bound);
        rep.add("calculus.leibniz", leib, wl, bound);
        rep.add("calculus.star_compatibility", star, ws, bound);
        rep.checks.back().millis = t.ms();
    });
    // ∗ on forms
    guarded(rep, "calculus.star_forms", bound, [&] {
        size_t n = c.V1->dim();
        Matrix Jc = c.J1;
        for (auto &row : Jc)
            for (auto &x : row) x = x.conj();
        bool inv1 = mat_equal(mat_mul(c.J1, Jc), identity_matrix(n));
        Matrix J2c = c.J2;
        for (auto &row : J2c)
            for (auto &x : row) x = x.conj();
        bool inv2 = mat_equal(mat_mul(c.J2, J2c), identity_matrix(c.V2->dim()));
        rep.add("forms.star_involutive", inv1 && inv2, inv1 ? "two-forms" : "one-forms");
        bool bid = true;
        for (size_t k = 0; k < n; ++k)
            for (size_t l = 0; l < n; ++l)
                if (!c.J1[l][k].is_zero()) {
                    Bideg a = c.V1->bideg[k], b = c.V1->bideg[l];
                    if (!(a.p == b.q && a.q == b.p)) bid = false;
                }
        rep.add("forms.star_swaps_bidegree", bid, "star entry mixes bidegrees");
        bool col = is_colinear({conjugate(c.V1), c.V1, c.J1}) && is_colinear({conjugate(c.V2), c.V2, c.J2});
        rep.add("forms.star_colinear", col, "star is not a comodule map from the conjugate fiber");
    });
    // wedge
    guarded(rep, "wedge.evaluation", bound, [&] {
        rep.add("wedge.colinear", is_colinear(c.wedge), "wedge is not a comodule map");
        bool like = true;
        std::string wl;
        size_t n = c.V1->dim();
        bool has20 = false, has02 = false;
        for (auto &b : c.V2->bideg) {
            has20 |= b.p == 2 && b.q == 0;
            has02 |= b.p == 0 && b.q == 2;
        }
        for (size_t k = 0; k < n; ++k)
            for (size_t l = 0; l < n; ++l) {
                Bideg a = c.V1->bideg[k], b = c.V1->bideg[l];
                bool is20 = a.p == 1 && b.p == 1, is02 = a.q == 1 && b.q == 1;
                if ((is20 && !has20) || (is02 && !has02))
                    for (size_t v = 0; v < c.V2->dim(); ++v)
                        if (!c.wedge.m[v][k * n + l].is_zero()) {
                            like = false;
                            wl = c.V1->labels[k] + "@" + c.V1->labels[l];
                        }
            }
        rep.add("wedge.zero_on_empty_bidegrees", like, wl);
        rep.add("wedge.factorizable", c.factorizable, "restricted wedge maps are not invertible");
    });
    const DualBasis &b1 = c.basis("1");
    std::vector<Cot> span1 = c.spanning_set(b1, bound);
    if (c.factorizable) {
        Timer t;
        FiberMap wl = compose(c.wedge, tensor_maps(c.inc01, c.inc10));
        FiberMap wr = compose(c.wedge, tensor_maps(c.inc10, c.inc01));
        bool fib = mat_equal(compose(wl, c.theta_l).m, identity_matrix(c.V2->dim())) &&
                   mat_equal(compose(c.theta_l, wl).m, identity_matrix(wl.src->dim())) &&
                   mat_equal(compose(wr, c.theta_r).m, identity_matrix(c.V2->dim())) &&
                   mat_equal(compose(c.theta_r, wr).m, identity_matrix(wr.src->dim()));
        bool elems = true;
        std::string we;
        const DualBasis &b10 = c.basis("10"), &b01 = c.basis("01");
        for (auto &x : b10.elems)
            for (auto &y : b01.elems) {
                if (!(c.theta('l', c.wedge_forms(y, x)) == tensor_over_B(y, x)) ||
                    !(c.theta('r', c.wedge_forms(x, y)) == tensor_over_B(x, y))) {
                    elems = false;
                    we = x.str() + " , " + y.str();
                }
                Cot top = c.wedge_forms(x, y);
                if (!(c.wedge_tensor(apply_map(tensor_maps(c.inc01, c.inc10), c.theta('l', top))) == top) ||
                    !(c.wedge_tensor(apply_map(tensor_maps(c.inc10, c.inc01), c.theta('r', top))) == top)) {
                    elems = false;
                    we = "wedge∘theta on " + top.str();
                }
            }
        rep.add("wedge.theta_inverse", fib && elems, fib ? we : "fiber matrices", bound);
        rep.checks.back().millis = t.ms();
        // graded star compatibility of the wedge
        bool gs = true;
        std::string wg;
        for (auto &x : b1.elems)
            for (auto &y : b1.elems)
                if (!(c.star_form(c.wedge_forms(x, y)) == -c.wedge_forms(c.star_form(y), c.star_form(x)))) {
                    gs = false;
                    wg = x.str() + " , " + y.str();
                }
        rep.add("wedge.star_graded", gs, wg);
    }
    // dual bases
    for (auto &[key, b] : c.bases) {
        guarded(rep, "dual_basis." + key + ".evaluation", bound, [&] {
        Timer t;
        const std::string p = "dual_basis." + key + ".";
        bool cons = true;
        std::string wc;
        for (auto &x : b.elems)
            if (!satisfies_constraint(x, &wc) && cons) {
                cons = false;
                wc = x.str();
            }
        for (auto &x : b.mc)
            if (!satisfies_constraint(x, nullptr) && cons) {
                cons = false;
                wc = "d-constant " + x.str();
            }
        rep.add(p + "constraint", cons, wc);
        // reconstruction on spanning sets of every basis over the same fiber
        std::vector<Cot> span;
        for (auto &[k2, b2] : c.bases)
            if (b2.fib == b.fib)
                for (auto &x : c.spanning_set(b2, bound)) span.push_back(x);
        bool rec = true, inb = true, fre = true;
        std::string wr, wb, wf;
        for (auto &x : span) {
            auto coeffs = c.left_decompose(x, b);
            if (rec && !(c.reconstruct(coeffs, b) == x)) {
                rec = false;
                wr = x.str();
            }
            for (auto &e : coeffs)
                if (inb && !c.is_coinvariant(e)) {
                    inb = false;
                    wb = x.str();
                }
            for (auto &[k2, b2] : c.bases) {
                if (b2.fib != b.fib) continue;
                for (auto &f : b2.funcs) {
                    Elem lhs = c.apply_functional(f, x), rhs(c.A.get());
                    for (size_t i = 0; i < b.size(); ++i) rhs += coeffs[i] * c.apply_functional(f, b.elems[i]);
                    if (fre && !(lhs == rhs)) {
                        fre = false;
                        wf = x.str();
                    }
                }
            }
        }
        rep.add(p + "reconstruction", rec, wr, bound);
        rep.add(p + "functionals_in_B", inb, wb, bound);
        rep.add(p + "functional_reconstruction", fre, wf, bound);
        EMatrix P = c.projector(b);
        rep.add("projector." + key + ".idempotent", emat_equal(emat_mul(P, P), P), emat_str(P));
        // Maurer–Cartan constants
        if (b.mc.size() == b.size()) {
            bool cons2 = true, rl = true, alt = true;
            std::string w1, w2, w3;
            for (size_t k = 0; k < b.size(); ++k) {
                if (cons2 && !(c.d_one_form(c.embed(b.elems[k]), b) == b.mc[k])) {
                    cons2 = false;
                    w1 = "d of element " + std::to_string(k + 1);
                }
                for (auto &g : c.base_gens) {
                    Cot lhs = c.d_one_form(c.embed(b.elems[k] * g), b);
                    Cot rhs = b.mc[k] * g - c.wedge_forms(b.elems[k], c.d(g));
                    if (rl && !(lhs == rhs)) {
                        rl = false;
                        w2 = b.elems[k].str() + " * " + g.str();
                    }
                }
            }
            for (auto &[k2, b2] : c.bases) {
                if (k2 == key || b2.fib != b.fib || b2.mc.size() != b2.size()) continue;
                for (auto &x : span)
                    if (alt && !(c.d_one_form(c.embed(x), b) == c.d_one_form(c.embed(x), b2))) {
                        alt = false;
                        w3 = x.str() + " via " + k2;
                    }
            }
            rep.add("maurer_cartan." + key + ".consistent", cons2, w1);
            rep.add("maurer_cartan." + key + ".right_leibniz", rl, w2);
            rep.add("maurer_cartan." + key + ".decomposition_independent", alt, w3, bound);
        } else {
            rep.add("maurer_cartan." + key + ".present", false, "missing d-constants");
        }
        rep.checks.back().millis = t.ms();
        });
    }
    // d² = 0 and the bigraded pieces
    if (b1.mc.size() == b1.size()) {
        guarded(rep, "calculus.d_squared", bound, [&] {
        Timer t;
        bool d2 = true, mixed = true;
        std::string w1, w2;
        bool has20 = false, has02 = false;
        for (auto &bd : c.V2->bideg) {
            has20 |= bd.p == 2;
            has02 |= bd.q == 2;
        }
        for (auto &b : mons) {
            if (b.degree() > bound) continue;
            Cot dd = c.d_one_form(c.d(b), b1);
            if (d2 && !dd.is_zero()) {
                d2 = false;
                w1 = b.str() + " -> " + dd.str();
            }
            Cot m = c.d_one_form(c.embed(c.del(b)), b1) + c.d_one_form(c.embed(c.delbar(b)), b1);
            if (mixed && !m.is_zero()) {
                mixed = false;
                w2 = b.str();
            }
        }
        rep.add("calculus.d_squared", d2, w1, bound);
        rep.add("calculus.del_delbar_anticommute", mixed, w2, bound);
        Check s;
        s.name = "calculus.del_squared_and_delbar_squared";
        s.status = (!has20 && !has02) ? "pass" : "skip";
        s.witness = "";
        rep.add(s); // Ω^{(2,0)} and Ω^{(0,2)} are zero fibers: ∂² and ∂̄² vanish structurally
        rep.checks.back().millis = t.ms();
        });
    }
    (void)span1;
    return rep;
}

std::vector<size_t> form_dimensions(const Calculus &c) {
    auto rank_of = [](const std::vector<Vec> &vs, size_t dim) {
        if (vs.empty()) return size_t(0);
        Matrix m;
        for (auto &v : vs) m.push_back(v);
        (void)dim;
        return rank(m);
    };
    std::vector<Vec> v1, v2;
    const DualBasis &b1 = c.basis("1");
    for (auto &x : b1.elems) v1.push_back(fiber_project(x));
    for (auto &x : b1.elems)
        for (auto &y : b1.elems) v2.push_back(fiber_project(c.wedge_forms(x, y)));
    std::vector<Vec> v0{fiber_project(Cot::basis(c.triv, c.A.get(), "1", c.A->one()))};
    return {rank_of(v0, 1), rank_of(v1, c.V1->dim()), rank_of(v2, c.V2->dim())};
}

} // namespace qgeom
