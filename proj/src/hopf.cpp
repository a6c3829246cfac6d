#include "qgeom/hopf.hpp"

#include "qgeom/expr_parser.hpp"

#include <algorithm>
#include <set>

namespace qgeom {

// ---------------------------------------------------------------- Elem

Elem::Elem(const Algebra *a, Scalar s) : alg(a) {
    if (!s.is_zero()) terms.emplace(Word(), std::move(s));
}

bool Elem::is_scalar() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty()); }

Scalar Elem::coeff(const Word &w) const {
    auto it = terms.find(w);
    return it == terms.end() ? Scalar() : it->second;
}

int Elem::degree() const { return terms.empty() ? -1 : int(terms.rbegin()->first.size()); }

static std::pair<bool, std::string> coeff_body(const Scalar &c) {
    // (negative?, body) for a coefficient that multiplies something.
    std::string s = c.str();
    if (s.find(' ') == std::string::npos) {
        bool neg = s[0] == '-';
        return {neg, neg ? s.substr(1) : s};
    }
    return {false, "(" + s + ")"};
}

static std::string join_term(std::string &out, const Scalar &c, const std::string &body) {
    auto [neg, cb] = coeff_body(c);
    std::string t;
    if (body.empty())
        t = cb;
    else if (cb == "1")
        t = body;
    else
        t = cb + "*" + body;
    if (out.empty())
        out = (neg ? "-" : "") + t;
    else
        out += (neg ? " - " : " + ") + t;
    return out;
}

std::string Elem::str() const {
    if (terms.empty()) return "0";
    std::string out;
    for (auto &[w, c] : terms) join_term(out, c, w.empty() ? std::string() : alg->word_str(w));
    return out;
}

static const Algebra *pick(const Elem &x, const Elem &y) { return x.alg ? x.alg : y.alg; }

bool operator==(const Elem &x, const Elem &y) { return x.terms == y.terms; }

static void add_into(Elem::Terms &t, const Word &w, const Scalar &c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) t.erase(it);
    }
}

Elem operator+(const Elem &x, const Elem &y) {
    Elem r = x;
    r.alg = pick(x, y);
    for (auto &[w, c] : y.terms) add_into(r.terms, w, c);
    return r;
}

Elem operator-(const Elem &x) {
    Elem r = x;
    for (auto &[w, c] : r.terms) c = -c;
    return r;
}

Elem operator-(const Elem &x, const Elem &y) {
    Elem r = x;
    r.alg = pick(x, y);
    for (auto &[w, c] : y.terms) add_into(r.terms, w, -c);
    return r;
}

Elem operator*(const Scalar &s, const Elem &x) {
    Elem r(x.alg);
    if (s.is_zero()) return r;
    for (auto &[w, c] : x.terms) r.terms.emplace(w, s * c);
    return r;
}

Elem operator*(const Elem &x, const Elem &y) {
    const Algebra *a = pick(x, y);
    Elem r(a);
    if (x.is_zero() || y.is_zero()) return r;
    for (auto &[wx, cx] : x.terms)
        for (auto &[wy, cy] : y.terms) {
            Scalar c = cx * cy;
            if (wx.empty() || wy.empty()) {
                add_into(r.terms, wx + wy, c);
                continue;
            }
            Elem nf = a->normal_form_word(wx + wy);
            for (auto &[w, cw] : nf.terms) add_into(r.terms, w, c * cw);
        }
    return r;
}

// ---------------------------------------------------------------- Tensor

bool operator==(const Tensor &x, const Tensor &y) { return x.terms == y.terms; }

static void add_into(std::map<std::vector<Word>, Scalar> &t, const std::vector<Word> &w, const Scalar &c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) t.erase(it);
    }
}

Tensor operator+(const Tensor &x, const Tensor &y) {
    Tensor r = x;
    if (r.algs.empty()) r.algs = y.algs;
    for (auto &[w, c] : y.terms) add_into(r.terms, w, c);
    return r;
}

Tensor operator-(const Tensor &x, const Tensor &y) { return x + Scalar(-1) * y; }

Tensor operator*(const Scalar &s, const Tensor &x) {
    Tensor r;
    r.algs = x.algs;
    if (s.is_zero()) return r;
    for (auto &[w, c] : x.terms) r.terms.emplace(w, s * c);
    return r;
}

Tensor operator*(const Tensor &x, const Tensor &y) {
    Tensor r;
    r.algs = x.algs.empty() ? y.algs : x.algs;
    for (auto &[wx, cx] : x.terms)
        for (auto &[wy, cy] : y.terms) {
            // expand the factorwise products
            std::vector<std::pair<std::vector<Word>, Scalar>> acc{{{}, cx * cy}};
            for (size_t k = 0; k < wx.size(); ++k) {
                Elem f = r.algs[k]->normal_form_word(wx[k] + wy[k]);
                std::vector<std::pair<std::vector<Word>, Scalar>> next;
                for (auto &[ws, c] : acc)
                    for (auto &[w, cw] : f.terms) {
                        auto ws2 = ws;
                        ws2.push_back(w);
                        next.emplace_back(std::move(ws2), c * cw);
                    }
                acc = std::move(next);
            }
            for (auto &[ws, c] : acc) add_into(r.terms, ws, c);
        }
    return r;
}

Tensor tensor(const Elem &x, const Elem &y) {
    Tensor r;
    r.algs = {x.alg, y.alg};
    for (auto &[wx, cx] : x.terms)
        for (auto &[wy, cy] : y.terms) add_into(r.terms, {wx, wy}, cx * cy);
    return r;
}

Tensor tensor(const Tensor &x, const Elem &y) {
    Tensor r;
    r.algs = x.algs;
    r.algs.push_back(y.alg);
    for (auto &[wx, cx] : x.terms)
        for (auto &[wy, cy] : y.terms) {
            auto w = wx;
            w.push_back(wy);
            add_into(r.terms, w, cx * cy);
        }
    return r;
}

Elem multiply_out(const Tensor &t) {
    const Algebra *a = t.algs.empty() ? nullptr : t.algs[0];
    Elem r(a);
    for (auto &[ws, c] : t.terms) {
        Word w;
        for (auto &x : ws) w += x;
        r += c * a->normal_form_word(w);
    }
    return r;
}

std::string Tensor::str() const {
    if (terms.empty()) return "0";
    std::string out;
    for (auto &[ws, c] : terms) {
        std::string body;
        for (size_t k = 0; k < ws.size(); ++k) {
            if (k) body += "@";
            body += ws[k].empty() ? "1" : algs[k]->word_str(ws[k]);
        }
        join_term(out, c, body);
    }
    return out;
}

Tensor map_factor(const Tensor &t, size_t k, const Algebra *target, const std::function<Elem(const Elem &)> &f) {
    Tensor r;
    r.algs = t.algs;
    r.algs[k] = target;
    for (auto &[ws, c] : t.terms) {
        Elem img = f(t.algs[k]->word(ws[k]));
        for (auto &[w, cw] : img.terms) {
            auto ws2 = ws;
            ws2[k] = w;
            add_into(r.terms, ws2, c * cw);
        }
    }
    return r;
}

Tensor flip(const Tensor &t) {
    Tensor r;
    r.algs = {t.algs.at(1), t.algs.at(0)};
    for (auto &[ws, c] : t.terms) add_into(r.terms, {ws[1], ws[0]}, c);
    return r;
}

// ---------------------------------------------------------------- Algebra

int Algebra::gen_index(char letter) const {
    auto it = std::find(gens.begin(), gens.end(), letter);
    return it == gens.end() ? -1 : int(it - gens.begin());
}

Elem Algebra::gen(char letter) const {
    int k = gen_index(letter);
    if (k < 0) throw Error(std::string("undeclared generator '") + letter + "' in " + name);
    Elem e(this);
    e.terms.emplace(Word(1, char(k)), Scalar(1));
    return e;
}

Elem Algebra::word(const Word &w, const Scalar &c) const { return c * normal_form_word(w); }

std::string Algebra::word_str(const Word &w) const {
    if (w.empty()) return "1";
    std::string s;
    for (char ch : w) s += gens.at(size_t(static_cast<unsigned char>(ch)));
    return s;
}

Word Algebra::word_from_letters(std::string_view letters) const {
    Word w;
    for (char ch : letters) {
        if (ch == '1' && letters.size() == 1) return Word();
        int k = gen_index(ch);
        if (k < 0) throw Error(std::string("undeclared generator '") + ch + "' in " + name);
        w += char(k);
    }
    return w;
}

void Algebra::add_rule(const Word &lhs, const Elem &raw_rhs) {
    if (lhs.empty()) throw Error("rule with empty left-hand side");
    for (auto &[w, c] : raw_rhs.terms)
        if (!DegLex()(w, lhs))
            throw Error("rule " + word_str(lhs) + " -> " + raw_rhs.str() + " does not decrease the deglex order");
    rules.push_back({lhs, raw_rhs});
    std::lock_guard lk(mu_);
    nf_cache_.clear();
    cop_cache_.clear();
}

bool Algebra::lookup_nf(const Word &w, Elem &out) const {
    std::lock_guard lk(mu_);
    auto it = nf_cache_.find(w);
    if (it == nf_cache_.end()) return false;
    out = it->second;
    return true;
}

Elem Algebra::nf_rec(const Word &w, long &steps) const {
    Elem out;
    if (lookup_nf(w, out)) return out;
    out = Elem(this);
    // leftmost match, rules in declaration order
    for (size_t p = 0; p < w.size(); ++p) {
        for (auto &r : rules) {
            if (w.compare(p, r.lhs.size(), r.lhs) != 0) continue;
            if (++steps > step_budget) throw Error("normal form step budget exceeded at " + word_str(w));
            for (auto &[u, c] : r.rhs.terms) {
                Elem sub = nf_rec(w.substr(0, p) + u + w.substr(p + r.lhs.size()), steps);
                for (auto &[v, cv] : sub.terms) add_into(out.terms, v, c * cv);
            }
            std::lock_guard lk(mu_);
            nf_cache_.emplace(w, out);
            return out;
        }
    }
    out.terms.emplace(w, Scalar(1));
    std::lock_guard lk(mu_);
    nf_cache_.emplace(w, out);
    return out;
}

Elem Algebra::normal_form_word(const Word &w) const {
    long steps = 0;
    return nf_rec(w, steps);
}

Elem Algebra::normal_form(const Elem &raw) const {
    Elem r(this);
    for (auto &[w, c] : raw.terms) r += c * normal_form_word(w);
    return r;
}

bool Algebra::is_irreducible(const Word &w) const {
    for (auto &r : rules)
        if (w.find(r.lhs) != Word::npos) return false;
    return true;
}

std::vector<Word> Algebra::irreducible_words(int degree) const {
    std::vector<Word> cur{Word()};
    for (int d = 0; d < degree; ++d) {
        std::vector<Word> next;
        for (auto &w : cur)
            for (size_t g = 0; g < gens.size(); ++g) {
                Word x = w + char(g);
                if (is_irreducible(x)) next.push_back(x);
            }
        cur = std::move(next);
    }
    std::sort(cur.begin(), cur.end(), DegLex());
    return cur;
}

Tensor Algebra::coproduct_word(const Word &w) const {
    {
        std::lock_guard lk(mu_);
        auto it = cop_cache_.find(w);
        if (it != cop_cache_.end()) return it->second;
    }
    Tensor r;
    r.algs = {this, this};
    if (w.empty()) {
        r.terms.emplace(std::vector<Word>{Word(), Word()}, Scalar(1));
    } else {
        const Tensor &last = coproduct_img.at(size_t(static_cast<unsigned char>(w.back())));
        r = w.size() == 1 ? last : coproduct_word(w.substr(0, w.size() - 1)) * last;
        r.algs = {this, this};
    }
    std::lock_guard lk(mu_);
    cop_cache_.emplace(w, r);
    return r;
}

Tensor Algebra::coproduct(const Elem &x) const {
    Tensor r;
    r.algs = {this, this};
    for (auto &[w, c] : x.terms) r = r + c * coproduct_word(w);
    return r;
}

Scalar Algebra::counit(const Elem &x) const {
    Scalar s;
    for (auto &[w, c] : x.terms) {
        Scalar t = c;
        for (char g : w) t *= counit_img.at(size_t(static_cast<unsigned char>(g)));
        s += t;
    }
    return s;
}

Elem Algebra::antipode(const Elem &x) const {
    Elem r(this);
    for (auto &[w, c] : x.terms) {
        Elem t(this, c);
        for (size_t k = w.size(); k-- > 0;) t = t * antipode_img.at(size_t(static_cast<unsigned char>(w[k])));
        r += t;
    }
    return r;
}

Elem Algebra::star(const Elem &x) const {
    Elem r(this);
    for (auto &[w, c] : x.terms) {
        Elem t(this, c.conj());
        for (size_t k = w.size(); k-- > 0;) t = t * star_img.at(size_t(static_cast<unsigned char>(w[k])));
        r += t;
    }
    return r;
}

Elem Algebra::project(const Elem &x) const {
    if (!proj_target) throw Error("algebra " + name + " has no projection target");
    Elem r(proj_target);
    for (auto &[w, c] : x.terms) {
        Elem t(proj_target, c);
        for (char g : w) t = t * proj_img.at(size_t(static_cast<unsigned char>(g)));
        r += t;
    }
    return r;
}

Tensor Algebra::coact_right(const Elem &x) const {
    if (!proj_target) throw Error("algebra " + name + " has no projection target");
    return map_factor(coproduct(x), 1, proj_target, [this](const Elem &e) { return project(e); });
}

// ---------------------------------------------------------------- parsing

namespace {

struct ElemSem {
    using Value = Elem;
    const Algebra *alg;
    Value number(const std::string &digits) { return Elem(alg, Scalar(GaussRat(mpq_class(digits)))); }
    bool known_letter(char ch) const { return ch == 'q' || ch == 'i' || alg->has_gen(ch); }
    Value letter(char ch) {
        if (ch == 'q') return Elem(alg, Scalar::q_pow(1));
        if (ch == 'i') return Elem(alg, Scalar::imag_unit());
        Elem e(alg);
        e.terms.emplace(Word(1, char(alg->gen_index(ch))), Scalar(1));
        return e;
    }
    Value add(const Value &a, const Value &b) { return a + b; }
    Value sub(const Value &a, const Value &b) { return a - b; }
    Value neg(const Value &a) { return -a; }
    Value mul(const Value &a, const Value &b) {
        // raw concatenation: rewriting happens afterwards
        Elem r(alg);
        for (auto &[wa, ca] : a.terms)
            for (auto &[wb, cb] : b.terms) add_into(r.terms, wa + wb, ca * cb);
        return r;
    }
    Value div(const Value &a, const Value &b) {
        if (!b.is_scalar() || b.is_zero()) throw ParseError("division by a non-scalar or zero");
        return b.coeff(Word()).inv() * a;
    }
    Value pow(const Value &a, long e) {
        if (e < 0) {
            if (!a.is_scalar() || a.is_zero()) throw ParseError("negative power of a non-scalar");
            return Elem(alg, a.coeff(Word()).pow(int(e)));
        }
        Elem r(alg, Scalar(1));
        for (long k = 0; k < e; ++k) r = mul(r, a);
        return r;
    }
};

struct TVal {
    int nf = 0; // number of tensor factors; 0 = pure scalar
    std::map<std::vector<Word>, Scalar> t;
};

struct TensorSem {
    using Value = TVal;
    const Algebra *alg;
    static TVal scalar(Scalar s) {
        TVal v;
        if (!s.is_zero()) v.t.emplace(std::vector<Word>{}, std::move(s));
        return v;
    }
    Value number(const std::string &digits) { return scalar(Scalar(GaussRat(mpq_class(digits)))); }
    bool known_letter(char ch) const { return ch == 'q' || ch == 'i' || alg->has_gen(ch); }
    Value letter(char ch) {
        if (ch == 'q') return scalar(Scalar::q_pow(1));
        if (ch == 'i') return scalar(Scalar::imag_unit());
        TVal v;
        v.nf = 1;
        v.t.emplace(std::vector<Word>{Word(1, char(alg->gen_index(ch)))}, Scalar(1));
        return v;
    }
    static TVal promote(const TVal &a, int nf) {
        if (a.nf == nf) return a;
        if (a.nf != 0 || nf != 1) throw ParseError("mismatched tensor factor counts");
        TVal v;
        v.nf = 1;
        for (auto &[w, c] : a.t) v.t.emplace(std::vector<Word>{Word()}, c);
        return v;
    }
    Value add(const Value &a, const Value &b) {
        int nf = std::max(a.nf, b.nf);
        TVal x = promote(a, nf), y = promote(b, nf);
        for (auto &[w, c] : y.t) add_into(x.t, w, c);
        return x;
    }
    Value neg(const Value &a) {
        TVal r = a;
        for (auto &[w, c] : r.t) c = -c;
        return r;
    }
    Value sub(const Value &a, const Value &b) { return add(a, neg(b)); }
    Value mul(const Value &a, const Value &b) {
        if (a.nf > 1 || b.nf > 1) throw ParseError("product of tensors; parenthesize tensor factors");
        TVal r;
        r.nf = std::max(a.nf, b.nf);
        for (auto &[wa, ca] : a.t)
            for (auto &[wb, cb] : b.t) {
                Word w = (wa.empty() ? Word() : wa[0]) + (wb.empty() ? Word() : wb[0]);
                add_into(r.t, r.nf ? std::vector<Word>{w} : std::vector<Word>{}, ca * cb);
            }
        return r;
    }
    Value div(const Value &a, const Value &b) {
        if (b.nf != 0 || b.t.empty()) throw ParseError("division by a non-scalar or zero");
        TVal r = a;
        Scalar inv = b.t.begin()->second.inv();
        for (auto &[w, c] : r.t) c = c * inv;
        return r;
    }
    Value pow(const Value &a, long e) {
        if (a.nf == 0) return scalar(a.t.empty() ? Scalar() : a.t.begin()->second.pow(int(e)));
        if (e < 0) throw ParseError("negative power of a non-scalar");
        TVal r = scalar(Scalar(1));
        for (long k = 0; k < e; ++k) r = mul(r, a);
        return r;
    }
    Value tensor(const Value &a, const Value &b) {
        TVal x = a.nf ? a : promote(a, 1), y = b.nf ? b : promote(b, 1);
        TVal r;
        r.nf = x.nf + y.nf;
        for (auto &[wa, ca] : x.t)
            for (auto &[wb, cb] : y.t) {
                auto w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                add_into(r.t, w, ca * cb);
            }
        return r;
    }
};

} // namespace

Elem Algebra::parse_raw(std::string_view text) const {
    ElemSem sem{this};
    return detail::ExprParser<ElemSem>(text, sem).parse_all();
}

Tensor Algebra::parse_tensor(std::string_view text, int factors) const {
    TensorSem sem{this};
    TVal v = detail::ExprParser<TensorSem>(text, sem).parse_all();
    if (v.t.empty()) v.nf = factors;
    if (v.nf == 0 && factors == 1) v = TensorSem::promote(v, 1);
    if (v.nf != factors)
        throw ParseError("expected " + std::to_string(factors) + " tensor factors in \"" + std::string(text) + "\"");
    Tensor r;
    r.algs.assign(size_t(factors), this);
    for (auto &[ws, c] : v.t) {
        Tensor term;
        term.algs = r.algs;
        std::vector<std::pair<std::vector<Word>, Scalar>> acc{{{}, c}};
        for (auto &w : ws) {
            Elem f = normal_form_word(w);
            std::vector<std::pair<std::vector<Word>, Scalar>> next;
            for (auto &[pre, cp] : acc)
                for (auto &[u, cu] : f.terms) {
                    auto p2 = pre;
                    p2.push_back(u);
                    next.emplace_back(std::move(p2), cp * cu);
                }
            acc = std::move(next);
        }
        for (auto &[w, cc] : acc) add_into(r.terms, w, cc);
    }
    return r;
}

// ---------------------------------------------------------------- confluence

ConfluenceReport Algebra::confluence_report(int degree_bound) const {
    ConfluenceReport rep;
    rep.degree_bound = degree_bound;
    auto reduce_at = [&](const Word &w, size_t pos, const Rule &r) {
        Elem out(this);
        for (auto &[u, c] : r.rhs.terms) out += c * normal_form_word(w.substr(0, pos) + u + w.substr(pos + r.lhs.size()));
        return out;
    };
    auto note_failure = [&](const Word &w) {
        if (rep.pass) rep.witness = word_str(w);
        rep.pass = false;
    };
    // critical pairs: overlaps (suffix of one lhs = prefix of another) and inclusions
    std::set<Word> seen;
    for (size_t i = 0; i < rules.size(); ++i)
        for (size_t j = 0; j < rules.size(); ++j) {
            const Word &l1 = rules[i].lhs, &l2 = rules[j].lhs;
            std::vector<std::pair<Word, size_t>> cands; // (word, position of l2)
            for (size_t k = 1; k < std::min(l1.size(), l2.size()); ++k)
                if (l1.compare(l1.size() - k, k, l2, 0, k) == 0) cands.emplace_back(l1 + l2.substr(k), l1.size() - k);
            if (i != j) {
                size_t p = l1.find(l2);
                if (p != Word::npos) cands.emplace_back(l1, p);
            }
            for (auto &[w, p2] : cands) {
                if (int(w.size()) > degree_bound) continue;
                CriticalPair cp;
                cp.word = w;
                cp.left = reduce_at(w, 0, rules[i]);
                cp.right = reduce_at(w, p2, rules[j]);
                cp.joins = cp.left == cp.right;
                if (!cp.joins) note_failure(w);
                if (seen.insert(w + char(i) + char(j)).second) rep.pairs.push_back(std::move(cp));
            }
        }
    // exhaustive sweep: every single-step reduction of every word up to the
    // bound has the same normal form as the word itself
    std::vector<Word> cur{Word()};
    for (int d = 1; d <= degree_bound; ++d) {
        std::vector<Word> next;
        for (auto &w : cur)
            for (size_t g = 0; g < gens.size(); ++g) next.push_back(w + char(g));
        cur = std::move(next);
        for (auto &w : cur) {
            ++rep.words_swept;
            Elem target;
            bool have = false;
            for (size_t p = 0; p < w.size(); ++p)
                for (auto &r : rules) {
                    if (w.compare(p, r.lhs.size(), r.lhs) != 0) continue;
                    Elem e = reduce_at(w, p, r);
                    if (!have) {
                        target = e;
                        have = true;
                    } else if (!(e == target)) {
                        note_failure(w);
                    }
                }
        }
        if (!rep.pass) break;
    }
    return rep;
}

// ---------------------------------------------------------------- hopf_apply

HopfValue hopf_apply(std::string_view which, const Algebra &alg, const Elem &x) {
    HopfValue v;
    if (which == "coproduct") {
        v.is_tensor = true;
        v.tens = alg.coproduct(x);
    } else if (which == "counit") {
        v.elem = Elem(&alg, alg.counit(x));
    } else if (which == "antipode") {
        v.elem = alg.antipode(x);
    } else if (which == "star") {
        v.elem = alg.star(x);
    } else {
        throw Error("unknown Hopf map '" + std::string(which) + "'");
    }
    return v;
}

// ---------------------------------------------------------------- U action

Elem UqAction::act_gen(int ugen, const Word &aword) const {
    if (aword.empty()) return Elem(A, U->counit_img.at(size_t(ugen)));
    auto key = std::make_pair(ugen, aword);
    {
        std::lock_guard lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    Elem r(A);
    if (aword.size() == 1) {
        auto it = table.find({ugen, int(static_cast<unsigned char>(aword[0]))});
        if (it == table.end())
            throw Error(std::string("missing action table entry for ") + U->gens.at(size_t(ugen)) + " on " +
                        A->word_str(aword));
        r = it->second;
    } else {
        Elem head(A), tail(A);
        head.terms.emplace(aword.substr(0, 1), Scalar(1));
        tail.terms.emplace(aword.substr(1), Scalar(1));
        for (auto &[ws, c] : U->coproduct_img.at(size_t(ugen)).terms)
            r += c * (act(ws[0], head) * act(ws[1], tail));
    }
    std::lock_guard lk(mu_);
    cache_.emplace(key, r);
    return r;
}

Elem UqAction::act(const Word &uword, const Elem &x) const {
    Elem cur = x;
    for (size_t k = uword.size(); k-- > 0;) {
        Elem next(A);
        for (auto &[w, c] : cur.terms) next += c * act_gen(int(static_cast<unsigned char>(uword[k])), w);
        cur = std::move(next);
    }
    cur.alg = A;
    return cur;
}

Elem UqAction::act(const Elem &uelem, const Elem &x) const {
    Elem r(A);
    for (auto &[w, c] : uelem.terms) r += c * act(w, x);
    return r;
}

Elem uq_act(const UqAction &a, const Elem &X, const Elem &x) { return a.act(X, x); }

} // namespace qgeom
