#include "qgeom/takeuchi.hpp"

#include <algorithm>

namespace qgeom {

// ---------------------------------------------------------------- fibers

size_t FiberData::index(const std::string &label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw Error("fiber " + name + " has no basis vector '" + label + "'");
    return size_t(it - labels.begin());
}

Fiber make_fiber(const std::string &name, const Algebra *H, std::vector<std::string> labels,
                 std::vector<std::vector<Elem>> coaction, std::vector<Bideg> bideg) {
    auto f = std::make_shared<FiberData>();
    f->name = name;
    f->H = H;
    size_t n = labels.size();
    if (coaction.size() != n) throw Error("fiber " + name + ": coaction matrix has wrong size");
    for (auto &row : coaction)
        if (row.size() != n) throw Error("fiber " + name + ": coaction matrix has wrong size");
    f->labels = std::move(labels);
    f->coaction = std::move(coaction);
    f->bideg = bideg.empty() ? std::vector<Bideg>(n) : std::move(bideg);
    return f;
}

Fiber trivial_fiber(const Algebra *H) { return make_fiber("1", H, {"1"}, {{H->one()}}); }

Fiber zero_fiber(const std::string &name, const Algebra *H, Bideg) { return make_fiber(name, H, {}, {}); }

bool is_trivial(const Fiber &f) {
    return f->factors.empty() && f->dim() == 1 && f->labels[0] == "1" && f->coaction[0][0] == f->H->one();
}

static std::vector<Fiber> flat_factors(const Fiber &f) {
    if (is_trivial(f)) return {};
    return f->factor_list(f);
}

Fiber tensor_fiber(const std::vector<Fiber> &fs) {
    if (fs.empty()) throw Error("tensor product of no fibers");
    std::vector<Fiber> flat;
    for (auto &f : fs)
        for (auto &g : flat_factors(f)) flat.push_back(g);
    if (flat.empty()) return trivial_fiber(fs[0]->H);
    if (flat.size() == 1) return flat[0];
    auto r = std::make_shared<FiberData>();
    r->H = flat[0]->H;
    r->labels = {""};
    r->coaction = {{r->H->one()}};
    r->bideg = {Bideg{0, 0}};
    for (size_t t = 0; t < flat.size(); ++t) {
        const FiberData &g = *flat[t];
        r->name += (t ? "@" : "") + g.name;
        size_t n = r->labels.size(), m = g.dim();
        std::vector<std::string> labels(n * m);
        std::vector<Bideg> bideg(n * m);
        std::vector<std::vector<Elem>> co(n * m, std::vector<Elem>(n * m));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < m; ++j) {
                labels[i * m + j] = (t ? r->labels[i] + "@" : "") + g.labels[j];
                Bideg a = r->bideg[i], b = g.bideg[j];
                bideg[i * m + j] = (a.p < 0 || b.p < 0) ? Bideg{} : Bideg{a.p + b.p, a.q + b.q};
                for (size_t l = 0; l < n; ++l)
                    for (size_t k = 0; k < m; ++k) co[l * m + k][i * m + j] = r->coaction[l][i] * g.coaction[k][j];
            }
        r->labels = std::move(labels);
        r->bideg = std::move(bideg);
        r->coaction = std::move(co);
    }
    r->factors = flat;
    return r;
}

Fiber tensor_fiber(const Fiber &a, const Fiber &b) { return tensor_fiber(std::vector<Fiber>{a, b}); }

Fiber direct_sum(const std::string &name, const Fiber &a, const Fiber &b) {
    size_t n = a->dim(), m = b->dim();
    std::vector<std::string> labels = a->labels;
    labels.insert(labels.end(), b->labels.begin(), b->labels.end());
    std::vector<Bideg> bideg = a->bideg;
    bideg.insert(bideg.end(), b->bideg.begin(), b->bideg.end());
    std::vector<std::vector<Elem>> co(n + m, std::vector<Elem>(n + m, Elem(a->H)));
    for (size_t l = 0; l < n; ++l)
        for (size_t k = 0; k < n; ++k) co[l][k] = a->coaction[l][k];
    for (size_t l = 0; l < m; ++l)
        for (size_t k = 0; k < m; ++k) co[n + l][n + k] = b->coaction[l][k];
    return make_fiber(name, a->H, std::move(labels), std::move(co), std::move(bideg));
}

Fiber conjugate(const Fiber &v) {
    if (v->conj_of) return v->conj_of;
    std::vector<std::string> labels;
    std::vector<Bideg> bideg;
    for (size_t k = 0; k < v->dim(); ++k) {
        labels.push_back(v->labels[k] + "~");
        Bideg b = v->bideg[k];
        bideg.push_back(b.p < 0 ? b : Bideg{b.q, b.p});
    }
    std::vector<std::vector<Elem>> co = v->coaction;
    for (auto &row : co)
        for (auto &h : row) h = v->H->star(h);
    auto f = std::make_shared<FiberData>(*make_fiber(v->name + "~", v->H, labels, co, bideg));
    f->conj_of = v;
    return f;
}

Fiber dual(const Fiber &v) {
    size_t n = v->dim();
    std::vector<std::string> labels;
    for (auto &l : v->labels) labels.push_back(l + "^");
    std::vector<std::vector<Elem>> co(n, std::vector<Elem>(n));
    for (size_t l = 0; l < n; ++l)
        for (size_t k = 0; k < n; ++k) co[l][k] = v->H->antipode(v->coaction[k][l]);
    return make_fiber(v->name + "^", v->H, labels, co);
}

bool same_fiber(const Fiber &a, const Fiber &b) {
    if (a == b) return true;
    if (a->dim() != b->dim() || a->labels != b->labels) return false;
    for (size_t l = 0; l < a->dim(); ++l)
        for (size_t k = 0; k < a->dim(); ++k)
            if (a->coaction[l][k] != b->coaction[l][k]) return false;
    return true;
}

bool coaction_is_valid(const Fiber &v, std::string *witness) {
    const Algebra *H = v->H;
    size_t n = v->dim();
    for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l) {
            // counit: ε(h_lk) = δ_lk
            if (H->counit(v->coaction[l][k]) != Scalar(l == k ? 1 : 0)) {
                if (witness) *witness = "counit fails at (" + v->labels[l] + ", " + v->labels[k] + ")";
                return false;
            }
            // coassociativity: Δ(h_lk) = Σ_m h_lm ⊗ h_mk
            Tensor rhs;
            rhs.algs = {H, H};
            for (size_t m = 0; m < n; ++m) rhs = rhs + tensor(v->coaction[l][m], v->coaction[m][k]);
            if (!(H->coproduct(v->coaction[l][k]) == rhs)) {
                if (witness) *witness = "coassociativity fails at (" + v->labels[l] + ", " + v->labels[k] + ")";
                return false;
            }
        }
    return true;
}

// ---------------------------------------------------------------- fiber maps

FiberMap identity_map(const Fiber &f) { return {f, f, identity_matrix(f->dim())}; }

FiberMap compose(const FiberMap &g, const FiberMap &f) {
    if (g.src->dim() != f.tgt->dim()) throw Error("composing fiber maps with mismatched fibers");
    return {f.src, g.tgt, mat_mul(g.m, f.m)};
}

FiberMap tensor_maps(const FiberMap &f, const FiberMap &g) {
    return {tensor_fiber(f.src, g.src), tensor_fiber(f.tgt, g.tgt), kron(f.m, g.m)};
}

FiberMap scale_map(const Scalar &s, const FiberMap &f) { return {f.src, f.tgt, mat_scale(s, f.m)}; }

FiberMap add_maps(const FiberMap &f, const FiberMap &g) { return {f.src, f.tgt, mat_add(f.m, g.m)}; }

/**
 * Rows of the colinearity system for an unknown map F : V → W with
 * unknown index l*dim V + k for F_lk:  Σ_l h^W_nl F_lk − Σ_m F_nm h^V_mk = 0.
 */
static Matrix colinearity_system(const Fiber &v, const Fiber &w) {
    size_t dv = v->dim(), dw = w->dim();
    Matrix rows;
    for (size_t k = 0; k < dv; ++k)
        for (size_t n = 0; n < dw; ++n) {
            std::map<Word, Vec, DegLex> eqs;
            auto add = [&](const Elem &h, size_t unknown, const Scalar &sign) {
                for (auto &[word, c] : h.terms) {
                    auto &row = eqs[word];
                    if (row.empty()) row.resize(dv * dw);
                    row[unknown] += sign * c;
                }
            };
            for (size_t l = 0; l < dw; ++l) add(w->coaction[n][l], l * dv + k, Scalar(1));
            for (size_t m = 0; m < dv; ++m) add(v->coaction[m][k], n * dv + m, Scalar(-1));
            for (auto &[word, row] : eqs) rows.push_back(row);
        }
    return rows;
}

bool is_colinear(const FiberMap &f) {
    Matrix sys = colinearity_system(f.src, f.tgt);
    size_t dv = f.src->dim();
    for (auto &row : sys) {
        Scalar s;
        for (size_t u = 0; u < row.size(); ++u)
            if (!row[u].is_zero()) s += row[u] * f.m[u / dv][u % dv];
        if (!s.is_zero()) return false;
    }
    return true;
}

std::vector<FiberMap> hom_space(const Fiber &v, const Fiber &w) {
    size_t dv = v->dim(), dw = w->dim();
    std::vector<FiberMap> out;
    if (dv == 0 || dw == 0) return out;
    for (auto &x : nullspace(colinearity_system(v, w), dv * dw)) {
        FiberMap f{v, w, zero_matrix(dw, dv)};
        for (size_t u = 0; u < x.size(); ++u) f.m[u / dv][u % dv] = x[u];
        out.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------- cotensor elements

Cot::Cot(Fiber f, const Algebra *a) : fib(std::move(f)), A(a), c(fib->dim(), Elem(a)) {}

Cot Cot::basis(Fiber f, const Algebra *a, const std::string &label, const Elem &coeff) {
    Cot x(f, a);
    x.c[f->index(label)] = coeff;
    return x;
}

bool Cot::is_zero() const {
    return std::all_of(c.begin(), c.end(), [](const Elem &e) { return e.is_zero(); });
}

int Cot::degree() const {
    int d = -1;
    for (auto &e : c) d = std::max(d, e.degree());
    return d;
}

std::string Cot::str() const {
    std::string out;
    for (size_t k = 0; k < c.size(); ++k) {
        if (c[k].is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::string s = c[k].str();
        bool simple = c[k].terms.size() == 1 && s.find(' ') == std::string::npos;
        out += (simple ? s : "(" + s + ")") + "@" + fib->labels[k];
    }
    return out.empty() ? "0" : out;
}

static void check_same(const Cot &x, const Cot &y) {
    if (x.c.size() != y.c.size() || !same_fiber(x.fib, y.fib))
        throw Error("cotensor elements over different fibers (" + x.fib->name + " vs " + y.fib->name + ")");
}

bool operator==(const Cot &x, const Cot &y) {
    check_same(x, y);
    return x.c == y.c;
}

Cot operator+(const Cot &x, const Cot &y) {
    check_same(x, y);
    Cot r = x;
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] += y.c[k];
    return r;
}

Cot operator-(const Cot &x) {
    Cot r = x;
    for (auto &e : r.c) e = -e;
    return r;
}

Cot operator-(const Cot &x, const Cot &y) { return x + (-y); }

Cot operator*(const Scalar &s, const Cot &x) {
    Cot r = x;
    for (auto &e : r.c) e = s * e;
    return r;
}

Cot operator*(const Elem &b, const Cot &x) {
    Cot r = x;
    for (auto &e : r.c) e = b * e;
    return r;
}

Cot operator*(const Cot &x, const Elem &b) {
    Cot r = x;
    for (auto &e : r.c) e = e * b;
    return r;
}

bool satisfies_constraint(const Cot &x, std::string *witness) {
    const Algebra *A = x.A;
    size_t n = x.dim();
    for (size_t l = 0; l < n; ++l) {
        Tensor rhs;
        rhs.algs = {A, A->proj_target};
        for (size_t k = 0; k < n; ++k)
            if (!x.c[k].is_zero() && !x.fib->coaction[l][k].is_zero()) rhs = rhs + tensor(x.c[k], x.fib->coaction[l][k]);
        if (!(A->coact_right(x.c[l]) == rhs)) {
            if (witness) *witness = "coefficient of " + x.fib->labels[l] + ": " + x.c[l].str();
            return false;
        }
    }
    return true;
}

Vec fiber_project(const Cot &x) {
    std::string w;
    if (!satisfies_constraint(x, &w)) throw Error("fiber_project: cotensor constraint violated at " + w);
    Vec v;
    for (auto &e : x.c) v.push_back(x.A->counit(e));
    return v;
}

Cot unit_U(const Cot &x) {
    // m ↦ m₍₋₁₎ ⊗ [m₍₀₎]: first leg of Δ on the coefficient, counit on the second
    Cot r(x.fib, x.A);
    for (size_t k = 0; k < x.dim(); ++k)
        for (auto &[ws, c] : x.A->coproduct(x.c[k]).terms) {
            Scalar e = x.A->counit(x.A->word(ws[1]));
            if (!e.is_zero()) r.c[k] += (c * e) * x.A->word(ws[0]);
        }
    return r;
}

Cot unit_U_inverse(const Cot &x, const std::vector<Cot> &lifts) {
    if (lifts.size() != x.dim()) throw Error("unit_U_inverse: one lift per basis vector is required");
    const Algebra *A = x.A;
    Cot r(lifts.empty() ? x.fib : lifts[0].fib, A);
    for (size_t k = 0; k < x.dim(); ++k) {
        if (x.c[k].is_zero()) continue;
        const Cot &m = lifts[k];
        for (size_t j = 0; j < m.dim(); ++j)
            for (auto &[ws, c] : A->coproduct(m.c[j]).terms)
                r.c[j] += c * (x.c[k] * A->antipode(A->word(ws[0])) * A->word(ws[1]));
    }
    return r;
}

Cot induced_right_action(const Cot &x, const Elem &b) {
    const Algebra *A = x.A;
    Cot r(x.fib, A);
    for (size_t k = 0; k < x.dim(); ++k)
        for (auto &[ws, c] : A->coproduct(x.c[k]).terms) {
            Elem first = A->word(ws[0]);
            for (auto &[vs, d] : A->coproduct(A->word(ws[1])).terms)
                r.c[k] += (c * d) * (first * b * A->antipode(A->word(vs[0])) * A->word(vs[1]));
        }
    return r;
}

std::map<Word, Cot, DegLex> coact_left(const Cot &x) {
    std::map<Word, Cot, DegLex> out;
    for (size_t k = 0; k < x.dim(); ++k)
        for (auto &[ws, c] : x.A->coproduct(x.c[k]).terms) {
            auto it = out.find(ws[0]);
            if (it == out.end()) it = out.emplace(ws[0], Cot(x.fib, x.A)).first;
            it->second.c[k] += c * x.A->word(ws[1]);
        }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

Cot tensor_over_B(const Cot &x, const Cot &y) {
    Cot r(tensor_fiber(x.fib, y.fib), x.A);
    size_t m = y.dim();
    for (size_t i = 0; i < x.dim(); ++i) {
        if (x.c[i].is_zero()) continue;
        for (size_t j = 0; j < m; ++j)
            if (!y.c[j].is_zero()) r.c[i * m + j] = x.c[i] * y.c[j];
    }
    return r;
}

static size_t dim_product(const std::vector<Fiber> &fs, size_t from, size_t to) {
    size_t d = 1;
    for (size_t t = from; t < to; ++t) d *= fs[t]->dim();
    return d;
}

Cot apply_map(const FiberMap &f, const Cot &x, size_t first) {
    std::vector<Fiber> fs = flat_factors(x.fib);
    size_t nsrc = flat_factors(f.src).size();
    if (first + nsrc > fs.size()) throw Error("apply_map: factor range out of bounds");
    Fiber mid = nsrc == 0 ? trivial_fiber(x.fib->H)
                          : tensor_fiber(std::vector<Fiber>(fs.begin() + long(first), fs.begin() + long(first + nsrc)));
    if (!same_fiber(mid, f.src)) throw Error("apply_map: map source " + f.src->name + " does not match " + mid->name);
    std::vector<Fiber> out(fs.begin(), fs.begin() + long(first));
    out.push_back(f.tgt);
    out.insert(out.end(), fs.begin() + long(first + nsrc), fs.end());
    Cot r(tensor_fiber(out), x.A);
    size_t dpost = dim_product(fs, first + nsrc, fs.size()), dmid = f.src->dim(), dt = f.tgt->dim();
    size_t dpre = dim_product(fs, 0, first);
    for (size_t a = 0; a < dpre; ++a)
        for (size_t s = 0; s < dmid; ++s)
            for (size_t b = 0; b < dpost; ++b) {
                const Elem &e = x.c[(a * dmid + s) * dpost + b];
                if (e.is_zero()) continue;
                for (size_t t = 0; t < dt; ++t)
                    if (!f.m[t][s].is_zero()) r.c[(a * dt + t) * dpost + b] += f.m[t][s] * e;
            }
    return r;
}

Cot conjugate_elem(const Cot &x) {
    Cot r(conjugate(x.fib), x.A);
    for (size_t k = 0; k < x.dim(); ++k) r.c[k] = x.A->star(x.c[k]);
    return r;
}

Cot unconjugate_elem(const Cot &x, const Fiber &original) {
    Cot r(original, x.A);
    for (size_t k = 0; k < x.dim(); ++k) r.c[k] = x.A->star(x.c[k]);
    return r;
}

Elem as_scalar_elem(const Cot &x) {
    if (x.dim() != 1) throw Error("as_scalar_elem: fiber " + x.fib->name + " is not one-dimensional");
    return x.c[0];
}

// ---------------------------------------------------------------- inner products

/** Invariance rows, unknown index l*n + m for G_lm. */
static Matrix invariance_system(const Fiber &v) {
    const Algebra *H = v->H;
    size_t n = v->dim();
    Matrix rows;
    for (size_t k = 0; k < n; ++k)
        for (size_t m = 0; m < n; ++m) {
            std::map<Word, Vec, DegLex> eqs;
            auto add = [&](const Elem &h, size_t unknown) {
                for (auto &[word, c] : h.terms) {
                    auto &row = eqs[word];
                    if (row.empty()) row.resize(n * n);
                    row[unknown] += c;
                }
            };
            for (size_t l = 0; l < n; ++l)
                for (size_t j = 0; j < n; ++j) {
                    Elem h = v->coaction[l][k] * H->star(v->coaction[j][m]);
                    if (!h.is_zero()) add(h, l * n + j);
                }
            add(Scalar(-1) * H->one(), k * n + m);
            for (auto &[word, row] : eqs) rows.push_back(row);
        }
    return rows;
}

bool is_invariant(const InnerProduct &ip) {
    size_t n = ip.on->dim();
    for (auto &row : invariance_system(ip.on)) {
        Scalar s;
        for (size_t u = 0; u < row.size(); ++u)
            if (!row[u].is_zero()) s += row[u] * ip.gram[u / n][u % n];
        if (!s.is_zero()) return false;
    }
    return true;
}

bool is_positive_at(const Matrix &gram, const mpq_class &q0) {
    size_t n = gram.size();
    if (!mat_equal(gram, conj_transpose(gram))) return false;
    for (size_t k = 1; k <= n; ++k) {
        Matrix sub(k, Vec(k));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) sub[i][j] = gram[i][j];
        GaussRat v;
        try {
            v = determinant(sub).eval(q0);
        } catch (const Error &) {
            return false;
        }
        if (!v.is_real() || sgn(v.re) <= 0) return false;
    }
    return true;
}

InnerProduct solve_invariant_inner_product(const Fiber &v, const mpq_class &q0) {
    size_t n = v->dim();
    InnerProduct ip{v, identity_matrix(n)};
    if (n == 0 || is_invariant(ip)) return ip;
    auto basis = nullspace(invariance_system(v), n * n);
    auto to_matrix = [&](const Vec &x) {
        Matrix g = zero_matrix(n, n);
        for (size_t u = 0; u < x.size(); ++u) g[u / n][u % n] = x[u];
        return g;
    };
    auto hermitian_part = [&](const Matrix &g) {
        return mat_scale(Scalar(GaussRat(mpq_class(1, 2))), mat_add(g, conj_transpose(g)));
    };
    std::vector<Matrix> candidates;
    if (!basis.empty()) {
        Matrix sum = zero_matrix(n, n);
        for (auto &b : basis) sum = mat_add(sum, to_matrix(b));
        candidates.push_back(hermitian_part(sum));
        for (auto &b : basis) candidates.push_back(hermitian_part(to_matrix(b)));
    }
    for (auto &g : candidates) {
        if (g[0][0].is_zero()) continue;
        Matrix normalized = mat_scale(g[0][0].inv(), g);
        if (is_positive_at(normalized, q0) && is_invariant({v, normalized})) return {v, normalized};
    }
    throw Error("no positive invariant inner product on fiber " + v->name);
}

// ---------------------------------------------------------------- dual pairs

DualPair dual_pairing_from_inner(const Fiber &v, const InnerProduct &ip) {
    size_t n = v->dim();
    Fiber vb = conjugate(v), one = trivial_fiber(v->H);
    Matrix ginv = inverse(ip.gram);
    DualPair p;
    p.ev = {tensor_fiber(v, vb), one, zero_matrix(1, n * n)};
    p.coev = {one, tensor_fiber(vb, v), zero_matrix(n * n, 1)};
    for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l) {
            p.ev.m[0][k * n + l] = ip.gram[k][l];
            p.coev.m[l * n + k][0] = ginv[l][k];
        }
    return p;
}

DualPair twist(const DualPair &p, const FiberMap &tau) {
    Fiber v = tau.src;
    Fiber vb = conjugate(v);
    FiberMap tinv{v, v, inverse(tau.m)};
    DualPair r;
    r.ev = compose(p.ev, tensor_maps(tinv, identity_map(vb)));
    r.coev = compose(tensor_maps(identity_map(vb), tau), p.coev);
    return r;
}

bool snake_identities_hold(const DualPair &p, const Fiber &v) {
    size_t n = v->dim();
    Matrix id = identity_matrix(n);
    Matrix s1 = mat_mul(kron(p.ev.m, id), kron(id, p.coev.m));
    Matrix s2 = mat_mul(kron(id, p.ev.m), kron(p.coev.m, id));
    return mat_equal(s1, id) && mat_equal(s2, id);
}

} // namespace qgeom
