#include "qgeom/geometry.hpp"

#include <algorithm>

namespace qgeom {

namespace {

/** Index of a basis vector of a bidegree fiber inside V1. */
size_t to_v1(const Calculus &c, const Fiber &w, size_t k) {
    if (w == c.V1) return k;
    if (same_fiber(w, c.V10)) return k;
    if (same_fiber(w, c.V01)) return c.V10->dim() + k;
    throw Error("fiber " + w->name + " is not a one-form fiber");
}

Cot retag(Cot x, const Fiber &f) {
    if (!same_fiber(x.fib, f)) throw Error("element over " + x.fib->name + " where " + f->name + " was expected");
    x.fib = f;
    return x;
}

Fiber v1v1(const Calculus &c) { return tensor_fiber(c.V1, c.V1); }

} // namespace

// ---------------------------------------------------------------- base metrics

BaseMetrics base_metrics(const Calculus &c, const InnerProduct &ip10, const InnerProduct &ip01) {
    if (!is_invariant(ip10) || !is_invariant(ip01)) throw Error("base_metrics: inner products must be invariant");
    size_t n10 = c.V10->dim(), n01 = c.V01->dim(), n = n10 + n01;
    Fiber VV = v1v1(c);
    const Matrix &J = c.J1;
    // (u_k, w_l)^{1,0} = ⟨u_k, [w_l*]⟩ and (w_l, u_k)^{0,1} = ⟨w_l, [u_k*]⟩
    Matrix Q10 = zero_matrix(n10, n01), Q01 = zero_matrix(n01, n10);
    for (size_t k = 0; k < n10; ++k)
        for (size_t l = 0; l < n01; ++l)
            for (size_t t = 0; t < n10; ++t) Q10[k][l] += J[t][n10 + l].conj() * ip10.gram[k][t];
    for (size_t l = 0; l < n01; ++l)
        for (size_t k = 0; k < n10; ++k)
            for (size_t t = 0; t < n01; ++t) Q01[l][k] += J[n10 + t][k].conj() * ip01.gram[l][t];
    Matrix C10 = inverse(Q10), C01 = inverse(Q01); // coevaluation coefficients

    BaseMetrics b;
    b.ip10 = ip10;
    b.ip01 = ip01;
    b.dual10 = dual_pairing_from_inner(c.V10, ip10);
    b.dual01 = dual_pairing_from_inner(c.V01, ip01);
    Fiber one = trivial_fiber(c.H.get());
    b.g10.g = Cot(VV, c.A.get());
    b.g01.g = Cot(VV, c.A.get());
    b.g10.pairing = {VV, one, zero_matrix(1, n * n)};
    b.g01.pairing = {VV, one, zero_matrix(1, n * n)};
    for (size_t k = 0; k < n10; ++k)
        for (size_t l = 0; l < n01; ++l) {
            b.g10.pairing.m[0][k * n + n10 + l] = Q10[k][l];
            b.g10.g.c[(n10 + l) * n + k] = Elem(c.A.get(), C10[l][k]);
            b.g01.pairing.m[0][(n10 + l) * n + k] = Q01[l][k];
            b.g01.g.c[k * n + n10 + l] = Elem(c.A.get(), C01[k][l]);
        }
    b.g01.lambda1 = Scalar(0);
    b.g10.lambda2 = Scalar(0);
    return b;
}

BaseMetrics base_metrics(const Calculus &c) {
    return base_metrics(c, solve_invariant_inner_product(c.V10), solve_invariant_inner_product(c.V01));
}

Metric metric_family(const BaseMetrics &b, const Scalar &l1, const Scalar &l2) {
    if (l1.is_zero() || l2.is_zero()) throw Error("metric_family: λ1 and λ2 must be nonzero");
    Metric m;
    m.lambda1 = l1;
    m.lambda2 = l2;
    m.g = l1 * b.g10.g + l2 * b.g01.g;
    m.pairing = add_maps(scale_map(l1.inv(), b.g10.pairing), scale_map(l2.inv(), b.g01.pairing));
    return m;
}

// ---------------------------------------------------------------- pairing and duality

Elem pair_forms(const Calculus &c, const FiberMap &pairing, const Cot &x, const Cot &y) {
    return as_scalar_elem(apply_map(pairing, tensor_over_B(c.embed(x), c.embed(y))));
}

Cot left_contract(const Calculus &c, const Metric &m, const Cot &w) {
    return retag(apply_map(m.pairing, tensor_over_B(c.embed(w), m.g), 0), c.V1);
}

Cot right_contract(const Calculus &c, const Metric &m, const Cot &w) {
    return retag(apply_map(m.pairing, tensor_over_B(m.g, c.embed(w)), 1), c.V1);
}

Report metric_axioms(const Calculus &c, const Metric &m, int bound) {
    Report r;
    size_t n = c.V1->dim();
    std::string w;
    bool cons = satisfies_constraint(m.g, &w);
    r.add("metric.g_in_cotensor", cons, w);
    r.add("metric.pairing_colinear", is_colinear(m.pairing), "pairing is not a comodule map");
    bool left = true, right = true;
    std::string wl, wr;
    for (auto &x : c.spanning_set(c.basis("1"), bound)) {
        if (left && !(left_contract(c, m, x) == x)) {
            left = false;
            wl = x.str() + " -> " + left_contract(c, m, x).str();
        }
        if (right && !(right_contract(c, m, x) == x)) {
            right = false;
            wr = x.str() + " -> " + right_contract(c, m, x).str();
        }
    }
    r.add("metric.duality_left", left, wl, bound);
    r.add("metric.duality_right", right, wr, bound);
    bool central = true;
    std::string wc;
    for (auto &b : c.base_gens)
        if (!(b * m.g == m.g * b)) {
            central = false;
            wc = b.str();
        }
    r.add("metric.central", central, wc);
    bool support = true;
    std::string ws;
    for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l) {
            Bideg a = c.V1->bideg[k], b = c.V1->bideg[l];
            if (a.p != b.p) continue; // mixed block
            if (!m.pairing.m[0][k * n + l].is_zero() || !m.g.c[k * n + l].is_zero()) {
                support = false;
                ws = c.V1->labels[k] + "@" + c.V1->labels[l];
            }
        }
    r.add("metric.mixed_support", support, ws);
    return r;
}

std::vector<std::pair<std::string, Metric>> metric_perturbations(const Calculus &c, const BaseMetrics &b) {
    std::vector<std::pair<std::string, Metric>> out;
    Metric base = metric_family(b, Scalar(1), Scalar(1));
    size_t n = c.V1->dim(), n10 = c.V10->dim();
    auto block_scaled = [&](bool ten, const Scalar &s) {
        Metric m = base;
        for (size_t k = 0; k < n; ++k)
            for (size_t l = 0; l < n; ++l)
                if ((k < n10) == ten && (l < n10) != ten) m.pairing.m[0][k * n + l] = s * m.pairing.m[0][k * n + l];
        return m;
    };
    out.emplace_back("pairing (1,0) block scaled by 2", block_scaled(true, Scalar(2)));
    out.emplace_back("pairing (0,1) block scaled by 1+q", block_scaled(false, Scalar(1) + Scalar::q_pow(1)));
    {
        Metric m = base;
        const Cot &e = c.basis("10").elems[0];
        m.g = m.g + tensor_over_B(c.embed(e), c.embed(e));
        out.emplace_back("g moved into the (1,0)(1,0) summand", m);
    }
    {
        Metric m = base;
        const Cot &e = c.basis("01").elems[0];
        m.g = m.g + tensor_over_B(c.embed(e), c.embed(e));
        out.emplace_back("g moved into the (0,1)(0,1) summand", m);
    }
    {
        Metric m = base;
        m.g = Scalar(3) * b.g10.g + b.g01.g;
        out.emplace_back("g10 part scaled without its pairing", m);
    }
    {
        Metric m = base;
        m.pairing.m[0][0] = Scalar(1);
        out.emplace_back("pairing nonzero on a like-bidegree pair", m);
    }
    return out;
}

// ---------------------------------------------------------------- reality and symmetry

Reality is_real(const Calculus &c, const Metric &m) {
    Reality r;
    r.dagger_form = c.dagger(m.g) == m.g;
    r.pairing_form = true;
    const DualBasis &b1 = c.basis("1");
    std::vector<Cot> span = c.spanning_set(b1, 4);
    for (auto &x : span)
        for (auto &y : b1.elems) {
            Elem lhs = pair_forms(c, m.pairing, x, y);
            Elem rhs = c.A->star(pair_forms(c, m.pairing, c.star_form(y), c.star_form(x)));
            Elem lhs2 = pair_forms(c, m.pairing, y, x);
            Elem rhs2 = c.A->star(pair_forms(c, m.pairing, c.star_form(x), c.star_form(y)));
            if (!(lhs == rhs) || !(lhs2 == rhs2)) {
                r.pairing_form = false;
                r.witness = "(" + x.str() + ", " + y.str() + ")";
                break;
            }
        }
    if (!r.dagger_form && r.witness.empty()) r.witness = "g† - g = " + (c.dagger(m.g) - m.g).str();
    return r;
}

Scalar qsym_lambda(const Calculus &c, const BaseMetrics &b) {
    Vec w10 = fiber_project(c.wedge_tensor(b.g10.g)), w01 = fiber_project(c.wedge_tensor(b.g01.g));
    std::optional<Scalar> lambda;
    for (size_t k = 0; k < w01.size(); ++k)
        if (!w01[k].is_zero()) {
            lambda = w10[k] / w01[k];
            break;
        }
    if (!lambda) throw Error("qsym_lambda: ∧g01 = 0, contradicting factorizability");
    for (size_t k = 0; k < w01.size(); ++k)
        if (!(w10[k] == *lambda * w01[k])) throw Error("qsym_lambda: ∧g10 and ∧g01 are not proportional");
    return *lambda;
}

bool wedge_vanishes(const Calculus &c, const Metric &m) { return c.wedge_tensor(m.g).is_zero(); }

Report qsym_uniqueness_scan(const Calculus &c, const BaseMetrics &b,
                            const std::vector<std::pair<Scalar, Scalar>> &samples) {
    Report r;
    Scalar lambda = qsym_lambda(c, b);
    bool ok = true, on = false, off = false;
    std::string w;
    for (auto &[l1, l2] : samples) {
        bool zero = wedge_vanishes(c, metric_family(b, l1, l2));
        bool predicted = l2 == -lambda * l1;
        (predicted ? on : off) = true;
        if (zero != predicted && ok) {
            ok = false;
            w = "(" + l1.str() + ", " + l2.str() + "): wedge " + (zero ? "vanishes" : "does not vanish");
        }
    }
    r.add("qsym.scan_matches_ray", ok, w);
    r.add("qsym.scan_covers_both_sides", on && off, "samples must include points on and off the ray");
    return r;
}

std::vector<std::pair<Scalar, Scalar>> default_lambda_samples(const Calculus &c, const BaseMetrics &b) {
    Scalar lambda = qsym_lambda(c, b), q = Scalar::q_pow(1), i = Scalar::imag_unit();
    std::vector<std::pair<Scalar, Scalar>> s = {
        {1, 1},
        {1, -1},
        {2, 3},
        {-5, 7},
        {q, 1},
        {1, q},
        {q, q.inv()},
        {Scalar(1) + q, Scalar(2)},
        {Scalar(1) - q, q * q},
        {Scalar(3), Scalar(1) / (Scalar(1) + q * q)},
        {i, 1},
        {1, i},
        {Scalar(1) + i, Scalar(2) - i},
        {Scalar(1), -lambda},
        {Scalar(2), Scalar(-2) * lambda},
        {q, -q * lambda},
        {Scalar(1) + q, -(Scalar(1) + q) * lambda},
        {i, -i * lambda},
        {Scalar(1), lambda},
        {Scalar(1), Scalar(2) * lambda},
        {Scalar(-1), -lambda},
        {Scalar(7), Scalar(-7) * lambda + Scalar(1)},
        {q * q, q.inv()},
        {Scalar(1) / Scalar(3), Scalar(5) / Scalar(2)},
    };
    return s;
}

// ---------------------------------------------------------------- Hermitian structures

HermitianMetric hermitian_on(const Calculus &c, const Metric &m, const std::string &key) {
    const DualBasis &b = c.basis(key);
    size_t nw = b.fib->dim(), n = c.V1->dim();
    HermitianMetric H;
    H.basis = key;
    H.on = b.fib == c.V1 ? "1" : same_fiber(b.fib, c.V10) ? "10" : "01";
    H.M = zero_matrix(nw, nw);
    for (size_t k = 0; k < nw; ++k)
        for (size_t l = 0; l < nw; ++l)
            for (size_t t = 0; t < n; ++t)
                H.M[k][l] += m.pairing.m[0][to_v1(c, b.fib, k) * n + t] * c.J1[t][to_v1(c, b.fib, l)];
    Matrix Minv = inverse(H.M);
    size_t r = b.size();
    H.h.assign(r, std::vector<Elem>(r, Elem(c.A.get())));
    H.htilde = H.h;
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) {
            H.h[i][j] = pair_forms(c, m.pairing, b.elems[i], c.star_form(b.elems[j]));
            Elem s(c.A.get());
            for (size_t k = 0; k < nw; ++k) {
                if (b.funcs[i].c[k].is_zero()) continue;
                Elem yk = c.A->star(b.funcs[i].c[k]);
                for (size_t l = 0; l < nw; ++l)
                    if (!Minv[k][l].is_zero() && !b.funcs[j].c[l].is_zero()) s += Minv[k][l] * (yk * b.funcs[j].c[l]);
            }
            H.htilde[i][j] = s;
        }
    return H;
}

HermitianData hermitian_from_real(const Calculus &c, const Metric &m) {
    Reality re = is_real(c, m);
    if (!re.real()) throw Error("hermitian_from_real: metric is not real (" + re.witness + ")");
    return {hermitian_on(c, m, "1"), hermitian_on(c, m, "10"), hermitian_on(c, m, "01")};
}

std::vector<Cot> hermitian_inverse_elements(const Calculus &c, const HermitianMetric &H) {
    const DualBasis &b = c.basis(H.basis);
    size_t nw = b.fib->dim();
    Matrix Minv = inverse(H.M);
    std::vector<Cot> out;
    for (size_t i = 0; i < b.size(); ++i) {
        Cot g(b.fib, c.A.get());
        for (size_t l = 0; l < nw; ++l)
            for (size_t k = 0; k < nw; ++k)
                if (!Minv[l][k].is_zero()) g.c[l] += Minv[l][k].conj() * c.A->star(b.funcs[i].c[k]);
        out.push_back(g);
    }
    return out;
}

FormMatrix differential_matrix(const Calculus &c, const EMatrix &m, std::string_view which) {
    FormMatrix f(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        for (auto &e : m[i]) f[i].push_back(c.differential(which, e));
    return f;
}

FormMatrix form_mul(const Calculus &c, const EMatrix &a, const FormMatrix &f) {
    size_t n = a.size(), k = f.size(), m = k ? f[0].size() : 0;
    FormMatrix r(n, std::vector<Cot>(m, Cot(c.V1, c.A.get())));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t)
            if (!a[i][t].is_zero())
                for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * f[t][j];
    return r;
}

FormMatrix form_mul(const Calculus &c, const FormMatrix &f, const EMatrix &a) {
    size_t n = f.size(), k = a.size(), m = k ? a[0].size() : 0;
    FormMatrix r(n, std::vector<Cot>(m, Cot(c.V1, c.A.get())));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t)
            for (size_t j = 0; j < m; ++j)
                if (!a[t][j].is_zero()) r[i][j] += f[i][t] * a[t][j];
    return r;
}

FormMatrix form_add(const FormMatrix &a, const FormMatrix &b) {
    FormMatrix r = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) r[i][j] += b[i][j];
    return r;
}

FormMatrix form_neg(const FormMatrix &a) {
    FormMatrix r = a;
    for (auto &row : r)
        for (auto &x : row) x = -x;
    return r;
}

FormMatrix form_dagger(const Calculus &c, const FormMatrix &a) {
    size_t n = a.size(), m = n ? a[0].size() : 0;
    FormMatrix r(m, std::vector<Cot>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) r[j][i] = c.star_form(c.embed(a[i][j]));
    return r;
}

bool form_matrix_zero(const FormMatrix &a) {
    for (auto &row : a)
        for (auto &x : row)
            if (!x.is_zero()) return false;
    return true;
}

bool form_matrix_equal(const FormMatrix &a, const FormMatrix &b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (size_t j = 0; j < a[i].size(); ++j)
            if (!(a[i][j] == b[i][j])) return false;
    }
    return true;
}

std::string form_matrix_str(const FormMatrix &a) {
    std::string s = "[";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += "; ";
        for (size_t j = 0; j < a[i].size(); ++j) s += (j ? ", " : "") + a[i][j].str();
    }
    return s + "]";
}

Report hermitian_identities(const Calculus &c, const HermitianMetric &H, const std::string &p) {
    Report r;
    const Algebra &A = *c.A;
    EMatrix P = c.projector(c.basis(H.basis));
    EMatrix Pd = emat_dagger(A, P);
    r.add(p + "h_htilde_is_P", emat_equal(emat_mul(H.h, H.htilde), P), emat_str(emat_mul(H.h, H.htilde)));
    r.add(p + "htilde_h_is_Pdagger", emat_equal(emat_mul(H.htilde, H.h), Pd), emat_str(emat_mul(H.htilde, H.h)));
    r.add(p + "h_hermitian", emat_equal(emat_dagger(A, H.h), H.h), emat_str(H.h));
    r.add(p + "htilde_hermitian", emat_equal(emat_dagger(A, H.htilde), H.htilde), emat_str(H.htilde));
    r.add(p + "htilde_P", emat_equal(emat_mul(H.htilde, P), H.htilde), emat_str(emat_mul(H.htilde, P)));
    r.add(p + "P_h", emat_equal(emat_mul(P, H.h), H.h), emat_str(emat_mul(P, H.h)));
    if (H.on != "1") {
        FormMatrix t = form_mul(c, H.htilde, form_mul(c, differential_matrix(c, P, "delbar"), H.h));
        r.add(p + "htilde_dP_h_zero", form_matrix_zero(t), form_matrix_str(t));
    }
    if (H.on == "01") {
        // the same identity for the opposite complex structure, where ∂ plays the role of ∂̄
        FormMatrix t = form_mul(c, H.htilde, form_mul(c, differential_matrix(c, P, "del"), H.h));
        r.add(p + "htilde_dP_h_zero_op", form_matrix_zero(t), form_matrix_str(t));
    }
    return r;
}

Report hermitian_correspondence(const Calculus &c, const Metric &m, const HermitianData &hd) {
    Report r;
    const DualBasis &b1 = c.basis("1");
    bool sesq = true, blocks = true;
    std::string ws, wb;
    std::vector<Cot> span = c.spanning_set(b1, 4);
    auto herm = [&](const Cot &x, const Cot &y) { return pair_forms(c, m.pairing, x, c.star_form(y)); };
    for (auto &e : span)
        for (auto &f : b1.elems) {
            if (sesq && !(c.A->star(herm(f, e)) == herm(e, f))) {
                sesq = false;
                ws = e.str() + " , " + f.str();
            }
            Cot e10 = c.embed(c.part10(e)), f01 = c.embed(c.part01(f));
            Cot e01 = c.embed(c.part01(e)), f10 = c.embed(c.part10(f));
            if (blocks && (!herm(e10, f01).is_zero() || !herm(e01, f10).is_zero())) {
                blocks = false;
                wb = e.str() + " , " + f.str();
            }
        }
    r.add("hermitian.sesquisymmetric", sesq, ws, 4);
    r.add("hermitian.block_diagonal", blocks, wb, 4);
    // g = Σ_i g_i* ⊗ e^i with ḡ_i = H⁻¹(e_i)
    auto gs = hermitian_inverse_elements(c, hd.H);
    Cot g(v1v1(c), c.A.get());
    for (size_t i = 0; i < b1.size(); ++i) g += tensor_over_B(c.star_form(gs[i]), b1.elems[i]);
    r.add("hermitian.round_trip_metric", g == m.g, "reconstructed " + g.str());
    bool inv = true;
    for (auto *H : {&hd.H, &hd.H1, &hd.H2})
        try {
            inverse(H->M);
        } catch (const Error &) {
            inv = false;
        }
    r.add("hermitian.invertible", inv, "singular fiber matrix");
    return r;
}

nlohmann::json metric_descriptor(const Calculus &c, const BaseMetrics &b, const Metric &m) {
    Scalar lambda = qsym_lambda(c, b);
    Reality re = is_real(c, m);
    nlohmann::json j;
    j["lambda1"] = m.lambda1.str();
    j["lambda2"] = m.lambda2.str();
    j["real"] = re.real();
    j["quantum_symmetric"] = wedge_vanishes(c, m);
    j["lambda_qsym"] = lambda.str();
    return j;
}

} // namespace qgeom
