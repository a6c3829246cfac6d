#include "fixture.hpp"

using namespace qgeom;
using qgeom::test::cp1;
using qgeom::test::cp1_metrics;
using qgeom::test::failures;
using qgeom::test::S;

namespace {

Metric qsym_metric() { return metric_family(cp1_metrics(), 1, -qsym_lambda(cp1(), cp1_metrics())); }
Metric generic_metric() { return metric_family(cp1_metrics(), 2, S("5/3")); }

const Connection &lc_qsym() {
    static Connection lc = levi_civita(cp1(), qsym_metric());
    return lc;
}

} // namespace

// ---------------------------------------------------------------- holomorphic structures

TEST(Connection, DbarChristoffelIdentities) {
    const Calculus &c = cp1();
    for (auto conn : {dbar_connection_10(c), dbar_connection_op(c)}) {
        Report r = christoffel_identities(c, conn, conn.name + ".");
        EXPECT_TRUE(r.pass()) << failures(r);
        EMatrix P = c.projector(c.basis(conn.basis));
        EXPECT_TRUE(form_matrix_equal(form_mul(c, conn.gamma, P), conn.gamma));
    }
}

TEST(Connection, DbarLeibnizAndBimodule) {
    const Calculus &c = cp1();
    for (auto conn : {dbar_connection_10(c), dbar_connection_op(c)}) {
        Report r = leibniz_check(c, conn, "", 4);
        r.merge(bimodule_check(c, conn, "", 4));
        EXPECT_TRUE(r.pass()) << conn.name << "\n" << failures(r);
    }
}

TEST(Connection, DbarValuesAreAntiholomorphic) {
    const Calculus &c = cp1();
    Connection d = dbar_connection_10(c);
    for (auto &row : d.gamma)
        for (auto &x : row) EXPECT_TRUE(c.part10(x).is_zero());
}

TEST(Connection, MixedBraidingIsMinusThetaWedge) {
    const Calculus &c = cp1();
    FiberMap s = mixed_sigma(c, c.V10);
    // σ(e⊗η) = −θ_l(e∧η) for e ∈ Ω^(1,0), η ∈ Ω^(0,1)
    for (auto &e : c.basis("10").elems)
        for (auto &eta : c.basis("01").elems) {
            Cot lhs = apply_map(s, tensor_over_B(e, c.embed(eta)));
            Cot rhs = -apply_map(c.inc01, c.theta('l', c.wedge_forms(c.embed(e), c.embed(eta))), 0);
            EXPECT_EQ(lhs, rhs);
        }
}

// ---------------------------------------------------------------- Chern connections

TEST(Connection, ChernFormulaConstantMetric) {
    // h = (1) and Γ₋ = 0 force Γ₊ = −(∂h·h̃ + h·Γ₋†·h̃) = 0
    const Calculus &c = cp1();
    EMatrix h = {{c.A->one()}};
    FormMatrix zero = {{Cot(c.V1, c.A.get())}};
    FormMatrix gp = form_neg(form_add(form_mul(c, differential_matrix(c, h, "del"), h),
                                      form_mul(c, h, form_mul(c, form_dagger(c, zero), h))));
    EXPECT_TRUE(form_matrix_zero(gp));
}

TEST(Connection, ChernFormulaReverified) {
    // Γ₊ + ∂h·h̃ + h·Γ₋†·h̃ = 0 and the (0,1)-part is Γ₋
    const Calculus &c = cp1();
    for (auto m : {qsym_metric(), generic_metric()}) {
        HermitianData hd = hermitian_from_real(c, m);
        const HermitianMetric &H = hd.H1;
        Connection d = dbar_connection_10(c);
        Connection ch = chern(c, H, d);
        FormMatrix rest = form_add(form_mul(c, differential_matrix(c, H.h, "del"), H.htilde),
                                   form_mul(c, H.h, form_mul(c, form_dagger(c, d.gamma), H.htilde)));
        EXPECT_TRUE(form_matrix_zero(form_add(part10(c, ch.gamma), rest)));
        EXPECT_TRUE(form_matrix_equal(part01(c, ch.gamma), d.gamma));
    }
}

TEST(Connection, ChernCompatibility) {
    const Calculus &c = cp1();
    for (auto m : {qsym_metric(), generic_metric()}) {
        HermitianData hd = hermitian_from_real(c, m);
        Report r = compatibility_check(c, hd.H1, chern(c, hd.H1, dbar_connection_10(c)), "chern10.");
        r.merge(compatibility_check(c, hd.H2, chern(c, hd.H2, dbar_connection_op(c)), "chern01."));
        EXPECT_TRUE(r.pass()) << failures(r);
    }
}

TEST(Connection, TwoRouteAgreement) {
    const Calculus &c = cp1();
    for (auto m : {qsym_metric(), generic_metric()}) {
        HermitianData hd = hermitian_from_real(c, m);
        Connection d10 = dbar_connection_10(c), d01 = dbar_connection_op(c);
        EXPECT_TRUE(form_matrix_equal(nabla_hat(c, hd.H1, d10).gamma, part10(c, chern(c, hd.H1, d10).gamma)));
        EXPECT_TRUE(form_matrix_equal(nabla_hat(c, hd.H2, d01).gamma, part01(c, chern(c, hd.H2, d01).gamma)));
    }
}

TEST(Connection, NablaHatIndependentOfDecomposition) {
    const Calculus &c = cp1();
    Metric m = generic_metric();
    Connection a = nabla_hat(c, hermitian_on(c, m, "10"), dbar_connection_10(c, "10"));
    Connection b = nabla_hat(c, hermitian_on(c, m, "10alt"), dbar_connection_10(c, "10alt"));
    for (auto &x : c.spanning_set(c.basis("10"), 4)) EXPECT_EQ(apply_connection(c, a, x), apply_connection(c, b, x));
}

// ---------------------------------------------------------------- Levi-Civita

TEST(Connection, LeviCivitaTorsionFree) {
    for (auto &t : torsion(cp1(), lc_qsym(), 4)) EXPECT_TRUE(t.is_zero()) << t.str();
}

TEST(Connection, TorsionOnExactFormsIsWedgeOfNabla) {
    const Calculus &c = cp1();
    Connection perturbed = lc_qsym();
    perturbed.gamma[0][1] = perturbed.gamma[0][1] + c.d(c.A->parse("ad"));
    for (auto &b : c.base_monomials(2)) {
        Cot x = c.d(b);
        Cot t = c.wedge_tensor(apply_connection(c, perturbed, x)) - c.d_one_form(x);
        EXPECT_EQ(t, c.wedge_tensor(apply_connection(c, perturbed, x)));
    }
}

TEST(Connection, LeviCivitaMetricCompatible) {
    const Calculus &c = cp1();
    for (auto m : {qsym_metric(), generic_metric()}) {
        Connection lc = levi_civita(c, m);
        EXPECT_TRUE(nabla_g(c, m, lc).is_zero());
        EXPECT_TRUE(cotorsion(c, m, lc).is_zero());
        Report r = compatibility_check(c, hermitian_from_real(c, m).H, lc, "lc.");
        EXPECT_TRUE(r.pass()) << failures(r);
    }
}

TEST(Connection, NablaGInvariantsVanish) {
    const Calculus &c = cp1();
    EXPECT_EQ(hom_space(trivial_fiber(c.H.get()), tensor_fiber({c.V1, c.V1, c.V1})).size(), 0u);
    Vec v = fiber_project(nabla_g(c, qsym_metric(), lc_qsym()));
    for (auto &s : v) EXPECT_TRUE(s.is_zero());
}

TEST(Connection, PerturbedChristoffelBreaksMetricity) {
    const Calculus &c = cp1();
    Connection bad = lc_qsym();
    bad.gamma[0][0] = bad.gamma[0][0] + c.d(c.A->parse("ad"));
    Cot ng = nabla_g(c, qsym_metric(), bad);
    EXPECT_FALSE(ng.is_zero());
    EXPECT_FALSE(ng.str().empty());
}

TEST(Connection, PerturbedMetricHasCotorsion) {
    const Calculus &c = cp1();
    Metric bad = qsym_metric();
    Cot e = c.embed(c.basis("10").elems[0]);
    bad.g = bad.g + tensor_over_B(e, c.star_form(c.star_form(e)));
    EXPECT_FALSE(cotorsion(c, bad, lc_qsym()).is_zero());
}

TEST(Connection, LeviCivitaBimoduleAndLeibniz) {
    const Calculus &c = cp1();
    Report r = bimodule_check(c, lc_qsym(), "lc.", 4);
    r.merge(leibniz_check(c, lc_qsym(), "lc.", 4));
    EXPECT_TRUE(r.pass()) << failures(r);
}

TEST(Connection, LeviCivitaChristoffelIdentities) {
    Report r = christoffel_identities(cp1(), lc_qsym(), "lc.");
    EXPECT_TRUE(r.pass()) << failures(r);
    EXPECT_NE(r.find("lc.Gamma10P"), nullptr);
}

TEST(Connection, BraidingPinned) {
    Matrix expect = {{S("q^2"), 0, 0, 0}, {0, 0, S("q^-2"), 0}, {0, S("q^2"), 0, 0}, {0, 0, 0, S("q^-2")}};
    EXPECT_TRUE(mat_equal(lc_qsym().sigma->m, expect)) << matrix_str(lc_qsym().sigma->m);
}

TEST(Connection, Covariance) {
    const Calculus &c = cp1();
    EXPECT_TRUE(covariance_check(c, lc_qsym(), "lc.", 4).pass());
    EXPECT_TRUE(d_covariance_check(c, 4).pass());
    Connection bad = lc_qsym();
    bad.gamma[1][0] = bad.gamma[1][0] + c.A->parse("ab") * c.embed(c.basis("10").elems[0]);
    Report r = covariance_check(c, bad, "bad.", 4);
    ASSERT_FALSE(r.pass());
    EXPECT_FALSE(r.checks[0].witness.empty());
}

TEST(Connection, IndependentOfDualBasis) {
    const Calculus &c = cp1();
    Connection alt = levi_civita(c, qsym_metric(), "10alt", "01alt");
    for (auto *key : {"1", "1alt"})
        for (auto &x : c.spanning_set(c.basis(key), 4)) EXPECT_EQ(apply_connection(c, alt, x), apply_connection(c, lc_qsym(), x));
}

TEST(Connection, NonRealMetricRejected) {
    EXPECT_THROW(levi_civita(cp1(), metric_family(cp1_metrics(), Scalar::imag_unit(), 1)), Error);
}

// ---------------------------------------------------------------- uniqueness certificate

TEST(Connection, UniquenessCertificate) {
    Report r = uniqueness_certificate(cp1());
    EXPECT_TRUE(r.pass()) << failures(r);
    EXPECT_EQ(hom_space(cp1().V10, cp1().V01).size(), 0u);
}

TEST(Connection, CentralCharacters) {
    auto z = z_characters(cp1(), 3);
    ASSERT_EQ(z.size(), 4u);
    std::vector<std::string> got;
    for (auto &x : z) {
        EXPECT_EQ(x.engine, x.formula);
        got.push_back(x.engine.str());
    }
    EXPECT_EQ(got, (std::vector<std::string>{"q^-6", "q^-2", "q^2", "q^6"}));
}

TEST(Connection, ReportJsonOmitsTimingByDefault) {
    Report r;
    r.add("b.check", true);
    r.add("a.check", false, "witness", 3);
    auto j = report_json(r, false);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["check"], "a.check");
    EXPECT_EQ(j[0]["status"], "fail");
    EXPECT_EQ(j[0]["witness"], "witness");
    EXPECT_EQ(j[0]["degree_bound"], 3);
    EXPECT_FALSE(j[0].contains("millis"));
    EXPECT_TRUE(report_json(r, true)[0].contains("millis"));
}
