#include "fixture.hpp"

using namespace qgeom;
using qgeom::test::cp1;
using qgeom::test::cp1_metrics;
using qgeom::test::failures;
using qgeom::test::S;

namespace {

Scalar lambda_qsym() { return qsym_lambda(cp1(), cp1_metrics()); }

EMatrix scaled(const Scalar &s, const EMatrix &m) {
    EMatrix r = m;
    for (auto &row : r)
        for (auto &x : row) x = s * x;
    return r;
}

} // namespace

TEST(Geometry, BaseMetricCoefficients) {
    const Calculus &c = cp1();
    const BaseMetrics &b = cp1_metrics();
    // g10 pairs the (0,1) generator with the (1,0) generator, coefficient 1
    EXPECT_EQ(b.g10.g.str(), "1@m@p");
    EXPECT_EQ(b.g01.g.str(), "1@p@m");
    EXPECT_TRUE(satisfies_constraint(b.g10.g));
    EXPECT_EQ(b.g10.g.fib->dim(), c.V1->dim() * c.V1->dim());
}

TEST(Geometry, BaseSnakeIdentities) {
    const Calculus &c = cp1();
    EXPECT_TRUE(snake_identities_hold(cp1_metrics().dual10, c.V10));
    EXPECT_TRUE(snake_identities_hold(cp1_metrics().dual01, c.V01));
}

TEST(Geometry, ProjectedBaseMetricIsCoevaluation) {
    const BaseMetrics &b = cp1_metrics();
    Vec v = fiber_project(b.g10.g);
    // the (0,1)⊗(1,0) slot of V1⊗V1 carries the coevaluation of the (1,0) inner product
    const Matrix &coev = b.dual10.coev.m;
    ASSERT_EQ(coev.size(), 1u);
    Vec expect(v.size());
    expect[1 * 2 + 0] = coev[0][0];
    EXPECT_EQ(v, expect);
}

TEST(Geometry, FamilyMemberSatisfiesAxioms) {
    Report r = metric_axioms(cp1(), metric_family(cp1_metrics(), 1, 1), 4);
    EXPECT_TRUE(r.pass()) << failures(r);
}

TEST(Geometry, ZeroParameterRejected) { EXPECT_THROW(metric_family(cp1_metrics(), 1, 0), Error); }

TEST(Geometry, AxiomsOnSampleGrid) {
    auto samples = default_lambda_samples(cp1(), cp1_metrics());
    EXPECT_GE(samples.size(), 20u);
    for (auto &[l1, l2] : samples) {
        Report r = metric_axioms(cp1(), metric_family(cp1_metrics(), l1, l2), 3);
        EXPECT_TRUE(r.pass()) << l1.str() << ", " << l2.str() << "\n" << failures(r);
    }
}

TEST(Geometry, PairingIsDeterminedByG) {
    // scaling one pairing block by a nonzero constant ≠ 1 breaks duality
    Metric m = metric_family(cp1_metrics(), 1, 1);
    Metric bad = m;
    bad.pairing = add_maps(m.pairing, scale_map(S("2"), cp1_metrics().g10.pairing));
    EXPECT_FALSE(metric_axioms(cp1(), bad, 2).pass());
}

TEST(Geometry, PerturbationsAreRejected) {
    auto pert = metric_perturbations(cp1(), cp1_metrics());
    EXPECT_GE(pert.size(), 5u);
    for (auto &[name, m] : pert) EXPECT_FALSE(metric_axioms(cp1(), m, 3).pass()) << name;
}

TEST(Geometry, DaggerIsInvolutive) {
    const Calculus &c = cp1();
    Metric m = metric_family(cp1_metrics(), Scalar::imag_unit(), S("q + 2"));
    EXPECT_EQ(c.dagger(c.dagger(m.g)), m.g);
}

TEST(Geometry, DaggerFixesBaseMetric) {
    const Calculus &c = cp1();
    EXPECT_EQ(c.dagger(cp1_metrics().g10.g), cp1_metrics().g10.g);
    EXPECT_EQ(c.dagger(cp1_metrics().g01.g), cp1_metrics().g01.g);
}

TEST(Geometry, DaggerPreservesMixedSummands) {
    // (x⊗y)† = y*⊗x*: star swaps the bidegrees of both factors and the flip swaps them back
    const Calculus &c = cp1();
    Cot x = tensor_over_B(c.embed(c.basis("10").elems[1]), c.embed(c.basis("01").elems[0]));
    Cot y = c.dagger(x);
    // components of V1⊗V1 are indexed 2·i + j with p = 0 and m = 1
    for (size_t k = 0; k < 4; ++k) {
        if (k != 1) EXPECT_TRUE(x.c[k].is_zero());
        if (k != 1) EXPECT_TRUE(y.c[k].is_zero());
    }
    EXPECT_FALSE(y.c[1].is_zero());
}

TEST(Geometry, Reality) {
    const Calculus &c = cp1();
    const BaseMetrics &b = cp1_metrics();
    EXPECT_TRUE(is_real(c, metric_family(b, 1, -lambda_qsym())).real());
    Reality cplx = is_real(c, metric_family(b, Scalar::imag_unit(), 1));
    EXPECT_FALSE(cplx.real());
    EXPECT_TRUE(cplx.agree());
    EXPECT_FALSE(cplx.witness.empty());
    EXPECT_TRUE(is_real(c, metric_family(b, 2, S("3*(q + 1)"))).real());
}

TEST(Geometry, RealityFormsAgreeOnSamples) {
    bool some_real = false, some_complex = false;
    for (auto &[l1, l2] : default_lambda_samples(cp1(), cp1_metrics())) {
        Reality r = is_real(cp1(), metric_family(cp1_metrics(), l1, l2));
        EXPECT_TRUE(r.agree()) << l1.str() << ", " << l2.str();
        (r.real() ? some_real : some_complex) = true;
    }
    EXPECT_TRUE(some_real);
    EXPECT_TRUE(some_complex);
}

TEST(Geometry, QuantumSymmetricLambda) {
    Scalar l = lambda_qsym();
    // regression pin of the derived value
    EXPECT_EQ(l, S("-q^-2"));
    EXPECT_TRUE(l.is_unit_monomial());
    EXPECT_EQ(l.conj(), l);
    Metric m = metric_family(cp1_metrics(), 1, -l);
    EXPECT_TRUE(wedge_vanishes(cp1(), m));
}

TEST(Geometry, QuantumSymmetricRay) {
    const Calculus &c = cp1();
    const BaseMetrics &b = cp1_metrics();
    Scalar l = lambda_qsym();
    EXPECT_TRUE(wedge_vanishes(c, metric_family(b, 1, -l)));
    EXPECT_FALSE(wedge_vanishes(c, metric_family(b, 1, l)));
    for (const char *k : {"5/7", "q + 2", "i*q^3"}) EXPECT_TRUE(wedge_vanishes(c, metric_family(b, S(k), -S(k) * l))) << k;
    Report r = qsym_uniqueness_scan(c, b, default_lambda_samples(c, b));
    EXPECT_TRUE(r.pass()) << failures(r);
}

TEST(Geometry, HermitianBlocksAndIdentities) {
    const Calculus &c = cp1();
    for (auto pr : {std::pair<Scalar, Scalar>{1, -lambda_qsym()}, std::pair<Scalar, Scalar>{2, S("5/3")}}) {
        Metric m = metric_family(cp1_metrics(), pr.first, pr.second);
        HermitianData hd = hermitian_from_real(c, m);
        Report corr = hermitian_correspondence(c, m, hd);
        EXPECT_TRUE(corr.pass()) << failures(corr);
        for (auto *H : {&hd.H1, &hd.H2, &hd.H}) {
            Report r = hermitian_identities(c, *H, "H.");
            EXPECT_TRUE(r.pass()) << H->on << "\n" << failures(r);
            EXPECT_TRUE(emat_equal(emat_mul(H->h, H->htilde), c.projector(c.basis(H->basis))));
        }
        EXPECT_NE(hermitian_identities(c, hd.H1, "").find("htilde_dP_h_zero"), nullptr);
    }
}

TEST(Geometry, NonRealMetricHasNoHermitianStructure) {
    EXPECT_THROW(hermitian_from_real(cp1(), metric_family(cp1_metrics(), Scalar::imag_unit(), 1)), Error);
}

TEST(Geometry, ScalingMetricScalesHInversely) {
    // (ω, η) carries λ⁻¹, so g ↦ c·g sends h ↦ c⁻¹·h and h̃ ↦ c·h̃
    const Calculus &c = cp1();
    Scalar k(3);
    HermitianMetric a = hermitian_on(c, metric_family(cp1_metrics(), 1, 1), "10");
    HermitianMetric b = hermitian_on(c, metric_family(cp1_metrics(), k, k), "10");
    EXPECT_TRUE(emat_equal(b.h, scaled(k.inv(), a.h)));
    EXPECT_TRUE(emat_equal(b.htilde, scaled(k, a.htilde)));
}

TEST(Geometry, DescriptorJson) {
    const BaseMetrics &b = cp1_metrics();
    auto d = metric_descriptor(cp1(), b, metric_family(b, 1, -lambda_qsym()));
    EXPECT_EQ(d["real"], true);
    EXPECT_EQ(d["quantum_symmetric"], true);
    EXPECT_EQ(d["lambda_qsym"], "-q^-2");
    auto e = metric_descriptor(cp1(), b, metric_family(b, Scalar::imag_unit(), 1));
    EXPECT_EQ(e["real"], false);
    EXPECT_EQ(e["quantum_symmetric"], false);
}
