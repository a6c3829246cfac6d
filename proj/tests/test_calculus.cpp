#include "fixture.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace qgeom;
using qgeom::test::cp1;
using qgeom::test::failures;
using qgeom::test::S;

namespace {

Report validate_mutated(const std::string &section, const std::string &key, const std::string &value, int bound) {
    PresetData p = cp1().preset;
    p.set(section, key, value);
    Calculus c(p);
    return validate_preset(c, bound);
}

bool any_failed_with_prefix(const Report &r, const std::string &prefix) {
    for (auto &ch : r.checks)
        if (!ch.passed() && ch.name.rfind(prefix, 0) == 0 && !ch.witness.empty()) return true;
    return false;
}

Cot to_forms(const Calculus &c, const Cot &t, bool left) {
    // V10⊗V01 (left = false) or V01⊗V10 (left = true) into V1⊗V1
    return apply_map(left ? c.inc10 : c.inc01, apply_map(left ? c.inc01 : c.inc10, t, 0), 1);
}

} // namespace

// ---------------------------------------------------------------- preset files

TEST(Preset, RenderIsCanonical) {
    PresetData p = cp1().preset;
    PresetData again = PresetData::parse(p.render());
    EXPECT_EQ(again, p);
    EXPECT_EQ(again.render(), p.render());
}

TEST(Preset, TruncatedFileReportsLine) {
    std::string text = cp1().preset.render();
    try {
        Calculus c(PresetData::parse(text.substr(0, text.size() / 3)));
        FAIL() << "truncated preset accepted";
    } catch (const ParseError &e) {
        EXPECT_GT(e.line, 0);
    } catch (const Error &) {
        SUCCEED();
    }
}

TEST(Preset, SyntaxErrorsCarryPosition) {
    for (const char *bad : {"[a]\nkey value\n", "[a]\nk = 1\nk = 2\n", "[a]\n[a]\n", "[a]\nk =\n"}) {
        try {
            PresetData::parse(bad);
            ADD_FAILURE() << "accepted: " << bad;
        } catch (const ParseError &e) {
            EXPECT_GT(e.line, 0) << bad;
        }
    }
}

TEST(Preset, SearchPathFromEnvironment) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "qgeom-preset-search";
    fs::create_directories(dir);
    fs::copy_file(test::preset_path(), dir / "search-copy.preset", fs::copy_options::overwrite_existing);
    setenv(kPresetPathEnv, dir.c_str(), 1);
    EXPECT_EQ(fs::path(resolve_preset("search-copy")), dir / "search-copy.preset");
    unsetenv(kPresetPathEnv);
    EXPECT_THROW(resolve_preset("no-such-preset-anywhere"), Error);
}

// ---------------------------------------------------------------- validation

TEST(Calculus, PresetValidates) {
    Report r = validate_preset(cp1(), 4);
    EXPECT_TRUE(r.pass()) << failures(r);
    EXPECT_GT(r.checks.size(), 50u);
}

TEST(Calculus, FormDimensions) { EXPECT_EQ(form_dimensions(cp1()), (std::vector<size_t>{1, 2, 1})); }

TEST(Calculus, WedgeSignFlipIsRejected) {
    Report r = validate_mutated("wedge", "m@p", "-v", 3);
    EXPECT_FALSE(r.pass());
    EXPECT_TRUE(any_failed_with_prefix(r, "wedge.") || any_failed_with_prefix(r, "calculus.d_squared")) << failures(r);
}

TEST(Calculus, NonLeibnizTangentIsRejected) {
    // products of two B-generators have degree 4, so the bound must reach them
    Report r = validate_mutated("tangent", "del p", "E*E", 4);
    EXPECT_FALSE(r.pass());
    EXPECT_TRUE(any_failed_with_prefix(r, "calculus.leibniz")) << failures(r);
}

// ---------------------------------------------------------------- differentials

TEST(Calculus, DifferentialOfUnitVanishes) {
    const Calculus &c = cp1();
    for (auto *which : {"d", "del", "delbar"}) EXPECT_TRUE(c.differential(which, c.A->one()).is_zero());
}

TEST(Calculus, DifferentialRejectsNonCoinvariant) { EXPECT_THROW(cp1().d(cp1().A->parse("a")), Error); }

TEST(Calculus, DelStarIsDelbarOfStar) {
    const Calculus &c = cp1();
    for (auto &b : c.base_gens) EXPECT_EQ(c.star_form(c.embed(c.del(b))), c.embed(c.delbar(c.A->star(b)))) << b.str();
}

TEST(Calculus, LeibnizOnGeneratorPairs) {
    const Calculus &c = cp1();
    for (auto &x : c.base_gens)
        for (auto &y : c.base_gens) EXPECT_EQ(c.d(x * y), c.d(x) * y + x * c.d(y)) << x.str() << " " << y.str();
}

TEST(Calculus, DIsDelPlusDelbar) {
    const Calculus &c = cp1();
    for (auto &b : c.base_monomials(2)) EXPECT_EQ(c.d(b), c.embed(c.del(b)) + c.embed(c.delbar(b)));
}

// ---------------------------------------------------------------- wedge and θ

TEST(Calculus, WedgeIsBalanced) {
    const Calculus &c = cp1();
    Cot w = c.basis("1").elems[0], e = c.basis("1").elems[4];
    EXPECT_EQ(c.wedge_forms(w, c.A->one() * e), c.wedge_forms(w * c.A->one(), e));
    for (auto &b : c.base_gens) EXPECT_EQ(c.wedge_forms(w * b, e), c.wedge_forms(w, b * e));
}

TEST(Calculus, GeneratingFormsWedgeNontrivially) {
    const Calculus &c = cp1();
    EXPECT_EQ(c.V2->dim(), 1u);
    Cot x = c.basis("1").elems[0], y = c.basis("1").elems[3];
    Cot w = c.wedge_forms(x, y);
    EXPECT_FALSE(w.is_zero());
    EXPECT_EQ(rank(c.wedge.m), 1u);
}

TEST(Calculus, HolomorphicFormsWedgeToZero) {
    const Calculus &c = cp1();
    for (auto &w : c.basis("1").elems)
        if (c.part01(w).is_zero()) EXPECT_TRUE(c.wedge_forms(w, w).is_zero()) << w.str();
}

TEST(Calculus, ThetaLeftInvertsWedge) {
    const Calculus &c = cp1();
    for (auto &eta : c.basis("01").elems)
        for (auto &om : c.basis("10").elems) {
            Cot w = c.wedge_forms(c.embed(eta), c.embed(om));
            EXPECT_EQ(c.theta('l', w), tensor_over_B(eta, om));
        }
}

TEST(Calculus, WedgeAfterThetaRightIsIdentity) {
    const Calculus &c = cp1();
    for (auto &b : c.base_monomials(2)) {
        Cot x = Cot::basis(c.V2, c.A.get(), c.V2->labels[0], b);
        EXPECT_EQ(c.wedge_tensor(to_forms(c, c.theta('r', x), false)), x) << b.str();
        EXPECT_EQ(c.wedge_tensor(to_forms(c, c.theta('l', x), true)), x) << b.str();
    }
}

TEST(Calculus, ThetaMatricesInvertible) {
    const Calculus &c = cp1();
    EXPECT_FALSE(determinant(c.theta_l.m).is_zero());
    EXPECT_FALSE(determinant(c.theta_r.m).is_zero());
}

// ---------------------------------------------------------------- dual bases

TEST(Calculus, DecomposeBasisElementGivesProjectorRow) {
    const Calculus &c = cp1();
    for (auto *key : {"10", "01", "1", "10alt"}) {
        const DualBasis &b = c.basis(key);
        EMatrix P = c.projector(b);
        for (size_t k = 0; k < b.size(); ++k) EXPECT_EQ(c.left_decompose(b.elems[k], b), P[k]) << key << " " << k;
    }
}

TEST(Calculus, DecomposeReconstructs) {
    const Calculus &c = cp1();
    const DualBasis &b = c.basis("1");
    for (auto &x : c.spanning_set(b, 4)) EXPECT_EQ(c.reconstruct(c.left_decompose(x, b), b), x) << x.str();
}

TEST(Calculus, FunctionalReconstruction) {
    const Calculus &c = cp1();
    for (auto *key : {"10", "01"}) {
        const DualBasis &b = c.basis(key);
        for (auto &f : b.funcs) {
            Cot sum = Cot(f.fib, c.A.get());
            for (size_t i = 0; i < b.size(); ++i) sum += b.funcs[i] * c.apply_functional(f, b.elems[i]);
            EXPECT_EQ(sum, f) << key;
        }
    }
}

TEST(Calculus, ProjectorIsIdempotent) {
    const Calculus &c = cp1();
    for (auto *key : {"10", "01", "1", "10alt", "01alt"}) {
        EMatrix P = c.projector(c.basis(key));
        EXPECT_TRUE(emat_equal(emat_mul(P, P), P)) << key;
    }
}

TEST(Calculus, FreeRankOneProjector) {
    const Calculus &c = cp1();
    Fiber t = trivial_fiber(c.H.get());
    DualBasis b;
    b.name = "free";
    b.fib = t;
    b.elems = {Cot::basis(t, c.A.get(), t->labels[0], c.A->one())};
    b.funcs = {Cot::basis(dual(t), c.A.get(), dual(t)->labels[0], c.A->one())};
    EMatrix P = c.projector(b);
    ASSERT_EQ(P.size(), 1u);
    EXPECT_EQ(P[0][0], c.A->one());
}

TEST(Calculus, CounitOfProjectorHasRankOne) {
    const Calculus &c = cp1();
    for (auto *key : {"10", "01"}) {
        EMatrix P = c.projector(c.basis(key));
        Matrix e(P.size(), Vec(P.size()));
        Scalar trace;
        for (size_t i = 0; i < P.size(); ++i)
            for (size_t j = 0; j < P.size(); ++j) e[i][j] = c.A->counit(P[i][j]);
        for (size_t i = 0; i < P.size(); ++i) trace += e[i][i];
        EXPECT_TRUE(mat_equal(mat_mul(e, e), e)) << key;
        EXPECT_TRUE(trace.is_one()) << key;
        EXPECT_EQ(rank(e), 1u) << key;
    }
}

// ---------------------------------------------------------------- exterior derivative on one-forms

TEST(Calculus, DOfExactFormsVanishes) {
    const Calculus &c = cp1();
    for (auto &b : c.base_gens) EXPECT_TRUE(c.d_one_form(c.d(b)).is_zero()) << b.str();
}

TEST(Calculus, DOneFormLeibniz) {
    const Calculus &c = cp1();
    const DualBasis &B = c.basis("1");
    for (auto &b : c.base_gens)
        for (auto &e : B.elems) {
            Cot lhs = c.d_one_form(b * e) - c.wedge_forms(c.d(b), e) - b * c.d_one_form(e);
            EXPECT_TRUE(lhs.is_zero()) << b.str() << " " << e.str();
        }
}

TEST(Calculus, DOneFormIndependentOfDecomposition) {
    const Calculus &c = cp1();
    for (auto &x : c.spanning_set(c.basis("1"), 4)) EXPECT_EQ(c.d_one_form(x, c.basis("1")), c.d_one_form(x, c.basis("1alt")));
}
