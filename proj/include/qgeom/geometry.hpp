// Metrics on Ω¹ (a tensor g together with an inverting pairing), the
// two-parameter family built from the bidegree pieces, reality, quantum
// symmetry, and the Hermitian structures associated with real metrics.
#pragma once

#include "qgeom/calculus.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace qgeom {

/** g ∈ Ψ(V1⊗V1) with the pairing V1⊗V1 → 1 that inverts it. */
struct Metric {
    Cot g;
    FiberMap pairing;
    Scalar lambda1 = Scalar(1), lambda2 = Scalar(1);
};

/** The (1,0) and (0,1) base metrics and the data they came from. */
struct BaseMetrics {
    Metric g10, g01; // g10 ∈ Ψ(V01⊗V10) pairs Ω^(1,0) with Ω^(0,1); g01 the mirror
    InnerProduct ip10, ip01;
    DualPair dual10, dual01; // fiber (ev, coev) pairs of the inner products
};

/** Pairing (ω,η) = Σ ⟨[ω],[η*]⟩ per block, coevaluation from its inverse. */
BaseMetrics base_metrics(const Calculus &c, const InnerProduct &ip10, const InnerProduct &ip01);
/** base_metrics with inner products found by solve_invariant_inner_product. */
BaseMetrics base_metrics(const Calculus &c);

/** g = λ1 g10 + λ2 g01 with pairing λ1⁻¹ pairing10 + λ2⁻¹ pairing01; zero λ throws. */
Metric metric_family(const BaseMetrics &b, const Scalar &lambda1, const Scalar &lambda2);

/** (ω, η) ∈ B for one-forms. */
Elem pair_forms(const Calculus &c, const FiberMap &pairing, const Cot &x, const Cot &y);
/** ((ω,·)⊗id)g and (id⊗(·,ω))g. */
Cot left_contract(const Calculus &c, const Metric &m, const Cot &w);
Cot right_contract(const Calculus &c, const Metric &m, const Cot &w);

/** Duality on a spanning set, centrality of g, and support in mixed bidegrees. */
Report metric_axioms(const Calculus &c, const Metric &m, int degree_bound = 4);
/** Structured perturbations off the family, each expected to break the metric axioms. */
std::vector<std::pair<std::string, Metric>> metric_perturbations(const Calculus &c, const BaseMetrics &b);

struct Reality {
    bool dagger_form = false;  // g† = g
    bool pairing_form = false; // (ω,η) = (η*,ω*)* on a spanning set
    bool real() const { return dagger_form && pairing_form; }
    bool agree() const { return dagger_form == pairing_form; }
    std::string witness;
};
Reality is_real(const Calculus &c, const Metric &m);

/** The λ with ∧g10 = λ ∧g01; throws when ∧g01 = 0 or the two are not proportional. */
Scalar qsym_lambda(const Calculus &c, const BaseMetrics &b);
bool wedge_vanishes(const Calculus &c, const Metric &m);
/** ∧g(λ1,λ2) = 0 iff λ2/λ1 = −λ, on every sample. */
Report qsym_uniqueness_scan(const Calculus &c, const BaseMetrics &b,
                            const std::vector<std::pair<Scalar, Scalar>> &samples);
/** Default (λ1, λ2) sample grid: nonzero pairs including the quantum-symmetric ray. */
std::vector<std::pair<Scalar, Scalar>> default_lambda_samples(const Calculus &c, const BaseMetrics &b);

/**
 * Hermitian metric on the module spanned by a dual basis:
 * h^{ij} = ⟨e^i, ē^j⟩ = (e^i, (e^j)*), and h̃ from the fiber-level inverse
 * M⁻¹ of M_kl = ⟨v_k, v̄_l⟩.
 */
struct HermitianMetric {
    std::string on;    // "10", "01" or "1"
    std::string basis; // dual-basis key
    Matrix M;
    EMatrix h, htilde;
};

struct HermitianData {
    HermitianMetric H, H1, H2;
};

/** ⟨ω, η̄⟩ := (ω, η*); throws for a non-real metric. */
HermitianData hermitian_from_real(const Calculus &c, const Metric &m);
/** The Hermitian metric of a real metric on one dual basis (key of Calculus::bases). */
HermitianMetric hermitian_on(const Calculus &c, const Metric &m, const std::string &basis_key);
/** Σ_l (Σ_k conj((M⁻¹)_lk) y_ik*) v_l, the element with H(ḡ_i) = e_i. */
std::vector<Cot> hermitian_inverse_elements(const Calculus &c, const HermitianMetric &H);

/** Matrix of one-forms, entries over V1. */
using FormMatrix = std::vector<std::vector<Cot>>;
FormMatrix differential_matrix(const Calculus &c, const EMatrix &m, std::string_view which);
FormMatrix form_mul(const Calculus &c, const EMatrix &a, const FormMatrix &f); // a·f
FormMatrix form_mul(const Calculus &c, const FormMatrix &f, const EMatrix &a); // f·a
FormMatrix form_add(const FormMatrix &a, const FormMatrix &b);
FormMatrix form_neg(const FormMatrix &a);
FormMatrix form_dagger(const Calculus &c, const FormMatrix &a); // (A†)_ij = (A_ji)*
bool form_matrix_zero(const FormMatrix &a);
bool form_matrix_equal(const FormMatrix &a, const FormMatrix &b);
std::string form_matrix_str(const FormMatrix &a);

/**
 * h h̃ = P, h̃ h = P†, h† = h, h̃† = h̃, h̃P = h̃, Ph = h, h̃·δ(P)·h = 0 with δ the
 * holomorphic-structure differential of the bundle ("delbar" for Ω^(1,0),
 * "del" for Ω^(0,1) viewed in the opposite structure).
 */
Report hermitian_identities(const Calculus &c, const HermitianMetric &H, const std::string &prefix);
/** ⟨f,ē⟩* = ⟨e,f̄⟩ on spanning pairs, and the round trip H ↦ g. */
Report hermitian_correspondence(const Calculus &c, const Metric &m, const HermitianData &hd);

nlohmann::json metric_descriptor(const Calculus &c, const BaseMetrics &b, const Metric &m);

} // namespace qgeom
