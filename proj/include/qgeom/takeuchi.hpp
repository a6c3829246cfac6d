// Takeuchi's equivalence in computational form: relative Hopf modules are
// represented in the cotensor model A □_H V, so every module is a family of
// A-coefficients indexed by a basis of a finite-dimensional H-comodule V
// ("fiber"), ⊗_B is coefficient multiplication, and module maps are scalar
// matrices between fibers.
#pragma once

#include "qgeom/hopf.hpp"
#include "qgeom/linalg.hpp"

#include <memory>
#include <string>
#include <vector>

namespace qgeom {

struct FiberData;
using Fiber = std::shared_ptr<const FiberData>;

/** Bidegree tag of a basis vector of a form fiber; (-1,-1) when not a form. */
struct Bideg {
    int p = -1, q = -1;
    bool operator==(const Bideg &) const = default;
};

/**
 * Finite-dimensional left H-comodule with basis labels.  coaction[l][k] is the
 * H-element h_lk with δ(v_k) = Σ_l h_lk ⊗ v_l.  Tensor products keep the
 * (flattened) list of primitive factors so maps can act on factor ranges.
 */
struct FiberData {
    std::string name;
    const Algebra *H = nullptr;
    std::vector<std::string> labels;
    std::vector<std::vector<Elem>> coaction;
    std::vector<Bideg> bideg;
    std::vector<Fiber> factors; // empty for primitive fibers
    Fiber conj_of;              // set on conjugates, so V̄̄ is literally V

    size_t dim() const { return labels.size(); }
    size_t index(const std::string &label) const; // throws if absent
    std::vector<Fiber> factor_list(const Fiber &self) const { return factors.empty() ? std::vector<Fiber>{self} : factors; }
};

Fiber make_fiber(const std::string &name, const Algebra *H, std::vector<std::string> labels,
                 std::vector<std::vector<Elem>> coaction, std::vector<Bideg> bideg = {});
Fiber trivial_fiber(const Algebra *H);
Fiber zero_fiber(const std::string &name, const Algebra *H, Bideg b);
Fiber tensor_fiber(const Fiber &a, const Fiber &b);
Fiber tensor_fiber(const std::vector<Fiber> &fs);
Fiber direct_sum(const std::string &name, const Fiber &a, const Fiber &b);
/** Conjugate comodule: δ(v̄) = v₍₋₁₎* ⊗ v̄₍₀₎. */
Fiber conjugate(const Fiber &v);
/** Dual comodule (coefficients of left-linear functionals). */
Fiber dual(const Fiber &v);
bool same_fiber(const Fiber &a, const Fiber &b);
bool is_trivial(const Fiber &f);

/** Counitality and coassociativity of the stored coaction. */
bool coaction_is_valid(const Fiber &v, std::string *witness = nullptr);

/** Scalar matrix between fibers, m[target][source]. */
struct FiberMap {
    Fiber src, tgt;
    Matrix m;
};

FiberMap identity_map(const Fiber &f);
FiberMap compose(const FiberMap &g, const FiberMap &f); // g ∘ f
FiberMap tensor_maps(const FiberMap &f, const FiberMap &g);
FiberMap scale_map(const Scalar &s, const FiberMap &f);
FiberMap add_maps(const FiberMap &f, const FiberMap &g);
/** H-colinearity: coaction∘map = (id⊗map)∘coaction. */
bool is_colinear(const FiberMap &f);

/** Element of A □_H V. */
struct Cot {
    Fiber fib;
    const Algebra *A = nullptr;
    std::vector<Elem> c;

    Cot() = default;
    Cot(Fiber f, const Algebra *a);
    static Cot basis(Fiber f, const Algebra *a, const std::string &label, const Elem &coeff);

    bool is_zero() const;
    size_t dim() const { return c.size(); }
    /** Highest coefficient degree. */
    int degree() const;
    std::string str() const;
};

bool operator==(const Cot &x, const Cot &y);
inline bool operator!=(const Cot &x, const Cot &y) { return !(x == y); }
Cot operator+(const Cot &x, const Cot &y);
Cot operator-(const Cot &x, const Cot &y);
Cot operator-(const Cot &x);
Cot operator*(const Scalar &s, const Cot &x);
Cot operator*(const Elem &b, const Cot &x); // left action
Cot operator*(const Cot &x, const Elem &b); // right action
inline Cot &operator+=(Cot &x, const Cot &y) { return x = x + y; }

/** Cotensor constraint: δ^A(x_l) = Σ_k x_k ⊗ h_lk for every label l. */
bool satisfies_constraint(const Cot &x, std::string *witness = nullptr);
/** [m] = Σ ε(x_k) v_k; throws when the constraint fails. */
Vec fiber_project(const Cot &x);
/** The unit m ↦ m₍₋₁₎ ⊗ [m₍₀₎], computed through Δ and ε. */
Cot unit_U(const Cot &x);
/** Σ a_k S((m_k)₍₋₁₎)(m_k)₍₀₎ for x = Σ a_k ⊗ v_k, using lifts m_k of the basis vectors. */
Cot unit_U_inverse(const Cot &x, const std::vector<Cot> &lifts);
/** m·b := m₍₋₂₎ b S(m₍₋₁₎) m₍₀₎. */
Cot induced_right_action(const Cot &x, const Elem &b);
/** Left A-coaction grouped by first-leg normal word: Σ_w w ⊗ x_w. */
std::map<Word, Cot, DegLex> coact_left(const Cot &x);
/** (a ⊗ v) ⊗_B (a' ⊗ w) ↦ aa' ⊗ v ⊗ w. */
Cot tensor_over_B(const Cot &x, const Cot &y);
/** Apply f to the tensor factors [first, first + #factors(f.src)). */
Cot apply_map(const FiberMap &f, const Cot &x, size_t first = 0);
/** m̄ over V̄ with coefficients x_k*. */
Cot conjugate_elem(const Cot &x);
/** Inverse of conjugate_elem (the bb-identification is literal). */
Cot unconjugate_elem(const Cot &x, const Fiber &original);
/** Coefficient of a one-dimensional-fiber element in the trivial fiber (an element of B). */
Elem as_scalar_elem(const Cot &x);

struct InnerProduct {
    Fiber on;
    Matrix gram; // gram[i][j] = ⟨v_i, v_j⟩, conjugate-linear in the second slot
};

/** Residual-free invariance check v₍₋₁₎w*₍₋₁₎⟨v₍₀₎,w₍₀₎⟩ = ⟨v,w⟩1. */
bool is_invariant(const InnerProduct &ip);
bool is_positive_at(const Matrix &gram, const mpq_class &q0);
InnerProduct solve_invariant_inner_product(const Fiber &v, const mpq_class &q0 = mpq_class(1, 2));

/** Basis of colinear maps V → W. */
std::vector<FiberMap> hom_space(const Fiber &v, const Fiber &w);

/** ev : V ⊗ V̄ → 1 and coev : 1 → V̄ ⊗ V built from an inner product. */
struct DualPair {
    FiberMap ev, coev;
};
DualPair dual_pairing_from_inner(const Fiber &v, const InnerProduct &ip);
/** ev_τ = ev∘(τ⁻¹⊗id), coev_τ = (id⊗τ)∘coev for an automorphism τ of V. */
DualPair twist(const DualPair &p, const FiberMap &tau);
/** Both snake identities, exactly. */
bool snake_identities_hold(const DualPair &p, const Fiber &v);

} // namespace qgeom
