// Covariant first-order calculi with complex structure, loaded from preset
// files: d, ∂, ∂̄ on the base algebra, ∗ on forms, the wedge product and its
// factorizability inverses θ, dual bases with their Maurer–Cartan constants,
// and the projector matrices.
#pragma once

#include "qgeom/hopf.hpp"
#include "qgeom/takeuchi.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace qgeom {

// ---------------------------------------------------------------- preset files

struct PresetEntry {
    std::string key, value;
    int line = 0;
    bool operator==(const PresetEntry &o) const { return key == o.key && value == o.value; }
};

struct PresetSection {
    std::string name;
    std::vector<PresetEntry> entries;
    int line = 0;

    const PresetEntry *find(const std::string &key) const;
    /** Value of a required key; ParseError when absent. */
    const std::string &get(const std::string &key) const;
    bool operator==(const PresetSection &o) const { return name == o.name && entries == o.entries; }
};

/**
 * Line-oriented preset file: "key = value" lines grouped under "[section]"
 * headers, '#' comments.  Rendering is canonical, so
 * parse(render(parse(text))) == parse(text).
 */
struct PresetData {
    std::vector<PresetEntry> header;
    std::vector<PresetSection> sections;

    static PresetData parse(std::string_view text);
    std::string render() const;
    const PresetSection *section(const std::string &name) const;
    PresetSection *section(const std::string &name);
    /** Replace the value of an existing entry (used by mutation harnesses). */
    void set(const std::string &section, const std::string &key, const std::string &value);
    bool operator==(const PresetData &o) const { return header == o.header && sections == o.sections; }
};

/** Directories searched for bare preset names (colon-separated). */
inline constexpr const char *kPresetPathEnv = "QGEOM_PRESET_PATH";
/** Resolves a preset name or path to a readable file; throws Error if none. */
std::string resolve_preset(const std::string &name_or_path);
PresetData load_preset_file(const std::string &path);

// ---------------------------------------------------------------- reports

struct Check {
    std::string name;
    std::string status = "pass"; // pass | fail | skip
    std::string witness;         // set on failure
    int degree_bound = 0;
    double millis = 0;
    bool passed() const { return status != "fail"; }
};

struct Report {
    std::vector<Check> checks;
    bool pass() const;
    const Check *find(const std::string &name) const;
    void add(Check c) { checks.push_back(std::move(c)); }
    /** Adds a check from a predicate; the witness is used only on failure. */
    void add(const std::string &name, bool ok, const std::string &witness = "", int degree_bound = 0);
    void merge(const Report &other);
    void sort_by_name();
};

// ---------------------------------------------------------------- the calculus

/** Matrix with entries in the base algebra B. */
using EMatrix = std::vector<std::vector<Elem>>;

/**
 * Dual basis {e^i, e_i} of a module Ψ(W): e^i are cotensor elements and the
 * functional e_i acts by e_i(Σ a_k w_k) = Σ a_k y_ik, where y_i is stored as
 * a cotensor-shaped list of right multipliers.  mc[i] = d(e^i) in Ω².
 */
struct DualBasis {
    std::string name;
    Fiber fib;
    std::vector<Cot> elems, funcs, mc;
    size_t size() const { return elems.size(); }
};

class Calculus {
  public:
    explicit Calculus(const PresetData &preset);
    Calculus(const Calculus &) = delete;
    Calculus &operator=(const Calculus &) = delete;

    PresetData preset;
    std::string name;
    std::unique_ptr<Algebra> H, A, U;
    UqAction act;
    std::vector<Elem> base_gens;
    Fiber triv, V10, V01, V1, V2;
    FiberMap inc10, inc01, pr10, pr01;
    /** Star on one- and two-form fibers: (Σ a_k v_k)* = Σ_k a_k* Σ_l J[l][k] v_l. */
    Matrix J1, J2;
    FiberMap wedge;          // V1⊗V1 → V2
    FiberMap theta_l, theta_r; // V2 → V01⊗V10 and V2 → V10⊗V01
    bool factorizable = false;
    std::vector<Elem> del_ops, delbar_ops; // U-elements per basis vector of V10 / V01
    std::map<char, Scalar> center_char;    // Z-character on generators of H
    int center_exponent = 0;               // (ϖ,α)·det of the Cartan matrix
    std::map<std::string, DualBasis> bases;

    const DualBasis &basis(const std::string &key) const;

    bool is_coinvariant(const Elem &x) const;
    Elem parse_elem(std::string_view text) const { return A->parse(text); }
    /** Parses "coefficient@label@label..." combinations over the given fiber. */
    Cot parse_cot(std::string_view text, const Fiber &fib) const;

    // differentials on B; throw on non-coinvariant input
    Cot del(const Elem &b) const;    // Ψ(V10)
    Cot delbar(const Elem &b) const; // Ψ(V01)
    Cot d(const Elem &b) const;      // Ψ(V1)
    Cot differential(std::string_view which, const Elem &b) const; // "d" | "del" | "delbar", embedded in V1

    /** V10 / V01 element to V1; V1 and others pass through unchanged. */
    Cot embed(const Cot &x) const;
    /** Bidegree projections of a one-form over V1. */
    Cot part10(const Cot &x) const { return apply_map(pr10, x); }
    Cot part01(const Cot &x) const { return apply_map(pr01, x); }

    Cot star_form(const Cot &x) const;
    /** † = flip∘(∗⊗∗) on Ψ(V1⊗V1). */
    Cot dagger(const Cot &x) const;
    Cot wedge_forms(const Cot &x, const Cot &y) const;
    Cot wedge_tensor(const Cot &t) const;
    Cot theta(char side, const Cot &x) const; // x ∈ Ω^{(1,1)} = Ψ(V2)

    /** e_i(x) for every i. */
    std::vector<Elem> left_decompose(const Cot &x, const DualBasis &b) const;
    Cot reconstruct(const std::vector<Elem> &coeffs, const DualBasis &b) const;
    Elem apply_functional(const Cot &y, const Cot &x) const;
    /** d(Σ b_i e^i) = Σ db_i ∧ e^i + Σ b_i d(e^i). */
    Cot d_one_form(const Cot &x, const DualBasis &b) const;
    Cot d_one_form(const Cot &x) const { return d_one_form(embed(x), basis("1")); }
    EMatrix projector(const DualBasis &b) const;

    /** Spanning set of Ψ(basis fiber): basis elements and B-monomial multiples up to the bound. */
    std::vector<Cot> spanning_set(const DualBasis &b, int degree_bound) const;
    /** B-monomials (products of generators) of generator-length ≤ n, including 1. */
    std::vector<Elem> base_monomials(int n) const;

  private:
    void build();
    // H-weight of each A generator when the coaction is a grading (a ↦ a⊗h_a); empty otherwise
    std::vector<Word> grade_;
    bool graded_ = false;
};

Report validate_preset(const Calculus &c, int degree_bound = 4, int confluence_bound = 6);
/** Fiber dimensions of Ω⁰, Ω¹, Ω² together with the rank of Φ on spanning sets. */
std::vector<size_t> form_dimensions(const Calculus &c);

// EMatrix helpers
EMatrix emat_mul(const EMatrix &a, const EMatrix &b);
EMatrix emat_dagger(const Algebra &A, const EMatrix &a);
bool emat_equal(const EMatrix &a, const EMatrix &b);
std::string emat_str(const EMatrix &a);

} // namespace qgeom
