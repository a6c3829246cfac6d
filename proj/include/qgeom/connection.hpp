// Connections in Christoffel form relative to a dual basis: the ∂̄-operators
// from factorizability, Chern connections, the dual-route operator ∇̂, the
// Levi-Civita connection with its braiding σ, and the verification suite.
#pragma once

#include "qgeom/geometry.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qgeom {

/**
 * ∇e^i = −Σ_j Γ^i_j ⊗ e^j on the module spanned by a dual basis.  The
 * differential applied to coefficients is "d" for full connections, "delbar"
 * or "del" for the partial (holomorphic-structure) operators.  sigma maps
 * W⊗V1 → V1⊗W (module factor first on the source side).
 */
struct Connection {
    std::string name;
    std::string basis;
    std::string diff = "d";
    FormMatrix gamma;
    std::optional<FiberMap> sigma;
};

/** Σ dbᵢ⊗e^i − Σ bᵢΓ^i_j⊗e^j over V1⊗W, with bᵢ = eᵢ(x). */
Cot apply_connection(const Calculus &c, const Connection &conn, const Cot &x);
/** Γ^i_j = −(id⊗e_j)∇(e^i) for a given list of ∇(e^i). */
FormMatrix christoffel_from_values(const Calculus &c, const DualBasis &b, const std::vector<Cot> &values);
/** (id⊗y)(t) for t over V1⊗W and a functional y over W. */
Cot contract_second(const Calculus &c, const Cot &t, const Cot &y);

/** θ_l∘∂̄ on Ω^(1,0) (the holomorphic structure) with σ = −θ_l∘∧. */
Connection dbar_connection_10(const Calculus &c, const std::string &basis = "10");
/** θ_r∘∂ on Ω^(0,1) (the holomorphic structure of the opposite complex structure) with σ = −θ_r∘∧. */
Connection dbar_connection_op(const Calculus &c, const std::string &basis = "01");
/** Braiding with the mixed blocks −θ∘∧ and the like-degree blocks left zero. */
FiberMap mixed_sigma(const Calculus &c, const Fiber &w);

/** −Γ₊ = ∂h·h̃ + hΓ₋†h̃ (and its mirror for Ω^(0,1)); σ solved from the bimodule law. */
Connection chern(const Calculus &c, const HermitianMetric &H, const Connection &dbar);
/** (1,0)-part via the right ∂̄-connection on the dual transported through H (mirror for Ω^(0,1)). */
Connection nabla_hat(const Calculus &c, const HermitianMetric &H, const Connection &dbar);
/** ∇ = ∇_Ch ⊕ ∇_Ch,op on Ω¹ over the union basis; throws for a non-real metric. */
Connection levi_civita(const Calculus &c, const Metric &m, const std::string &k10 = "10",
                       const std::string &k01 = "01");
/** Completes σ: mixed blocks from θ, like-degree blocks from the bimodule law (unique solution asserted). */
FiberMap solve_sigma(const Calculus &c, const Connection &conn, int degree_bound = 2);

/** Bidegree parts of a Christoffel matrix. */
FormMatrix part10(const Calculus &c, const FormMatrix &g);
FormMatrix part01(const Calculus &c, const FormMatrix &g);

// individual verification operations
Cot nabla_g(const Calculus &c, const Metric &m, const Connection &conn);
Cot cotorsion(const Calculus &c, const Metric &m, const Connection &conn);
std::vector<Cot> torsion(const Calculus &c, const Connection &conn, int degree_bound = 4);
Report covariance_check(const Calculus &c, const Connection &conn, const std::string &prefix, int degree_bound = 4);
Report d_covariance_check(const Calculus &c, int degree_bound = 4);
Report leibniz_check(const Calculus &c, const Connection &conn, const std::string &prefix, int degree_bound = 4);
Report bimodule_check(const Calculus &c, const Connection &conn, const std::string &prefix, int degree_bound = 4);
/** d h^{ij} = (id⊗⟨,⟩)(∇e^i ⊗ ē^j) + (⟨,⟩⊗id)(e^i ⊗ ∇̄ē^j) on basis pairs. */
Report compatibility_check(const Calculus &c, const HermitianMetric &H, const Connection &conn, const std::string &prefix);
/** ΓP = Γ, Γ = PΓ − (dP)P; and for s = Γ₊ (or Γ₋): sP = s, s = Ps − (δP)P. */
Report christoffel_identities(const Calculus &c, const Connection &conn, const std::string &prefix);

struct ZCharacter {
    int a = 0, b = 0;        // (1,0) and (0,1) factor counts
    Scalar engine, formula;  // χ from the coaction and q^{(b−a)·exponent}
};
std::vector<ZCharacter> z_characters(const Calculus &c, int tensor_power = 3);
/** Hom-space dimensions and central-character separation. */
Report uniqueness_certificate(const Calculus &c);

struct VerifyOptions {
    int degree_bound = 4;
    std::string suite = "all"; // all | metrics | connection
    std::vector<std::pair<Scalar, Scalar>> lc_metrics; // empty: qsym metric and generic real ones
};

Report verify_metrics(const Calculus &c, const BaseMetrics &b, int degree_bound = 4);
/** Full Levi-Civita suite for one metric; check names are prefixed. */
Report verify_levi_civita(const Calculus &c, const BaseMetrics &b, const Metric &m, const std::string &prefix,
                          int degree_bound = 4);
Report verify(const Calculus &c, const VerifyOptions &opt);

/** JSON report sorted by check name; timing omitted from the canonical payload. */
nlohmann::json report_json(const Report &r, bool with_timing);

} // namespace qgeom
