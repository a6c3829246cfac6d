// Presented Hopf *-algebras: rewriting normal forms, structure maps, the
// quantum-enveloping-operator action, and the homogeneous right coaction.
#pragma once

#include "qgeom/scalar.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qgeom {

/** A word is a string of generator indices (one char per letter). */
using Word = std::string;

/** Degree-lexicographic order on words (generator order = declaration order). */
struct DegLex {
    bool operator()(const Word &a, const Word &b) const {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    }
};

class Algebra;

/** Normal-form linear combination of words of one algebra. */
class Elem {
  public:
    using Terms = std::map<Word, Scalar, DegLex>;

    const Algebra *alg = nullptr;
    Terms terms;

    Elem() = default;
    explicit Elem(const Algebra *a) : alg(a) {}
    Elem(const Algebra *a, Scalar s);

    bool is_zero() const { return terms.empty(); }
    bool is_scalar() const;
    Scalar coeff(const Word &w) const;
    /** Highest word degree present (-1 for zero). */
    int degree() const;
    std::string str() const;
};

bool operator==(const Elem &x, const Elem &y);
inline bool operator!=(const Elem &x, const Elem &y) { return !(x == y); }
Elem operator+(const Elem &x, const Elem &y);
Elem operator-(const Elem &x, const Elem &y);
Elem operator-(const Elem &x);
Elem operator*(const Elem &x, const Elem &y);
Elem operator*(const Scalar &s, const Elem &x);
inline Elem operator*(const Elem &x, const Scalar &s) { return s * x; }
inline Elem &operator+=(Elem &x, const Elem &y) { return x = x + y; }
inline Elem &operator-=(Elem &x, const Elem &y) { return x = x - y; }

/** Element of an n-fold tensor product of (possibly different) algebras. */
struct Tensor {
    std::vector<const Algebra *> algs;
    std::map<std::vector<Word>, Scalar> terms;

    bool is_zero() const { return terms.empty(); }
    std::string str() const;
};

bool operator==(const Tensor &x, const Tensor &y);
Tensor operator+(const Tensor &x, const Tensor &y);
Tensor operator-(const Tensor &x, const Tensor &y);
Tensor operator*(const Scalar &s, const Tensor &x);
/** Factorwise product (x1⊗y1)(x2⊗y2) = x1x2⊗y1y2, normal-formed. */
Tensor operator*(const Tensor &x, const Tensor &y);
Tensor tensor(const Elem &x, const Elem &y);
Tensor tensor(const Tensor &x, const Elem &y);
/** Multiplies the factors of each term together (all factors in one algebra). */
Elem multiply_out(const Tensor &t);

struct Rule {
    Word lhs;
    Elem rhs; // raw (not necessarily normal) right-hand side
};

struct CriticalPair {
    Word word;
    Elem left, right; // the two normal forms
    bool joins = true;
};

struct ConfluenceReport {
    int degree_bound = 0;
    std::vector<CriticalPair> pairs;
    long words_swept = 0;
    bool pass = true;
    std::string witness; // first failing word, rendered
};

/**
 * A presented Hopf *-algebra.  Generators are single letters other than q
 * and i; their declaration order fixes the deglex word order.
 */
class Algebra {
  public:
    std::string name;
    std::vector<char> gens;
    std::vector<Rule> rules;
    std::vector<Elem> star_img;
    std::vector<Tensor> coproduct_img;
    std::vector<Scalar> counit_img;
    std::vector<Elem> antipode_img;
    const Algebra *proj_target = nullptr;
    std::vector<Elem> proj_img;
    long step_budget = 1'000'000;

    explicit Algebra(std::string n) : name(std::move(n)) {}
    Algebra(const Algebra &) = delete;
    Algebra &operator=(const Algebra &) = delete;

    int gen_index(char letter) const; // -1 if absent
    bool has_gen(char letter) const { return gen_index(letter) >= 0; }
    Elem one() const { return Elem(this, Scalar(1)); }
    Elem gen(char letter) const;
    Elem word(const Word &w, const Scalar &c = Scalar(1)) const; // raw → normal form
    std::string word_str(const Word &w) const;
    Word word_from_letters(std::string_view letters) const;

    /** Declares a rule; throws if the rule does not decrease the word order. */
    void add_rule(const Word &lhs, const Elem &raw_rhs);
    /** Normal form of a raw word / raw combination (step-budgeted). */
    Elem normal_form_word(const Word &w) const;
    Elem normal_form(const Elem &raw) const;
    bool is_irreducible(const Word &w) const;
    /** All irreducible words of exactly the given degree, deglex order. */
    std::vector<Word> irreducible_words(int degree) const;

    // Hopf structure, extended (anti)multiplicatively from generator tables.
    Tensor coproduct(const Elem &x) const;
    Tensor coproduct_word(const Word &w) const;
    Scalar counit(const Elem &x) const;
    Elem antipode(const Elem &x) const;
    Elem star(const Elem &x) const;
    Elem project(const Elem &x) const; // π
    /** δ = (id⊗π)Δ : A → A⊗H. */
    Tensor coact_right(const Elem &x) const;

    /** Raw word combination parsed in the element grammar (no rewriting). */
    Elem parse_raw(std::string_view text) const;
    Elem parse(std::string_view text) const { return normal_form(parse_raw(text)); }
    Tensor parse_tensor(std::string_view text, int factors) const;

    ConfluenceReport confluence_report(int degree_bound) const;

  private:
    mutable std::mutex mu_;
    mutable std::unordered_map<Word, Elem> nf_cache_;
    mutable std::unordered_map<Word, Tensor> cop_cache_;
    Elem nf_rec(const Word &w, long &steps) const;
    bool lookup_nf(const Word &w, Elem &out) const;
};

/** Apply a functional/map to one tensor factor. */
Tensor map_factor(const Tensor &t, size_t k, const Algebra *target, const std::function<Elem(const Elem &)> &f);
/** The flip of a two-factor tensor. */
Tensor flip(const Tensor &t);

/** hopf_apply from the interface. */
struct HopfValue {
    bool is_tensor = false;
    Elem elem;
    Tensor tens;
};
HopfValue hopf_apply(std::string_view which, const Algebra &alg, const Elem &x);

/**
 * Action of a quantum enveloping algebra U on a module algebra A, from
 * explicit generator tables; extended to products by the module-algebra law
 * X▷(fg) = (X₍₁₎▷f)(X₍₂₎▷g) and to U-words by composition.
 */
class UqAction {
  public:
    const Algebra *U = nullptr;
    const Algebra *A = nullptr;
    std::map<std::pair<int, int>, Elem> table; // (U generator, A generator) ↦ image

    UqAction() = default;
    UqAction(const UqAction &o) : U(o.U), A(o.A), table(o.table) {}
    UqAction &operator=(const UqAction &o) {
        U = o.U;
        A = o.A;
        table = o.table;
        std::lock_guard lk(mu_);
        cache_.clear();
        return *this;
    }

    /** X▷x for a U-word X (letters), acting right-to-left by composition. */
    Elem act(const Word &uword, const Elem &x) const;
    Elem act(const Elem &uelem, const Elem &x) const;
    Elem act_gen(int ugen, const Word &aword) const;

  private:
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, Word>, Elem> cache_;
};

Elem uq_act(const UqAction &act, const Elem &X, const Elem &x);

} // namespace qgeom
