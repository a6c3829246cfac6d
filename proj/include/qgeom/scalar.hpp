// Exact rational functions in one formal variable q over the Gaussian
// rationals Q(i).  Every computation in the engine takes place over this field.
#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qgeom {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Raised by any parser; carries a 1-based line/column when known. */
struct ParseError : Error {
    int line = 0, column = 0;
    ParseError(const std::string &msg, int l = 0, int c = 0);
};

/** a + b i with a, b exact rationals. */
struct GaussRat {
    mpq_class re, im;

    GaussRat() = default;
    GaussRat(long v) : re(v), im(0) {}
    GaussRat(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }
    GaussRat conj() const { return {re, -im}; }
    GaussRat inv() const;
    std::string str() const;
};

bool operator==(const GaussRat &x, const GaussRat &y);
GaussRat operator+(const GaussRat &x, const GaussRat &y);
GaussRat operator-(const GaussRat &x, const GaussRat &y);
GaussRat operator-(const GaussRat &x);
GaussRat operator*(const GaussRat &x, const GaussRat &y);
GaussRat operator/(const GaussRat &x, const GaussRat &y);

/** Dense univariate polynomial; c[k] is the coefficient of q^k, no trailing zeros. */
struct Poly {
    std::vector<GaussRat> c;

    Poly() = default;
    explicit Poly(GaussRat v) {
        if (!v.is_zero()) c.push_back(std::move(v));
    }
    static Poly monomial(GaussRat v, int k);

    bool is_zero() const { return c.empty(); }
    int degree() const { return int(c.size()) - 1; }
    const GaussRat &lead() const { return c.back(); }
    void trim();
    GaussRat eval(const GaussRat &x) const;
    Poly conj() const;
};

bool operator==(const Poly &x, const Poly &y);
Poly operator+(const Poly &x, const Poly &y);
Poly operator-(const Poly &x, const Poly &y);
Poly operator*(const Poly &x, const Poly &y);
Poly operator*(const GaussRat &s, const Poly &x);
void divmod(const Poly &a, const Poly &b, Poly &quo, Poly &rem);
Poly poly_gcd(Poly a, Poly b); // monic, gcd(0,0) = 0

/**
 * q^val * num / den in canonical form:
 *   - zero is (val 0, num empty, den 1);
 *   - otherwise num(0) != 0, den(0) != 0, den monic, gcd(num, den) = 1.
 * The representation is unique, so equality is structural.  Laurent
 * polynomials (den = 1) avoid gcd computations entirely.
 */
class Scalar {
  public:
    Scalar() : den_(GaussRat(1)) {}
    Scalar(long v) : Scalar(GaussRat(v)) {}
    Scalar(const GaussRat &v);
    static Scalar q_pow(int k);
    static Scalar imag_unit();
    static Scalar from_parts(int val, Poly num, Poly den);

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_laurent() const { return den_.degree() == 0; }
    /** ±q^k with k an integer. */
    bool is_unit_monomial() const;
    bool is_real() const; // conj-fixed

    Scalar conj() const;
    Scalar inv() const;
    Scalar pow(int n) const;

    /** Standard numerator/denominator with nonnegative powers (den monic). */
    Poly numerator() const;
    Poly denominator() const;
    int valuation() const { return val_; }

    /** Exact substitution q = q0; throws Error at a pole. */
    GaussRat eval(const mpq_class &q0) const;

    std::string str() const;
    static Scalar parse(std::string_view text);

    friend bool operator==(const Scalar &, const Scalar &);
    friend Scalar operator+(const Scalar &, const Scalar &);
    friend Scalar operator*(const Scalar &, const Scalar &);
    friend Scalar operator-(const Scalar &);
    friend std::strong_ordering compare(const Scalar &, const Scalar &);

  private:
    int val_ = 0;
    Poly num_, den_;
    void canonicalize();
};

inline Scalar operator-(const Scalar &x, const Scalar &y) { return x + (-y); }
inline Scalar operator/(const Scalar &x, const Scalar &y) { return x * y.inv(); }
inline Scalar &operator+=(Scalar &x, const Scalar &y) { return x = x + y; }
inline Scalar &operator-=(Scalar &x, const Scalar &y) { return x = x - y; }
inline Scalar &operator*=(Scalar &x, const Scalar &y) { return x = x * y; }

/** Deterministic total order (used only for canonical sorting, not math). */
std::strong_ordering compare(const Scalar &, const Scalar &);

/** scalar_arith from the interface: op in {add, mul, neg, inv}. */
Scalar scalar_arith(std::string_view op, const Scalar &x, const Scalar &y = Scalar());

} // namespace qgeom
