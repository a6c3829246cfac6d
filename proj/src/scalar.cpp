#include "qgeom/scalar.hpp"

#include "qgeom/expr_parser.hpp"

#include <algorithm>
#include <sstream>

namespace qgeom {

ParseError::ParseError(const std::string &msg, int l, int c)
    : Error(l > 0 ? ("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg)
                  : (c > 0 ? ("column " + std::to_string(c) + ": " + msg) : msg)),
      line(l), column(c) {}

// ---------------------------------------------------------------- GaussRat

bool operator==(const GaussRat &x, const GaussRat &y) { return x.re == y.re && x.im == y.im; }
GaussRat operator+(const GaussRat &x, const GaussRat &y) { return {x.re + y.re, x.im + y.im}; }
GaussRat operator-(const GaussRat &x, const GaussRat &y) { return {x.re - y.re, x.im - y.im}; }
GaussRat operator-(const GaussRat &x) { return {-x.re, -x.im}; }

GaussRat operator*(const GaussRat &x, const GaussRat &y) {
    if (sgn(x.im) == 0 && sgn(y.im) == 0) return {x.re * y.re, 0};
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}

GaussRat GaussRat::inv() const {
    if (is_zero()) throw Error("division by zero");
    if (sgn(im) == 0) return {1 / re, 0};
    mpq_class n = re * re + im * im;
    return {re / n, -im / n};
}

GaussRat operator/(const GaussRat &x, const GaussRat &y) { return x * y.inv(); }

std::string GaussRat::str() const {
    if (sgn(im) == 0) return re.get_str();
    std::string s = "(";
    if (sgn(re) != 0) s += re.get_str() + (sgn(im) > 0 ? "+" : "");
    if (im == 1)
        s += "i";
    else if (im == -1)
        s += "-i";
    else
        s += im.get_str() + "*i";
    return s + ")";
}

// ---------------------------------------------------------------- Poly

Poly Poly::monomial(GaussRat v, int k) {
    Poly p;
    if (v.is_zero()) return p;
    p.c.assign(size_t(k) + 1, GaussRat());
    p.c[size_t(k)] = std::move(v);
    return p;
}

void Poly::trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

GaussRat Poly::eval(const GaussRat &x) const {
    GaussRat acc;
    for (size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

Poly Poly::conj() const {
    Poly r;
    r.c.reserve(c.size());
    for (auto &v : c) r.c.push_back(v.conj());
    return r;
}

bool operator==(const Poly &x, const Poly &y) { return x.c == y.c; }

Poly operator+(const Poly &x, const Poly &y) {
    Poly r;
    r.c.resize(std::max(x.c.size(), y.c.size()));
    for (size_t k = 0; k < r.c.size(); ++k) {
        if (k < x.c.size() && k < y.c.size())
            r.c[k] = x.c[k] + y.c[k];
        else if (k < x.c.size())
            r.c[k] = x.c[k];
        else
            r.c[k] = y.c[k];
    }
    r.trim();
    return r;
}

Poly operator-(const Poly &x, const Poly &y) { return x + GaussRat(-1) * y; }

Poly operator*(const Poly &x, const Poly &y) {
    Poly r;
    if (x.is_zero() || y.is_zero()) return r;
    r.c.assign(x.c.size() + y.c.size() - 1, GaussRat());
    for (size_t i = 0; i < x.c.size(); ++i) {
        if (x.c[i].is_zero()) continue;
        for (size_t j = 0; j < y.c.size(); ++j) r.c[i + j] = r.c[i + j] + x.c[i] * y.c[j];
    }
    r.trim();
    return r;
}

Poly operator*(const GaussRat &s, const Poly &x) {
    Poly r;
    if (s.is_zero()) return r;
    r.c.reserve(x.c.size());
    for (auto &v : x.c) r.c.push_back(s * v);
    return r;
}

void divmod(const Poly &a, const Poly &b, Poly &quo, Poly &rem) {
    if (b.is_zero()) throw Error("polynomial division by zero");
    rem = a;
    quo = Poly();
    if (a.degree() < b.degree()) return;
    quo.c.assign(size_t(a.degree() - b.degree()) + 1, GaussRat());
    GaussRat lead_inv = b.lead().inv();
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        int shift = rem.degree() - b.degree();
        GaussRat f = rem.lead() * lead_inv;
        quo.c[size_t(shift)] = f;
        for (size_t k = 0; k < b.c.size(); ++k) rem.c[k + size_t(shift)] = rem.c[k + size_t(shift)] - f * b.c[k];
        rem.c.back() = GaussRat(); // exact cancellation of the leading term
        rem.trim();
    }
    quo.trim();
}

static Poly make_monic(const Poly &p) {
    if (p.is_zero() || p.lead().is_one()) return p;
    return p.lead().inv() * p;
}

Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly qq, r;
        divmod(a, b, qq, r);
        a = std::move(b);
        b = make_monic(r);
    }
    return make_monic(a);
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(const GaussRat &v) : num_(v), den_(GaussRat(1)) {}

Scalar Scalar::q_pow(int k) {
    Scalar s(1);
    s.val_ = k;
    return s;
}

Scalar Scalar::imag_unit() { return Scalar(GaussRat(0, 1)); }

Scalar Scalar::from_parts(int val, Poly num, Poly den) {
    if (den.is_zero()) throw Error("division by zero");
    Scalar s;
    s.val_ = val;
    s.num_ = std::move(num);
    s.den_ = std::move(den);
    s.canonicalize();
    return s;
}

static int strip_low(Poly &p) {
    size_t k = 0;
    while (k < p.c.size() && p.c[k].is_zero()) ++k;
    if (k > 0) p.c.erase(p.c.begin(), p.c.begin() + long(k));
    return int(k);
}

void Scalar::canonicalize() {
    if (num_.is_zero()) {
        val_ = 0;
        den_ = Poly(GaussRat(1));
        return;
    }
    val_ += strip_low(num_);
    val_ -= strip_low(den_);
    if (den_.degree() > 0) {
        Poly g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
            Poly r;
            divmod(Poly(num_), g, num_, r);
            divmod(Poly(den_), g, den_, r);
        }
    }
    if (!den_.lead().is_one()) {
        GaussRat li = den_.lead().inv();
        num_ = li * num_;
        den_ = li * den_;
    }
}

bool Scalar::is_one() const { return val_ == 0 && den_.degree() == 0 && num_.degree() == 0 && num_.c[0].is_one(); }

bool Scalar::is_unit_monomial() const {
    return den_.degree() == 0 && num_.degree() == 0 && num_.c[0].is_real() && abs(num_.c[0].re) == 1;
}

bool Scalar::is_real() const { return conj() == *this; }

Scalar Scalar::conj() const {
    Scalar s;
    s.val_ = val_;
    s.num_ = num_.conj();
    s.den_ = den_.conj(); // still monic with nonzero constant term; gcd unaffected
    return s;
}

Scalar Scalar::inv() const {
    if (is_zero()) throw Error("division by zero");
    Scalar s;
    s.val_ = -val_;
    GaussRat li = num_.lead().inv();
    s.num_ = li * den_;
    s.den_ = li * num_;
    return s;
}

Scalar Scalar::pow(int n) const {
    if (n < 0) return inv().pow(-n);
    Scalar r(1), b = *this;
    while (n) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

Poly Scalar::numerator() const { return val_ >= 0 ? Poly::monomial(GaussRat(1), val_) * num_ : num_; }
Poly Scalar::denominator() const { return val_ < 0 ? Poly::monomial(GaussRat(1), -val_) * den_ : den_; }

GaussRat Scalar::eval(const mpq_class &q0) const {
    GaussRat x(q0);
    GaussRat d = den_.eval(x);
    if (d.is_zero() || (val_ < 0 && sgn(q0) == 0)) throw Error("pole of " + str() + " at q = " + q0.get_str());
    GaussRat p(1);
    GaussRat base = val_ >= 0 ? x : x.inv();
    for (int k = 0; k < std::abs(val_); ++k) p = p * base;
    return p * num_.eval(x) / d;
}

bool operator==(const Scalar &x, const Scalar &y) { return x.val_ == y.val_ && x.num_ == y.num_ && x.den_ == y.den_; }

Scalar operator-(const Scalar &x) {
    Scalar s = x;
    for (auto &v : s.num_.c) v = -v;
    return s;
}

static Poly shift_up(const Poly &p, int k) {
    if (k == 0 || p.is_zero()) return p;
    Poly r;
    r.c.assign(size_t(k), GaussRat());
    r.c.insert(r.c.end(), p.c.begin(), p.c.end());
    return r;
}

Scalar operator+(const Scalar &x, const Scalar &y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    int m = std::min(x.val_, y.val_);
    Scalar s;
    s.val_ = m;
    if (x.den_ == y.den_) {
        s.num_ = shift_up(x.num_, x.val_ - m) + shift_up(y.num_, y.val_ - m);
        s.den_ = x.den_;
        if (x.den_.degree() == 0) { // Laurent fast path: only strip low zeros
            if (s.num_.is_zero()) return Scalar();
            s.val_ += strip_low(s.num_);
            return s;
        }
    } else {
        s.num_ = shift_up(x.num_, x.val_ - m) * y.den_ + shift_up(y.num_, y.val_ - m) * x.den_;
        s.den_ = x.den_ * y.den_;
    }
    s.canonicalize();
    return s;
}

Scalar operator*(const Scalar &x, const Scalar &y) {
    if (x.is_zero() || y.is_zero()) return Scalar();
    Scalar s;
    s.val_ = x.val_ + y.val_;
    s.num_ = x.num_ * y.num_;
    if (x.den_.degree() == 0 && y.den_.degree() == 0) {
        s.den_ = Poly(GaussRat(1)); // dens are monic constants, i.e. 1
        return s;
    }
    s.den_ = x.den_ * y.den_;
    s.canonicalize();
    return s;
}

static std::strong_ordering cmp_q(const mpq_class &a, const mpq_class &b) {
    int c = cmp(a, b);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

static std::strong_ordering cmp_poly(const Poly &a, const Poly &b) {
    if (auto c = a.c.size() <=> b.c.size(); c != 0) return c;
    for (size_t k = a.c.size(); k-- > 0;) {
        if (auto c = cmp_q(a.c[k].re, b.c[k].re); c != 0) return c;
        if (auto c = cmp_q(a.c[k].im, b.c[k].im); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

std::strong_ordering compare(const Scalar &x, const Scalar &y) {
    if (auto c = cmp_poly(x.den_, y.den_); c != 0) return c;
    if (auto c = x.val_ <=> y.val_; c != 0) return c;
    return cmp_poly(x.num_, y.num_);
}

// ---------------------------------------------------------------- text

static std::string coeff_prefix(const GaussRat &c, bool first, bool bare) {
    // Returns the signed coefficient prefix for a term; `bare` means the term
    // has no q factor, so the coefficient must be written out in full.
    std::string s;
    if (c.is_real()) {
        bool neg = sgn(c.re) < 0;
        mpq_class a = abs(c.re);
        s = neg ? (first ? "-" : " - ") : (first ? "" : " + ");
        if (a == 1 && !bare) return s;
        std::string body = a.get_den() == 1 ? a.get_str() : "(" + a.get_str() + ")";
        return s + body + (bare ? "" : "*");
    }
    s = first ? "" : " + ";
    return s + c.str() + (bare ? "" : "*");
}

static std::string render_terms(const Poly &p, int shift) {
    // Descending powers of q; exponents offset by `shift`.
    std::string out;
    bool first = true;
    for (size_t k = p.c.size(); k-- > 0;) {
        if (p.c[k].is_zero()) continue;
        int e = int(k) + shift;
        bool bare = e == 0;
        out += coeff_prefix(p.c[k], first, bare);
        if (!bare) out += e == 1 ? "q" : "q^" + std::to_string(e);
        first = false;
    }
    return out.empty() ? "0" : out;
}

std::string Scalar::str() const {
    if (is_zero()) return "0";
    if (den_.degree() == 0) return render_terms(num_, val_);
    Poly n = numerator(), d = denominator();
    return "(" + render_terms(n, 0) + ")/(" + render_terms(d, 0) + ")";
}

namespace {
struct ScalarSem {
    using Value = Scalar;
    Value number(const std::string &digits) { return Scalar(GaussRat(mpq_class(digits))); }
    bool known_letter(char ch) const { return ch == 'q' || ch == 'i'; }
    Value letter(char ch) { return ch == 'q' ? Scalar::q_pow(1) : Scalar::imag_unit(); }
    Value add(const Value &a, const Value &b) { return a + b; }
    Value sub(const Value &a, const Value &b) { return a - b; }
    Value neg(const Value &a) { return -a; }
    Value mul(const Value &a, const Value &b) { return a * b; }
    Value div(const Value &a, const Value &b) {
        if (b.is_zero()) throw ParseError("division by zero");
        return a / b;
    }
    Value pow(const Value &a, long e) {
        if (e < 0 && a.is_zero()) throw ParseError("division by zero");
        return a.pow(int(e));
    }
};
} // namespace

Scalar Scalar::parse(std::string_view text) {
    ScalarSem sem;
    return detail::ExprParser<ScalarSem>(text, sem).parse_all();
}

Scalar scalar_arith(std::string_view op, const Scalar &x, const Scalar &y) {
    if (op == "add") return x + y;
    if (op == "mul") return x * y;
    if (op == "neg") return -x;
    if (op == "inv") return x.inv();
    throw Error("unknown scalar operation '" + std::string(op) + "'");
}

} // namespace qgeom
