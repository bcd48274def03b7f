#include "cmbkf/padic.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cmbkf::padic {

mpz_class pow_p(long p, long e) {
    assert(e >= 0);
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r;
}

PadicNumber PadicNumber::zero(long p, long prec) {
    return PadicNumber(p, prec, 0, true, 0);
}

PadicNumber PadicNumber::inexact_zero(long p, long prec) {
    return PadicNumber(p, prec, prec, false, 0);
}

PadicNumber PadicNumber::from_integer(long p, const mpz_class& m, long prec) {
    if (p < 2) throw std::invalid_argument("PadicNumber: prime must be >= 2");
    if (m == 0) return zero(p, prec);
    PadicNumber x(p, prec, 0, false, m);
    x.normalize();
    return x;
}

PadicNumber PadicNumber::from_long(long p, long m, long prec) {
    return from_integer(p, mpz_class(m), prec);
}

PadicNumber PadicNumber::from_unit_val(long p, const mpz_class& unit, long val, long prec) {
    if (unit == 0) return zero(p, prec);
    PadicNumber x(p, prec, val, false, unit);
    x.normalize();
    return x;
}

void PadicNumber::normalize() {
    if (exact_zero_) { val_ = 0; unit_ = 0; return; }
    if (val_ >= prec_) { val_ = prec_; unit_ = 0; return; }
    if (unit_ == 0) { val_ = prec_; return; }
    mpz_class stripped;
    unsigned long k = mpz_remove(stripped.get_mpz_t(), unit_.get_mpz_t(), mpz_class(p_).get_mpz_t());
    val_ += static_cast<long>(k);
    if (val_ >= prec_) { val_ = prec_; unit_ = 0; return; }
    mpz_class mod = pow_p(p_, prec_ - val_);
    mpz_mod(unit_.get_mpz_t(), stripped.get_mpz_t(), mod.get_mpz_t());
    if (unit_ == 0) val_ = prec_;
}

bool PadicNumber::is_zero_at_precision() const {
    return exact_zero_ || (unit_ == 0 && val_ == prec_);
}

long PadicNumber::valuation() const {
    if (exact_zero_) throw std::domain_error("valuation of exact zero");
    if (is_zero_at_precision())
        throw PrecisionExhausted("valuation undetermined: element is 0 mod p^" + std::to_string(prec_));
    return val_;
}

std::optional<long> PadicNumber::valuation_opt() const {
    if (!valuation_determined()) return std::nullopt;
    return val_;
}

mpz_class PadicNumber::representative() const {
    if (is_zero_at_precision()) return 0;
    if (val_ < 0) throw std::domain_error("representative of element with negative valuation");
    mpz_class r = unit_ * pow_p(p_, val_);
    mpz_class mod = pow_p(p_, prec_);
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
    return r;
}

PadicNumber PadicNumber::with_precision(long prec) const {
    long np = std::min(prec, prec_);
    if (exact_zero_) return PadicNumber(p_, np, 0, true, 0);
    PadicNumber x(p_, np, val_, false, unit_);
    x.normalize();
    return x;
}

PadicNumber PadicNumber::shifted(long k) const {
    if (exact_zero_) return *this;
    PadicNumber x(p_, prec_ + k, val_ + k, false, unit_);
    x.normalize();
    return x;
}

void PadicNumber::check_compatible(const PadicNumber& a, const PadicNumber& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("PadicNumber: prime mismatch");
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    PadicNumber::check_compatible(a, b);
    if (a.exact_zero_) return b;
    if (b.exact_zero_) return a;
    long prec = std::min(a.prec_, b.prec_);
    long vmin = std::min(a.val_, b.val_);
    mpz_class sum = a.unit_ * pow_p(a.p_, a.val_ - vmin) + b.unit_ * pow_p(a.p_, b.val_ - vmin);
    PadicNumber x(a.p_, prec, vmin, false, sum);
    x.normalize();
    return x;
}

PadicNumber PadicNumber::operator-() const {
    if (exact_zero_) return *this;
    PadicNumber x(p_, prec_, val_, false, -unit_);
    x.normalize();
    return x;
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    PadicNumber::check_compatible(a, b);
    if (a.exact_zero_ || b.exact_zero_)
        return PadicNumber::zero(a.p_, std::min(a.prec_, b.prec_));
    long ra = a.prec_ - a.val_;
    long rb = b.prec_ - b.val_;
    long r = std::min(ra, rb);
    long val = a.val_ + b.val_;
    if (r <= 0) return PadicNumber::inexact_zero(a.p_, val);
    PadicNumber x(a.p_, val + r, val, false, a.unit_ * b.unit_);
    x.normalize();
    return x;
}

PadicNumber PadicNumber::inverse() const {
    if (exact_zero_) throw std::domain_error("inverse of exact zero");
    if (is_zero_at_precision())
        throw PrecisionExhausted("inverse: element is 0 mod p^" + std::to_string(prec_) +
                                 ", invertibility not certified");
    long r = prec_ - val_;
    mpz_class mod = pow_p(p_, r);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw std::logic_error("unit part not invertible"); // cannot happen: p does not divide unit
    return PadicNumber(p_, r - val_, -val_, false, inv);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inverse(); }

PadicNumber PadicNumber::pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    // the accumulator starts with surplus relative precision so that only
    // the base's precision limits the result
    PadicNumber acc = PadicNumber::from_long(p_, 1, prec_ + 64);
    PadicNumber base = *this;
    long e = k;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc;
}

bool congruent(const PadicNumber& a, const PadicNumber& b) {
    return (a - b).is_zero_at_precision();
}

std::string PadicNumber::str() const {
    std::ostringstream os;
    if (exact_zero_) { os << "0 (exact)"; return os.str(); }
    if (is_zero_at_precision()) { os << "O(" << p_ << "^" << prec_ << ")"; return os.str(); }
    os << p_ << "^" << val_ << "*" << unit_.get_str() << " + O(" << p_ << "^" << prec_ << ")";
    return os.str();
}

// ---------------------------------------------------------------------------

PadicPolynomial PadicPolynomial::from_integers(long p, const std::vector<long>& coeffs, long prec) {
    std::vector<PadicNumber> c;
    c.reserve(coeffs.size());
    for (long v : coeffs) c.push_back(PadicNumber::from_long(p, v, prec));
    return PadicPolynomial(std::move(c));
}

long PadicPolynomial::degree() const {
    for (long i = static_cast<long>(c_.size()) - 1; i >= 0; --i)
        if (!c_[static_cast<size_t>(i)].is_exact_zero()) return i;
    return -1;
}

PadicNumber PadicPolynomial::eval(const PadicNumber& x) const {
    if (c_.empty()) return PadicNumber::zero(x.prime(), x.precision());
    PadicNumber acc = c_.back();
    for (long i = static_cast<long>(c_.size()) - 2; i >= 0; --i)
        acc = acc * x + c_[static_cast<size_t>(i)];
    return acc;
}

PadicPolynomial PadicPolynomial::derivative() const {
    std::vector<PadicNumber> d;
    for (size_t i = 1; i < c_.size(); ++i) {
        // exact integer scalar: give it enough relative precision that the
        // coefficient's own precision is what limits the product
        PadicNumber k = PadicNumber::from_long(c_[i].prime(), static_cast<long>(i),
                                               c_[i].precision() + 64);
        d.push_back(c_[i] * k);
    }
    return PadicPolynomial(std::move(d));
}

PadicPolynomial operator*(const PadicPolynomial& a, const PadicPolynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return PadicPolynomial();
    long p = a.c_[0].prime();
    std::vector<PadicNumber> r(a.c_.size() + b.c_.size() - 1,
                               PadicNumber::zero(p, PadicNumber::kDefaultPrecision * 4));
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j)
            r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    return PadicPolynomial(std::move(r));
}

PadicPolynomial operator+(const PadicPolynomial& a, const PadicPolynomial& b) {
    const auto& longer = a.c_.size() >= b.c_.size() ? a.c_ : b.c_;
    const auto& shorter = a.c_.size() >= b.c_.size() ? b.c_ : a.c_;
    std::vector<PadicNumber> r = longer;
    for (size_t i = 0; i < shorter.size(); ++i) r[i] = r[i] + shorter[i];
    return PadicPolynomial(std::move(r));
}

PadicNumber hensel_lift(const PadicPolynomial& f, const PadicNumber& r0, long target_prec) {
    PadicPolynomial df = f.derivative();
    PadicNumber r = r0;
    PadicNumber fr = f.eval(r);
    PadicNumber dfr = df.eval(r);

    if (fr.is_exact_zero()) return r;
    if (dfr.is_exact_zero())
        throw HenselConditionFailed("f'(r0) is exactly zero");
    if (!dfr.valuation_determined())
        throw PrecisionExhausted("valuation of f'(r0) undetermined");
    long s = dfr.valuation();

    long t;
    if (fr.valuation_determined()) {
        t = fr.valuation();
    } else {
        t = fr.precision(); // v(f(r0)) >= precision of the evaluation
        if (t >= target_prec) return r;
    }
    if (t <= 2 * s)
        throw HenselConditionFailed("v(f(r0)) = " + std::to_string(t) +
                                    " not greater than 2*v(f'(r0)) = " + std::to_string(2 * s));

    for (int iter = 0; iter < 64; ++iter) {
        if (fr.is_exact_zero()) return r;
        long vfr = fr.valuation_determined() ? fr.valuation() : fr.precision();
        if (vfr >= target_prec) return r;
        if (!fr.valuation_determined())
            throw PrecisionExhausted("hensel_lift: residual is 0 mod p^" + std::to_string(vfr) +
                                     " but target is " + std::to_string(target_prec));
        r = r - fr / dfr;
        fr = f.eval(r);
        dfr = df.eval(r);
        long nvfr = fr.is_zero_at_precision() ? fr.precision()
                                              : fr.valuation();
        if (nvfr <= vfr)
            throw PrecisionExhausted("hensel_lift: no progress past p^" + std::to_string(vfr));
    }
    throw PrecisionExhausted("hensel_lift: iteration cap reached");
}

std::vector<NewtonSlope> newton_slopes(const PadicPolynomial& f) {
    long deg = f.degree();
    if (deg < 1) return {};
    const auto& c = f.coeffs();

    struct Pt { long i; long v; };
    std::vector<Pt> det;              // determined valuations
    std::vector<Pt> pending;          // undetermined: v is only a lower bound
    for (long i = 0; i <= deg; ++i) {
        const PadicNumber& a = c[static_cast<size_t>(i)];
        if (a.is_exact_zero()) continue;
        if (a.valuation_determined()) det.push_back({i, a.valuation()});
        else pending.push_back({i, a.precision()});
    }
    if (det.empty() || det.back().i != deg)
        throw PrecisionExhausted("newton_slopes: leading coefficient valuation undetermined");

    // lower convex hull, left to right; cross product in 128-bit to be safe
    std::vector<Pt> hull;
    for (const Pt& q : det) {
        while (hull.size() >= 2) {
            const Pt& a = hull[hull.size() - 2];
            const Pt& b = hull[hull.size() - 1];
            __int128 cross = static_cast<__int128>(b.i - a.i) * (q.v - a.v) -
                             static_cast<__int128>(b.v - a.v) * (q.i - a.i);
            if (cross <= 0) hull.pop_back(); else break;
        }
        hull.push_back(q);
    }

    // a coefficient of undetermined valuation is safe only if its lower
    // bound keeps it on or above the hull; left of the first determined
    // point it would add a segment of unknown slope
    for (const Pt& q : pending) {
        if (q.i < hull.front().i)
            throw PrecisionExhausted("newton_slopes: coefficient of undetermined valuation at index " +
                                     std::to_string(q.i) + " left of the certified hull");
        for (size_t k = 0; k + 1 < hull.size(); ++k) {
            const Pt& a = hull[k];
            const Pt& b = hull[k + 1];
            if (q.i <= a.i || q.i >= b.i) continue;
            __int128 lhs = static_cast<__int128>(q.v - a.v) * (b.i - a.i);
            __int128 rhs = static_cast<__int128>(b.v - a.v) * (q.i - a.i);
            if (lhs < rhs)
                throw PrecisionExhausted("newton_slopes: coefficient of undetermined valuation at index " +
                                         std::to_string(q.i) + " could cut the hull");
        }
    }

    // hull edges, read right to left so root valuations come out ascending
    std::vector<NewtonSlope> out;
    for (size_t k = hull.size(); k >= 2; --k) {
        const Pt& a = hull[k - 2];
        const Pt& b = hull[k - 1];
        out.push_back({Rational(a.v - b.v, b.i - a.i), b.i - a.i});
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace fp {

Poly trim(Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

bool is_zero(const Poly& a) {
    for (long x : a) if (x != 0) return false;
    return true;
}

Poly add(const Poly& a, const Poly& b, long p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
    return trim(r);
}

Poly sub(const Poly& a, const Poly& b, long p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = ((r[i] - b[i]) % p + p) % p;
    return trim(r);
}

Poly mul(const Poly& a, const Poly& b, long p) {
    if (is_zero(a) || is_zero(b)) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return trim(r);
}

static long inv_mod_p(long a, long p) {
    long r = 1, b = ((a % p) + p) % p, e = p - 2; // Fermat; p prime
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

Poly mod(Poly a, const Poly& m, long p) {
    Poly q = trim(std::move(a));
    Poly mm = trim(m);
    if (mm.empty()) throw std::domain_error("fp::mod by zero");
    long lead_inv = inv_mod_p(mm.back(), p);
    while (q.size() >= mm.size()) {
        long coef = q.back() * lead_inv % p;
        size_t shift = q.size() - mm.size();
        for (size_t i = 0; i < mm.size(); ++i)
            q[i + shift] = ((q[i + shift] - coef * mm[i]) % p + p) % p;
        q = trim(std::move(q));
    }
    return q;
}

Poly inverse_mod(const Poly& a, const Poly& m, long p) {
    // extended Euclid in F_p[x]
    Poly r0 = trim(m), r1 = mod(a, m, p);
    Poly t0 = {}, t1 = {1};
    while (!is_zero(r1)) {
        // divide r0 by r1
        Poly q;
        Poly rem = r0;
        long lead_inv = inv_mod_p(r1.back(), p);
        q.assign(rem.size() >= r1.size() ? rem.size() - r1.size() + 1 : 0, 0);
        while (rem.size() >= r1.size() && !is_zero(rem)) {
            long coef = rem.back() * lead_inv % p;
            size_t shift = rem.size() - r1.size();
            q[shift] = coef;
            for (size_t i = 0; i < r1.size(); ++i)
                rem[i + shift] = ((rem[i + shift] - coef * r1[i]) % p + p) % p;
            rem = trim(std::move(rem));
        }
        Poly t2 = sub(t0, mul(trim(q), t1, p), p);
        r0 = r1; r1 = rem;
        t0 = t1; t1 = t2;
    }
    if (r0.size() != 1) throw std::domain_error("fp::inverse_mod: not coprime");
    long scale = inv_mod_p(r0[0], p);
    Poly out = t0;
    for (long& x : out) x = x * scale % p;
    return mod(out, m, p);
}

bool irreducible(const Poly& a, long p) {
    Poly f = trim(a);
    if (f.size() < 2) return false;
    long d = static_cast<long>(f.size()) - 1;
    if (d == 1) return true;
    // trial division by every monic polynomial of degree 1..d/2
    for (long k = 1; k <= d / 2; ++k) {
        long count = 1;
        for (long i = 0; i < k; ++i) count *= p;
        for (long word = 0; word < count; ++word) {
            Poly t(static_cast<size_t>(k) + 1, 0);
            long w = word;
            for (long i = 0; i < k; ++i) { t[static_cast<size_t>(i)] = w % p; w /= p; }
            t[static_cast<size_t>(k)] = 1;
            if (is_zero(mod(f, t, p))) return false;
        }
    }
    return true;
}

Poly smallest_irreducible(long p, int f) {
    if (f < 1) throw std::invalid_argument("smallest_irreducible: degree must be >= 1");
    long count = 1;
    for (int i = 0; i < f; ++i) count *= p;
    for (long word = 0; word < count; ++word) {
        Poly g(static_cast<size_t>(f) + 1, 0);
        // word encodes (a_{f-1}, ..., a_0) with a_{f-1} in the top digit
        long w = word;
        for (int i = 0; i < f; ++i) { g[static_cast<size_t>(i)] = w % p; w /= p; }
        g[static_cast<size_t>(f)] = 1;
        if (irreducible(g, p)) return g;
    }
    throw std::logic_error("no irreducible polynomial found"); // impossible for prime p
}

} // namespace fp

} // namespace cmbkf::padic
