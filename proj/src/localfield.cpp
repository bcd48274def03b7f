#include "cmbkf/localfield.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace cmbkf::localfield {

namespace {

// sentinel valuation for (exact) zero; large but safe under e*v + j arithmetic
constexpr long kInfVal = 1L << 40;

long checked_pow_long(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > (1L << 40) / b) throw std::invalid_argument("residue field too large to enumerate");
        r *= b;
    }
    return r;
}

// ---- dense linear algebra over Qp with min-valuation pivoting ----------

using PMatrix = std::vector<std::vector<PadicNumber>>;

bool eliminate(PMatrix& a, std::vector<PadicNumber>* b) {
    const size_t n = a.size();
    for (size_t k = 0; k < n; ++k) {
        size_t pivot = n;
        long best = 0;
        for (size_t i = k; i < n; ++i) {
            if (!a[i][k].valuation_determined()) continue;
            long v = a[i][k].valuation();
            if (pivot == n || v < best) {
                pivot = i;
                best = v;
            }
        }
        if (pivot == n) return false;
        std::swap(a[pivot], a[k]);
        if (b) std::swap((*b)[pivot], (*b)[k]);
        for (size_t i = k + 1; i < n; ++i) {
            if (a[i][k].is_exact_zero()) continue;
            PadicNumber fac = a[i][k] / a[k][k];
            for (size_t j = k; j < n; ++j) a[i][j] = a[i][j] - fac * a[k][j];
            if (b) (*b)[i] = (*b)[i] - fac * (*b)[k];
        }
    }
    return true;
}

std::vector<PadicNumber> solve_linear(PMatrix a, std::vector<PadicNumber> b) {
    const size_t n = a.size();
    if (!eliminate(a, &b)) throw Singular("linear system has no certified pivot");
    std::vector<PadicNumber> x(n);
    for (size_t k = n; k-- > 0;) {
        PadicNumber s = b[k];
        for (size_t j = k + 1; j < n; ++j) s = s - a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return x;
}

bool nonsingular(PMatrix a) { return eliminate(a, nullptr); }

// ---- F_q helpers for the tame uniformizer family -----------------------

padic::fp::Poly fq_pow(padic::fp::Poly base, long k, const padic::fp::Poly& g, long p) {
    padic::fp::Poly r{1};
    base = padic::fp::mod(std::move(base), g, p);
    while (k > 0) {
        if (k & 1) r = padic::fp::mod(padic::fp::mul(r, base, p), g, p);
        base = padic::fp::mod(padic::fp::mul(base, base, p), g, p);
        k >>= 1;
    }
    return r;
}

std::vector<long> prime_factors(long m) {
    std::vector<long> out;
    for (long q = 2; q * q <= m; ++q)
        if (m % q == 0) {
            out.push_back(q);
            while (m % q == 0) m /= q;
        }
    if (m > 1) out.push_back(m);
    return out;
}

// first multiplicative generator of F_{p^f} in digit-word order
std::vector<long> residue_generator(long p, int f) {
    const padic::fp::Poly g = padic::fp::smallest_irreducible(p, f);
    const long q = checked_pow_long(p, f);
    const auto primes = prime_factors(q - 1);
    for (long k = 1; k < q; ++k) {
        padic::fp::Poly elt;
        long t = k;
        for (int i = 0; i < f; ++i) {
            elt.push_back(t % p);
            t /= p;
        }
        elt = padic::fp::trim(std::move(elt));
        bool gen = true;
        for (long ell : primes) {
            padic::fp::Poly pw = fq_pow(elt, (q - 1) / ell, g, p);
            if (pw == padic::fp::Poly{1}) {
                gen = false;
                break;
            }
        }
        if (gen) {
            std::vector<long> digits(f, 0);
            t = k;
            for (int i = 0; i < f; ++i) {
                digits[i] = t % p;
                t /= p;
            }
            return digits;
        }
    }
    throw std::logic_error("no multiplicative generator found"); // unreachable
}

// polynomial multiply over L, used by the root search
LPoly poly_mul(const LocalField& L, const LPoly& a, const LPoly& b) {
    LPoly c(a.size() + b.size() - 1, L.zero());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = L.add(c[i + j], L.mul(a[i], b[j]));
    return c;
}

LPoly poly_derivative(const LocalField& L, const LPoly& a) {
    LPoly d;
    for (size_t k = 1; k < a.size(); ++k)
        d.push_back(L.scale(a[k], PadicNumber::from_long(L.p(), static_cast<long>(k), L.precision())));
    if (d.empty()) d.push_back(L.zero());
    return d;
}

} // namespace

// ---- construction -------------------------------------------------------

LocalField::LocalField(long p, int f, std::vector<WElem> eis, long prec)
    : p_(p), e_(static_cast<int>(eis.size())), f_(f), prec_(prec), eis_(std::move(eis)) {
    if (p_ < 2) throw std::invalid_argument("p must be a prime >= 2");
    for (long q = 2; q * q <= p_; ++q)
        if (p_ % q == 0) throw std::invalid_argument("p must be prime");
    if (f_ < 1) throw std::invalid_argument("residue degree must be positive");
    if (e_ < 1) throw NotEisenstein("an Eisenstein polynomial has degree >= 1");
    if (prec_ < 8) throw std::invalid_argument("working precision too small");

    const padic::fp::Poly g = padic::fp::smallest_irreducible(p_, f_);
    g_.assign(g.begin(), g.end());
    g_coeffs_.reserve(g_.size());
    for (const auto& c : g_) g_coeffs_.push_back(PadicNumber::from_integer(p_, c, prec_));

    for (const auto& a : eis_)
        if (static_cast<int>(a.size()) != f_)
            throw std::invalid_argument("Eisenstein coefficient has wrong coordinate length");
    for (int i = 1; i < e_; ++i)
        if (w_val_lb(eis_[i]) < 1)
            throw NotEisenstein("coefficient " + std::to_string(i) + " is not divisible by p");
    if (!w_val_determined(eis_[0]) || w_val_lb(eis_[0]) != 1)
        throw NotEisenstein("constant coefficient must have valuation exactly 1");

    init_primitive();
}

LocalField LocalField::make(long p, int f, const std::vector<mpz_class>& eis_z, long prec) {
    if (eis_z.size() < 2) throw NotEisenstein("an Eisenstein polynomial has degree >= 1");
    if (eis_z.back() != 1) throw NotEisenstein("Eisenstein polynomial must be monic");
    const int e = static_cast<int>(eis_z.size()) - 1;
    std::vector<WElem> eis;
    eis.reserve(e);
    for (int j = 0; j < e; ++j) {
        WElem a(f, PadicNumber::zero(p, prec));
        a[0] = PadicNumber::from_integer(p, eis_z[j], prec);
        eis.push_back(std::move(a));
    }
    return LocalField(p, f, std::move(eis), prec);
}

std::string LocalField::describe() const {
    std::ostringstream os;
    os << "(p=" << p_ << ", f=" << f_ << ", e=" << e_ << ")";
    return os.str();
}

// ---- W arithmetic -------------------------------------------------------

WElem LocalField::w_zero() const { return WElem(f_, PadicNumber::zero(p_, prec_)); }

WElem LocalField::w_one() const {
    WElem a = w_zero();
    a[0] = PadicNumber::from_long(p_, 1, prec_);
    return a;
}

WElem LocalField::w_u() const {
    WElem a = w_zero();
    if (f_ > 1) a[1] = PadicNumber::from_long(p_, 1, prec_);
    return a;
}

WElem LocalField::w_from_padic(const PadicNumber& a) const {
    if (a.prime() != p_) throw std::invalid_argument("prime mismatch");
    WElem r = w_zero();
    r[0] = a;
    return r;
}

WElem LocalField::w_add(const WElem& a, const WElem& b) const {
    WElem r(f_);
    for (int i = 0; i < f_; ++i) r[i] = a[i] + b[i];
    return r;
}

WElem LocalField::w_sub(const WElem& a, const WElem& b) const {
    WElem r(f_);
    for (int i = 0; i < f_; ++i) r[i] = a[i] - b[i];
    return r;
}

WElem LocalField::w_neg(const WElem& a) const {
    WElem r(f_);
    for (int i = 0; i < f_; ++i) r[i] = -a[i];
    return r;
}

WElem LocalField::w_reduce(std::vector<PadicNumber> c) const {
    for (size_t k = c.size(); k-- > static_cast<size_t>(f_);) {
        if (!c[k].is_exact_zero()) {
            for (int i = 0; i < f_; ++i) c[k - f_ + i] = c[k - f_ + i] - c[k] * g_coeffs_[i];
        }
        c.pop_back();
    }
    c.resize(f_, PadicNumber::zero(p_, prec_));
    return c;
}

WElem LocalField::w_mul(const WElem& a, const WElem& b) const {
    std::vector<PadicNumber> c(2 * f_ - 1, PadicNumber::zero(p_, prec_));
    for (int i = 0; i < f_; ++i) {
        if (a[i].is_exact_zero()) continue;
        for (int j = 0; j < f_; ++j) c[i + j] = c[i + j] + a[i] * b[j];
    }
    return w_reduce(std::move(c));
}

WElem LocalField::w_scale(const WElem& a, const PadicNumber& c) const {
    WElem r(f_);
    for (int i = 0; i < f_; ++i) r[i] = a[i] * c;
    return r;
}

long LocalField::w_val_lb(const WElem& a) const {
    long lb = kInfVal;
    for (const auto& c : a) {
        if (c.is_exact_zero()) continue;
        lb = std::min(lb, c.valuation_determined() ? c.valuation() : c.precision());
    }
    return lb;
}

bool LocalField::w_val_determined(const WElem& a) const {
    long det_min = kInfVal, pend_min = kInfVal;
    for (const auto& c : a) {
        if (c.is_exact_zero()) continue;
        if (c.valuation_determined())
            det_min = std::min(det_min, c.valuation());
        else
            pend_min = std::min(pend_min, c.precision());
    }
    return det_min < kInfVal && det_min <= pend_min;
}

bool LocalField::w_is_zero(const WElem& a) const {
    for (const auto& c : a)
        if (!c.is_zero_at_precision()) return false;
    return true;
}

WElem LocalField::w_inverse(const WElem& a) const {
    if (!w_val_determined(a) || w_val_lb(a) != 0)
        throw std::domain_error("w_inverse requires a unit of W");
    // residue-field inverse, then Newton doubling z <- z(2 - az)
    padic::fp::Poly res;
    for (const auto& c : a) res.push_back(mpz_class(c.representative() % p_).get_si());
    padic::fp::Poly gm(g_.size());
    for (size_t i = 0; i < g_.size(); ++i) gm[i] = mpz_class(g_[i] % p_).get_si();
    padic::fp::Poly inv0 = padic::fp::inverse_mod(padic::fp::trim(std::move(res)), gm, p_);
    WElem z = w_zero();
    for (size_t i = 0; i < inv0.size(); ++i) z[i] = PadicNumber::from_long(p_, inv0[i], prec_);
    const WElem two = w_scale(w_one(), PadicNumber::from_long(p_, 2, prec_));
    for (int it = 0; it < 64; ++it) {
        WElem err = w_sub(w_mul(a, z), w_one());
        if (w_is_zero(err)) return z;
        z = w_mul(z, w_sub(two, w_mul(a, z)));
    }
    throw PrecisionExhausted("unit inversion in W did not converge");
}

WElem LocalField::w_pow(const WElem& a, long k) const {
    WElem base = k < 0 ? w_inverse(a) : a;
    if (k < 0) k = -k;
    WElem r = w_one();
    while (k > 0) {
        if (k & 1) r = w_mul(r, base);
        base = w_mul(base, base);
        k >>= 1;
    }
    return r;
}

WElem LocalField::w_frobenius(const WElem& a) const {
    if (!frob_u_) {
        if (f_ == 1) {
            frob_u_ = w_zero();
        } else {
            // lift u^p to the root of g it reduces to
            WElem z = w_pow(w_u(), p_);
            auto eval_g = [&](const WElem& x, bool deriv) {
                WElem acc = w_zero();
                for (size_t k = g_.size(); k-- > (deriv ? 1u : 0u);) {
                    PadicNumber c = g_coeffs_[k];
                    if (deriv) c = c * PadicNumber::from_long(p_, static_cast<long>(k), prec_);
                    acc = w_add(w_mul(acc, x), w_from_padic(c));
                }
                return acc;
            };
            bool done = false;
            for (int it = 0; it < 64 && !done; ++it) {
                WElem gz = eval_g(z, false);
                if (w_is_zero(gz)) {
                    done = true;
                    break;
                }
                z = w_sub(z, w_mul(gz, w_inverse(eval_g(z, true))));
            }
            if (!done) throw PrecisionExhausted("Frobenius lift did not converge");
            frob_u_ = z;
        }
    }
    // coefficients are in Zp, hence fixed: substitute u -> frob(u)
    WElem acc = w_zero();
    for (int i = f_ - 1; i >= 0; --i) acc = w_add(w_mul(acc, *frob_u_), w_from_padic(a[i]));
    return acc;
}

// ---- L arithmetic -------------------------------------------------------

LElem LocalField::zero() const { return LElem(e_, w_zero()); }

LElem LocalField::one() const {
    LElem a = zero();
    a[0] = w_one();
    return a;
}

LElem LocalField::pi() const {
    if (e_ == 1) return LElem{w_neg(eis_[0])};
    LElem a = zero();
    a[1] = w_one();
    return a;
}

LElem LocalField::u_gen() const {
    LElem a = zero();
    a[0] = w_u();
    return a;
}

LElem LocalField::from_integer(const mpz_class& a) const {
    return from_padic(PadicNumber::from_integer(p_, a, prec_));
}

LElem LocalField::from_padic(const PadicNumber& a) const {
    LElem r = zero();
    r[0] = w_from_padic(a);
    return r;
}

LElem LocalField::from_w(const WElem& a) const {
    if (static_cast<int>(a.size()) != f_) throw std::invalid_argument("coordinate length mismatch");
    LElem r = zero();
    r[0] = a;
    return r;
}

LElem LocalField::add(const LElem& a, const LElem& b) const {
    LElem r(e_);
    for (int j = 0; j < e_; ++j) r[j] = w_add(a[j], b[j]);
    return r;
}

LElem LocalField::sub(const LElem& a, const LElem& b) const {
    LElem r(e_);
    for (int j = 0; j < e_; ++j) r[j] = w_sub(a[j], b[j]);
    return r;
}

LElem LocalField::neg(const LElem& a) const {
    LElem r(e_);
    for (int j = 0; j < e_; ++j) r[j] = w_neg(a[j]);
    return r;
}

LElem LocalField::mul(const LElem& a, const LElem& b) const {
    std::vector<WElem> c(2 * e_ - 1, w_zero());
    for (int i = 0; i < e_; ++i)
        for (int j = 0; j < e_; ++j) c[i + j] = w_add(c[i + j], w_mul(a[i], b[j]));
    // pi^e = -(a_{e-1} pi^{e-1} + ... + a_0)
    for (size_t k = c.size(); k-- > static_cast<size_t>(e_);) {
        for (int j = 0; j < e_; ++j) c[k - e_ + j] = w_sub(c[k - e_ + j], w_mul(c[k], eis_[j]));
        c.pop_back();
    }
    c.resize(e_, w_zero());
    return c;
}

LElem LocalField::scale(const LElem& a, const PadicNumber& c) const {
    LElem r(e_);
    for (int j = 0; j < e_; ++j) r[j] = w_scale(a[j], c);
    return r;
}

LElem LocalField::pi_pow(long k) const {
    if (k >= 0) return pow(pi(), k);
    // pi^{-1} = -a0^{-1} (pi^{e-1} + a_{e-1} pi^{e-2} + ... + a_1)
    const PadicNumber pinv = PadicNumber::from_long(p_, 1, prec_ + 1).shifted(-1);
    const WElem a0_unit = w_scale(eis_[0], pinv); // a0 / p, a unit
    const WElem a0_inv = w_scale(w_inverse(a0_unit), pinv);
    LElem q = zero();
    q[e_ - 1] = w_one();
    for (int j = 1; j < e_; ++j) q[j - 1] = eis_[j];
    LElem piinv = neg(mul(q, from_w(a0_inv)));
    return pow(piinv, -k);
}

LElem LocalField::pow(const LElem& a, long k) const {
    if (k < 0) return pow(inverse(a), -k);
    LElem r = one();
    LElem base = a;
    while (k > 0) {
        if (k & 1) r = mul(r, base);
        base = mul(base, base);
        k >>= 1;
    }
    return r;
}

LElem LocalField::inverse(const LElem& a) const {
    const long v = valuation(a);
    const LElem y = mul(a, pi_pow(-v)); // unit: its pi^0 coordinate is a W-unit
    LElem z = from_w(w_inverse(y[0]));
    const LElem two = scale(one(), PadicNumber::from_long(p_, 2, prec_));
    for (int it = 0; it < 64; ++it) {
        LElem err = sub(mul(y, z), one());
        if (is_zero(err)) return mul(z, pi_pow(-v));
        z = mul(z, sub(two, mul(y, z)));
    }
    throw PrecisionExhausted("unit inversion did not converge");
}

LElem LocalField::div(const LElem& a, const LElem& b) const { return mul(a, inverse(b)); }

bool LocalField::is_zero(const LElem& a) const {
    for (const auto& c : a)
        if (!w_is_zero(c)) return false;
    return true;
}

bool LocalField::equal(const LElem& a, const LElem& b) const { return is_zero(sub(a, b)); }

long LocalField::valuation_lb(const LElem& a) const {
    long lb = kInfVal;
    for (int j = 0; j < e_; ++j) {
        bool all_exact = true;
        for (const auto& c : a[j])
            if (!c.is_exact_zero()) all_exact = false;
        if (all_exact) continue;
        lb = std::min(lb, static_cast<long>(e_) * w_val_lb(a[j]) + j);
    }
    return lb;
}

bool LocalField::valuation_determined(const LElem& a) const {
    long lb = kInfVal;
    int arg = -1;
    for (int j = 0; j < e_; ++j) {
        bool all_exact = true;
        for (const auto& c : a[j])
            if (!c.is_exact_zero()) all_exact = false;
        if (all_exact) continue;
        long cand = static_cast<long>(e_) * w_val_lb(a[j]) + j;
        if (cand < lb) {
            lb = cand;
            arg = j;
        }
    }
    // candidate valuations are distinct mod e, so the strict argmin decides
    return arg >= 0 && lb < kInfVal && w_val_determined(a[arg]);
}

long LocalField::valuation(const LElem& a) const {
    bool all_exact = true;
    for (const auto& c : a)
        for (const auto& x : c)
            if (!x.is_exact_zero()) all_exact = false;
    if (all_exact) throw std::domain_error("valuation of exact zero");
    if (!valuation_determined(a))
        throw PrecisionExhausted("element is zero at the working precision; valuation undetermined");
    return valuation_lb(a);
}

Rational LocalField::valuation_q(const LElem& a) const { return Rational(valuation(a), e_); }

// ---- coordinates --------------------------------------------------------

std::vector<PadicNumber> LocalField::coords(const LElem& a) const {
    std::vector<PadicNumber> c;
    c.reserve(degree());
    for (int j = 0; j < e_; ++j)
        for (int i = 0; i < f_; ++i) c.push_back(a[j][i]);
    return c;
}

LElem LocalField::from_coords(const std::vector<PadicNumber>& c) const {
    if (static_cast<int>(c.size()) != degree())
        throw std::invalid_argument("coordinate length mismatch");
    LElem a = zero();
    for (int j = 0; j < e_; ++j)
        for (int i = 0; i < f_; ++i) a[j][i] = c[j * f_ + i];
    return a;
}

std::vector<mpz_class> LocalField::canonical_key(const LElem& a) const {
    constexpr long kKeyDepth = 12;
    std::vector<mpz_class> key;
    key.reserve(degree());
    for (const auto& c : coords(a)) key.push_back(c.with_precision(kKeyDepth).representative());
    return key;
}

// ---- primitive element --------------------------------------------------

void LocalField::init_primitive() {
    const int n = degree();
    bool found = false;
    if (f_ == 1) {
        theta_ = pi();
        std::vector<PadicNumber> mc;
        for (int j = 0; j < e_; ++j) mc.push_back(eis_[j][0]);
        mc.push_back(PadicNumber::from_long(p_, 1, prec_));
        minpoly_ = PadicPolynomial(std::move(mc));
        found = true;
    } else if (e_ == 1) {
        theta_ = u_gen();
        std::vector<PadicNumber> mc;
        for (const auto& c : g_) mc.push_back(PadicNumber::from_integer(p_, c, prec_));
        minpoly_ = PadicPolynomial(std::move(mc));
        found = true;
    }

    for (long c = 1; c <= 16 && !found; ++c) {
        LElem th = add(pi(), scale(u_gen(), PadicNumber::from_long(p_, c, prec_)));
        std::vector<LElem> pws(n);
        pws[0] = one();
        for (int k = 1; k < n; ++k) pws[k] = mul(pws[k - 1], th);
        PMatrix mat(n, std::vector<PadicNumber>(n));
        for (int k = 0; k < n; ++k) {
            auto col = coords(pws[k]);
            for (int r = 0; r < n; ++r) mat[r][k] = col[r];
        }
        if (!nonsingular(mat)) continue;
        auto rhs = coords(mul(pws[n - 1], th));
        auto sol = solve_linear(mat, rhs);
        std::vector<PadicNumber> mc;
        mc.reserve(n + 1);
        bool integral = true;
        for (const auto& s : sol) {
            if (s.valuation_determined() && s.valuation() < 0) integral = false;
            mc.push_back(-s);
        }
        if (!integral) continue;
        mc.push_back(PadicNumber::from_long(p_, 1, prec_));
        theta_ = th;
        minpoly_ = PadicPolynomial(std::move(mc));
        found = true;
    }
    if (!found)
        throw PrimitiveElementSearchFailed("no primitive element of the form pi + c*u for c <= 16 in " +
                                           describe());

    std::vector<LElem> pws(n);
    pws[0] = one();
    for (int k = 1; k < n; ++k) pws[k] = mul(pws[k - 1], theta_);
    theta_mat_.assign(n, std::vector<PadicNumber>(n));
    for (int k = 0; k < n; ++k) {
        auto col = coords(pws[k]);
        for (int r = 0; r < n; ++r) theta_mat_[r][k] = col[r];
    }
}

std::vector<PadicNumber> LocalField::power_coords(const LElem& x) const {
    return solve_linear(theta_mat_, coords(x));
}

// ---- polynomials over L --------------------------------------------------

LPoly LocalField::lift_poly(const PadicPolynomial& F) const {
    LPoly out;
    const long d = F.degree();
    for (long k = 0; k <= d; ++k) out.push_back(from_padic(F.coeffs()[k]));
    return out;
}

LElem LocalField::eval(const LPoly& F, const LElem& x) const {
    LElem acc = zero();
    for (size_t k = F.size(); k-- > 0;) acc = add(mul(acc, x), F[k]);
    return acc;
}

LElem LocalField::newton_root(const LPoly& F, LElem x) const {
    const LPoly dF = poly_derivative(*this, F);
    long last = std::numeric_limits<long>::min();
    for (int it = 0; it < 64; ++it) {
        LElem fx = eval(F, x);
        if (is_zero(fx)) return x;
        long v = valuation_lb(fx);
        if (v <= last) throw PrecisionExhausted("Newton refinement stalled before certification");
        last = v;
        x = sub(x, div(fx, eval(dF, x)));
    }
    throw PrecisionExhausted("Newton refinement did not converge");
}

void LocalField::find_roots(const LPoly& F, const LElem& base, long sc, int depth,
                            std::vector<LElem>& out) const {
    constexpr int kMaxDepth = 64;
    if (depth > kMaxDepth) throw PrecisionExhausted("root search exceeded its depth bound");
    const long q = checked_pow_long(p_, f_);
    const LPoly dF = poly_derivative(*this, F);
    const long deg = static_cast<long>(F.size()) - 1;
    long active = 0;
    const LElem shift = pi_pow(sc);
    for (long k = 0; k < q; ++k) {
        WElem digits = w_zero();
        long t = k;
        for (int i = 0; i < f_; ++i) {
            digits[i] = PadicNumber::from_long(p_, t % p_, prec_);
            t /= p_;
        }
        const LElem c = from_w(digits);
        const LElem Fc = eval(F, c);
        if (valuation_lb(Fc) < 1) {
            if (valuation_determined(Fc)) continue;
            throw PrecisionExhausted("cannot decide whether a residue digit survives");
        }
        if (++active > deg) throw PrecisionExhausted("residue branching exceeds the degree");

        // branch: substitute z -> c + pi z and renormalize to a primitive polynomial
        LPoly lin{c, pi()};
        LPoly G{F.back()};
        for (long j = deg - 1; j >= 0; --j) {
            G = poly_mul(*this, G, lin);
            G[0] = add(G[0], F[j]);
        }
        long m = kInfVal;
        for (const auto& coeff : G) m = std::min(m, valuation_lb(coeff));
        if (m >= static_cast<long>(e_) * prec_ / 2)
            throw PrecisionExhausted("branch polynomial vanishes at the working precision");
        const LElem unshift = pi_pow(-m);
        for (auto& coeff : G) coeff = mul(coeff, unshift);

        // the subtree holds as many integral roots (over the residue closure,
        // with multiplicity) as the largest unit-coefficient index of G
        long units_last = 0;
        for (long i = 0; i < static_cast<long>(G.size()); ++i) {
            long v = valuation_lb(G[i]);
            if (v >= 1) continue;
            if (!valuation_determined(G[i]))
                throw PrecisionExhausted("branch polynomial has a coefficient of undecided unit part");
            units_last = i;
        }
        if (units_last == 0) continue; // no integral root behind this digit

        // Newton is certified only once the subtree is down to a single root
        // sitting inside the classical Hensel ball; a bare quotient criterion
        // would discard wildly ramified siblings at distance <= v(F'(c))
        if (units_last == 1) {
            const LElem dFc = eval(dF, c);
            if (valuation_determined(dFc) && valuation_lb(Fc) > 2 * valuation_lb(dFc)) {
                out.push_back(add(base, mul(shift, newton_root(F, c))));
                continue;
            }
        }
        find_roots(G, add(base, mul(shift, c)), sc + 1, depth + 1, out);
    }
}

std::vector<LElem> LocalField::roots_of(const LPoly& F) const {
    if (F.empty()) throw std::invalid_argument("roots_of: empty polynomial");
    if (!is_zero(sub(F.back(), one())))
        throw std::invalid_argument("roots_of expects a monic polynomial");
    for (const auto& c : F)
        if (valuation_lb(c) < 0) throw std::invalid_argument("roots_of expects integral coefficients");
    std::vector<LElem> out;
    if (F.size() == 1) return out;
    find_roots(F, zero(), 0, 0, out);
    for (const auto& r : out)
        if (!is_zero(eval(F, r))) throw PrecisionExhausted("a root failed verification");
    std::vector<std::pair<std::vector<mpz_class>, size_t>> keyed;
    keyed.reserve(out.size());
    for (size_t i = 0; i < out.size(); ++i) keyed.emplace_back(canonical_key(out[i]), i);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<LElem> sorted;
    sorted.reserve(out.size());
    for (const auto& [key, i] : keyed) sorted.push_back(out[i]);
    return sorted;
}

std::vector<LElem> LocalField::roots_of(const PadicPolynomial& F) const {
    return roots_of(lift_poly(F));
}

// ---- embeddings ----------------------------------------------------------

Embedding make_embedding(const LocalField& dom, const LocalField& cod, const LElem& root) {
    Embedding emb;
    emb.root = root;
    emb.powers.resize(dom.degree());
    emb.powers[0] = cod.one();
    for (int k = 1; k < dom.degree(); ++k) emb.powers[k] = cod.mul(emb.powers[k - 1], root);
    return emb;
}

LElem apply_embedding(const LocalField& dom, const LocalField& cod, const Embedding& emb,
                      const LElem& x) {
    const auto a = dom.power_coords(x);
    LElem acc = cod.zero();
    for (size_t k = 0; k < a.size(); ++k) acc = cod.add(acc, cod.scale(emb.powers[k], a[k]));
    return acc;
}

std::vector<Embedding> embeddings(const LocalField& E, const LocalField& L) {
    if (E.p() != L.p()) throw std::invalid_argument("fields over different primes");
    std::vector<Embedding> out;
    for (const auto& r : L.roots_of(E.minpoly())) out.push_back(make_embedding(E, L, r));
    return out;
}

int krasner_match(const LocalField& L, const std::vector<LElem>& roots, const LElem& x) {
    if (roots.empty()) throw std::invalid_argument("krasner_match: no candidates");
    long delta = 0;
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j)
            delta = std::max(delta, L.valuation(L.sub(roots[i], roots[j])));
    int found = -1;
    for (size_t j = 0; j < roots.size(); ++j) {
        if (L.valuation_lb(L.sub(x, roots[j])) > delta) {
            if (found >= 0) throw PrecisionExhausted("match inside the separation radius is ambiguous");
            found = static_cast<int>(j);
        }
    }
    if (found < 0) throw PrecisionExhausted("no candidate within the separation radius");
    return found;
}

// ---- Galois context ------------------------------------------------------

LElem GaloisContext::apply_hom(int t, const LElem& x) const {
    return apply_embedding(*input_fields[hom_factor[t]], *field, homs[t], x);
}

LElem GaloisContext::apply_auto(int g, const LElem& x) const {
    return apply_embedding(*field, *field, autos[g], x);
}

namespace {

// Validates the inertia payload: subgroup axioms, normality, that the
// Frobenius lift generates the residue quotient, that each factor's (e, f)
// matches its stabilizer cosets, and that any stored component partition
// agrees with the coset-derived one.
void check_inertia(const GaloisContext& ctx) {
    const int n = ctx.order;
    std::vector<bool> in_i(n, false);
    if (ctx.inertia.empty()) throw std::invalid_argument("inertia subgroup is empty");
    for (int x : ctx.inertia) {
        if (x < 0 || x >= n) throw std::invalid_argument("inertia element out of range");
        if (in_i[x]) throw std::invalid_argument("inertia element repeated");
        in_i[x] = true;
    }
    if (!in_i[ctx.id]) throw std::invalid_argument("inertia must contain the identity");
    for (int a : ctx.inertia)
        for (int b : ctx.inertia)
            if (!in_i[ctx.mult[a][b]]) throw std::invalid_argument("inertia is not closed");
    for (int g = 0; g < n; ++g)
        for (int x : ctx.inertia)
            if (!in_i[ctx.mult[ctx.mult[g][x]][ctx.inv[g]]])
                throw std::invalid_argument("inertia is not normal");
    const int isize = static_cast<int>(ctx.inertia.size());
    if (n % isize != 0) throw std::invalid_argument("inertia order must divide the group order");
    if (ctx.frob_lift < 0 || ctx.frob_lift >= n)
        throw std::invalid_argument("Frobenius lift out of range");
    std::vector<bool> seen(n, false);
    int g = ctx.id;
    for (int k = 0; k < n / isize; ++k) {
        for (int x : ctx.inertia) {
            const int y = ctx.mult[g][x];
            if (seen[y])
                throw std::invalid_argument("Frobenius lift does not generate the residue quotient");
            seen[y] = true;
        }
        g = ctx.mult[ctx.frob_lift][g];
    }
    for (const auto& fac : ctx.factors) {
        std::vector<int> stab;
        for (int a = 0; a < n; ++a)
            if (ctx.act(a, fac.offset) == fac.offset) stab.push_back(a);
        std::vector<bool> si(n, false);
        int si_size = 0;
        for (int s : stab)
            for (int x : ctx.inertia) {
                const int y = ctx.mult[s][x];
                if (!si[y]) {
                    si[y] = true;
                    ++si_size;
                }
            }
        if (fac.f != n / si_size || fac.e != si_size / static_cast<int>(stab.size()))
            throw std::invalid_argument("factor (e, f) disagrees with the inertia cosets");
    }
    if (ctx.has_components) {
        const ComponentSpec derived = components_from_inertia(ctx);
        // compare partitions and the Frobenius step by canonical fiber reps
        std::vector<int> smin(ctx.components.size(), -1), dmin(derived.components.size(), -1);
        for (int t = ctx.hom_count - 1; t >= 0; --t) {
            smin[ctx.hom_component[t]] = t;
            dmin[derived.hom_component[t]] = t;
        }
        for (int t = 0; t < ctx.hom_count; ++t) {
            if (smin[ctx.hom_component[t]] != dmin[derived.hom_component[t]])
                throw std::invalid_argument("component partition disagrees with the inertia cosets");
            const int sn = smin[ctx.components[ctx.hom_component[t]].frob_next];
            const int dn = dmin[derived.components[derived.hom_component[t]].frob_next];
            if (sn != dn)
                throw std::invalid_argument("component Frobenius disagrees with the inertia cosets");
        }
    }
}

GaloisContext build_context(std::shared_ptr<const LocalField> L,
                            std::vector<std::shared_ptr<const LocalField>> inputs,
                            const std::vector<std::vector<LElem>>& input_roots,
                            const std::vector<LElem>& auto_roots) {
    const LocalField& K = *L;
    GaloisContext ctx;
    ctx.field = L;
    ctx.input_fields = inputs;
    const int d = K.degree();
    ctx.order = d;
    for (const auto& r : auto_roots) ctx.autos.push_back(make_embedding(K, K, r));
    ctx.id = krasner_match(K, auto_roots, K.theta());
    ctx.mult.assign(d, std::vector<int>(d, 0));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            ctx.mult[a][b] =
                krasner_match(K, auto_roots, apply_embedding(K, K, ctx.autos[a], auto_roots[b]));
    ctx.inv.assign(d, 0);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (ctx.mult[a][b] == ctx.id) ctx.inv[a] = b;

    int off = 0;
    for (size_t m = 0; m < inputs.size(); ++m) {
        ctx.factors.push_back({off, inputs[m]->degree(), inputs[m]->e(), inputs[m]->f()});
        for (const auto& r : input_roots[m]) {
            ctx.homs.push_back(make_embedding(*inputs[m], K, r));
            ctx.hom_factor.push_back(static_cast<int>(m));
        }
        off += inputs[m]->degree();
    }
    ctx.hom_count = off;
    ctx.hom_action.assign(d, std::vector<int>(off, 0));
    for (int g = 0; g < d; ++g)
        for (size_t m = 0; m < inputs.size(); ++m) {
            const int o = ctx.factors[m].offset;
            for (size_t t = 0; t < input_roots[m].size(); ++t) {
                LElem img = apply_embedding(K, K, ctx.autos[g], input_roots[m][t]);
                ctx.hom_action[g][o + static_cast<int>(t)] =
                    o + krasner_match(K, input_roots[m], img);
            }
        }

    // crystalline components: embeddings of each factor's unramified core
    ctx.hom_component.assign(off, 0);
    std::optional<LocalField> H; // unramified replica of K's coefficient ring
    for (size_t m = 0; m < inputs.size(); ++m) {
        const int fm = inputs[m]->f();
        const int o = ctx.factors[m].offset;
        const int base_ci = static_cast<int>(ctx.components.size());
        if (fm == 1) {
            ctx.components.push_back({static_cast<int>(m), base_ci});
            for (int t = 0; t < inputs[m]->degree(); ++t) ctx.hom_component[o + t] = base_ci;
            continue;
        }
        if (!H) {
            WElem a0(K.f(), PadicNumber::zero(K.p(), K.precision()));
            a0[0] = PadicNumber::from_long(K.p(), -K.p(), K.precision());
            H.emplace(K.p(), K.f(), std::vector<WElem>{a0}, K.precision());
        }
        std::vector<PadicNumber> gm;
        for (const auto& c : inputs[m]->residue_poly())
            gm.push_back(PadicNumber::from_integer(K.p(), c, K.precision()));
        auto wr = H->roots_of(PadicPolynomial(std::move(gm)));
        if (static_cast<int>(wr.size()) != fm)
            throw PrecisionExhausted("unramified core of " + inputs[m]->describe() +
                                     " does not split in the context field");
        for (int k = 0; k < fm; ++k) {
            LElem s = H->from_w(H->w_frobenius(wr[k][0]));
            ctx.components.push_back({static_cast<int>(m), base_ci + krasner_match(*H, wr, s)});
        }
        std::vector<LElem> wrK;
        for (const auto& w : wr) wrK.push_back(K.from_w(w[0]));
        for (int t = 0; t < inputs[m]->degree(); ++t) {
            LElem img = ctx.apply_hom(o + t, inputs[m]->u_gen());
            ctx.hom_component[o + t] = base_ci + krasner_match(K, wrK, img);
        }
    }
    ctx.has_components = true;

    // inertia = automorphisms trivial on the residue field; the Frobenius
    // lift is the first automorphism matching u -> u^p there
    if (K.f() == 1) {
        ctx.inertia.resize(d);
        std::iota(ctx.inertia.begin(), ctx.inertia.end(), 0);
        ctx.frob_lift = ctx.id;
    } else {
        const LElem uK = K.u_gen();
        const LElem fu = K.from_w(K.w_frobenius(K.w_u()));
        ctx.frob_lift = -1;
        for (int g = 0; g < d; ++g) {
            const LElem gu = ctx.apply_auto(g, uK);
            if (K.valuation_lb(K.sub(gu, uK)) >= 1) ctx.inertia.push_back(g);
            if (ctx.frob_lift < 0 && K.valuation_lb(K.sub(gu, fu)) >= 1) ctx.frob_lift = g;
        }
    }
    if (static_cast<int>(ctx.inertia.size()) * K.f() != d || ctx.frob_lift < 0)
        throw PrecisionExhausted("inertia bookkeeping does not match the tower shape");
    ctx.has_inertia = true;
    check_inertia(ctx);
    return ctx;
}

std::optional<GaloisContext> try_candidate(LocalField&& cand,
                                           const std::vector<const LocalField*>& fields) {
    auto L = std::make_shared<LocalField>(std::move(cand));
    std::vector<std::vector<LElem>> input_roots;
    std::vector<std::shared_ptr<const LocalField>> inputs;
    for (const auto* E : fields) {
        auto rs = L->roots_of(E->minpoly());
        if (static_cast<int>(rs.size()) != E->degree()) return std::nullopt;
        input_roots.push_back(std::move(rs));
        inputs.push_back(std::make_shared<LocalField>(*E));
    }
    auto auto_roots = L->roots_of(L->minpoly());
    if (static_cast<int>(auto_roots.size()) != L->degree()) return std::nullopt;
    return build_context(L, std::move(inputs), input_roots, auto_roots);
}

LocalField rebase_tower(const LocalField& E, int fprime, long prec) {
    if (fprime == E.f()) return LocalField(E.p(), E.f(), E.eisenstein(), prec);
    WElem a0(fprime, PadicNumber::zero(E.p(), prec));
    a0[0] = PadicNumber::from_long(E.p(), -E.p(), prec);
    LocalField H(E.p(), fprime, {a0}, prec);
    std::vector<PadicNumber> gm;
    for (const auto& c : E.residue_poly()) gm.push_back(PadicNumber::from_integer(E.p(), c, prec));
    auto rs = H.roots_of(PadicPolynomial(std::move(gm)));
    if (rs.empty())
        throw PrecisionExhausted("unramified core failed to embed while rebasing " + E.describe());
    const LElem& img = rs[0];
    std::vector<WElem> eis;
    for (int j = 0; j < E.e(); ++j) {
        LElem acc = H.zero();
        for (int i = E.f() - 1; i >= 0; --i)
            acc = H.add(H.mul(acc, img), H.from_padic(E.eisenstein()[j][i]));
        eis.push_back(acc[0]);
    }
    return LocalField(E.p(), fprime, std::move(eis), prec);
}

} // namespace

GaloisContext splitting_context(const LocalField& E, int degree_bound) {
    return splitting_context_multi({&E}, degree_bound);
}

GaloisContext splitting_context_multi(const std::vector<const LocalField*>& fields,
                                      int degree_bound) {
    if (fields.empty()) throw std::invalid_argument("splitting context needs at least one field");
    const long p = fields[0]->p();
    long prec = 0;
    long lcm_e = 1, lcm_f = 1, lcm_n = 1;
    for (const auto* E : fields) {
        if (E->p() != p) throw std::invalid_argument("fields over different primes");
        prec = std::max(prec, E->precision());
        lcm_e = std::lcm(lcm_e, static_cast<long>(E->e()));
        lcm_f = std::lcm(lcm_f, static_cast<long>(E->f()));
        lcm_n = std::lcm(lcm_n, static_cast<long>(E->degree()));
    }

    for (long d = lcm_n; d <= degree_bound; d += lcm_n) {
        for (long ep = 1; ep <= d; ++ep) {
            if (d % ep != 0) continue;
            const long fpr = d / ep;
            if (ep % lcm_e != 0 || fpr % lcm_f != 0) continue;
            std::vector<LocalField> cands;
            // (a) inputs of matching ramification, rebased over the larger core
            for (const auto* E : fields)
                if (E->e() == ep) cands.push_back(rebase_tower(*E, static_cast<int>(fpr), prec));
            if (ep == 1) {
                WElem a0(fpr, PadicNumber::zero(p, prec));
                a0[0] = PadicNumber::from_long(p, -p, prec);
                cands.emplace_back(p, static_cast<int>(fpr), std::vector<WElem>{a0}, prec);
            } else {
                // (b) uniformizer binomials x^ep - p*w over the core
                const long wmax = p * p * p;
                for (long mag = 1; mag <= wmax; ++mag) {
                    if (mag % p == 0) continue;
                    for (long s : {1L, -1L}) {
                        std::vector<mpz_class> eis(ep + 1, 0);
                        eis[0] = mpz_class(-p) * s * mag;
                        eis[ep] = 1;
                        cands.push_back(LocalField::make(p, static_cast<int>(fpr), eis, prec));
                    }
                }
                // (c) tame family x^ep - p*zeta^j, zeta a residue generator
                const long qpr = checked_pow_long(p, static_cast<int>(fpr));
                const long jmax = std::gcd(ep, qpr - 1);
                if (jmax > 1) {
                    const auto gen = residue_generator(p, static_cast<int>(fpr));
                    WElem a0(fpr, PadicNumber::zero(p, prec));
                    LocalField probe(p, static_cast<int>(fpr),
                                     std::vector<WElem>{[&] {
                                         WElem t = a0;
                                         t[0] = PadicNumber::from_long(p, -p, prec);
                                         return t;
                                     }()},
                                     prec);
                    WElem zeta = probe.w_zero();
                    for (size_t i = 0; i < gen.size(); ++i)
                        zeta[i] = PadicNumber::from_long(p, gen[i], prec);
                    for (long j = 1; j < jmax; ++j) {
                        std::vector<WElem> eis(ep, a0);
                        eis[0] = probe.w_scale(probe.w_pow(zeta, j),
                                               PadicNumber::from_long(p, -p, prec));
                        cands.emplace_back(p, static_cast<int>(fpr), std::move(eis), prec);
                    }
                }
            }
            for (auto& cand : cands)
                if (auto got = try_candidate(std::move(cand), fields)) return std::move(*got);
        }
    }
    std::ostringstream os;
    os << "no Galois splitting tower of degree <= " << degree_bound << " over p=" << p << " for";
    for (const auto* E : fields) os << " " << E->describe();
    os << "; raise the degree bound";
    throw DegreeBoundExceeded(os.str());
}

// ---- combinatorial contexts ----------------------------------------------

ComponentSpec components_from_inertia(const GaloisContext& ctx) {
    if (!ctx.has_inertia) throw std::invalid_argument("context carries no inertia data");
    ComponentSpec spec;
    spec.hom_component.assign(ctx.hom_count, -1);
    for (size_t m = 0; m < ctx.factors.size(); ++m) {
        const auto& fac = ctx.factors[m];
        std::vector<int> stab;
        for (int a = 0; a < ctx.order; ++a)
            if (ctx.act(a, fac.offset) == fac.offset) stab.push_back(a);
        // orbit of the offset hom under S*I; translating it by a hom's
        // representative gives that hom's component as a set
        std::vector<int> base;
        {
            std::vector<bool> seen(fac.degree, false);
            for (int s : stab)
                for (int x : ctx.inertia) {
                    const int b = ctx.act(ctx.mult[s][x], fac.offset);
                    if (!seen[b - fac.offset]) {
                        seen[b - fac.offset] = true;
                        base.push_back(b);
                    }
                }
        }
        std::vector<int> rep(fac.degree, -1);
        for (int g = 0; g < ctx.order; ++g) {
            const int t = ctx.act(g, fac.offset) - fac.offset;
            if (rep[t] < 0) rep[t] = g;
        }
        // label = smallest hom of the component
        std::vector<int> label(fac.degree);
        for (int t = 0; t < fac.degree; ++t) {
            int best = ctx.hom_count;
            for (int b : base) best = std::min(best, ctx.act(rep[t], b));
            label[t] = best;
        }
        std::map<int, int> comp_of_label;
        for (int t = 0; t < fac.degree; ++t) comp_of_label.emplace(label[t], 0);
        int next = static_cast<int>(spec.components.size());
        for (auto& [lab, idx] : comp_of_label) idx = next++;
        for (int t = 0; t < fac.degree; ++t)
            spec.hom_component[fac.offset + t] = comp_of_label.at(label[t]);
        for (const auto& [lab, idx] : comp_of_label) {
            const int img = ctx.act(ctx.frob_lift, lab);
            spec.components.push_back(
                {static_cast<int>(m), comp_of_label.at(label[img - fac.offset])});
        }
    }
    return spec;
}

GaloisContext combinatorial_context(std::vector<std::vector<int>> mult,
                                    std::vector<std::vector<int>> hom_action,
                                    std::vector<std::pair<int, int>> factor_ef,
                                    const std::optional<ComponentSpec>& components_opt,
                                    const std::optional<InertiaSpec>& inertia_opt) {
    GaloisContext ctx;
    const int m = static_cast<int>(mult.size());
    if (m < 1) throw std::invalid_argument("group table is empty");
    for (const auto& row : mult) {
        if (static_cast<int>(row.size()) != m)
            throw std::invalid_argument("group table is not square");
        for (int x : row)
            if (x < 0 || x >= m) throw std::invalid_argument("group table entry out of range");
    }
    // Latin square
    for (int a = 0; a < m; ++a) {
        std::vector<bool> seen_row(m, false), seen_col(m, false);
        for (int b = 0; b < m; ++b) {
            if (seen_row[mult[a][b]]) throw std::invalid_argument("group row is not a permutation");
            seen_row[mult[a][b]] = true;
            if (seen_col[mult[b][a]]) throw std::invalid_argument("group column is not a permutation");
            seen_col[mult[b][a]] = true;
        }
    }
    // associativity
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                if (mult[mult[a][b]][c] != mult[a][mult[b][c]])
                    throw std::invalid_argument("group table is not associative");
    int id = -1;
    for (int a = 0; a < m && id < 0; ++a) {
        bool ok = true;
        for (int b = 0; b < m; ++b)
            if (mult[a][b] != b || mult[b][a] != b) ok = false;
        if (ok) id = a;
    }
    if (id < 0) throw std::invalid_argument("group table has no identity");
    ctx.order = m;
    ctx.id = id;
    ctx.inv.assign(m, -1);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (mult[a][b] == id) ctx.inv[a] = b;
    for (int a = 0; a < m; ++a)
        if (ctx.inv[a] < 0) throw std::invalid_argument("group element has no inverse");
    ctx.mult = std::move(mult);

    if (static_cast<int>(hom_action.size()) != m)
        throw std::invalid_argument("hom action needs one row per group element");
    const int homs = hom_action.empty() ? 0 : static_cast<int>(hom_action[0].size());
    if (homs < 1) throw std::invalid_argument("hom action is empty");
    for (const auto& row : hom_action) {
        if (static_cast<int>(row.size()) != homs)
            throw std::invalid_argument("hom action rows have unequal length");
        std::vector<bool> seen(homs, false);
        for (int x : row) {
            if (x < 0 || x >= homs || seen[x])
                throw std::invalid_argument("hom action row is not a permutation");
            seen[x] = true;
        }
    }
    for (int t = 0; t < homs; ++t)
        if (hom_action[id][t] != t) throw std::invalid_argument("identity must act trivially");
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int t = 0; t < homs; ++t)
                if (hom_action[a][hom_action[b][t]] != hom_action[ctx.mult[a][b]][t])
                    throw std::invalid_argument("hom action is not a group action");
    ctx.hom_action = std::move(hom_action);
    ctx.hom_count = homs;

    if (factor_ef.empty()) factor_ef.push_back({1, homs});
    int off = 0;
    bool all_single_component = true;
    for (const auto& [e, f] : factor_ef) {
        if (e < 1 || f < 1) throw std::invalid_argument("factor degrees must be positive");
        ctx.factors.push_back({off, e * f, e, f});
        for (int t = 0; t < e * f; ++t) ctx.hom_factor.push_back(static_cast<int>(ctx.factors.size()) - 1);
        off += e * f;
        if (f != 1) all_single_component = false;
    }
    if (off != homs)
        throw std::invalid_argument("factor degrees do not sum to the hom count");

    if (components_opt) {
        const auto& spec = *components_opt;
        if (static_cast<int>(spec.hom_component.size()) != homs)
            throw std::invalid_argument("hom_component needs one entry per hom");
        const int nc = static_cast<int>(spec.components.size());
        std::vector<int> per_factor(ctx.factors.size(), 0);
        for (const auto& comp : spec.components) {
            if (comp.factor < 0 || comp.factor >= static_cast<int>(ctx.factors.size()))
                throw std::invalid_argument("component factor out of range");
            if (comp.frob_next < 0 || comp.frob_next >= nc)
                throw std::invalid_argument("component successor out of range");
            if (spec.components[comp.frob_next].factor != comp.factor)
                throw std::invalid_argument("Frobenius successor must stay inside its factor");
            ++per_factor[comp.factor];
        }
        for (size_t i = 0; i < ctx.factors.size(); ++i)
            if (per_factor[i] != ctx.factors[i].f)
                throw std::invalid_argument("factor needs exactly f components");
        std::vector<int> fiber(nc, 0);
        for (int t = 0; t < homs; ++t) {
            int ci = spec.hom_component[t];
            if (ci < 0 || ci >= nc) throw std::invalid_argument("hom_component entry out of range");
            if (spec.components[ci].factor != ctx.hom_factor[t])
                throw std::invalid_argument("hom assigned to a component of another factor");
            ++fiber[ci];
        }
        for (int ci = 0; ci < nc; ++ci)
            if (fiber[ci] != ctx.factors[spec.components[ci].factor].e)
                throw std::invalid_argument("component fiber must have size e");
        ctx.hom_component = spec.hom_component;
        ctx.components = spec.components;
        ctx.has_components = true;
    } else if (all_single_component) {
        ctx.hom_component.assign(homs, 0);
        for (size_t i = 0; i < ctx.factors.size(); ++i) {
            int ci = static_cast<int>(ctx.components.size());
            ctx.components.push_back({static_cast<int>(i), ci});
            for (int t = 0; t < ctx.factors[i].degree; ++t)
                ctx.hom_component[ctx.factors[i].offset + t] = ci;
        }
        ctx.has_components = true;
    } else {
        ctx.has_components = false;
    }

    if (inertia_opt) {
        ctx.inertia = inertia_opt->elements;
        std::sort(ctx.inertia.begin(), ctx.inertia.end());
        ctx.frob_lift = inertia_opt->frob_lift;
        ctx.has_inertia = true;
        check_inertia(ctx); // validates the group data (and any explicit spec)
        if (!ctx.has_components) {
            ComponentSpec derived = components_from_inertia(ctx);
            ctx.hom_component = std::move(derived.hom_component);
            ctx.components = std::move(derived.components);
            ctx.has_components = true;
        }
    } else if (m == 1) {
        // only the trivial group forces its inertia; factors with f == 1 do
        // not pin down the level's ramification (their compositum may still
        // grow a residue extension)
        ctx.inertia = {ctx.id};
        ctx.frob_lift = ctx.id;
        ctx.has_inertia = true;
        check_inertia(ctx);
    }
    return ctx;
}

} // namespace cmbkf::localfield
