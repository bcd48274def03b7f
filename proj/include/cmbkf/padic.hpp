#ifndef CMBKF_PADIC_HPP
#define CMBKF_PADIC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cmbkf/errors.hpp"
#include "cmbkf/rational.hpp"

namespace cmbkf::padic {

/*
 * Element of Q_p known to absolute precision N: the value is determined
 * modulo p^N.  Stored as p^val * unit with the unit reduced modulo
 * p^(N - val), so the relative precision is N - val.
 *
 * Three states, kept distinct on purpose:
 *   - exact zero:        the mathematical zero, infinitely precise;
 *   - determined:        val < N and p does not divide the unit;
 *   - zero-at-precision: the element is congruent to 0 mod p^N but not
 *                        known to be zero.  Its valuation is undetermined
 *                        (>= N), and asking for it throws PrecisionExhausted.
 *
 * Negative valuations are allowed (elements of Q_p, not just Z_p); the
 * representative() accessor, which reduces modulo p^N, only exists for
 * val >= 0.
 *
 * Arithmetic propagates precision the usual way: addition keeps the minimum
 * absolute precision, multiplication the minimum relative precision.
 */
class PadicNumber {
public:
    static constexpr long kDefaultPrecision = 64;

    PadicNumber() : p_(2), prec_(kDefaultPrecision), val_(0), exact_zero_(true), unit_(0) {}

    static PadicNumber zero(long p, long prec = kDefaultPrecision);
    static PadicNumber from_integer(long p, const mpz_class& m, long prec = kDefaultPrecision);
    static PadicNumber from_long(long p, long m, long prec = kDefaultPrecision);
    // value = p^val * unit; unit need not be reduced or coprime to p.
    static PadicNumber from_unit_val(long p, const mpz_class& unit, long val, long prec);
    // zero-at-precision element: congruent to 0 mod p^prec, valuation unknown.
    static PadicNumber inexact_zero(long p, long prec);

    long prime() const { return p_; }
    long precision() const { return prec_; }

    bool is_exact_zero() const { return exact_zero_; }
    // true for exact zero and for zero-at-precision
    bool is_zero_at_precision() const;
    bool valuation_determined() const { return !exact_zero_ && !is_zero_at_precision(); }

    // Throws std::domain_error on exact zero, PrecisionExhausted when the
    // valuation is not determined at this precision.
    long valuation() const;
    std::optional<long> valuation_opt() const;

    bool is_unit() const { return valuation_determined() && val_ == 0; }

    // Unit part, reduced modulo p^(precision - valuation).
    const mpz_class& unit_part() const { return unit_; }

    // unit * p^val reduced modulo p^precision; requires val >= 0.
    mpz_class representative() const;

    PadicNumber with_precision(long prec) const; // caps to min(prec, current)
    PadicNumber shifted(long k) const;           // multiply by p^k (exact)

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
    PadicNumber operator-() const;

    PadicNumber inverse() const;
    PadicNumber pow(long k) const;

    // a - b is zero at the shared precision (or exactly zero).
    friend bool congruent(const PadicNumber& a, const PadicNumber& b);

    std::string str() const;

private:
    PadicNumber(long p, long prec, long val, bool exact_zero, mpz_class unit)
        : p_(p), prec_(prec), val_(val), exact_zero_(exact_zero), unit_(std::move(unit)) {}

    void normalize();
    static void check_compatible(const PadicNumber& a, const PadicNumber& b);

    long p_;
    long prec_;
    long val_;
    bool exact_zero_;
    mpz_class unit_;
};

mpz_class pow_p(long p, long e); // p^e as mpz, e >= 0

/*
 * Dense polynomial over Q_p, coefficient of x^i at index i.  The coefficient
 * vector is kept as given; degree() ignores trailing exact zeros.
 */
class PadicPolynomial {
public:
    PadicPolynomial() = default;
    explicit PadicPolynomial(std::vector<PadicNumber> coeffs) : c_(std::move(coeffs)) {}
    static PadicPolynomial from_integers(long p, const std::vector<long>& coeffs,
                                         long prec = PadicNumber::kDefaultPrecision);

    const std::vector<PadicNumber>& coeffs() const { return c_; }
    long degree() const; // -1 for the zero polynomial

    PadicNumber eval(const PadicNumber& x) const;
    PadicPolynomial derivative() const;

    friend PadicPolynomial operator*(const PadicPolynomial& a, const PadicPolynomial& b);
    friend PadicPolynomial operator+(const PadicPolynomial& a, const PadicPolynomial& b);

private:
    std::vector<PadicNumber> c_;
};

/*
 * Newton iteration from an approximate simple root.  Requires the strict
 * condition v(f(r0)) > 2 v(f'(r0)); the returned r satisfies
 * f(r) == 0 mod p^target_prec and agrees with r0 within the Hensel radius
 * v(f(r0)) - v(f'(r0)).  Convergence is quadratic, so the iteration count
 * is logarithmic in the precision gain.
 */
PadicNumber hensel_lift(const PadicPolynomial& f, const PadicNumber& r0, long target_prec);

// One slope of a Newton polygon: `mult` roots of valuation `val` over an
// algebraic closure.  Slopes are listed in ascending valuation order and
// their multiplicities sum to deg f minus the order of vanishing at 0.
struct NewtonSlope {
    Rational val;
    long mult;
    friend bool operator==(const NewtonSlope& a, const NewtonSlope& b) {
        return a.val == b.val && a.mult == b.mult;
    }
};

// Lower convex hull of {(i, v(a_i))}.  Throws PrecisionExhausted when a
// coefficient whose valuation is undetermined could lie strictly below the
// hull computed from the determined ones.
std::vector<NewtonSlope> newton_slopes(const PadicPolynomial& f);

/*
 * Helpers over F_p[x] used to present residue fields.  Polynomials are
 * coefficient vectors (index = degree) with entries reduced to [0, p).
 */
namespace fp {

using Poly = std::vector<long>;

Poly trim(Poly a);
Poly mul(const Poly& a, const Poly& b, long p);
Poly mod(Poly a, const Poly& m, long p);
Poly add(const Poly& a, const Poly& b, long p);
Poly sub(const Poly& a, const Poly& b, long p);
bool is_zero(const Poly& a);
// inverse of a modulo m (extended Euclid); throws std::domain_error if not coprime
Poly inverse_mod(const Poly& a, const Poly& m, long p);
bool irreducible(const Poly& a, long p);

// The monic irreducible of degree f over F_p whose non-leading coefficient
// word a_{f-1} p^{f-1} + ... + a_0 is smallest.  This pins the presentation
// of the unramified extension of each degree.
Poly smallest_irreducible(long p, int f);

} // namespace fp

} // namespace cmbkf::padic

#endif
