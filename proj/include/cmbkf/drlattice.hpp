#ifndef CMBKF_DRLATTICE_HPP
#define CMBKF_DRLATTICE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cmbkf/errors.hpp"

namespace cmbkf::drlattice {

/*
 * Truncated power series ring F[[xi]]/xi^N over exact rationals.  All
 * coefficient arithmetic is exact, so zero tests are certified; the only
 * approximation is the truncation itself.  An element whose coefficients
 * all vanish is "zero at the truncation": its valuation is reported as
 * absent rather than as a number.
 */
class Series {
public:
    explicit Series(long N) : c_(static_cast<size_t>(N), 0) {}
    static Series from_coeffs(long N, std::vector<mpq_class> coeffs);
    static Series constant(long N, const mpq_class& a);
    static Series monomial(long N, long k, const mpq_class& a = 1);

    long truncation() const { return static_cast<long>(c_.size()); }
    const mpq_class& coeff(long i) const { return c_[static_cast<size_t>(i)]; }
    const std::vector<mpq_class>& coeffs() const { return c_; }

    bool is_zero() const;
    std::optional<long> valuation() const; // first nonzero index
    bool is_unit() const { return c_[0] != 0; }

    Series inverse() const;      // requires unit
    Series shifted(long k) const; // multiply by xi^k; k < 0 requires valuation >= -k

    friend Series operator+(const Series& a, const Series& b);
    friend Series operator-(const Series& a, const Series& b);
    friend Series operator*(const Series& a, const Series& b);
    Series operator-() const;
    friend bool operator==(const Series& a, const Series& b) { return a.c_ == b.c_; }

    std::string str() const;

private:
    std::vector<mpq_class> c_;
};

class Matrix {
public:
    Matrix(long N, size_t rows, size_t cols)
        : N_(N), rows_(rows), cols_(cols), a_(rows * cols, Series(N)) {}
    static Matrix identity(long N, size_t n);

    long truncation() const { return N_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Series& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const Series& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix& a, const Matrix& b);

private:
    long N_;
    size_t rows_, cols_;
    std::vector<Series> a_;
};

// Laplace expansion; fine for the small sizes this project meets.
Series determinant(const Matrix& m);

/*
 * Smith normal form over the truncated DVR: U * A * V = D with U, V
 * unimodular and D diagonal with entries xi^{d_1}, ..., xi^{d_m},
 * divisors sorted in descending order.  A diagonal position whose entire
 * remaining block vanishes at the truncation gets divisor N ("at least N").
 * With require_full_rank set, such a position raises Singular instead.
 */
struct SnfResult {
    std::vector<long> divisors; // descending; N means >= N (zero at truncation)
    Matrix left;                // U
    Matrix right;               // V
};

SnfResult snf(const Matrix& a, bool require_full_rank = true);

/*
 * Jump data of the filtration induced by a lattice with elementary
 * divisors lambda (sorted descending): Fil^j has dimension
 * #{i : lambda_i + j <= 0} and gr^j dimension #{i : lambda_i = -j}.
 */
struct Filtration {
    std::vector<long> lambda; // descending
    long rank() const { return static_cast<long>(lambda.size()); }
    long fil_dim(long j) const;
    std::map<long, long> graded() const; // omits zero entries
};

Filtration filtration(std::vector<long> lambda);

/*
 * A lattice pair: rank n together with the elementary divisors of the
 * second lattice against the standard one, optionally certified by an
 * explicit presentation matrix.  The presentation presents xi^shift * Xi
 * so that its entries live in the DVR even when some divisor is negative.
 */
struct LatticePair {
    size_t n = 0;
    std::vector<long> lambda; // descending
    std::optional<Matrix> presentation;
    long presentation_shift = 0;
};

LatticePair make_lattice_pair(size_t n, std::vector<long> lambda);
LatticePair make_lattice_pair(size_t n, std::vector<long> lambda, Matrix presentation, long shift);

/*
 * Cokernel of an injective map between free modules, given by its matrix in
 * adapted coordinates with entries in the DVR.  The cokernel is
 * R^{free_rank} + sum R/xi^{d_i}; it is free over the truncated ring exactly
 * when every divisor carried by the image rank is zero.
 */
struct CokernelReport {
    std::vector<long> divisors; // descending, one per column of the map
    bool free = false;
    size_t free_rank = 0;
};

CokernelReport cokernel_divisors(const Matrix& f);

} // namespace cmbkf::drlattice

#endif
