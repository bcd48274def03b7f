#include "cmbkf/drlattice.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cmbkf::drlattice {

Series Series::from_coeffs(long N, std::vector<mpq_class> coeffs) {
    Series s(N);
    for (size_t i = 0; i < coeffs.size() && i < static_cast<size_t>(N); ++i)
        s.c_[i] = std::move(coeffs[i]);
    return s;
}

Series Series::constant(long N, const mpq_class& a) {
    Series s(N);
    s.c_[0] = a;
    return s;
}

Series Series::monomial(long N, long k, const mpq_class& a) {
    Series s(N);
    if (k < 0 || k >= N) throw std::invalid_argument("Series::monomial: exponent out of range");
    s.c_[static_cast<size_t>(k)] = a;
    return s;
}

bool Series::is_zero() const {
    for (const auto& x : c_) if (x != 0) return false;
    return true;
}

std::optional<long> Series::valuation() const {
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) return static_cast<long>(i);
    return std::nullopt;
}

Series Series::inverse() const {
    if (!is_unit()) throw std::domain_error("Series::inverse: not a unit");
    long N = truncation();
    Series r(N);
    mpq_class u0 = 1 / c_[0];
    r.c_[0] = u0;
    // forward substitution on (sum a_i xi^i)(sum b_j xi^j) = 1
    for (long k = 1; k < N; ++k) {
        mpq_class acc = 0;
        for (long i = 1; i <= k; ++i)
            acc += c_[static_cast<size_t>(i)] * r.c_[static_cast<size_t>(k - i)];
        r.c_[static_cast<size_t>(k)] = -u0 * acc;
    }
    return r;
}

Series Series::shifted(long k) const {
    long N = truncation();
    Series r(N);
    if (k >= 0) {
        for (long i = 0; i + k < N; ++i)
            r.c_[static_cast<size_t>(i + k)] = c_[static_cast<size_t>(i)];
    } else {
        long d = -k;
        auto v = valuation();
        if (!is_zero() && (!v || *v < d))
            throw std::domain_error("Series::shifted: not divisible by xi^" + std::to_string(d));
        for (long i = d; i < N; ++i)
            r.c_[static_cast<size_t>(i - d)] = c_[static_cast<size_t>(i)];
        // the top d coefficients of the quotient are not determined by the
        // truncated dividend; zero is a valid lift
    }
    return r;
}

static void check_same_truncation(const Series& a, const Series& b) {
    if (a.truncation() != b.truncation())
        throw std::invalid_argument("Series: truncation mismatch");
}

Series operator+(const Series& a, const Series& b) {
    check_same_truncation(a, b);
    Series r(a.truncation());
    for (long i = 0; i < a.truncation(); ++i)
        r.c_[static_cast<size_t>(i)] = a.c_[static_cast<size_t>(i)] + b.c_[static_cast<size_t>(i)];
    return r;
}

Series operator-(const Series& a, const Series& b) {
    check_same_truncation(a, b);
    Series r(a.truncation());
    for (long i = 0; i < a.truncation(); ++i)
        r.c_[static_cast<size_t>(i)] = a.c_[static_cast<size_t>(i)] - b.c_[static_cast<size_t>(i)];
    return r;
}

Series Series::operator-() const {
    Series r(truncation());
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = -c_[i];
    return r;
}

Series operator*(const Series& a, const Series& b) {
    check_same_truncation(a, b);
    long N = a.truncation();
    Series r(N);
    for (long i = 0; i < N; ++i) {
        if (a.c_[static_cast<size_t>(i)] == 0) continue;
        for (long j = 0; i + j < N; ++j)
            r.c_[static_cast<size_t>(i + j)] += a.c_[static_cast<size_t>(i)] * b.c_[static_cast<size_t>(j)];
    }
    return r;
}

std::string Series::str() const {
    std::ostringstream os;
    bool any = false;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (any) os << " + ";
        os << c_[i].get_str();
        if (i > 0) os << "*xi^" << i;
        any = true;
    }
    if (!any) os << "0";
    os << " + O(xi^" << c_.size() << ")";
    return os.str();
}

// ---------------------------------------------------------------------------

Matrix Matrix::identity(long N, size_t n) {
    Matrix m(N, n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = Series::constant(N, 1);
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows() || a.truncation() != b.truncation())
        throw std::invalid_argument("Matrix: shape or truncation mismatch");
    Matrix r(a.truncation(), a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            if (a.at(i, k).is_zero()) continue;
            for (size_t j = 0; j < b.cols(); ++j)
                r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
        }
    return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.N_ != b.N_) return false;
    return a.a_ == b.a_;
}

Series determinant(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
    size_t n = m.rows();
    if (n == 0) return Series::constant(m.truncation(), 1);
    if (n == 1) return m.at(0, 0);
    Series acc(m.truncation());
    for (size_t j = 0; j < n; ++j) {
        if (m.at(0, j).is_zero()) continue;
        Matrix minor(m.truncation(), n - 1, n - 1);
        for (size_t i = 1; i < n; ++i) {
            size_t cc = 0;
            for (size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                minor.at(i - 1, cc++) = m.at(i, k);
            }
        }
        Series term = m.at(0, j) * determinant(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// ---------------------------------------------------------------------------

namespace {

void swap_rows(Matrix& m, size_t a, size_t b) {
    if (a == b) return;
    for (size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}

void swap_cols(Matrix& m, size_t a, size_t b) {
    if (a == b) return;
    for (size_t i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}

void scale_row(Matrix& m, size_t i, const Series& s) {
    for (size_t j = 0; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) * s;
}

// row_i -= q * row_k
void shear_row(Matrix& m, size_t i, size_t k, const Series& q) {
    for (size_t j = 0; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) - q * m.at(k, j);
}

void shear_col(Matrix& m, size_t j, size_t k, const Series& q) {
    for (size_t i = 0; i < m.rows(); ++i) m.at(i, j) = m.at(i, j) - q * m.at(i, k);
}

} // namespace

SnfResult snf(const Matrix& a, bool require_full_rank) {
    long N = a.truncation();
    size_t rows = a.rows(), cols = a.cols();
    size_t m = std::min(rows, cols);
    Matrix w = a;
    Matrix U = Matrix::identity(N, rows);
    Matrix V = Matrix::identity(N, cols);
    std::vector<long> div(m, N);

    for (size_t k = 0; k < m; ++k) {
        // pivot: minimal valuation in the remaining block, ties broken by
        // position so the reduction is deterministic
        long best = N;
        size_t bi = k, bj = k;
        for (size_t i = k; i < rows; ++i)
            for (size_t j = k; j < cols; ++j) {
                auto v = w.at(i, j).valuation();
                if (v && *v < best) { best = *v; bi = i; bj = j; }
            }
        if (best >= N) {
            if (require_full_rank)
                throw Singular("snf: block vanishes at truncation xi^" + std::to_string(N) +
                               " from position " + std::to_string(k));
            break; // remaining divisors stay at N
        }
        swap_rows(w, k, bi); swap_rows(U, k, bi);
        swap_cols(w, k, bj); swap_cols(V, k, bj);

        Series unit = w.at(k, k).shifted(-best);
        Series unit_inv = unit.inverse();
        scale_row(w, k, unit_inv); scale_row(U, k, unit_inv);
        // now w(k,k) = xi^best exactly; everything in its row and column is
        // divisible by it
        for (size_t i = k + 1; i < rows; ++i) {
            if (w.at(i, k).is_zero()) continue;
            Series q = w.at(i, k).shifted(-best);
            shear_row(w, i, k, q); shear_row(U, i, k, q);
        }
        for (size_t j = k + 1; j < cols; ++j) {
            if (w.at(k, j).is_zero()) continue;
            Series q = w.at(k, j).shifted(-best);
            shear_col(w, j, k, q); shear_col(V, j, k, q);
        }
        div[k] = best;
    }

    // divisors come out ascending; report them descending, folding the
    // reversal permutation into U and V
    std::vector<long> sorted = div;
    std::reverse(sorted.begin(), sorted.begin() + static_cast<long>(m));
    Matrix P = Matrix::identity(N, rows);
    Matrix Q = Matrix::identity(N, cols);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < rows; ++j)
            P.at(i, j) = (j == m - 1 - i) ? Series::constant(N, 1) : Series(N);
        for (size_t j = 0; j < cols; ++j)
            Q.at(j, i) = (j == m - 1 - i) ? Series::constant(N, 1) : Series(N);
    }
    return SnfResult{std::move(sorted), P * U, V * Q};
}

// ---------------------------------------------------------------------------

long Filtration::fil_dim(long j) const {
    long d = 0;
    for (long l : lambda)
        if (l + j <= 0) ++d;
    return d;
}

std::map<long, long> Filtration::graded() const {
    std::map<long, long> g;
    for (long l : lambda) g[-l] += 1;
    return g;
}

Filtration filtration(std::vector<long> lambda) {
    std::sort(lambda.begin(), lambda.end(), std::greater<long>());
    return Filtration{std::move(lambda)};
}

LatticePair make_lattice_pair(size_t n, std::vector<long> lambda) {
    if (lambda.size() != n) throw std::invalid_argument("lattice pair: rank mismatch");
    std::sort(lambda.begin(), lambda.end(), std::greater<long>());
    return LatticePair{n, std::move(lambda), std::nullopt, 0};
}

LatticePair make_lattice_pair(size_t n, std::vector<long> lambda, Matrix presentation, long shift) {
    LatticePair lp = make_lattice_pair(n, std::move(lambda));
    if (presentation.rows() != n || presentation.cols() != n)
        throw std::invalid_argument("lattice pair: presentation shape mismatch");
    SnfResult s = snf(presentation);
    std::vector<long> shifted;
    shifted.reserve(s.divisors.size());
    for (long d : s.divisors) shifted.push_back(d - shift);
    if (shifted != lp.lambda)
        throw std::invalid_argument("lattice pair: presentation divisors disagree with lambda");
    lp.presentation = std::move(presentation);
    lp.presentation_shift = shift;
    return lp;
}

CokernelReport cokernel_divisors(const Matrix& f) {
    SnfResult s = snf(f, /*require_full_rank=*/false);
    long N = f.truncation();
    size_t rank = 0;
    for (long d : s.divisors)
        if (d < N) ++rank;
    if (rank < f.cols())
        throw NotInjective("cokernel_divisors: matrix rank " + std::to_string(rank) +
                           " below column count " + std::to_string(f.cols()));
    CokernelReport rep;
    rep.divisors = s.divisors;
    rep.free = std::all_of(rep.divisors.begin(), rep.divisors.end(), [](long d) { return d == 0; });
    rep.free_rank = f.rows() - rank;
    return rep;
}

} // namespace cmbkf::drlattice
