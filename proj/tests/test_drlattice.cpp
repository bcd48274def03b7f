#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cmbkf/drlattice.hpp"

using namespace cmbkf;
using namespace cmbkf::drlattice;

namespace {

std::mt19937 rng(911);

Series random_series(long N, int max_coeff = 4) {
    std::uniform_int_distribution<long> d(-max_coeff, max_coeff);
    std::vector<mpq_class> c;
    for (long i = 0; i < N; ++i) c.emplace_back(d(rng));
    return Series::from_coeffs(N, std::move(c));
}

Matrix random_matrix(long N, size_t n) {
    Matrix m(N, n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m.at(i, j) = random_series(N);
    return m;
}

// product of shears, swaps and unit scalings: unimodular by construction
Matrix random_unimodular(long N, size_t n) {
    Matrix m = Matrix::identity(N, n);
    std::uniform_int_distribution<size_t> idx(0, n - 1);
    std::uniform_int_distribution<long> coeff(-3, 3);
    for (int step = 0; step < 12; ++step) {
        size_t i = idx(rng), j = idx(rng);
        switch (rng() % 3) {
        case 0: { // row swap
            if (i != j)
                for (size_t k = 0; k < n; ++k) std::swap(m.at(i, k), m.at(j, k));
            break;
        }
        case 1: { // shear by a random series
            if (i == j) break;
            Series q = random_series(N, 2);
            for (size_t k = 0; k < n; ++k) m.at(i, k) = m.at(i, k) + q * m.at(j, k);
            break;
        }
        default: { // scale by a unit 1 + xi * (...)
            Series u = Series::constant(N, (rng() % 2) ? 1 : -1) + random_series(N, 2).shifted(1);
            for (size_t k = 0; k < n; ++k) m.at(i, k) = m.at(i, k) * u;
            break;
        }
        }
    }
    return m;
}

Matrix diag(long N, const std::vector<long>& exps) {
    Matrix m(N, exps.size(), exps.size());
    for (size_t i = 0; i < exps.size(); ++i)
        m.at(i, i) = Series::monomial(N, exps[i]);
    return m;
}

bool is_diagonal_with(const Matrix& m, const std::vector<long>& exps) {
    long N = m.truncation();
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            if (i == j && i < exps.size()) {
                Series want = exps[i] >= N ? Series(N) : Series::monomial(N, exps[i]);
                if (!(m.at(i, j) == want)) return false;
            } else if (!m.at(i, j).is_zero()) {
                return false;
            }
        }
    return true;
}

} // namespace

TEST_CASE("series ring basics") {
    Series a = Series::from_coeffs(6, {mpq_class(1), mpq_class(2)});
    Series b = Series::monomial(6, 2, mpq_class(1, 3));
    auto prod = a * b;
    CHECK(prod.coeff(2) == mpq_class(1, 3));
    CHECK(prod.coeff(3) == mpq_class(2, 3));
    CHECK(prod.valuation().value() == 2);

    CHECK(Series(6).is_zero());
    CHECK(!Series(6).valuation().has_value());

    auto inv = a.inverse();
    CHECK((a * inv) == Series::constant(6, 1));
    CHECK_THROWS_AS(b.inverse(), std::domain_error);

    CHECK(b.shifted(-2) == Series::constant(6, mpq_class(1, 3)));
    CHECK_THROWS_AS(a.shifted(-1), std::domain_error);
}

TEST_CASE("snf: frozen small cases") {
    // diag(xi^2, 1) -> (2, 0)
    auto s1 = snf(diag(8, {2, 0}));
    CHECK(s1.divisors == std::vector<long>{2, 0});

    // [[1, 1], [xi, 0]]: unit pivot, then xi survives -> (1, 0)
    Matrix m(8, 2, 2);
    m.at(0, 0) = Series::constant(8, 1);
    m.at(0, 1) = Series::constant(8, 1);
    m.at(1, 0) = Series::monomial(8, 1);
    auto s2 = snf(m);
    CHECK(s2.divisors == std::vector<long>{1, 0});
    CHECK(is_diagonal_with(s2.left * m * s2.right, s2.divisors));

    auto s3 = snf(Matrix::identity(8, 3));
    CHECK(s3.divisors == std::vector<long>{0, 0, 0});
}

TEST_CASE("snf: singular detection") {
    Matrix m(4, 2, 2);
    m.at(0, 0) = Series::constant(4, 1);
    m.at(1, 0) = Series::constant(4, 1);
    // second column identically zero: det vanishes at the truncation
    CHECK_THROWS_AS(snf(m), Singular);
    auto rep = snf(m, false);
    CHECK(rep.divisors == std::vector<long>{4, 0});
}

TEST_CASE("snf: random matrices against the transform identity") {
    const long N = 12;
    int done = 0;
    while (done < 60) {
        Matrix a = random_matrix(N, 4);
        std::optional<SnfResult> got;
        try {
            got = snf(a);
        } catch (const Singular&) {
            continue;
        }
        const SnfResult& s = *got;
        Matrix d = s.left * a * s.right;
        CHECK(is_diagonal_with(d, s.divisors));
        // divisors descending
        for (size_t i = 0; i + 1 < s.divisors.size(); ++i)
            CHECK(s.divisors[i] >= s.divisors[i + 1]);
        // U and V unimodular: determinant is a unit series
        CHECK(determinant(s.left).is_unit());
        CHECK(determinant(s.right).is_unit());
        // divisor sum = valuation of det
        long sum = 0;
        for (long x : s.divisors) sum += x;
        CHECK(determinant(a).valuation().value() == sum);
        ++done;
    }
}

TEST_CASE("snf: invariance under unimodular change of basis") {
    const long N = 10;
    int done = 0;
    while (done < 40) {
        Matrix a = random_matrix(N, 3);
        std::vector<long> base;
        try {
            base = snf(a).divisors;
        } catch (const Singular&) {
            continue;
        }
        Matrix u = random_unimodular(N, 3);
        Matrix v = random_unimodular(N, 3);
        CHECK(snf(u * a * v).divisors == base);
        ++done;
    }
}

TEST_CASE("filtration jumps and graded pieces") {
    // divisors (0, -1): graded dimensions sit in degrees 0 and 1
    auto f = filtration({0, -1});
    CHECK(f.graded() == std::map<long, long>{{0, 1}, {1, 1}});
    CHECK(f.fil_dim(0) == 2);
    CHECK(f.fil_dim(1) == 1);
    CHECK(f.fil_dim(2) == 0);

    // the zero type: everything in degree 0
    auto t = filtration({0, 0, 0});
    CHECK(t.graded() == std::map<long, long>{{0, 3}});
    CHECK(t.fil_dim(0) == 3);
    CHECK(t.fil_dim(1) == 0);

    // rank one with divisor -d: one jump at degree d
    for (long d = -3; d <= 3; ++d) {
        auto r = filtration({-d});
        CHECK(r.graded() == std::map<long, long>{{d, 1}});
        CHECK(r.fil_dim(d) == 1);
        CHECK(r.fil_dim(d + 1) == 0);
    }
}

TEST_CASE("filtration is a presentation invariant") {
    const long N = 12;
    for (int i = 0; i < 30; ++i) {
        std::vector<long> lam = {static_cast<long>(rng() % 5), static_cast<long>(rng() % 5),
                                 static_cast<long>(rng() % 5)};
        Matrix d = diag(N, lam);
        Matrix changed = random_unimodular(N, 3) * d * random_unimodular(N, 3);
        auto div = snf(changed).divisors;
        std::sort(lam.begin(), lam.end(), std::greater<long>());
        CHECK(div == lam);
        CHECK(filtration(div).graded() == filtration(lam).graded());
    }
}

TEST_CASE("graded dimensions add over block sums") {
    auto left = filtration({2, 0});
    auto right = filtration({1, 1, -2});
    auto both = filtration({2, 0, 1, 1, -2});
    auto g = left.graded();
    for (auto& [k, v] : right.graded()) g[k] += v;
    CHECK(both.graded() == g);
}

TEST_CASE("lattice pair accepts only matching presentations") {
    auto lp = make_lattice_pair(2, {0, -1}, diag(8, {1, 0}), 1);
    CHECK(lp.lambda == std::vector<long>{0, -1});
    CHECK(lp.presentation_shift == 1);
    CHECK_THROWS_AS(make_lattice_pair(2, {0, -2}, diag(8, {1, 0}), 1), std::invalid_argument);
}

TEST_CASE("cokernel divisors and freeness") {
    // multiplication by xi on a rank-1 lattice: torsion cokernel, divisor (1)
    Matrix x(8, 1, 1);
    x.at(0, 0) = Series::monomial(8, 1);
    auto rep = cokernel_divisors(x);
    CHECK(rep.divisors == std::vector<long>{1});
    CHECK(!rep.free);
    CHECK(rep.free_rank == 0);

    // an isomorphism has free (zero) cokernel
    Matrix one(8, 1, 1);
    one.at(0, 0) = Series::constant(8, 1);
    auto rep2 = cokernel_divisors(one);
    CHECK(rep2.divisors == std::vector<long>{0});
    CHECK(rep2.free);

    // saturated inclusion of rank 1 into rank 2
    Matrix incl(8, 2, 1);
    incl.at(0, 0) = Series::constant(8, 1);
    auto rep3 = cokernel_divisors(incl);
    CHECK(rep3.free);
    CHECK(rep3.free_rank == 1);

    // rank-deficient maps are rejected
    Matrix zero(8, 2, 1);
    CHECK_THROWS_AS(cokernel_divisors(zero), NotInjective);
}
