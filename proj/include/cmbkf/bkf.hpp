#ifndef CMBKF_BKF_HPP
#define CMBKF_BKF_HPP

#include <map>
#include <vector>

#include "cmbkf/cmtype.hpp"
#include "cmbkf/drlattice.hpp"
#include "cmbkf/rational.hpp"

namespace cmbkf::bkf {

using cmtype::CMType;

/*
 * The Frobenius twist of a CM module, stored symbolically: one kernel
 * generator exponent per hom (equal to the type), together with its image
 * in the crystalline quotient, a uniformizer power on every unramified
 * component (the Teichmueller part of each kernel generator dies there).
 */
struct FrobeniusScalar {
    std::vector<long> exponents;         // indexed like the homs
    std::vector<long> crystalline_image; // indexed like the context components
};

// A CM module in its symbolic normal form: the type, the Frobenius twist,
// and the induced lattice pair whose elementary divisors are the negated
// weights, sorted descending.
struct CMBKFModule {
    CMType type;
    FrobeniusScalar scalar;
    drlattice::LatticePair lattice;
};

CMBKFModule build_module(const CMType& t);

// rank of the Frobenius-fixed etale realization = dimension of the CM algebra
int etale_rank(const CMBKFModule& m);

// graded dimensions of the de Rham filtration: i -> #{tau : phi(tau) = i}
std::map<long, int> hodge_tate(const CMBKFModule& m);

struct SlopeEntry {
    Rational slope;
    int multiplicity = 0;
};

/*
 * The crystalline realization in monomial form: Frobenius permutes the
 * unramified components cyclically within each factor and multiplies
 * component c by pi^{scalar_exponents[c]}, where pi is the factor's
 * uniformizer (p-adic valuation 1/e).  Slopes are constant on each orbit:
 * the orbit's total valuation divided by its length, with multiplicity the
 * orbit's rank.
 */
struct Isocrystal {
    int rank = 0;                          // over the big unramified base
    std::vector<int> frob_permutation;     // component -> next component
    std::vector<long> scalar_exponents;    // uniformizer exponent per component
    std::vector<int> component_ranks;      // e of the component's factor
    std::vector<SlopeEntry> newton_slopes; // ascending, aggregated
};

Isocrystal crystalline_realization(const CMBKFModule& m);

// the slopes expanded with multiplicity, ascending (rank entries in total)
std::vector<Rational> slope_list(const Isocrystal& iso);

// rank-1 Hom table: nonzero iff d <= d', and iff d = d' in the rigidified
// category; the dimension is 1 in both nonzero cases.
int hom_rank1(long d, long dprime, bool rigidified);

// Hom dimension between two CM objects, computed from the character
// calculus after presenting both types at a common Galois level.
int hom_cm(const CMBKFModule& a, const CMBKFModule& b, int degree_bound = 8);

} // namespace cmbkf::bkf

#endif
