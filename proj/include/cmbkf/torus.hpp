#ifndef CMBKF_TORUS_HPP
#define CMBKF_TORUS_HPP

#include <vector>

#include "cmbkf/cmtype.hpp"
#include "cmbkf/errors.hpp"
#include "cmbkf/localfield.hpp"

namespace cmbkf::torus {

using cmtype::CMType;
using cmtype::Context;
using localfield::GaloisContext;

/*
 * The coinduction lattice Z[G/H]: cosets enumerated by their minimal
 * representatives in ascending order, carrying the left G-action by
 * permutation.  Mediates between right-H-invariant functions f : G -> Z
 * (f(gh) = f(g) for all h in H) and coordinate vectors on the coset basis.
 */
struct CharacterLattice {
    std::vector<int> coset_reps;
    std::vector<int> coset_of;            // group element -> basis index
    std::vector<std::vector<int>> action; // action[g][i] = basis index of g * (coset i)
};

CharacterLattice coinduction_lattice(const GaloisContext& ctx, const std::vector<int>& subgroup);

// f |-> sum over cosets of f(rep) * [coset]; rejects functions that are not
// constant on the cosets.
std::vector<long> coinduction_forward(const CharacterLattice& lat, const std::vector<long>& f);
std::vector<long> coinduction_inverse(const CharacterLattice& lat, const std::vector<long>& coords);

// The translation action on integer functions of the group:
// (h.f)(g) = f(h^{-1} g), matching the action convention on types.
std::vector<long> translate_function(const GaloisContext& ctx, int h, const std::vector<long>& f);

// For nested subgroups H2 <= H1 (fixed fields L1 <= L2), the matrix of
// Z[G/H1] -> Z[G/H2] sending each coset to the sum of the H2-cosets inside
// it.  Rows are indexed by the target basis, columns by the source basis;
// the columns have disjoint supports, so the map is injective.
std::vector<std::vector<long>> norm_char_map(const GaloisContext& ctx,
                                             const std::vector<int>& H1,
                                             const std::vector<int>& H2);

/*
 * The character data of a CM object at its Galois level: one integer
 * function g |-> phi(g^{-1} tau) per hom tau.  Entries are kept sorted so
 * that multiset comparisons are plain vector comparisons.
 */
struct CharacterMultiset {
    Context context;
    std::vector<std::vector<long>> entries;
};

CharacterMultiset character_multiset(const CMType& t);

// Hom dimension between the represented objects: the number of matching
// pairs of equal characters.  Both multisets must live at the same level.
int hom_dimension(const CharacterMultiset& a, const CharacterMultiset& b);

} // namespace cmbkf::torus

#endif
