#ifndef CMBKF_CMTYPE_HPP
#define CMBKF_CMTYPE_HPP

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cmbkf/errors.hpp"
#include "cmbkf/localfield.hpp"

namespace cmbkf::cmtype {

using localfield::GaloisContext;
using localfield::LocalField;

using Context = std::shared_ptr<const GaloisContext>;

/*
 * A CM type: an integer weight for every embedding of the (possibly split)
 * coefficient algebra into a fixed Galois level, indexed in the context's
 * deterministic hom order.
 */
struct CMType {
    Context context;
    std::vector<long> phi;
};

CMType make_type(Context context, std::vector<long> phi);

// the type supported at a single hom: 1 there, 0 elsewhere
CMType special_type(Context context, int tau);

// g . phi, i.e. tau |-> phi(g^{-1} tau)
CMType act(int g, const CMType& t);

// {g : g . phi == phi}, sorted ascending
std::vector<int> stabilizer(const CMType& t);

// lexicographically smallest conjugate, with a group element reaching it
std::pair<CMType, int> canonical_conjugate(const CMType& t);
bool conjugate(const CMType& a, const CMType& b);

CMType type_dual(const CMType& t);

// True when the two types live at the same Galois level with the same
// identification of the group (same context, or contexts sharing the level
// field and tables).
bool same_level(const Context& a, const Context& b);
bool same_level(const CMType& a, const CMType& b);

/*
 * Reflex data of a type: the stabilizer subgroup, the degree of its fixed
 * field, the reflex-norm matrix on character lattices (row gH, column tau'
 * holds phi(g^{-1} tau')), and optionally a tower presentation of the fixed
 * field found by a bounded search.
 */
struct ReflexDatum {
    std::vector<int> subgroup;
    int reflex_degree = 1;
    std::vector<int> coset_reps; // minimal representatives, ascending
    std::vector<std::vector<long>> norm_matrix;
    // (e, f) of the fixed field, available when the context carries inertia
    std::optional<std::pair<int, int>> tower_shape;
    std::optional<LocalField> presentation;
};
ReflexDatum reflex(const CMType& t, bool want_presentation = false);

// Presents both types at a common Galois level, preserving each one's hom
// blocks; computes a joint splitting field when the levels differ (which
// requires analytic contexts).
std::pair<CMType, CMType> align(const CMType& a, const CMType& b, int degree_bound = 8);

// direct sum: the type on the product algebra, hom blocks concatenated
CMType type_sum(const CMType& a, const CMType& b, int degree_bound = 8);

/*
 * Tensor product: the type on E1 (x) E2.  The result context refines the
 * hom pairs into the genuine field factors of the tensor algebra (orbits of
 * the diagonal action, with (e, f) read off the inertia cosets);
 * pair_to_hom maps the row-major pair index t1 * n2 + t2 to the result's
 * hom index.
 */
struct TensorResult {
    CMType type;
    std::vector<int> pair_to_hom;
};
TensorResult type_tensor(const CMType& a, const CMType& b, int degree_bound = 8);

} // namespace cmbkf::cmtype

#endif
