#ifndef CMBKF_LOCALFIELD_HPP
#define CMBKF_LOCALFIELD_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cmbkf/errors.hpp"
#include "cmbkf/padic.hpp"
#include "cmbkf/rational.hpp"

namespace cmbkf::localfield {

using padic::PadicNumber;
using padic::PadicPolynomial;

// Elements of the unramified coefficient ring W = Zp[u]/(g), g the
// deterministic smallest irreducible of degree f mod p, lifted monically.
// Coordinates are coefficients of u^0..u^{f-1}.
using WElem = std::vector<PadicNumber>;

// Elements of L = W[pi]/(Eisenstein).  Coordinates are coefficients of
// pi^0..pi^{e-1}, each a WElem.
using LElem = std::vector<WElem>;

using LPoly = std::vector<LElem>; // ascending, index = degree

/*
 * A finite extension of Qp presented as a two-step tower: the unramified
 * ring W of residue degree f, then an Eisenstein extension of degree e.
 * All arithmetic is carried out on coefficient vectors at a fixed p-adic
 * working precision.
 */
class LocalField {
public:
    // eis holds a_0..a_{e-1} of the monic Eisenstein polynomial
    // x^e + a_{e-1} x^{e-1} + ... + a_0 with coefficients in W.
    // Throws NotEisenstein unless v(a_i) >= 1 for all i and v(a_0) == 1.
    LocalField(long p, int f, std::vector<WElem> eis,
               long prec = PadicNumber::kDefaultPrecision);

    // Integer-coefficient convenience: eis_z lists the full monic polynomial
    // ascending, so eis_z.size() == e+1 and eis_z.back() == 1.
    static LocalField make(long p, int f, const std::vector<mpz_class>& eis_z,
                           long prec = PadicNumber::kDefaultPrecision);

    long p() const { return p_; }
    int e() const { return e_; }
    int f() const { return f_; }
    int degree() const { return e_ * f_; }
    long precision() const { return prec_; }
    const std::vector<mpz_class>& residue_poly() const { return g_; }
    const std::vector<WElem>& eisenstein() const { return eis_; }
    std::string describe() const;

    // --- W arithmetic ---------------------------------------------------
    WElem w_zero() const;
    WElem w_one() const;
    WElem w_u() const; // the residue generator (zero when f == 1)
    WElem w_from_padic(const PadicNumber& a) const;
    WElem w_add(const WElem& a, const WElem& b) const;
    WElem w_sub(const WElem& a, const WElem& b) const;
    WElem w_neg(const WElem& a) const;
    WElem w_mul(const WElem& a, const WElem& b) const;
    WElem w_scale(const WElem& a, const PadicNumber& c) const;
    // p-adic valuation lower bound; exact when w_val_determined.
    long w_val_lb(const WElem& a) const;
    bool w_val_determined(const WElem& a) const;
    bool w_is_zero(const WElem& a) const;
    WElem w_inverse(const WElem& a) const; // requires a unit
    WElem w_pow(const WElem& a, long k) const;
    // Residue Frobenius, lifted: u goes to the root of g congruent to u^p.
    WElem w_frobenius(const WElem& a) const;

    // --- L arithmetic -----------------------------------------------------
    LElem zero() const;
    LElem one() const;
    LElem pi() const;
    LElem u_gen() const;
    LElem from_integer(const mpz_class& a) const;
    LElem from_padic(const PadicNumber& a) const;
    LElem from_w(const WElem& a) const;
    LElem add(const LElem& a, const LElem& b) const;
    LElem sub(const LElem& a, const LElem& b) const;
    LElem neg(const LElem& a) const;
    LElem mul(const LElem& a, const LElem& b) const;
    LElem scale(const LElem& a, const PadicNumber& c) const;
    LElem inverse(const LElem& a) const;
    LElem div(const LElem& a, const LElem& b) const;
    LElem pi_pow(long k) const; // k may be negative
    LElem pow(const LElem& a, long k) const;
    bool is_zero(const LElem& a) const; // zero at available precision
    bool equal(const LElem& a, const LElem& b) const;

    // pi-adic valuation (v(pi) = 1).  Determined exactly whenever the
    // minimizing coordinate is determined, because the candidate valuations
    // e*v_W(c_j) + j have distinct residues mod e.  Throws domain_error on
    // exact zero, PrecisionExhausted when undetermined.
    long valuation(const LElem& a) const;
    long valuation_lb(const LElem& a) const;
    bool valuation_determined(const LElem& a) const;
    Rational valuation_q(const LElem& a) const; // normalized, v(p) = 1

    // --- coordinates ------------------------------------------------------
    // Qp-coordinates on the grid u^i pi^j, index j*f + i.
    std::vector<PadicNumber> coords(const LElem& a) const;
    LElem from_coords(const std::vector<PadicNumber>& c) const;
    // Deterministic ordering key for integral elements: representative
    // digits of each coordinate at a fixed depth.
    std::vector<mpz_class> canonical_key(const LElem& a) const;

    // --- primitive element ------------------------------------------------
    // theta generates L over Qp: pi when f == 1, u when e == 1, otherwise
    // pi + c*u for the smallest c making the power basis nonsingular.
    const LElem& theta() const { return theta_; }
    const PadicPolynomial& minpoly() const { return minpoly_; }
    // Coordinates of x in the power basis 1, theta, ..., theta^{n-1}.
    std::vector<PadicNumber> power_coords(const LElem& x) const;

    // --- polynomials over L -------------------------------------------------
    LPoly lift_poly(const PadicPolynomial& F) const;
    LElem eval(const LPoly& F, const LElem& x) const;
    // All integral roots, in canonical key order.  F must be monic with
    // integral coefficients (then every root is integral).
    std::vector<LElem> roots_of(const LPoly& F) const;
    std::vector<LElem> roots_of(const PadicPolynomial& F) const;

private:
    long p_;
    int e_, f_;
    long prec_;
    std::vector<mpz_class> g_;          // monic lift of the residue polynomial
    std::vector<PadicNumber> g_coeffs_; // g_ as PadicNumbers at prec_
    std::vector<WElem> eis_;
    mutable std::optional<WElem> frob_u_; // lazily lifted image of u
    LElem theta_;
    PadicPolynomial minpoly_;
    std::vector<std::vector<PadicNumber>> theta_mat_; // grid coords of theta powers

    WElem w_reduce(std::vector<PadicNumber> c) const;
    void init_primitive();
    void find_roots(const LPoly& F, const LElem& base, long scale, int depth,
                    std::vector<LElem>& out) const;
    LElem newton_root(const LPoly& F, LElem x) const;
};

// A field embedding dom -> cod, determined by the image of dom.theta().
// powers caches root^0..root^{n_dom - 1}.
struct Embedding {
    LElem root;
    std::vector<LElem> powers;
};

Embedding make_embedding(const LocalField& dom, const LocalField& cod, const LElem& root);
LElem apply_embedding(const LocalField& dom, const LocalField& cod, const Embedding& emb,
                      const LElem& x);
// All embeddings of E into L, in canonical root order.
std::vector<Embedding> embeddings(const LocalField& E, const LocalField& L);

// Matches x against a list of pairwise-distinct elements (typically the
// roots of one polynomial): the unique index whose difference valuation
// exceeds the maximal pairwise separation.  Throws PrecisionExhausted when
// the match is ambiguous.
int krasner_match(const LocalField& L, const std::vector<LElem>& roots, const LElem& x);

// One factor of the (possibly split) coefficient algebra: its block of
// homs into the splitting field occupies [offset, offset + degree).
struct ContextFactor {
    int offset = 0;
    int degree = 0;
    int e = 1;
    int f = 1;
};

/*
 * A finite Galois group acting on the homs of a product of fields into a
 * fixed Galois splitting field, with enough unramified bookkeeping to drive
 * slope computations.  The combinatorial core stands alone; the analytic
 * payload (fields, roots) is optional.
 */
struct GaloisContext {
    int order = 1;
    std::vector<std::vector<int>> mult; // mult[g][h] = g∘h
    std::vector<int> inv;
    int id = 0;

    int hom_count = 0;
    std::vector<std::vector<int>> hom_action; // hom_action[g][t] = g∘t
    std::vector<ContextFactor> factors;
    std::vector<int> hom_factor;

    // Crystalline components: one per embedding of each factor's maximal
    // unramified subfield.  frob_next is the residue-Frobenius successor.
    bool has_components = false;
    std::vector<int> hom_component;
    struct Component {
        int factor = 0;
        int frob_next = 0;
    };
    std::vector<Component> components;

    // Ramification bookkeeping: the (normal) subgroup acting trivially on
    // the residue field, plus one element restricting to Frobenius there.
    // For a fixed subgroup S the fixed field has f = [G : S*I], e = [S*I : S].
    bool has_inertia = false;
    std::vector<int> inertia; // sorted element list
    int frob_lift = 0;

    // Analytic payload (absent for combinatorial inputs).
    std::shared_ptr<const LocalField> field;
    std::vector<std::shared_ptr<const LocalField>> input_fields;
    std::vector<Embedding> homs;  // grouped by factor, canonical order
    std::vector<Embedding> autos; // indexed like group elements

    int compose(int g, int h) const { return mult[g][h]; }
    int inverse(int g) const { return inv[g]; }
    int act(int g, int t) const { return hom_action[g][t]; }
    bool analytic() const { return static_cast<bool>(field); }
    LElem apply_hom(int t, const LElem& x) const;
    LElem apply_auto(int g, const LElem& x) const;
};

/*
 * Finds the smallest admissible Galois tower splitting every input field,
 * trying towers degree by degree: rebasing an input's Eisenstein polynomial
 * over a larger unramified ring, uniformizer binomials x^e - p*w, and tame
 * families x^e - p*zeta^j.  Throws DegreeBoundExceeded when no tower of
 * degree <= degree_bound works.
 */
GaloisContext splitting_context(const LocalField& E, int degree_bound = 8);
GaloisContext splitting_context_multi(const std::vector<const LocalField*>& fields,
                                      int degree_bound = 8);

// Builds a context from pure group data.  components_opt supplies the
// crystalline bookkeeping when no analytic field backs the context; when
// omitted, only contexts whose factors all have f == 1 get components.
struct ComponentSpec {
    std::vector<int> hom_component;
    std::vector<GaloisContext::Component> components;
};
// Optional ramification data: inertia subgroup plus a Frobenius lift.  When
// supplied it is validated against factor_ef and, absent an explicit
// ComponentSpec, the components are derived from its cosets.
struct InertiaSpec {
    std::vector<int> elements;
    int frob_lift = 0;
};
GaloisContext combinatorial_context(std::vector<std::vector<int>> mult,
                                    std::vector<std::vector<int>> hom_action,
                                    std::vector<std::pair<int, int>> factor_ef,
                                    const std::optional<ComponentSpec>& components_opt = std::nullopt,
                                    const std::optional<InertiaSpec>& inertia_opt = std::nullopt);

// Components of every factor recomputed purely from the inertia cosets:
// homs lie in the same component iff their coset of stab*inertia agrees,
// and Frobenius acts by left multiplication with the lift.  Serves as an
// independent derivation to check the analytic bookkeeping against.
ComponentSpec components_from_inertia(const GaloisContext& ctx);

} // namespace cmbkf::localfield

#endif
