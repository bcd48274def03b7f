#include "cmbkf/cmtype.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "cmbkf/padic.hpp"

namespace cmbkf::cmtype {

using localfield::ComponentSpec;
using localfield::ContextFactor;
using localfield::Embedding;
using localfield::InertiaSpec;
using localfield::LElem;
using localfield::WElem;
using padic::PadicNumber;

namespace {

void require_context(const Context& ctx) {
    if (!ctx) throw std::invalid_argument("type has no context");
}

// True when the two contexts describe the same Galois level with the same
// identification of the group: the same object, or two views (restrictions,
// synthetic refinements) backed by one splitting field.
bool same_level_ctx(const Context& a, const Context& b) {
    if (a == b) return true;
    if (!a->field || a->field != b->field) return false;
    return a->mult == b->mult && a->id == b->id && a->has_inertia == b->has_inertia &&
           a->inertia == b->inertia;
}

// For conjugacy and pointwise comparison the hom structure must match too.
void require_same_homs(const CMType& a, const CMType& b) {
    require_context(a.context);
    require_context(b.context);
    if (!same_level_ctx(a.context, b.context))
        throw LevelMismatch("types live at different Galois levels");
    if (a.context->hom_action != b.context->hom_action ||
        a.context->hom_factor != b.context->hom_factor)
        throw LevelMismatch("types live on different algebras at the same level");
}

std::vector<int> product_set(const GaloisContext& ctx, const std::vector<int>& sub,
                             const std::vector<int>& inertia) {
    std::vector<char> in(ctx.order, 0);
    for (int s : sub)
        for (int i : inertia) in[ctx.compose(s, i)] = 1;
    std::vector<int> out;
    for (int g = 0; g < ctx.order; ++g)
        if (in[g]) out.push_back(g);
    return out;
}

// Fixed-field presentation search: deterministic candidate towers with the
// required (e, f), accepted when some root of the candidate's minimal
// polynomial in the level field has exactly the given stabilizer.
std::optional<LocalField> find_presentation(const GaloisContext& ctx,
                                            const std::vector<int>& subgroup, int e_H, int f_H) {
    const LocalField& L = *ctx.field;
    const long p = L.p();
    const long prec = L.precision();

    if (e_H == 1 && f_H == 1) return LocalField::make(p, 1, {-p, 1}, prec);
    if (static_cast<int>(subgroup.size()) == 1)
        return L; // trivial stabilizer: the fixed field is the level itself
    if (e_H == 1) return LocalField::make(p, f_H, {-p, 1}, prec);

    const auto accepts = [&](const LocalField& cand) {
        for (const LElem& r : L.roots_of(cand.minpoly())) {
            std::vector<int> stab;
            for (int g = 0; g < ctx.order; ++g)
                if (L.is_zero(L.sub(ctx.apply_auto(g, r), r))) stab.push_back(g);
            if (stab == subgroup) return true;
        }
        return false;
    };

    // Uniformizer binomials x^e - p*w over the unramified part, rational w
    // first, then the tame family w = u^j.
    const long mag_bound = p * p * p;
    for (long mag = 1; mag <= mag_bound; ++mag) {
        if (mag % p == 0) continue;
        for (int sign = 0; sign < 2; ++sign) {
            const long w = sign == 0 ? mag : -mag;
            std::vector<mpz_class> eis_z(e_H + 1, 0);
            eis_z[0] = mpz_class(-p * w);
            eis_z[e_H] = 1;
            LocalField cand = LocalField::make(p, f_H, eis_z, prec);
            if (accepts(cand)) return cand;
        }
    }
    if (f_H > 1) {
        LocalField unram = LocalField::make(p, f_H, {-p, 1}, prec);
        long q = 1;
        for (int i = 0; i < f_H; ++i) q *= p;
        for (long j = 1; j <= q - 2; ++j) {
            WElem uj = unram.w_pow(unram.w_u(), j);
            WElem a0 = unram.w_scale(uj, PadicNumber::from_long(p, -p, prec));
            std::vector<WElem> eis(e_H, unram.w_zero());
            eis[0] = a0;
            LocalField cand(p, f_H, eis, prec);
            if (accepts(cand)) return cand;
        }
    }
    return std::nullopt;
}

// Presents t at the given joint level: the factors [lo, lo+nfac) of the
// joint context form the restricted context, and the type's weights are
// carried over by matching each old hom root through a fixed embedding of
// the old level field into the joint one.
CMType transport(const CMType& t, const std::shared_ptr<const GaloisContext>& joint, int lo,
                 int nfac) {
    const GaloisContext& O = *t.context;
    const GaloisContext& J = *joint;
    const int base = J.factors[lo].offset;
    int width = 0;
    std::vector<std::pair<int, int>> factor_ef;
    for (int m = 0; m < nfac; ++m) {
        width += J.factors[lo + m].degree;
        factor_ef.emplace_back(J.factors[lo + m].e, J.factors[lo + m].f);
    }

    std::vector<std::vector<int>> action(J.order, std::vector<int>(width));
    for (int g = 0; g < J.order; ++g)
        for (int h = 0; h < width; ++h) {
            const int img = J.hom_action[g][base + h] - base;
            if (img < 0 || img >= width)
                throw std::logic_error("joint action does not preserve the factor block");
            action[g][h] = img;
        }

    ComponentSpec comps;
    comps.hom_component.resize(width);
    std::vector<int> remap(J.components.size(), -1);
    std::vector<int> kept;
    for (int h = 0; h < width; ++h) {
        const int jc = J.hom_component[base + h];
        if (remap[jc] < 0) {
            remap[jc] = static_cast<int>(kept.size());
            kept.push_back(jc);
        }
        comps.hom_component[h] = remap[jc];
    }
    for (int jc : kept)
        comps.components.push_back({J.components[jc].factor - lo, remap[J.components[jc].frob_next]});

    GaloisContext R = localfield::combinatorial_context(
        J.mult, std::move(action), std::move(factor_ef), comps,
        InertiaSpec{J.inertia, J.frob_lift});
    R.field = J.field;
    R.autos = J.autos;
    R.input_fields.assign(J.input_fields.begin() + lo, J.input_fields.begin() + lo + nfac);
    R.homs.assign(J.homs.begin() + base, J.homs.begin() + base + width);

    // Hom matching: embed the old level into the joint one (first root,
    // deterministic) and identify each old hom with the joint hom whose
    // root is the image of the old root.
    const LocalField& Lold = *O.field;
    const LocalField& Ljoint = *J.field;
    const std::vector<LElem> level_roots = Ljoint.roots_of(Lold.minpoly());
    if (level_roots.empty())
        throw std::logic_error("joint field does not contain the old level");
    const Embedding iota = localfield::make_embedding(Lold, Ljoint, level_roots.front());

    std::vector<long> phi(width, 0);
    std::vector<char> used(width, 0);
    for (int m = 0; m < nfac; ++m) {
        const ContextFactor& of = O.factors[m];
        const int roff = R.factors[m].offset;
        std::vector<LElem> block;
        for (int h = 0; h < of.degree; ++h) block.push_back(R.homs[roff + h].root);
        for (int s = 0; s < of.degree; ++s) {
            const LElem img = localfield::apply_embedding(Lold, Ljoint, iota,
                                                          O.homs[of.offset + s].root);
            const int idx = localfield::krasner_match(Ljoint, block, img);
            if (used[roff + idx]) throw std::logic_error("hom matching is not injective");
            used[roff + idx] = 1;
            phi[roff + idx] = t.phi[of.offset + s];
        }
    }
    return CMType{std::make_shared<const GaloisContext>(std::move(R)), std::move(phi)};
}

bool full_analytic(const GaloisContext& ctx) {
    return ctx.field && !ctx.input_fields.empty() &&
           ctx.homs.size() == static_cast<size_t>(ctx.hom_count);
}

} // namespace

CMType make_type(Context context, std::vector<long> phi) {
    require_context(context);
    if (phi.size() != static_cast<size_t>(context->hom_count))
        throw std::invalid_argument("type length must equal the number of homs");
    return CMType{std::move(context), std::move(phi)};
}

CMType special_type(Context context, int tau) {
    require_context(context);
    if (tau < 0 || tau >= context->hom_count) throw std::invalid_argument("hom index out of range");
    std::vector<long> phi(context->hom_count, 0);
    phi[tau] = 1;
    return CMType{std::move(context), std::move(phi)};
}

CMType act(int g, const CMType& t) {
    require_context(t.context);
    const GaloisContext& ctx = *t.context;
    if (g < 0 || g >= ctx.order) throw std::invalid_argument("group element out of range");
    const int gi = ctx.inverse(g);
    std::vector<long> phi(ctx.hom_count);
    for (int tau = 0; tau < ctx.hom_count; ++tau) phi[tau] = t.phi[ctx.act(gi, tau)];
    return CMType{t.context, std::move(phi)};
}

std::vector<int> stabilizer(const CMType& t) {
    require_context(t.context);
    const GaloisContext& ctx = *t.context;
    std::vector<int> H;
    for (int g = 0; g < ctx.order; ++g) {
        bool fixes = true;
        for (int tau = 0; tau < ctx.hom_count && fixes; ++tau)
            fixes = t.phi[ctx.act(g, tau)] == t.phi[tau];
        if (fixes) H.push_back(g);
    }
    return H;
}

std::pair<CMType, int> canonical_conjugate(const CMType& t) {
    require_context(t.context);
    const GaloisContext& ctx = *t.context;
    CMType best = act(0, t);
    int best_g = 0;
    for (int g = 1; g < ctx.order; ++g) {
        CMType cand = act(g, t);
        if (cand.phi < best.phi) {
            best = std::move(cand);
            best_g = g;
        }
    }
    return {std::move(best), best_g};
}

bool conjugate(const CMType& a, const CMType& b) {
    require_same_homs(a, b);
    const GaloisContext& ctx = *a.context;
    for (int g = 0; g < ctx.order; ++g)
        if (act(g, a).phi == b.phi) return true;
    return false;
}

CMType type_dual(const CMType& t) {
    require_context(t.context);
    std::vector<long> phi(t.phi.size());
    for (size_t i = 0; i < t.phi.size(); ++i) phi[i] = -t.phi[i];
    return CMType{t.context, std::move(phi)};
}

bool same_level(const Context& a, const Context& b) {
    require_context(a);
    require_context(b);
    return same_level_ctx(a, b);
}

bool same_level(const CMType& a, const CMType& b) {
    require_context(a.context);
    require_context(b.context);
    return same_level_ctx(a.context, b.context);
}

ReflexDatum reflex(const CMType& t, bool want_presentation) {
    require_context(t.context);
    const GaloisContext& ctx = *t.context;
    ReflexDatum out;
    out.subgroup = stabilizer(t);
    out.reflex_degree = ctx.order / static_cast<int>(out.subgroup.size());

    std::vector<char> seen(ctx.order, 0);
    for (int g = 0; g < ctx.order; ++g) {
        if (seen[g]) continue;
        out.coset_reps.push_back(g);
        for (int h : out.subgroup) seen[ctx.compose(g, h)] = 1;
    }

    for (int rep : out.coset_reps) {
        const int ri = ctx.inverse(rep);
        std::vector<long> row(ctx.hom_count);
        for (int tau = 0; tau < ctx.hom_count; ++tau) row[tau] = t.phi[ctx.act(ri, tau)];
        out.norm_matrix.push_back(std::move(row));
    }

    if (ctx.has_inertia) {
        const std::vector<int> si = product_set(ctx, out.subgroup, ctx.inertia);
        const int e_H = static_cast<int>(si.size() / out.subgroup.size());
        const int f_H = ctx.order / static_cast<int>(si.size());
        out.tower_shape = std::make_pair(e_H, f_H);
        if (want_presentation && ctx.field)
            out.presentation = find_presentation(ctx, out.subgroup, e_H, f_H);
    }
    return out;
}

std::pair<CMType, CMType> align(const CMType& a, const CMType& b, int degree_bound) {
    require_context(a.context);
    require_context(b.context);
    if (same_level_ctx(a.context, b.context)) return {a, b};
    if (!full_analytic(*a.context) || !full_analytic(*b.context))
        throw LevelMismatch("cannot align types whose contexts lack analytic data");

    std::vector<const LocalField*> inputs;
    for (const auto& fp : a.context->input_fields) inputs.push_back(fp.get());
    for (const auto& fp : b.context->input_fields) inputs.push_back(fp.get());
    auto joint = std::make_shared<const GaloisContext>(
        localfield::splitting_context_multi(inputs, degree_bound));

    const int na = static_cast<int>(a.context->input_fields.size());
    const int nb = static_cast<int>(b.context->input_fields.size());
    return {transport(a, joint, 0, na), transport(b, joint, na, nb)};
}

CMType type_sum(const CMType& a, const CMType& b, int degree_bound) {
    auto [ta, tb] = align(a, b, degree_bound);
    const GaloisContext& A = *ta.context;
    const GaloisContext& B = *tb.context;
    const int na = A.hom_count, nb = B.hom_count;

    std::vector<std::vector<int>> action(A.order, std::vector<int>(na + nb));
    for (int g = 0; g < A.order; ++g) {
        for (int t = 0; t < na; ++t) action[g][t] = A.hom_action[g][t];
        for (int t = 0; t < nb; ++t) action[g][na + t] = na + B.hom_action[g][t];
    }
    std::vector<std::pair<int, int>> factor_ef;
    for (const ContextFactor& f : A.factors) factor_ef.emplace_back(f.e, f.f);
    for (const ContextFactor& f : B.factors) factor_ef.emplace_back(f.e, f.f);

    std::optional<ComponentSpec> comps;
    if (A.has_components && B.has_components) {
        comps.emplace();
        comps->hom_component = A.hom_component;
        const int nca = static_cast<int>(A.components.size());
        const int nfa = static_cast<int>(A.factors.size());
        for (int c : B.hom_component) comps->hom_component.push_back(nca + c);
        comps->components = A.components;
        for (const auto& c : B.components)
            comps->components.push_back({c.factor + nfa, c.frob_next + nca});
    }
    std::optional<InertiaSpec> inert;
    if (A.has_inertia && B.has_inertia) inert = InertiaSpec{A.inertia, A.frob_lift};

    GaloisContext S = localfield::combinatorial_context(A.mult, std::move(action),
                                                        std::move(factor_ef), comps, inert);
    if (A.field && A.field == B.field) {
        S.field = A.field;
        S.autos = A.autos;
        if (full_analytic(A) && full_analytic(B)) {
            S.input_fields = A.input_fields;
            S.input_fields.insert(S.input_fields.end(), B.input_fields.begin(),
                                  B.input_fields.end());
            S.homs = A.homs;
            S.homs.insert(S.homs.end(), B.homs.begin(), B.homs.end());
        }
    }

    std::vector<long> phi = ta.phi;
    phi.insert(phi.end(), tb.phi.begin(), tb.phi.end());
    return CMType{std::make_shared<const GaloisContext>(std::move(S)), std::move(phi)};
}

TensorResult type_tensor(const CMType& a, const CMType& b, int degree_bound) {
    require_context(a.context);
    require_context(b.context);
    // Rank-1 twists keep the other factor's algebra untouched.
    if (a.context->hom_count == 1) {
        std::vector<long> phi = b.phi;
        for (long& v : phi) v += a.phi[0];
        std::vector<int> ids(b.phi.size());
        for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
        return {CMType{b.context, std::move(phi)}, std::move(ids)};
    }
    if (b.context->hom_count == 1) {
        std::vector<long> phi = a.phi;
        for (long& v : phi) v += b.phi[0];
        std::vector<int> ids(a.phi.size());
        for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
        return {CMType{a.context, std::move(phi)}, std::move(ids)};
    }

    auto [ta, tb] = align(a, b, degree_bound);
    const GaloisContext& A = *ta.context;
    const GaloisContext& B = *tb.context;
    if (!A.has_inertia || !B.has_inertia)
        throw std::invalid_argument("tensor factors need ramification data on their contexts");

    const int n2 = B.hom_count;
    const int npairs = A.hom_count * n2;
    const auto pact = [&](int g, int k) {
        return A.act(g, k / n2) * n2 + B.act(g, k % n2);
    };

    std::vector<int> pair_to_hom(npairs, -1);
    std::vector<int> hom_to_pair;
    std::vector<std::pair<int, int>> factor_ef;
    for (int k = 0; k < npairs; ++k) {
        if (pair_to_hom[k] >= 0) continue;
        std::set<int> orbit;
        std::vector<int> stab;
        for (int g = 0; g < A.order; ++g) {
            const int img = pact(g, k);
            orbit.insert(img);
            if (img == k) stab.push_back(g);
        }
        for (int m : orbit) {
            pair_to_hom[m] = static_cast<int>(hom_to_pair.size());
            hom_to_pair.push_back(m);
        }
        const std::vector<int> si = product_set(A, stab, A.inertia);
        const int e_O = static_cast<int>(si.size() / stab.size());
        const int f_O = A.order / static_cast<int>(si.size());
        factor_ef.emplace_back(e_O, f_O);
    }

    std::vector<std::vector<int>> action(A.order, std::vector<int>(npairs));
    for (int g = 0; g < A.order; ++g)
        for (int h = 0; h < npairs; ++h) action[g][h] = pair_to_hom[pact(g, hom_to_pair[h])];

    GaloisContext T = localfield::combinatorial_context(A.mult, std::move(action),
                                                        std::move(factor_ef), std::nullopt,
                                                        InertiaSpec{A.inertia, A.frob_lift});
    if (A.field) {
        T.field = A.field;
        T.autos = A.autos;
    }

    std::vector<long> phi(npairs);
    for (int k = 0; k < npairs; ++k) phi[pair_to_hom[k]] = ta.phi[k / n2] + tb.phi[k % n2];
    return {CMType{std::make_shared<const GaloisContext>(std::move(T)), std::move(phi)},
            std::move(pair_to_hom)};
}

} // namespace cmbkf::cmtype
