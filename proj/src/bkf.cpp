#include "cmbkf/bkf.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "cmbkf/torus.hpp"

namespace cmbkf::bkf {

using localfield::GaloisContext;

CMBKFModule build_module(const CMType& t) {
    if (!t.context) throw std::invalid_argument("type has no context");
    const GaloisContext& ctx = *t.context;
    if (!ctx.has_components)
        throw std::invalid_argument("module construction needs the component bookkeeping");

    CMBKFModule m;
    m.type = t;
    m.scalar.exponents = t.phi;
    m.scalar.crystalline_image.assign(ctx.components.size(), 0);
    for (int tau = 0; tau < ctx.hom_count; ++tau)
        m.scalar.crystalline_image[ctx.hom_component[tau]] += t.phi[tau];

    const size_t n = t.phi.size();
    std::vector<long> lambda(n);
    for (size_t i = 0; i < n; ++i) lambda[i] = -t.phi[i];
    std::sort(lambda.begin(), lambda.end(), std::greater<long>());
    m.lattice = drlattice::make_lattice_pair(n, std::move(lambda));
    return m;
}

int etale_rank(const CMBKFModule& m) { return m.type.context->hom_count; }

std::map<long, int> hodge_tate(const CMBKFModule& m) {
    std::map<long, int> gr;
    for (long v : m.type.phi) ++gr[v];
    return gr;
}

Isocrystal crystalline_realization(const CMBKFModule& m) {
    const GaloisContext& ctx = *m.type.context;
    const int nc = static_cast<int>(ctx.components.size());

    Isocrystal iso;
    iso.rank = ctx.hom_count;
    iso.scalar_exponents = m.scalar.crystalline_image;
    for (int c = 0; c < nc; ++c) {
        iso.frob_permutation.push_back(ctx.components[c].frob_next);
        iso.component_ranks.push_back(ctx.factors[ctx.components[c].factor].e);
    }

    std::vector<SlopeEntry> orbits;
    std::vector<char> seen(nc, 0);
    for (int c0 = 0; c0 < nc; ++c0) {
        if (seen[c0]) continue;
        long exp_total = 0;
        int len = 0, rank = 0;
        for (int c = c0; !seen[c]; c = iso.frob_permutation[c]) {
            seen[c] = 1;
            exp_total += iso.scalar_exponents[c];
            rank += iso.component_ranks[c];
            ++len;
        }
        const int e = iso.component_ranks[c0];
        // orbit valuation = exp_total / e; slope = valuation / orbit length
        orbits.push_back({Rational(exp_total, static_cast<long>(e) * len), rank});
    }
    std::sort(orbits.begin(), orbits.end(),
              [](const SlopeEntry& a, const SlopeEntry& b) { return a.slope < b.slope; });
    for (const SlopeEntry& o : orbits) {
        if (!iso.newton_slopes.empty() && iso.newton_slopes.back().slope == o.slope)
            iso.newton_slopes.back().multiplicity += o.multiplicity;
        else
            iso.newton_slopes.push_back(o);
    }
    return iso;
}

std::vector<Rational> slope_list(const Isocrystal& iso) {
    std::vector<Rational> out;
    for (const SlopeEntry& s : iso.newton_slopes)
        for (int i = 0; i < s.multiplicity; ++i) out.push_back(s.slope);
    return out;
}

int hom_rank1(long d, long dprime, bool rigidified) {
    if (rigidified) return d == dprime ? 1 : 0;
    return d <= dprime ? 1 : 0;
}

int hom_cm(const CMBKFModule& a, const CMBKFModule& b, int degree_bound) {
    auto [ta, tb] = cmtype::align(a.type, b.type, degree_bound);
    return torus::hom_dimension(torus::character_multiset(ta), torus::character_multiset(tb));
}

} // namespace cmbkf::bkf
