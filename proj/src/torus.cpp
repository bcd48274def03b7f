#include "cmbkf/torus.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cmbkf::torus {

namespace {

void require_subgroup(const GaloisContext& ctx, const std::vector<int>& H) {
    if (H.empty()) throw std::invalid_argument("subgroup must not be empty");
    std::set<int> s;
    for (int h : H) {
        if (h < 0 || h >= ctx.order) throw std::invalid_argument("subgroup element out of range");
        s.insert(h);
    }
    if (s.size() != H.size()) throw std::invalid_argument("subgroup has repeated elements");
    if (!s.count(ctx.id)) throw std::invalid_argument("subgroup misses the identity");
    for (int a : H)
        for (int b : H)
            if (!s.count(ctx.compose(a, b)))
                throw std::invalid_argument("subgroup is not closed under composition");
}

} // namespace

CharacterLattice coinduction_lattice(const GaloisContext& ctx, const std::vector<int>& subgroup) {
    require_subgroup(ctx, subgroup);
    CharacterLattice lat;
    lat.coset_of.assign(ctx.order, -1);
    for (int g = 0; g < ctx.order; ++g) {
        if (lat.coset_of[g] >= 0) continue;
        const int idx = static_cast<int>(lat.coset_reps.size());
        lat.coset_reps.push_back(g);
        for (int h : subgroup) lat.coset_of[ctx.compose(g, h)] = idx;
    }
    const int rank = static_cast<int>(lat.coset_reps.size());
    lat.action.assign(ctx.order, std::vector<int>(rank));
    for (int g = 0; g < ctx.order; ++g)
        for (int i = 0; i < rank; ++i)
            lat.action[g][i] = lat.coset_of[ctx.compose(g, lat.coset_reps[i])];
    return lat;
}

std::vector<long> coinduction_forward(const CharacterLattice& lat, const std::vector<long>& f) {
    if (f.size() != lat.coset_of.size())
        throw std::invalid_argument("function must be defined on the whole group");
    std::vector<long> coords(lat.coset_reps.size());
    for (size_t i = 0; i < lat.coset_reps.size(); ++i) coords[i] = f[lat.coset_reps[i]];
    for (size_t g = 0; g < f.size(); ++g)
        if (f[g] != coords[lat.coset_of[g]])
            throw std::invalid_argument("function is not constant on the cosets");
    return coords;
}

std::vector<long> coinduction_inverse(const CharacterLattice& lat, const std::vector<long>& coords) {
    if (coords.size() != lat.coset_reps.size())
        throw std::invalid_argument("coordinate vector has the wrong rank");
    std::vector<long> f(lat.coset_of.size());
    for (size_t g = 0; g < f.size(); ++g) f[g] = coords[lat.coset_of[g]];
    return f;
}

std::vector<long> translate_function(const GaloisContext& ctx, int h, const std::vector<long>& f) {
    if (h < 0 || h >= ctx.order) throw std::invalid_argument("group element out of range");
    if (f.size() != static_cast<size_t>(ctx.order))
        throw std::invalid_argument("function must be defined on the whole group");
    const int hi = ctx.inverse(h);
    std::vector<long> out(f.size());
    for (int g = 0; g < ctx.order; ++g) out[g] = f[ctx.compose(hi, g)];
    return out;
}

std::vector<std::vector<long>> norm_char_map(const GaloisContext& ctx,
                                             const std::vector<int>& H1,
                                             const std::vector<int>& H2) {
    require_subgroup(ctx, H1);
    require_subgroup(ctx, H2);
    std::set<int> big(H1.begin(), H1.end());
    for (int h : H2)
        if (!big.count(h)) throw NotNested("second subgroup is not contained in the first");

    const CharacterLattice src = coinduction_lattice(ctx, H1);
    const CharacterLattice dst = coinduction_lattice(ctx, H2);
    std::vector<std::vector<long>> m(dst.coset_reps.size(),
                                     std::vector<long>(src.coset_reps.size(), 0));
    for (size_t i = 0; i < dst.coset_reps.size(); ++i)
        m[i][src.coset_of[dst.coset_reps[i]]] = 1;

    // each column must pick up [H1:H2] rows; rows hit exactly once
    const long expect = static_cast<long>(H1.size() / H2.size());
    for (size_t j = 0; j < src.coset_reps.size(); ++j) {
        long total = 0;
        for (const auto& row : m) total += row[j];
        if (total != expect) throw NotInjective("norm matrix column has the wrong fiber size");
    }
    return m;
}

CharacterMultiset character_multiset(const CMType& t) {
    if (!t.context) throw std::invalid_argument("type has no context");
    const GaloisContext& ctx = *t.context;
    CharacterMultiset out;
    out.context = t.context;
    for (int tau = 0; tau < ctx.hom_count; ++tau) {
        std::vector<long> f(ctx.order);
        for (int g = 0; g < ctx.order; ++g) f[g] = t.phi[ctx.act(ctx.inverse(g), tau)];
        out.entries.push_back(std::move(f));
    }
    std::sort(out.entries.begin(), out.entries.end());
    return out;
}

int hom_dimension(const CharacterMultiset& a, const CharacterMultiset& b) {
    if (!a.context || !b.context) throw std::invalid_argument("multiset has no context");
    if (!cmtype::same_level(a.context, b.context))
        throw LevelMismatch("character multisets live at different Galois levels");
    int dim = 0;
    size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        if (a.entries[i] < b.entries[j]) {
            ++i;
        } else if (b.entries[j] < a.entries[i]) {
            ++j;
        } else {
            size_t ia = i, jb = j;
            while (ia < a.entries.size() && a.entries[ia] == a.entries[i]) ++ia;
            while (jb < b.entries.size() && b.entries[jb] == b.entries[j]) ++jb;
            dim += static_cast<int>((ia - i) * (jb - j));
            i = ia;
            j = jb;
        }
    }
    return dim;
}

} // namespace cmbkf::torus
