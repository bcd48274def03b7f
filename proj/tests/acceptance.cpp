// Acceptance gate: runs every advertised guarantee of the calculator and
// prints exactly one PASS/FAIL line per criterion.  Exit code is nonzero
// when any criterion fails.  All tolerances and bounds are pinned below.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cmbkf/bkf.hpp"
#include "cmbkf/cmtype.hpp"
#include "cmbkf/drlattice.hpp"
#include "cmbkf/errors.hpp"
#include "cmbkf/localfield.hpp"
#include "cmbkf/padic.hpp"
#include "cmbkf/rational.hpp"
#include "cmbkf/torus.hpp"

using namespace cmbkf;
using cmtype::CMType;
using cmtype::Context;
using localfield::GaloisContext;
using localfield::LocalField;

namespace {

// ---- pinned bounds ---------------------------------------------------
constexpr long kWeightLo = -2, kWeightHi = 2; // exhaustive type window
constexpr long kTwistLo = -3, kTwistHi = 3;   // rank-1 twist window
constexpr long kSnfTruncation = 12;
constexpr int kSnfTrials = 200;
constexpr int kHenselTrials = 100;
constexpr long kHenselTarget = 40;
constexpr int kNewtonTrials = 100;
constexpr size_t kMinCorpus = 10;

// ---- the field corpus: every tower-format extension of Q_5 and Q_3 of
// degree <= 4 with integer Eisenstein data used throughout the project ----
struct FieldDef {
    const char* tag;
    long p;
    int f;
    std::vector<long> eis;
};

const std::vector<FieldDef>& corpus() {
    static const std::vector<FieldDef> k = {
        {"Q5", 5, 1, {-5, 1}},
        {"U52", 5, 2, {-5, 1}},
        {"U53", 5, 3, {-5, 1}},
        {"U54", 5, 4, {-5, 1}},
        {"R25a", 5, 1, {-5, 0, 1}},
        {"R25b", 5, 1, {-10, 0, 1}},
        {"C35", 5, 1, {-5, 0, 0, 1}},
        {"C45", 5, 1, {-5, 0, 0, 0, 1}},
        {"V45", 5, 2, {-5, 0, 1}},
        {"Q3", 3, 1, {-3, 1}},
        {"U32", 3, 2, {-3, 1}},
        {"U33", 3, 3, {-3, 1}},
        {"U34", 3, 4, {-3, 1}},
        {"R3a", 3, 1, {-3, 0, 1}},
        {"R3b", 3, 1, {-6, 0, 1}},
        {"R3c", 3, 1, {3, 0, 1}},
        {"C33", 3, 1, {-3, 0, 0, 1}},
        {"V43", 3, 2, {-3, 0, 1}},
        {"D43", 3, 1, {-3, 0, 0, 0, 1}},
    };
    return k;
}

const std::vector<Context>& contexts() {
    static const std::vector<Context> k = [] {
        std::vector<Context> v;
        for (const FieldDef& d : corpus()) {
            std::vector<mpz_class> eis;
            for (long c : d.eis) eis.emplace_back(c);
            v.push_back(std::make_shared<GaloisContext>(
                localfield::splitting_context(LocalField::make(d.p, d.f, eis))));
        }
        return v;
    }();
    return k;
}

const Context& ctx_by_tag(const char* tag) {
    for (size_t i = 0; i < corpus().size(); ++i)
        if (std::string(corpus()[i].tag) == tag) return contexts()[i];
    throw std::logic_error("unknown corpus tag");
}

// odometer over {kWeightLo..kWeightHi}^n
bool next_phi(std::vector<long>& phi) {
    for (size_t i = 0; i < phi.size(); ++i) {
        if (phi[i] < kWeightHi) {
            ++phi[i];
            for (size_t j = 0; j < i; ++j) phi[j] = kWeightLo;
            return true;
        }
    }
    return false;
}

std::vector<std::vector<int>> all_subgroups(const GaloisContext& g) {
    std::set<std::vector<int>> found;
    const int n = g.order;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::set<int> s;
        for (int e = 0; e < n; ++e)
            if (mask & (1u << e)) s.insert(e);
        s.insert(g.id);
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<int> cur(s.begin(), s.end());
            for (int a : cur)
                for (int b : cur) {
                    if (s.insert(g.compose(a, b)).second) grew = true;
                    if (s.insert(g.inverse(a)).second) grew = true;
                }
        }
        found.insert(std::vector<int>(s.begin(), s.end()));
    }
    return std::vector<std::vector<int>>(found.begin(), found.end());
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

long det_int(std::vector<std::vector<long>> m) {
    const size_t n = m.size();
    if (n == 1) return m[0][0];
    long sum = 0, sign = 1;
    for (size_t c = 0; c < n; ++c) {
        std::vector<std::vector<long>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<long> row;
            for (size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        sum += sign * m[0][c] * det_int(minor);
        sign = -sign;
    }
    return sum;
}

size_t rank_rational(std::vector<std::vector<long>> m) {
    if (m.empty()) return 0;
    std::vector<std::vector<mpq_class>> a(m.size(),
                                          std::vector<mpq_class>(m[0].size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[0].size(); ++j) a[i][j] = m[i][j];
    size_t rank = 0;
    for (size_t col = 0; col < m[0].size() && rank < m.size(); ++col) {
        size_t pivot = rank;
        while (pivot < a.size() && a[pivot][col] == 0) ++pivot;
        if (pivot == a.size()) continue;
        std::swap(a[pivot], a[rank]);
        for (size_t i = rank + 1; i < a.size(); ++i) {
            if (a[i][col] == 0) continue;
            const mpq_class r = a[i][col] / a[rank][col];
            for (size_t j = col; j < m[0].size(); ++j)
                a[i][j] -= r * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<long>> mat_mul(const std::vector<std::vector<long>>& a,
                                       const std::vector<std::vector<long>>& b) {
    const size_t rows = a.size(), inner = b.size(), cols = b[0].size();
    std::vector<std::vector<long>> c(rows, std::vector<long>(cols, 0));
    for (size_t i = 0; i < rows; ++i)
        for (size_t k = 0; k < inner; ++k)
            for (size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

std::vector<std::array<long, 3>> slope_key(const std::vector<bkf::SlopeEntry>& s) {
    std::vector<std::array<long, 3>> k;
    k.reserve(s.size());
    for (const bkf::SlopeEntry& e : s)
        k.push_back({e.slope.num, e.slope.den, static_cast<long>(e.multiplicity)});
    return k;
}

// ---- criterion harness -------------------------------------------------

int g_failures = 0;

void criterion(int id, const char* label, double limit_s,
               const std::function<bool(std::string&)>& body) {
    std::string note;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ok = body(note);
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (ok && secs > limit_s && note.empty()) note = "time limit exceeded";
    const bool pass = ok && secs <= limit_s;
    if (!pass) ++g_failures;
    std::printf("criterion %2d: %s - %s (%.2fs, limit %.0fs)%s%s\n", id,
                pass ? "PASS" : "FAIL", label, secs, limit_s,
                note.empty() ? "" : " -- ", note.c_str());
    std::fflush(stdout);
}

// ---- criterion bodies ----------------------------------------------------

bool c1_rank1_hom_tables(std::string& note) {
    for (long d = kTwistLo; d <= kTwistHi; ++d)
        for (long dp = kTwistLo; dp <= kTwistHi; ++dp) {
            const int plain = bkf::hom_rank1(d, dp, false);
            const int rigid = bkf::hom_rank1(d, dp, true);
            if (plain != (d <= dp ? 1 : 0) || rigid != (d == dp ? 1 : 0)) {
                note = "wrong entry at d=" + std::to_string(d) +
                       ", d'=" + std::to_string(dp);
                return false;
            }
        }
    return true;
}

bool c2_rank1_slopes(std::string& note) {
    for (const char* tag : {"Q5", "Q3"}) {
        const Context& c = ctx_by_tag(tag);
        for (long d = kTwistLo; d <= kTwistHi; ++d) {
            const auto iso = bkf::crystalline_realization(
                bkf::build_module(cmtype::make_type(c, {d})));
            if (iso.newton_slopes.size() != 1 ||
                !(iso.newton_slopes[0].slope == Rational(d)) ||
                iso.newton_slopes[0].multiplicity != 1) {
                note = std::string(tag) + ": twist " + std::to_string(d);
                return false;
            }
        }
    }
    return true;
}

bool c3_classification(std::string& note) {
    if (corpus().size() < kMinCorpus) {
        note = "corpus too small";
        return false;
    }
    for (size_t fi = 0; fi < corpus().size(); ++fi) {
        const Context& c = contexts()[fi];
        const int n = c->hom_count;

        struct Info {
            CMType type;
            std::vector<long> canon;
            int rank;
            std::map<long, int> ht;
            std::vector<std::array<long, 3>> slopes;
        };
        std::vector<Info> infos;

        std::vector<long> phi(static_cast<size_t>(n), kWeightLo);
        do {
            CMType t = cmtype::make_type(c, phi);
            const bkf::CMBKFModule m = bkf::build_module(t);
            std::map<long, int> ht = bkf::hodge_tate(m);
            std::map<long, int> expect;
            for (long v : phi) ++expect[v];
            if (ht != expect) {
                note = std::string(corpus()[fi].tag) +
                       ": hodge_tate does not match the value counts";
                return false;
            }
            Info info{t,
                      cmtype::canonical_conjugate(t).first.phi,
                      bkf::etale_rank(m),
                      std::move(ht),
                      slope_key(bkf::crystalline_realization(m).newton_slopes)};
            infos.push_back(std::move(info));
        } while (next_phi(phi));

        for (size_t i = 0; i < infos.size(); ++i)
            for (size_t j = i + 1; j < infos.size(); ++j) {
                const bool conj = cmtype::conjugate(infos[i].type, infos[j].type);
                const bool same_class = infos[i].canon == infos[j].canon;
                if (conj != same_class) {
                    note = std::string(corpus()[fi].tag) +
                           ": conjugacy disagrees with canonical forms";
                    return false;
                }
                if (conj && (infos[i].rank != infos[j].rank ||
                             infos[i].ht != infos[j].ht ||
                             infos[i].slopes != infos[j].slopes)) {
                    note = std::string(corpus()[fi].tag) +
                           ": conjugate types with different invariants";
                    return false;
                }
            }
    }
    return true;
}

bool c4_reflex_facts(std::string& note) {
    for (size_t fi = 0; fi < corpus().size(); ++fi) {
        const Context& c = contexts()[fi];
        const int n = c->hom_count;
        for (int tau = 0; tau < n; ++tau) {
            const auto rd = cmtype::reflex(cmtype::special_type(c, tau));
            if (rd.reflex_degree != n) {
                note = std::string(corpus()[fi].tag) +
                       ": special type has reflex degree " +
                       std::to_string(rd.reflex_degree);
                return false;
            }
            const long det = det_int(rd.norm_matrix);
            if (det != 1 && det != -1) {
                note = std::string(corpus()[fi].tag) +
                       ": norm matrix determinant " + std::to_string(det);
                return false;
            }
        }
        for (long value : {0L, 1L}) {
            const auto rd = cmtype::reflex(
                cmtype::make_type(c, std::vector<long>(n, value)));
            if (rd.reflex_degree != 1) {
                note = std::string(corpus()[fi].tag) +
                       ": constant type reflex degree != 1";
                return false;
            }
        }
    }
    return true;
}

bool c5_coinduction(std::string& note) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> coeff(-5, 5);
    for (size_t fi = 0; fi < corpus().size(); ++fi) {
        const GaloisContext& g = *contexts()[fi];
        for (const std::vector<int>& sub : all_subgroups(g)) {
            const auto lat = torus::coinduction_lattice(g, sub);
            const size_t k = lat.coset_reps.size();
            for (int trial = 0; trial < 3; ++trial) {
                std::vector<long> coords(k);
                for (long& x : coords) x = coeff(rng);
                const auto f = torus::coinduction_inverse(lat, coords);
                if (torus::coinduction_forward(lat, f) != coords) {
                    note = std::string(corpus()[fi].tag) +
                           ": forward(inverse) is not the identity";
                    return false;
                }
                for (int h = 0; h < g.order; ++h) {
                    const auto tf = torus::translate_function(g, h, f);
                    const auto tc = torus::coinduction_forward(lat, tf);
                    for (size_t i = 0; i < k; ++i)
                        if (tc[i] !=
                            coords[static_cast<size_t>(
                                lat.action[static_cast<size_t>(g.inverse(h))]
                                          [i])]) {
                            note = std::string(corpus()[fi].tag) +
                                   ": coinduction is not G-equivariant";
                            return false;
                        }
                }
            }
        }
    }
    return true;
}

bool c6_norm_functoriality(std::string& note) {
    for (const char* tag : {"U54", "V45"}) {
        const GaloisContext& g = *ctx_by_tag(tag);
        const auto subs = all_subgroups(g);
        for (const auto& A : subs)
            for (const auto& B : subs) {
                if (!subset_of(B, A)) continue;
                const auto mAB = torus::norm_char_map(g, A, B);
                if (rank_rational(mAB) != mAB[0].size()) {
                    note = std::string(tag) + ": norm matrix not injective";
                    return false;
                }
                for (const auto& C : subs) {
                    if (!subset_of(C, B)) continue;
                    const auto mBC = torus::norm_char_map(g, B, C);
                    const auto mAC = torus::norm_char_map(g, A, C);
                    if (mat_mul(mBC, mAB) != mAC) {
                        note = std::string(tag) +
                               ": tower composite differs from the direct map";
                        return false;
                    }
                }
            }
    }
    return true;
}

bool c7_character_calculus(std::string& note) {
    // (a) hom_cm vs the rigidified rank-1 table
    for (const char* tag : {"Q5", "Q3"}) {
        const Context& c = ctx_by_tag(tag);
        for (long d = kTwistLo; d <= kTwistHi; ++d)
            for (long dp = kTwistLo; dp <= kTwistHi; ++dp) {
                const int got = bkf::hom_cm(
                    bkf::build_module(cmtype::make_type(c, {d})),
                    bkf::build_module(cmtype::make_type(c, {dp})));
                if (got != bkf::hom_rank1(d, dp, true)) {
                    note = std::string(tag) + ": hom_cm(" + std::to_string(d) +
                           ", " + std::to_string(dp) + ") = " +
                           std::to_string(got);
                    return false;
                }
            }
    }

    // (b) tensor multisets convolve, duals negate
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> weight(kWeightLo, kWeightHi);
    for (size_t fi = 0; fi < corpus().size(); ++fi) {
        const Context& c = contexts()[fi];
        const size_t n = static_cast<size_t>(c->hom_count);
        std::vector<std::vector<long>> patterns;
        patterns.push_back(cmtype::special_type(c, 0).phi);
        patterns.emplace_back(n, 1);
        {
            std::vector<long> mixed(n);
            for (size_t i = 0; i < n; ++i)
                mixed[i] = static_cast<long>(i % 3) - 1;
            patterns.push_back(std::move(mixed));
        }
        for (int r = 0; r < 2; ++r) {
            std::vector<long> rnd(n);
            for (long& v : rnd) v = weight(rng);
            patterns.push_back(std::move(rnd));
        }

        std::vector<CMType> types;
        for (auto& p : patterns) types.push_back(cmtype::make_type(c, p));

        for (const CMType& a : types) {
            const auto ca = torus::character_multiset(a);
            // dual negates
            const auto cd = torus::character_multiset(cmtype::type_dual(a));
            std::vector<std::vector<long>> negated = ca.entries;
            for (auto& v : negated)
                for (long& x : v) x = -x;
            std::sort(negated.begin(), negated.end());
            if (cd.entries != negated) {
                note = std::string(corpus()[fi].tag) +
                       ": dual does not negate the multiset";
                return false;
            }
            for (const CMType& b : types) {
                const auto cb = torus::character_multiset(b);
                const auto tr = cmtype::type_tensor(a, b);
                const auto ct = torus::character_multiset(tr.type);
                std::vector<std::vector<long>> conv;
                for (const auto& va : ca.entries)
                    for (const auto& vb : cb.entries) {
                        std::vector<long> sum(va.size());
                        for (size_t i = 0; i < va.size(); ++i)
                            sum[i] = va[i] + vb[i];
                        conv.push_back(std::move(sum));
                    }
                std::sort(conv.begin(), conv.end());
                if (ct.entries != conv) {
                    note = std::string(corpus()[fi].tag) +
                           ": tensor multiset is not the convolution";
                    return false;
                }
            }
        }
    }
    return true;
}

drlattice::Series random_series(std::mt19937& rng) {
    std::uniform_int_distribution<long> coeff(-4, 4);
    std::uniform_int_distribution<int> val(0, 2), len(1, 4), unit(0, 9);
    std::vector<mpq_class> cs(static_cast<size_t>(kSnfTruncation), 0);
    const int v = unit(rng) < 6 ? 0 : val(rng);
    const int l = len(rng);
    for (int i = 0; i < l && v + i < kSnfTruncation; ++i)
        cs[static_cast<size_t>(v + i)] = coeff(rng);
    return drlattice::Series::from_coeffs(kSnfTruncation, std::move(cs));
}

drlattice::Matrix random_unimodular(std::mt19937& rng, size_t n) {
    std::uniform_int_distribution<long> coeff(-3, 3);
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> deg(0, 2);
    drlattice::Matrix m = drlattice::Matrix::identity(kSnfTruncation, n);
    for (int step = 0; step < 4; ++step) {
        size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const drlattice::Series f =
            drlattice::Series::monomial(kSnfTruncation, deg(rng), coeff(rng));
        for (size_t k = 0; k < n; ++k)
            m.at(i, k) = m.at(i, k) + f * m.at(j, k);
    }
    const size_t a = pick(rng), b = pick(rng);
    if (a != b)
        for (size_t k = 0; k < n; ++k) std::swap(m.at(a, k), m.at(b, k));
    return m;
}

bool c8_snf_engine(std::string& note) {
    std::mt19937 rng(8);
    for (int trial = 0; trial < kSnfTrials; ++trial) {
        drlattice::Matrix a(kSnfTruncation, 4, 4);
        std::optional<long> detval;
        do {
            for (size_t i = 0; i < 4; ++i)
                for (size_t j = 0; j < 4; ++j) a.at(i, j) = random_series(rng);
            detval = drlattice::determinant(a).valuation();
        } while (!detval);

        const auto res = drlattice::snf(a);
        if (!std::is_sorted(res.divisors.rbegin(), res.divisors.rend())) {
            note = "divisors not sorted descending";
            return false;
        }
        drlattice::Matrix d(kSnfTruncation, 4, 4);
        for (size_t i = 0; i < 4; ++i)
            d.at(i, i) = drlattice::Series::monomial(kSnfTruncation,
                                                     res.divisors[i]);
        if (!(res.left * a * res.right == d)) {
            note = "U*A*V is not the divisor diagonal";
            return false;
        }
        const long sum = std::accumulate(res.divisors.begin(),
                                         res.divisors.end(), 0L);
        if (sum != *detval) {
            note = "divisor sum differs from det valuation";
            return false;
        }
        const drlattice::Matrix p = random_unimodular(rng, 4);
        const drlattice::Matrix q = random_unimodular(rng, 4);
        if (drlattice::snf(p * a * q).divisors != res.divisors) {
            note = "divisors not invariant under unimodular transforms";
            return false;
        }
    }
    return true;
}

bool c9_filtration_anchor(std::string& note) {
    for (long d = kTwistLo; d <= kTwistHi; ++d) {
        const auto fil = drlattice::filtration({-d});
        const std::map<long, long> expect = {{d, 1}};
        if (fil.graded() != expect) {
            note = "rank-1 filtration at twist " + std::to_string(d);
            return false;
        }
    }
    const auto flat = drlattice::filtration({0, 0, 0});
    if (flat.graded() != std::map<long, long>{{0, 3}} ||
        flat.fil_dim(0) != 3 || flat.fil_dim(1) != 0) {
        note = "zero-divisor filtration is not concentrated in degree 0";
        return false;
    }
    return true;
}

bool c10_slope_weight_balance(std::string& note) {
    for (size_t fi = 0; fi < corpus().size(); ++fi) {
        const Context& c = contexts()[fi];
        const int n = c->hom_count;
        std::vector<long> phi(static_cast<size_t>(n), kWeightLo);
        do {
            const bkf::CMBKFModule m =
                bkf::build_module(cmtype::make_type(c, phi));
            Rational slopes(0);
            for (const auto& e : bkf::crystalline_realization(m).newton_slopes)
                slopes = slopes + e.slope * Rational(e.multiplicity);
            long weights = 0;
            for (const auto& [w, dim] : bkf::hodge_tate(m))
                weights += w * dim;
            if (!(slopes == Rational(weights))) {
                note = std::string(corpus()[fi].tag) + ": imbalance";
                return false;
            }
        } while (next_phi(phi));
    }
    return true;
}

bool c11_cokernel_witness(std::string& note) {
    drlattice::Matrix f(kSnfTruncation, 1, 1);
    f.at(0, 0) = drlattice::Series::monomial(kSnfTruncation, 1);
    const auto rep = drlattice::cokernel_divisors(f);
    if (rep.divisors != std::vector<long>{1} || rep.free ||
        rep.free_rank != 0) {
        note = "unexpected cokernel report";
        return false;
    }
    return true;
}

bool c12_padic_substrate(std::string& note) {
    std::mt19937 rng(12);
    const std::array<long, 3> primes = {3, 5, 7};
    std::uniform_int_distribution<size_t> pick_p(0, 2);
    std::uniform_int_distribution<long> small(-9, 9), root(-20, 20);
    std::uniform_int_distribution<int> gdeg(1, 3), hdeg(0, 2), mexp(1, 3);

    for (int trial = 0; trial < kHenselTrials; ++trial) {
        const long p = primes[pick_p(rng)];
        const long a = root(rng);
        // g monic with g(a) a unit
        std::vector<long> g;
        long ga = 0;
        do {
            g.assign(static_cast<size_t>(gdeg(rng)) + 1, 0);
            for (size_t i = 0; i + 1 < g.size(); ++i) g[i] = small(rng);
            g.back() = 1;
            ga = 0;
            for (size_t i = g.size(); i-- > 0;) ga = ga * a + g[i];
        } while (ga % p == 0);
        std::vector<long> h(static_cast<size_t>(hdeg(rng)) + 1, 0);
        for (long& v : h) v = small(rng);
        long pm = 1;
        for (int i = 0, m = mexp(rng); i < m; ++i) pm *= p;
        // f = (x - a) * g + p^m * h
        std::vector<long> f(g.size() + 1, 0);
        for (size_t i = 0; i < g.size(); ++i) {
            f[i + 1] += g[i];
            f[i] -= a * g[i];
        }
        for (size_t i = 0; i < h.size(); ++i) f[i] += pm * h[i];

        const auto poly = padic::PadicPolynomial::from_integers(p, f, 64);
        const auto r = padic::hensel_lift(
            poly, padic::PadicNumber::from_long(p, a, 64), kHenselTarget);
        const auto y = poly.eval(r);
        const auto v = y.valuation_opt();
        const bool ok =
            y.is_exact_zero() ||
            (v ? *v >= kHenselTarget : y.precision() >= kHenselTarget);
        if (!ok) {
            note = "hensel_lift residual too large (p=" + std::to_string(p) +
                   ")";
            return false;
        }
    }

    std::uniform_int_distribution<long> coeff(-50, 50);
    std::uniform_int_distribution<int> deg(2, 4);
    auto random_poly = [&](long) {
        std::vector<long> c(static_cast<size_t>(deg(rng)) + 1, 0);
        for (long& v : c) v = coeff(rng);
        while (c.front() == 0) c.front() = coeff(rng);
        while (c.back() == 0) c.back() = coeff(rng);
        return c;
    };
    for (int trial = 0; trial < kNewtonTrials; ++trial) {
        const long p = primes[pick_p(rng)];
        const auto fc = random_poly(p), gc = random_poly(p);
        const auto fp = padic::PadicPolynomial::from_integers(p, fc, 64);
        const auto gp = padic::PadicPolynomial::from_integers(p, gc, 64);
        const auto sf = padic::newton_slopes(fp);
        const auto sg = padic::newton_slopes(gp);
        const auto sfg = padic::newton_slopes(fp * gp);
        std::vector<std::pair<Rational, long>> merged;
        for (const auto& s : sf) merged.emplace_back(s.val, s.mult);
        for (const auto& s : sg) merged.emplace_back(s.val, s.mult);
        std::sort(merged.begin(), merged.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<padic::NewtonSlope> expect;
        for (const auto& [val, mult] : merged) {
            if (!expect.empty() && expect.back().val == val)
                expect.back().mult += mult;
            else
                expect.push_back({val, mult});
        }
        if (sfg.size() != expect.size() ||
            !std::equal(sfg.begin(), sfg.end(), expect.begin())) {
            note = "newton polygon not multiplicative (p=" + std::to_string(p) +
                   ")";
            return false;
        }
    }
    return true;
}

} // namespace

int main() {
    criterion(1, "rank-1 Hom tables (plain and rigidified)", 1.0,
              c1_rank1_hom_tables);
    criterion(2, "rank-1 crystalline slope equals the twist", 1.0,
              c2_rank1_slopes);
    criterion(3, "classification round-trip over the corpus", 60.0,
              c3_classification);
    criterion(4, "reflex degrees and unimodular norm matrices", 10.0,
              c4_reflex_facts);
    criterion(5, "coinduction isomorphism and equivariance", 5.0,
              c5_coinduction);
    criterion(6, "norm-map functoriality over towers", 5.0,
              c6_norm_functoriality);
    criterion(7, "character calculus: hom, tensor, dual", 30.0,
              c7_character_calculus);
    criterion(8, "SNF engine on random certified matrices", 10.0,
              c8_snf_engine);
    criterion(9, "filtration anchors at the twist degree", 1.0,
              c9_filtration_anchor);
    criterion(10, "slope-weight balance over the corpus", 10.0,
              c10_slope_weight_balance);
    criterion(11, "cokernel witness for the divisor-one inclusion", 1.0,
              c11_cokernel_witness);
    criterion(12, "p-adic substrate: Hensel lift and Newton polygons", 5.0,
              c12_padic_substrate);
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
