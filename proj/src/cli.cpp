#include "cmbkf/cli.hpp"

#include <fstream>
#include <initializer_list>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <gmpxx.h>
#include <json.hpp>

#include "cmbkf/bkf.hpp"
#include "cmbkf/cmtype.hpp"
#include "cmbkf/drlattice.hpp"
#include "cmbkf/errors.hpp"
#include "cmbkf/localfield.hpp"
#include "cmbkf/padic.hpp"
#include "cmbkf/torus.hpp"

namespace cmbkf::cli {
namespace {

using json = nlohmann::ordered_json;
using cmtype::CMType;
using cmtype::Context;
using localfield::GaloisContext;
using localfield::LocalField;

constexpr const char* kSchema = "cm-bkf/1";

constexpr const char* kClassificationSentence =
    "Integral CM pairs with multiplication by E correspond bijectively to "
    "integer-valued weight functions ('types') on the embeddings of E; "
    "isomorphism classes of pairs correspond to Galois-conjugacy classes "
    "of types.";

struct Options {
    long precision = 64;
    int degree_bound = 8;
    std::string format = "json";
    std::string input = "-";
};

// Input-document violations; surfaced with exit code 2.
struct SchemaError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

[[noreturn]] void fail(const std::string& msg) { throw SchemaError(msg); }

const json& need(const json& j, const char* key, const char* where) {
    if (!j.is_object()) fail(std::string(where) + " must be an object");
    auto it = j.find(key);
    if (it == j.end())
        fail(std::string(where) + ": missing key \"" + key + "\"");
    return *it;
}

long need_int(const json& j, const char* what) {
    if (!j.is_number_integer())
        fail(std::string(what) + " must be an integer");
    return j.get<long>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
    if (!j.is_object()) fail(std::string(where) + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known)
            fail(std::string(where) + ": unknown key \"" + it.key() + "\"");
    }
}

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Field descriptions.
//
// A field is either the string "Qp" / "Q<p>" (the prime field; bare "Qp"
// defaults to p = 5) or an object {"p": prime, "f": residue degree >= 1,
// "eisenstein": full monic polynomial over W, ascending}.  Omitting
// "eisenstein" means the unramified choice x - p, omitting "f" means 1.
// {"product": [field, ...]} describes a split semisimple algebra.
// ---------------------------------------------------------------------------

struct FieldSpec {
    long p = 5;
    int f = 1;
    std::vector<long> eisenstein; // full monic polynomial, ascending
};

struct FieldDoc {
    bool product = false;
    std::vector<FieldSpec> factors; // exactly one entry when !product
};

FieldSpec parse_field(const json& j) {
    FieldSpec spec;
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "Qp") {
            spec.p = 5;
        } else if (s.size() >= 2 && s[0] == 'Q') {
            char* end = nullptr;
            spec.p = std::strtol(s.c_str() + 1, &end, 10);
            if (end == nullptr || *end != '\0')
                fail("unrecognized field name \"" + s + "\"");
        } else {
            fail("unrecognized field name \"" + s + "\"");
        }
        if (!is_prime(spec.p))
            fail("field \"" + s + "\": " + std::to_string(spec.p) +
                 " is not prime");
        spec.eisenstein = {-spec.p, 1};
        return spec;
    }
    check_keys(j, {"p", "f", "eisenstein"}, "field");
    spec.p = need_int(need(j, "p", "field"), "\"p\"");
    if (!is_prime(spec.p)) fail("\"p\" must be a prime");
    if (j.contains("f")) {
        spec.f = static_cast<int>(need_int(j.at("f"), "\"f\""));
        if (spec.f < 1 || spec.f > 16) fail("\"f\" must lie in 1..16");
    }
    if (j.contains("eisenstein")) {
        const json& a = j.at("eisenstein");
        if (!a.is_array() || a.size() < 2)
            fail("\"eisenstein\" must list a full monic polynomial of degree "
                 ">= 1, ascending");
        for (const json& c : a)
            spec.eisenstein.push_back(need_int(c, "eisenstein coefficient"));
        if (spec.eisenstein.back() != 1)
            fail("\"eisenstein\" must be monic (last coefficient 1)");
    } else {
        spec.eisenstein = {-spec.p, 1};
    }
    return spec;
}

FieldDoc parse_field_doc(const json& j) {
    FieldDoc doc;
    if (j.is_object() && j.contains("product")) {
        check_keys(j, {"product"}, "field");
        const json& a = j.at("product");
        if (!a.is_array() || a.empty())
            fail("\"product\" must be a non-empty array of fields");
        doc.product = true;
        for (const json& e : a) doc.factors.push_back(parse_field(e));
        for (const FieldSpec& s : doc.factors)
            if (s.p != doc.factors.front().p)
                fail("all product factors must share the same prime");
    } else {
        doc.factors.push_back(parse_field(j));
    }
    return doc;
}

json field_echo(const FieldDoc& doc) {
    auto one = [](const FieldSpec& s) {
        json j;
        j["p"] = s.p;
        j["f"] = s.f;
        j["eisenstein"] = s.eisenstein;
        return j;
    };
    if (!doc.product) return one(doc.factors.front());
    json arr = json::array();
    for (const FieldSpec& s : doc.factors) arr.push_back(one(s));
    json j;
    j["product"] = std::move(arr);
    return j;
}

Context build_context(const FieldDoc& doc, const Options& opt) {
    std::vector<LocalField> fields;
    fields.reserve(doc.factors.size());
    for (const FieldSpec& s : doc.factors) {
        std::vector<mpz_class> eis;
        eis.reserve(s.eisenstein.size());
        for (long c : s.eisenstein) eis.emplace_back(c);
        fields.push_back(LocalField::make(s.p, s.f, eis, opt.precision));
    }
    GaloisContext ctx;
    if (fields.size() == 1) {
        ctx = localfield::splitting_context(fields.front(), opt.degree_bound);
    } else {
        std::vector<const LocalField*> ptrs;
        ptrs.reserve(fields.size());
        for (const LocalField& F : fields) ptrs.push_back(&F);
        ctx = localfield::splitting_context_multi(ptrs, opt.degree_bound);
    }
    return std::make_shared<GaloisContext>(std::move(ctx));
}

struct TypeDoc {
    FieldDoc field;
    std::vector<long> phi;
};

TypeDoc parse_type_doc(const json& j, const char* where) {
    check_keys(j, {"field", "phi"}, where);
    TypeDoc d;
    d.field = parse_field_doc(need(j, "field", where));
    const json& a = need(j, "phi", where);
    if (!a.is_array()) fail("\"phi\" must be an array of integers");
    for (const json& e : a) d.phi.push_back(need_int(e, "phi entry"));
    return d;
}

CMType make_cm_type(const TypeDoc& d, const Options& opt) {
    return cmtype::make_type(build_context(d.field, opt), d.phi);
}

// Builds both types of a two-operand command, sharing one Galois level when
// the (normalized) field descriptions coincide.
std::pair<CMType, CMType> make_pair(const TypeDoc& d1, const TypeDoc& d2,
                                    const Options& opt) {
    CMType t1 = make_cm_type(d1, opt);
    if (field_echo(d1.field) == field_echo(d2.field))
        return {t1, cmtype::make_type(t1.context, d2.phi)};
    return {std::move(t1), make_cm_type(d2, opt)};
}

// ---------------------------------------------------------------------------
// Result serialization.
// ---------------------------------------------------------------------------

json base(const char* command) {
    json r;
    r["schema"] = kSchema;
    r["command"] = command;
    return r;
}

json slopes_json(const std::vector<bkf::SlopeEntry>& slopes) {
    json a = json::array();
    for (const bkf::SlopeEntry& s : slopes)
        a.push_back({s.slope.num, s.slope.den, s.multiplicity});
    return a;
}

json hodge_tate_json(const std::map<long, int>& ht) {
    json o = json::object();
    for (const auto& [weight, dim] : ht) o[std::to_string(weight)] = dim;
    return o;
}

void append_realization(json& r, const bkf::CMBKFModule& m) {
    r["etale_rank"] = bkf::etale_rank(m);
    r["hodge_tate"] = hodge_tate_json(bkf::hodge_tate(m));
    r["newton_slopes"] = slopes_json(bkf::crystalline_realization(m).newton_slopes);
}

json factors_json(const GaloisContext& ctx) {
    json a = json::array();
    for (const localfield::ContextFactor& F : ctx.factors)
        a.push_back({{"degree", F.degree}, {"e", F.e}, {"f", F.f}});
    return a;
}

json operand_echo(const TypeDoc& d) {
    json j;
    j["field"] = field_echo(d.field);
    j["phi"] = d.phi;
    return j;
}

// ---------------------------------------------------------------------------
// Command handlers.
// ---------------------------------------------------------------------------

json cmd_realize(const json& doc, const Options& opt) {
    TypeDoc d = parse_type_doc(doc, "input");
    CMType t = make_cm_type(d, opt);
    bkf::CMBKFModule m = bkf::build_module(t);
    json r = base("realize");
    r["field"] = field_echo(d.field);
    r["phi"] = d.phi;
    append_realization(r, m);
    r["reflex_degree"] = cmtype::reflex(t).reflex_degree;
    return r;
}

json cmd_classify(const json& doc, const Options& opt) {
    TypeDoc d = parse_type_doc(doc, "input");
    CMType t = make_cm_type(d, opt);
    auto [canon, via] = cmtype::canonical_conjugate(t);
    (void)via;
    const long stab = static_cast<long>(cmtype::stabilizer(t).size());
    bkf::CMBKFModule m = bkf::build_module(t);
    json r = base("classify");
    r["field"] = field_echo(d.field);
    r["phi"] = d.phi;
    r["canonical_phi"] = canon.phi;
    r["galois_order"] = t.context->order;
    r["stabilizer_order"] = stab;
    r["orbit_size"] = t.context->order / stab;
    append_realization(r, m);
    r["reflex_degree"] = cmtype::reflex(t).reflex_degree;
    return r;
}

json cmd_reflex(const json& doc, const Options& opt) {
    TypeDoc d = parse_type_doc(doc, "input");
    CMType t = make_cm_type(d, opt);
    cmtype::ReflexDatum rd = cmtype::reflex(t, /*want_presentation=*/true);
    json r = base("reflex");
    r["field"] = field_echo(d.field);
    r["phi"] = d.phi;
    r["reflex_degree"] = rd.reflex_degree;
    r["stabilizer"] = rd.subgroup;
    r["coset_reps"] = rd.coset_reps;
    r["norm_matrix"] = rd.norm_matrix;
    if (rd.tower_shape)
        r["tower_shape"] = json{{"e", rd.tower_shape->first},
                                {"f", rd.tower_shape->second}};
    if (rd.presentation) {
        const LocalField& F = *rd.presentation;
        r["presentation"] = json{{"degree", F.degree()},
                                 {"e", F.e()},
                                 {"f", F.f()},
                                 {"description", F.describe()}};
    }
    return r;
}

json cmd_hom(const json& doc, const Options& opt) {
    check_keys(doc, {"first", "second"}, "input");
    TypeDoc d1 = parse_type_doc(need(doc, "first", "input"), "\"first\"");
    TypeDoc d2 = parse_type_doc(need(doc, "second", "input"), "\"second\"");
    auto [t1, t2] = make_pair(d1, d2, opt);
    bkf::CMBKFModule m1 = bkf::build_module(t1);
    bkf::CMBKFModule m2 = bkf::build_module(t2);
    json r = base("hom");
    r["first"] = operand_echo(d1);
    r["second"] = operand_echo(d2);
    r["hom_dimension"] = bkf::hom_cm(m1, m2, opt.degree_bound);
    return r;
}

json cmd_tensor(const json& doc, const Options& opt) {
    check_keys(doc, {"first", "second"}, "input");
    TypeDoc d1 = parse_type_doc(need(doc, "first", "input"), "\"first\"");
    TypeDoc d2 = parse_type_doc(need(doc, "second", "input"), "\"second\"");
    auto [t1, t2] = make_pair(d1, d2, opt);
    cmtype::TensorResult tr = cmtype::type_tensor(t1, t2, opt.degree_bound);
    json r = base("tensor");
    r["first"] = operand_echo(d1);
    r["second"] = operand_echo(d2);
    r["hom_count"] = tr.type.context->hom_count;
    r["factors"] = factors_json(*tr.type.context);
    r["phi"] = tr.type.phi;
    r["pair_to_hom"] = tr.pair_to_hom;
    append_realization(r, bkf::build_module(tr.type));
    return r;
}

json cmd_dual(const json& doc, const Options& opt) {
    TypeDoc d = parse_type_doc(doc, "input");
    CMType t = make_cm_type(d, opt);
    CMType dual = cmtype::type_dual(t);
    json r = base("dual");
    r["field"] = field_echo(d.field);
    r["phi"] = d.phi;
    r["dual_phi"] = dual.phi;
    append_realization(r, bkf::build_module(dual));
    r["reflex_degree"] = cmtype::reflex(dual).reflex_degree;
    return r;
}

json cmd_newton(const json& doc, const Options& opt) {
    check_keys(doc, {"p", "coefficients"}, "input");
    const long p = need_int(need(doc, "p", "input"), "\"p\"");
    if (!is_prime(p)) fail("\"p\" must be a prime");
    const json& a = need(doc, "coefficients", "input");
    if (!a.is_array() || a.size() < 2)
        fail("\"coefficients\" must list at least two coefficients, ascending");
    std::vector<long> coeffs;
    for (const json& e : a) coeffs.push_back(need_int(e, "coefficient"));
    const padic::PadicPolynomial f =
        padic::PadicPolynomial::from_integers(p, coeffs, opt.precision);
    json r = base("newton");
    r["p"] = p;
    json arr = json::array();
    for (const padic::NewtonSlope& s : padic::newton_slopes(f))
        arr.push_back({s.val.num, s.val.den, s.mult});
    r["slopes"] = arr;
    return r;
}

mpq_class parse_coefficient(const json& e) {
    if (e.is_number_integer()) return mpq_class(e.get<long>());
    if (e.is_string()) {
        try {
            mpq_class q(e.get<std::string>());
            q.canonicalize();
            return q;
        } catch (const std::exception&) {
            fail("cannot parse rational \"" + e.get<std::string>() + "\"");
        }
    }
    fail("matrix coefficients must be integers, rational strings \"a/b\", or "
         "coefficient arrays");
}

drlattice::Series parse_series(const json& e, long N) {
    if (e.is_array()) {
        if (e.size() > static_cast<size_t>(N))
            fail("series entry longer than the truncation");
        std::vector<mpq_class> cs;
        cs.reserve(e.size());
        for (const json& c : e) cs.push_back(parse_coefficient(c));
        return drlattice::Series::from_coeffs(N, std::move(cs));
    }
    return drlattice::Series::constant(N, parse_coefficient(e));
}

json cmd_snf(const json& doc, const Options&) {
    check_keys(doc, {"matrix", "truncation", "require_full_rank"}, "input");
    long N = 12;
    if (doc.contains("truncation")) {
        N = need_int(doc.at("truncation"), "\"truncation\"");
        if (N < 1 || N > 4096) fail("\"truncation\" must lie in 1..4096");
    }
    bool full = true;
    if (doc.contains("require_full_rank")) {
        if (!doc.at("require_full_rank").is_boolean())
            fail("\"require_full_rank\" must be a boolean");
        full = doc.at("require_full_rank").get<bool>();
    }
    const json& m = need(doc, "matrix", "input");
    if (!m.is_array() || m.empty())
        fail("\"matrix\" must be a non-empty array of rows");
    const size_t rows = m.size();
    size_t cols = 0;
    for (const json& row : m) {
        if (!row.is_array() || row.empty())
            fail("matrix rows must be non-empty arrays");
        if (cols == 0) cols = row.size();
        if (row.size() != cols) fail("matrix rows must have equal length");
    }
    drlattice::Matrix A(N, rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j)
            A.at(i, j) = parse_series(m.at(i).at(j), N);
    drlattice::SnfResult res = drlattice::snf(A, full);
    json r = base("snf");
    r["truncation"] = N;
    r["divisors"] = res.divisors;
    return r;
}

json cmd_galois(const json& doc, const Options& opt) {
    check_keys(doc, {"field"}, "input");
    FieldDoc fd = parse_field_doc(need(doc, "field", "input"));
    Context c = build_context(fd, opt);
    json r = base("galois");
    r["field"] = field_echo(fd);
    r["order"] = c->order;
    bool abelian = true;
    for (int g = 0; g < c->order && abelian; ++g)
        for (int h = 0; h < g; ++h)
            if (c->mult[g][h] != c->mult[h][g]) {
                abelian = false;
                break;
            }
    r["abelian"] = abelian;
    r["hom_count"] = c->hom_count;
    r["factors"] = factors_json(*c);
    if (c->has_inertia) {
        r["inertia_order"] = static_cast<long>(c->inertia.size());
        r["frobenius_order"] =
            c->order / static_cast<long>(c->inertia.size());
    }
    if (c->has_components)
        r["component_count"] = static_cast<long>(c->components.size());
    if (c->field)
        r["level"] = json{{"degree", c->field->degree()},
                          {"e", c->field->e()},
                          {"f", c->field->f()},
                          {"description", c->field->describe()}};
    return r;
}

// ---------------------------------------------------------------------------
// Text rendering and driver.
// ---------------------------------------------------------------------------

void render_text(const json& r, std::ostream& out) {
    const std::string cmd = r.at("command").get<std::string>();
    if (cmd == "realize" || cmd == "classify" || cmd == "dual" ||
        cmd == "tensor")
        out << kClassificationSentence << "\n";
    for (auto it = r.begin(); it != r.end(); ++it) {
        if (it.key() == "schema") continue;
        if (it.value().is_string())
            out << it.key() << ": " << it.value().get<std::string>() << "\n";
        else
            out << it.key() << ": " << it.value().dump() << "\n";
    }
}

int emit_error(std::ostream& out, const char* type, const std::string& msg,
               int code) {
    json e;
    e["schema"] = kSchema;
    e["error"] = json{{"type", type}, {"message", msg}};
    out << e.dump(2) << "\n";
    return code;
}

using Handler = json (*)(const json&, const Options&);

struct CommandDef {
    const char* name;
    const char* help;
    Handler fn;
};

const CommandDef kCommands[] = {
    {"reflex",
     "reflex data of a CM type: stabilizer, fixed-field degree, norm matrix, "
     "tower presentation",
     cmd_reflex},
    {"classify",
     "canonical conjugate and isomorphism invariants of a CM type",
     cmd_classify},
    {"realize",
     "etale rank, Hodge-Tate multiplicities and Newton slopes of a CM module",
     cmd_realize},
    {"hom", "Hom dimension between two CM modules", cmd_hom},
    {"tensor", "tensor product of two CM types, with its factor algebra",
     cmd_tensor},
    {"dual", "dual CM type and its realization", cmd_dual},
    {"newton", "Newton-polygon slopes of a polynomial over Q_p", cmd_newton},
    {"snf", "elementary divisors of a matrix over Q[[xi]]/xi^N", cmd_snf},
    {"galois", "splitting-tower Galois data of a field or product of fields",
     cmd_galois},
};

} // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"symbolic calculator for complex-multiplication "
                 "Breuil-Kisin-Fargues modules over p-adic fields",
                 "cmbkf"};
    app.require_subcommand(1);
    std::vector<CLI::App*> subs;
    for (const CommandDef& c : kCommands) {
        CLI::App* s = app.add_subcommand(c.name, c.help);
        s->add_option("--precision", opt.precision,
                      "p-adic working precision")
            ->capture_default_str();
        s->add_option("--degree-bound", opt.degree_bound,
                      "largest splitting-tower degree to search")
            ->capture_default_str();
        s->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"json", "text"}))
            ->capture_default_str();
        s->add_option("--input", opt.input,
                      "input document: a file path, or - for stdin")
            ->capture_default_str();
        subs.push_back(s);
    }

    // CLI11's string-vector overload consumes arguments back to front.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const CommandDef* chosen = nullptr;
    for (size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) {
            chosen = &kCommands[i];
            break;
        }
    if (chosen == nullptr)
        return emit_error(out, "usage", "no command selected", 2);
    if (opt.precision < 4 || opt.precision > 65536)
        return emit_error(out, "usage", "--precision must lie in 4..65536", 2);
    if (opt.degree_bound < 1 || opt.degree_bound > 24)
        return emit_error(out, "usage", "--degree-bound must lie in 1..24", 2);

    std::string text;
    if (opt.input == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else {
        std::ifstream f(opt.input, std::ios::binary);
        if (!f)
            return emit_error(out, "usage",
                              "cannot open input file \"" + opt.input + "\"",
                              2);
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }

    try {
        const json doc = json::parse(text);
        const json result = chosen->fn(doc, opt);
        if (opt.format == "text")
            render_text(result, out);
        else
            out << result.dump(2) << "\n";
        return 0;
    } catch (const json::exception& e) {
        return emit_error(out, "schema", e.what(), 2);
    } catch (const PrecisionExhausted& e) {
        return emit_error(out, "precision-exhausted", e.what(), 3);
    } catch (const DegreeBoundExceeded& e) {
        return emit_error(out, "degree-bound-exceeded", e.what(), 3);
    } catch (const Singular& e) {
        return emit_error(out, "singular", e.what(), 3);
    } catch (const HenselConditionFailed& e) {
        return emit_error(out, "hensel-condition", e.what(), 3);
    } catch (const PrimitiveElementSearchFailed& e) {
        return emit_error(out, "primitive-element", e.what(), 3);
    } catch (const std::invalid_argument& e) {
        return emit_error(out, "schema", e.what(), 2);
    } catch (const std::exception& e) {
        return emit_error(out, "internal", e.what(), 1);
    }
}

} // namespace cmbkf::cli
