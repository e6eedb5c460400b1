#include "filippov/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"

#include "filippov/algebroid.hpp"
#include "filippov/cohomology.hpp"
#include "filippov/deformation.hpp"
#include "filippov/errors.hpp"
#include "filippov/json_io.hpp"
#include "filippov/parallel.hpp"

namespace filippov
{

namespace
{

using json_io::Json;
using json_io::to_json;

class Digest
{
public:
    Digest() : ctx_(EVP_MD_CTX_new())
    {
        if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("sha256 unavailable");
    }
    ~Digest() { EVP_MD_CTX_free(ctx_); }
    Digest(const Digest &) = delete;
    Digest &operator=(const Digest &) = delete;

    void update(const std::string &bytes) { EVP_DigestUpdate(ctx_, bytes.data(), bytes.size()); }
    std::string hex()
    {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_, md, &len);
        std::ostringstream os;
        for (unsigned int i = 0; i < len; ++i)
            os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
        return os.str();
    }

private:
    EVP_MD_CTX *ctx_;
};

// What a verb hands back.
struct Outcome
{
    int code = 0;
    std::string status;
    Json payload = Json::object();
    std::string text;
};

class Session
{
public:
    std::string read(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw input_error(path + ": cannot open");
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string bytes = ss.str();
        digest_.update(bytes);
        return bytes;
    }
    Json load(const std::string &path) { return json_io::parse_text(read(path), path); }

    template <class T>
    T parse(const std::string &path, T (*f)(const Json &, const std::string &))
    {
        Json j = load(path);
        try {
            return f(j, "");
        } catch (const input_error &e) {
            throw input_error(path + ": " + e.what());
        }
    }

    // Non-file inputs (flag values) also feed the digest.
    void read_literal(const std::string &text) { digest_.update(text); }

    std::string digest() { return digest_.hex(); }

private:
    Digest digest_;
};

std::string vec_text(const Vector &v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ", ";
        s += to_string(v[i]);
    }
    return s + "]";
}

std::string tuple_text(const std::vector<int> &t)
{
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(t[i] + 1);
    }
    return s + ")";
}

std::string witness_text(const Witness &w)
{
    std::string s = "  witness (" + w.condition + "):";
    for (const auto &t : w.tuples)
        s += " " + tuple_text(t);
    s += "\n  lhs = " + vec_text(w.lhs) + "\n  rhs = " + vec_text(w.rhs) + "\n";
    return s;
}

std::string poly_text(const MultiPoly &p)
{
    std::ostringstream os;
    os << p;
    return os.str();
}

std::string polys_text(const std::vector<MultiPoly> &v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ", ";
        s += poly_text(v[i]);
    }
    return s + "]";
}

std::string witness_text(const AlgebroidWitness &w)
{
    std::string s = "  witness (" + w.condition + "):\n";
    for (std::size_t i = 0; i < w.arguments.size(); ++i)
        s += "  arg " + std::to_string(i + 1) + " = " + polys_text(w.arguments[i].coords) + "\n";
    if (w.function)
        s += "  f = " + poly_text(*w.function) + "\n";
    s += "  lhs = " + polys_text(w.lhs) + "\n  rhs = " + polys_text(w.rhs) + "\n";
    return s;
}

Json verdict_json(const Verdict &v)
{
    Json j{{"status", v.holds ? "holds" : "fails"}};
    if (v.witness)
        j["witness"] = to_json(*v.witness);
    return j;
}

Json verdict_json(const AlgebroidVerdict &v)
{
    Json j{{"status", v.holds ? "holds" : "fails"}};
    if (v.witness)
        j["witness"] = to_json(*v.witness);
    return j;
}

std::string verdict_line(const std::string &name, const Verdict &v)
{
    std::string s = name + ": " + (v.holds ? "holds" : "fails") + "\n";
    if (v.witness)
        s += witness_text(*v.witness);
    return s;
}

std::string verdict_line(const std::string &name, const AlgebroidVerdict &v)
{
    std::string s = name + ": " + (v.holds ? "holds" : "fails") + "\n";
    if (v.witness)
        s += witness_text(*v.witness);
    return s;
}

// Math precondition on the base: report the FI witness as a failure.
Outcome fi_failure(const NLieAlgebra &a)
{
    Outcome o;
    auto v = check_fundamental_identity(a);
    o.code = 1;
    o.status = "fails";
    o.payload["fundamental_identity"] = verdict_json(v);
    o.text = verdict_line("fundamental identity", v);
    return o;
}

std::string pretty(const Json &j)
{
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

struct CheckArgs
{
    std::string algebra, rep, o_operator;
};

Outcome run_check(Session &s, const CheckArgs &a)
{
    Outcome o;
    auto alg = s.parse(a.algebra, json_io::algebra_from_json);
    auto fi = check_fundamental_identity(alg);
    o.payload["fundamental_identity"] = verdict_json(fi);
    o.text += verdict_line("fundamental identity", fi);
    bool ok = fi.holds;
    if (!a.rep.empty()) {
        auto rho = s.parse(a.rep, json_io::representation_from_json);
        if (rho.arity() != alg.arity() || rho.algebra_dim() != alg.dim())
            throw dimension_error("representation does not match the algebra");
        auto rv = check_representation(alg, rho);
        o.payload["representation"] = verdict_json(rv);
        o.text += verdict_line("representation", rv);
        ok = ok && rv.holds;
        if (!a.o_operator.empty()) {
            auto t = s.parse(a.o_operator, json_io::matrix_from_json);
            auto ov = check_o_operator(alg, rho, t);
            o.payload["o_operator"] = verdict_json(ov);
            o.text += verdict_line("O-operator", ov);
            ok = ok && ov.holds;
        }
    } else if (!a.o_operator.empty()) {
        throw input_error("--o-operator needs --rep");
    }
    o.code = ok ? 0 : 1;
    o.status = ok ? "holds" : "fails";
    return o;
}

struct CohomologyArgs
{
    std::string algebra;
    int degree = -1;
    bool lift_cap = false;
};

Outcome run_cohomology(Session &s, const CohomologyArgs &a)
{
    auto alg = s.parse(a.algebra, json_io::algebra_from_json);
    if (a.degree > default_degree_cap && !a.lift_cap)
        throw input_error("degree " + std::to_string(a.degree) + " is above the cap " +
                          std::to_string(default_degree_cap) + "; pass --max-degree-cap to allow it");
    if (!check_fundamental_identity(alg).holds)
        return fi_failure(alg);
    Outcome o;
    int lo = a.degree < 0 ? 0 : a.degree;
    int hi = a.degree < 0 ? default_degree_cap : a.degree;
    Json reports = Json::array();
    for (int k = lo; k <= hi; ++k) {
        auto r = cohomology(alg, k, a.lift_cap);
        reports.push_back(to_json(r));
        o.text += "H^" + std::to_string(k) + "_F: betti " + std::to_string(r.betti) + " (dim C^" + std::to_string(k) +
                  " = " + std::to_string(r.dim_cochains) + ", rank out = " + std::to_string(r.rank_d_out) +
                  ", rank in = " + std::to_string(r.rank_d_in) + ")\n";
    }
    o.payload["cohomology"] = reports;
    o.status = "ok";
    return o;
}

struct NijenhuisArgs
{
    std::string algebra, op;
    bool generate = false;
};

Outcome run_nijenhuis(Session &s, const NijenhuisArgs &a)
{
    auto alg = s.parse(a.algebra, json_io::algebra_from_json);
    auto n = s.parse(a.op, json_io::matrix_from_json);
    if (n.rows() != static_cast<std::size_t>(alg.dim()) || n.cols() != n.rows())
        throw dimension_error("N must be a dim x dim matrix");
    if (!check_fundamental_identity(alg).holds)
        return fi_failure(alg);
    Outcome o;
    auto v = check_nijenhuis(alg, n);
    o.payload["nijenhuis"] = verdict_json(v);
    o.text += verdict_line("Nijenhuis condition", v);
    o.code = v.holds ? 0 : 1;
    o.status = v.holds ? "holds" : "fails";
    if (v.holds && a.generate) {
        auto path = deformation_from_nijenhuis(alg, n);
        auto dc = check_deformation(path, DeformationMode::full);
        bool trivial = !trivial_identity_defect(path, n).has_value();
        bool phi1 = CoboundaryOperator(alg)(Cochain::from_linear_map(alg.arity(), n)) == path.term(1);
        o.payload["path"] = to_json(path);
        o.payload["path_checks"] = Json{{"deformation_equations", dc.holds}, {"trivial_identity", trivial},
                                        {"phi1_equals_coboundary_of_N", phi1}};
        o.text += std::string("generated path of order ") + std::to_string(path.order()) + "\n" +
                  "  deformation equations: " + (dc.holds ? "hold" : "fail") + "\n" +
                  "  (Id + tN) intertwines: " + (trivial ? "yes" : "no") + "\n" +
                  "  phi_1 = delta_F(N): " + (phi1 ? "yes" : "no") + "\n" + pretty(to_json(path));
        if (!(dc.holds && trivial && phi1)) {
            o.code = 1;
            o.status = "fails";
        }
    }
    return o;
}

struct DeformArgs
{
    std::string path, path2, phi, algebra;
    bool full = false;
    int max_order = 2;
    int trials = 5;
};

Outcome run_deform_check(Session &s, const DeformArgs &a)
{
    auto path = s.parse(a.path, json_io::path_from_json);
    if (!check_fundamental_identity(path.base).holds)
        return fi_failure(path.base);
    Outcome o;
    auto dc = check_deformation(path, a.full ? DeformationMode::full : DeformationMode::truncated);
    Json j{{"mode", a.full ? "full" : "truncated"}, {"status", dc.holds ? "holds" : "fails"}};
    o.text = std::string("deformation equations (") + (a.full ? "full" : "truncated") +
             ", order " + std::to_string(path.order()) + "): " + (dc.holds ? "hold" : "fail") + "\n";
    if (!dc.holds) {
        j["first_failing_power"] = *dc.first_failing_power;
        j["condition"] = dc.condition;
        j["defect"] = to_json(*dc.defect);
        o.text += "  first failing power " + std::to_string(*dc.first_failing_power) + " (condition " +
                  std::to_string(dc.condition) + ")\n";
    }
    o.payload["deformation"] = j;
    if (check_deformation(path).holds) {
        auto ic = infinitesimal_class(path);
        o.payload["infinitesimal"] = Json{{"power", ic.power},
                                          {"cocycle", ic.cocycle},
                                          {"coordinates", to_json(ic.coordinates)},
                                          {"exact", ic.exact}};
        o.text += "infinitesimal: power " + std::to_string(ic.power) + ", class " + vec_text(ic.coordinates) +
                  (ic.exact ? " (zero in H^2)" : "") + "\n";
    }
    o.code = dc.holds ? 0 : 1;
    o.status = dc.holds ? "holds" : "fails";
    return o;
}

Outcome run_deform_extend(Session &s, const DeformArgs &a)
{
    auto path = s.parse(a.path, json_io::path_from_json);
    if (!check_fundamental_identity(path.base).holds)
        return fi_failure(path.base);
    Outcome o;
    if (!check_deformation(path).holds) {
        o.code = 1;
        o.status = "fails";
        o.text = "path fails the deformation equations; nothing to extend\n";
        o.payload["deformation"] = Json{{"status", "fails"}};
        return o;
    }
    auto ob = obstruction(path);
    auto e = extend(path);
    o.payload["obstruction"] = to_json(e.theta);
    o.payload["obstruction_is_cocycle"] = ob.cocycle;
    o.text = std::string("obstruction: ") + (e.theta.is_zero() ? "zero" : "nonzero") +
             (ob.cocycle ? ", a cocycle" : ", NOT a cocycle") + "\n";
    if (e.next) {
        DeformationPath ext = path;
        ext.terms.push_back(*e.next);
        o.payload["next"] = to_json(*e.next);
        o.payload["extended_path"] = to_json(ext);
        o.text += "extends to order " + std::to_string(ext.order()) + "; next term:\n" + pretty(to_json(*e.next));
        o.status = "extends";
    } else {
        o.payload["certificate"] = to_json(*e.certificate);
        o.text += "obstructed: class of the obstruction is nonzero\n  certificate y (y^T delta = 0, y.theta != 0) = " +
                  vec_text(*e.certificate) + "\n";
        o.status = "obstructed";
        o.code = 1;
    }
    return o;
}

Outcome run_deform_equiv(Session &s, const DeformArgs &a)
{
    auto p1 = s.parse(a.path, json_io::path_from_json);
    auto p2 = s.parse(a.path2, json_io::path_from_json);
    auto phi = s.parse(a.phi, json_io::equivalence_from_json);
    Outcome o;
    auto r = check_equivalence(p1, p2, phi);
    Json j{{"status", r.holds ? "holds" : "fails"}};
    if (r.failing_power)
        j["failing_power"] = *r.failing_power;
    o.payload["equivalence"] = j;
    o.text = std::string("equivalence: ") + (r.holds ? "holds" : "fails") +
             (r.failing_power ? " (first differing power " + std::to_string(*r.failing_power) + ")" : "") + "\n";
    o.code = r.holds ? 0 : 1;
    o.status = r.holds ? "holds" : "fails";
    return o;
}

Outcome run_deform_rigidity(Session &s, const DeformArgs &a, std::uint64_t seed)
{
    auto alg = s.parse(a.algebra, json_io::algebra_from_json);
    if (a.max_order < 0 || a.trials < 0)
        throw input_error("--max-order and --trials must be non-negative");
    if (!check_fundamental_identity(alg).holds)
        return fi_failure(alg);
    Outcome o;
    auto rep = rigidity_probe(alg, a.max_order, a.trials, seed);
    Json trials = Json::array();
    o.text = "note: " + rep.note + "\nH^2_F dimension: " + std::to_string(rep.h2) + "\n";
    for (std::size_t i = 0; i < rep.trials.size(); ++i) {
        const auto &t = rep.trials[i];
        Json j{{"order", t.order}, {"trivialized", t.trivialized}, {"verified", t.verified}};
        if (t.blocked_power)
            j["blocked_power"] = *t.blocked_power;
        j["path"] = to_json(t.path);
        if (t.equivalence)
            j["equivalence"] = to_json(*t.equivalence);
        trials.push_back(std::move(j));
        o.text += "trial " + std::to_string(i + 1) + ": order " + std::to_string(t.order) + ", " +
                  (t.trivialized ? std::string("trivialized") + (t.verified ? " and verified" : " (verification failed)")
                                 : "not trivialized (power " + std::to_string(t.blocked_power.value_or(0)) +
                                       " is not a coboundary)") +
                  "\n";
    }
    o.payload["note"] = rep.note;
    o.payload["h2"] = rep.h2;
    o.payload["trials"] = trials;
    o.payload["all_trivialized"] = rep.all_trivialized;
    o.code = rep.all_trivialized ? 0 : 1;
    o.status = rep.all_trivialized ? "all trivialized" : "not all trivialized";
    return o;
}

Outcome run_obstruction(Session &s, const std::string &path_file)
{
    auto path = s.parse(path_file, json_io::path_from_json);
    if (!check_fundamental_identity(path.base).holds)
        return fi_failure(path.base);
    Outcome o;
    if (!check_deformation(path).holds) {
        o.code = 1;
        o.status = "fails";
        o.text = "path fails the deformation equations\n";
        return o;
    }
    auto ob = obstruction(path);
    o.payload["obstruction"] = to_json(ob.theta);
    o.payload["is_zero"] = ob.theta.is_zero();
    o.payload["cocycle"] = ob.cocycle;
    o.text = std::string("obstruction: ") + (ob.theta.is_zero() ? "zero" : "nonzero") + "\n" +
             "delta_F(theta) = 0: " + (ob.cocycle ? "yes" : "no") + "\n" + pretty(to_json(ob.theta));
    o.code = ob.cocycle ? 0 : 1;
    o.status = ob.cocycle ? "ok" : "fails";
    return o;
}

struct AlgebroidArgs
{
    std::string file;
    int sections_degree = 3;
    bool anchor_sections = false;
    bool symbol = false;
    std::string f = "1";
    bool check = false;
    int m_base = 3;
    int n = 2;
};

Outcome algebroid_report(const PolyFilippovAlgebroid &abd, const AlgebroidArgs &a, std::uint64_t seed)
{
    Outcome o;
    AlgebroidCheckOptions opt;
    opt.max_degree = a.sections_degree;
    opt.anchor_level = a.anchor_sections ? AnchorLevel::sections : AnchorLevel::generators;
    opt.seed = seed;
    auto v = check_algebroid_axioms(abd, opt);
    o.payload["axioms"] = verdict_json(v);
    o.text += verdict_line("algebroid axioms", v);
    bool ok = v.holds;
    if (a.symbol) {
        auto sv = check_symbol_leibniz(abd, abd.structure(), abd.structure(), a.sections_degree);
        o.payload["symbol_leibniz"] = verdict_json(sv);
        o.text += verdict_line("symbol of [phi,phi]", sv);
        ok = ok && sv.holds;
    }
    o.code = ok ? 0 : 1;
    o.status = ok ? "holds" : "fails";
    return o;
}

MultiPoly parse_function(const std::string &text, int num_vars)
{
    // A bare rational is a constant, otherwise a JSON term list.
    try {
        return MultiPoly::constant(num_vars, parse_rational(text));
    } catch (const input_error &) {
    }
    return json_io::poly_from_json(json_io::parse_text(text, "--f"), num_vars, "--f");
}

Outcome run_algebroid_check(Session &s, const AlgebroidArgs &a, std::uint64_t seed)
{
    auto abd = s.parse(a.file, json_io::algebroid_from_json);
    return algebroid_report(abd, a, seed);
}

Outcome run_example_fc(Session &s, const AlgebroidArgs &a, std::uint64_t seed)
{
    auto alg = s.parse(a.file, json_io::algebra_from_json);
    s.read_literal(a.f);
    if (!check_fundamental_identity(alg).holds)
        return fi_failure(alg);
    auto abd = example_tangent_fc(alg, parse_function(a.f, alg.dim()));
    Outcome o;
    if (a.check)
        o = algebroid_report(abd, a, seed);
    else
        o.status = "ok";
    o.payload["algebroid"] = to_json(abd);
    o.text += pretty(to_json(abd));
    return o;
}

Outcome run_example_topform(Session &s, const AlgebroidArgs &a, std::uint64_t seed)
{
    s.read_literal("topform " + std::to_string(a.m_base) + " " + std::to_string(a.n));
    if (a.n < 1 || a.n > a.m_base)
        throw input_error("need 1 <= n <= m_base");
    auto abd = example_tangent_topform(a.m_base, a.n);
    Outcome o;
    if (a.check)
        o = algebroid_report(abd, a, seed);
    else
        o.status = "ok";
    o.payload["algebroid"] = to_json(abd);
    o.text += pretty(to_json(abd));
    return o;
}

Outcome run_reduce_lie(Session &s, const std::string &file)
{
    auto alg = s.parse(file, json_io::algebra_from_json);
    if (alg.arity() != 2)
        throw input_error("reduce-lie needs a binary bracket (arity 2)");
    if (!check_fundamental_identity(alg).holds)
        return fi_failure(alg);
    Outcome o;
    auto reps = reduce_lie(alg);
    Json arr = Json::array();
    bool ok = true;
    for (const auto &r : reps) {
        arr.push_back(Json{{"degree", r.degree},
                           {"agree", r.agree},
                           {"rows", r.rows},
                           {"cols", r.cols},
                           {"generic_zero", r.generic_zero},
                           {"ce_zero", r.ce_zero}});
        o.text += "degree " + std::to_string(r.degree) + ": " + (r.agree ? "agree" : "DISAGREE") + " (" +
                  std::to_string(r.rows) + " x " + std::to_string(r.cols) +
                  (r.generic_zero ? ", zero map" : "") + ")\n";
        ok = ok && r.agree;
    }
    o.payload["degrees"] = arr;
    o.code = ok ? 0 : 1;
    o.status = ok ? "agree" : "disagree";
    return o;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Exact deformation theory of Filippov (n-Lie) algebras and polynomial algebroids", tool_name};
    app.fallthrough();
    app.require_subcommand(1);
    std::string format = "text";
    std::uint64_t seed = 1;
    int threads = 0;
    bool timing = false;
    app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", seed, "seed for sampled families");
    app.add_option("--threads", threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_flag("--timing", timing, "include wall-clock time in the report");
    app.set_version_flag("--version", std::string(tool_name) + " " + tool_version);

    std::function<Outcome(Session &)> action;
    std::string command;

    CheckArgs check_args;
    auto *check = app.add_subcommand("check", "fundamental identity (and optionally a representation / O-operator)");
    check->add_option("algebra", check_args.algebra)->required();
    check->add_option("--rep", check_args.rep, "representation JSON");
    check->add_option("--o-operator", check_args.o_operator, "matrix JSON for T: E -> L");
    check->callback([&] {
        command = "check";
        action = [&](Session &s) { return run_check(s, check_args); };
    });

    CohomologyArgs coh_args;
    auto *coh = app.add_subcommand("cohomology", "deformation cohomology H^k_F");
    coh->add_option("algebra", coh_args.algebra)->required();
    coh->add_option("--degree", coh_args.degree, "degree k (default: 0..cap)")->check(CLI::NonNegativeNumber);
    coh->add_flag("--max-degree-cap", coh_args.lift_cap, "allow degrees above the default cap");
    coh->callback([&] {
        command = "cohomology";
        action = [&](Session &s) { return run_cohomology(s, coh_args); };
    });

    NijenhuisArgs nij_args;
    auto *nij = app.add_subcommand("nijenhuis", "Nijenhuis condition for N");
    nij->add_option("algebra", nij_args.algebra)->required();
    nij->add_option("N", nij_args.op, "matrix JSON")->required();
    nij->add_flag("--generate-path", nij_args.generate, "emit and verify the deformation generated by N");
    nij->callback([&] {
        command = "nijenhuis";
        action = [&](Session &s) { return run_nijenhuis(s, nij_args); };
    });

    DeformArgs def_args;
    auto *def = app.add_subcommand("deform", "finite-order deformations");
    def->require_subcommand(1);
    auto *dcheck = def->add_subcommand("check", "deformation equations");
    dcheck->add_option("path", def_args.path)->required();
    dcheck->add_flag("--full", def_args.full, "check every power up to 2k");
    dcheck->callback([&] {
        command = "deform check";
        action = [&](Session &s) { return run_deform_check(s, def_args); };
    });
    auto *dext = def->add_subcommand("extend", "solve for the next term");
    dext->add_option("path", def_args.path)->required();
    dext->callback([&] {
        command = "deform extend";
        action = [&](Session &s) { return run_deform_extend(s, def_args); };
    });
    auto *deq = def->add_subcommand("equiv", "check path2 = Phi^{-1} path1(Phi .)");
    deq->add_option("path1", def_args.path)->required();
    deq->add_option("path2", def_args.path2)->required();
    deq->add_option("phi", def_args.phi)->required();
    deq->callback([&] {
        command = "deform equiv";
        action = [&](Session &s) { return run_deform_equiv(s, def_args); };
    });
    auto *drig = def->add_subcommand("rigidity", "sample deformations and try to trivialize them");
    drig->add_option("algebra", def_args.algebra)->required();
    drig->add_option("--max-order", def_args.max_order, "highest order sampled");
    drig->add_option("--trials", def_args.trials, "number of sampled paths");
    drig->callback([&] {
        command = "deform rigidity";
        action = [&](Session &s) { return run_deform_rigidity(s, def_args, seed); };
    });

    std::string obst_path;
    auto *obst = app.add_subcommand("obstruction", "obstruction cochain of a path");
    obst->add_option("path", obst_path)->required();
    obst->callback([&] {
        command = "obstruction";
        action = [&](Session &s) { return run_obstruction(s, obst_path); };
    });

    AlgebroidArgs abd_args;
    auto *abd = app.add_subcommand("algebroid", "polynomial-base algebroids");
    abd->require_subcommand(1);
    auto add_check_flags = [&](CLI::App *c) {
        c->add_option("--sections-degree", abd_args.sections_degree, "degree bound of the function family")
            ->check(CLI::Range(0, 3));
        c->add_flag("--anchor-sections", abd_args.anchor_sections, "check the anchor axiom on polynomial sections");
        c->add_flag("--symbol", abd_args.symbol, "also check the symbol formula for [phi,phi]");
    };
    auto *acheck = abd->add_subcommand("check", "algebroid axioms");
    acheck->add_option("algebroid", abd_args.file)->required();
    add_check_flags(acheck);
    acheck->callback([&] {
        command = "algebroid check";
        action = [&](Session &s) { return run_algebroid_check(s, abd_args, seed); };
    });
    auto *afc = abd->add_subcommand("example-fc", "bracket f * c on the tangent bundle, zero anchor");
    afc->add_option("algebra", abd_args.file)->required();
    afc->add_option("--f", abd_args.f, "rational or JSON term list");
    afc->add_flag("--check", abd_args.check, "run the axiom checks on the result");
    add_check_flags(afc);
    afc->callback([&] {
        command = "algebroid example-fc";
        action = [&](Session &s) { return run_example_fc(s, abd_args, seed); };
    });
    auto *atop = abd->add_subcommand("example-topform", "zero bracket, anchor dx_1^..^dx_n (x) d/dx_1");
    atop->add_option("--m-base", abd_args.m_base, "base dimension")->check(CLI::PositiveNumber);
    atop->add_option("--n", abd_args.n, "form degree (arity n+1)")->check(CLI::PositiveNumber);
    atop->add_flag("--check", abd_args.check, "run the axiom checks on the result");
    add_check_flags(atop);
    atop->callback([&] {
        command = "algebroid example-topform";
        action = [&](Session &s) { return run_example_topform(s, abd_args, seed); };
    });

    std::string lie_file;
    auto *lie = app.add_subcommand("reduce-lie", "compare with the Chevalley-Eilenberg differential (n = 2)");
    lie->add_option("algebra", lie_file)->required();
    lie->callback([&] {
        command = "reduce-lie";
        action = [&](Session &s) { return run_reduce_lie(s, lie_file); };
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    set_thread_count(static_cast<unsigned>(threads));
    Session session;
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
        o = action(session);
    } catch (const input_error &e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const dimension_error &e) {
        err << "dimension error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error &e) {
        err << "precondition failed: " << e.what() << "\n";
        return 1;
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    const std::string digest = session.digest();
    if (format == "json") {
        Json report{{"tool", tool_name},
                    {"version", tool_version},
                    {"command", command},
                    {"input_digest", "sha256:" + digest},
                    {"status", o.status}};
        for (auto it = o.payload.begin(); it != o.payload.end(); ++it)
            report[it.key()] = it.value();
        if (timing)
            report["timing_ms"] = ms;
        out << report.dump(2) << "\n";
    } else {
        out << o.text;
        out << "status: " << o.status << "\n";
        if (timing)
            out << "time: " << std::fixed << std::setprecision(1) << ms << " ms\n";
    }
    return o.code;
}

} // namespace filippov
