#include "filippov/json_io.hpp"

#include "filippov/combinatorics.hpp"
#include "filippov/errors.hpp"

namespace filippov::json_io
{

namespace
{

[[noreturn]] void fail(const std::string &at, const std::string &what)
{
    throw input_error("at " + (at.empty() ? std::string("/") : at) + ": " + what);
}

const Json &field(const Json &j, const char *name, const std::string &at)
{
    if (!j.is_object())
        fail(at, "expected an object");
    auto it = j.find(name);
    if (it == j.end())
        fail(at, std::string("missing field \"") + name + "\"");
    return *it;
}

int int_field(const Json &j, const char *name, const std::string &at, int lo, int hi)
{
    const Json &v = field(j, name, at);
    if (!v.is_number_integer())
        fail(at + "/" + name, "expected an integer");
    auto x = v.get<long long>();
    if (x < lo || x > hi)
        fail(at + "/" + name, "value " + std::to_string(x) + " out of range [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    return static_cast<int>(x);
}

const Json &array_field(const Json &j, const char *name, const std::string &at)
{
    const Json &v = field(j, name, at);
    if (!v.is_array())
        fail(at + "/" + name, "expected an array");
    return v;
}

// 1-based indices in [1, dim] -> 0-based.
std::vector<int> index_list(const Json &j, int dim, const std::string &at)
{
    if (!j.is_array())
        fail(at, "expected an array of indices");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer())
            fail(at + "/" + std::to_string(i), "expected an integer index");
        auto x = j[i].get<long long>();
        if (x < 1 || x > dim)
            fail(at + "/" + std::to_string(i), "index " + std::to_string(x) + " outside 1.." + std::to_string(dim));
        out.push_back(static_cast<int>(x - 1));
    }
    return out;
}

void require_increasing(const std::vector<int> &idx, std::size_t count, const std::string &at)
{
    if (idx.size() != count)
        fail(at, "expected " + std::to_string(count) + " indices");
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (idx[i - 1] >= idx[i])
            fail(at, "indices must be strictly increasing");
}

Json one_based(std::span<const int> idx)
{
    Json out = Json::array();
    for (int i : idx)
        out.push_back(i + 1);
    return out;
}

// Sorts indices; returns sign, 0 on repeats.
std::pair<std::size_t, int> ranked(const std::vector<int> &idx, int dim)
{
    auto [mask, sign] = sorted_mask(idx);
    if (sign == 0)
        return {0, 0};
    return {SubsetIndex::get(dim, static_cast<int>(idx.size())).rank(mask), sign};
}

constexpr int max_dim = 24;

} // namespace

Json parse_text(const std::string &text, const std::string &source)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw input_error(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

Json to_json(const Rational &r)
{
    return to_string(r);
}

Rational rational_from_json(const Json &j, const std::string &at)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (!j.is_string())
        fail(at, "expected a rational string \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const input_error &e) {
        fail(at, e.what());
    }
}

Json to_json(const Vector &v)
{
    Json out = Json::array();
    for (const auto &x : v)
        out.push_back(to_json(x));
    return out;
}

Json sparse_to_json(const Vector &v)
{
    Json out = Json::object();
    for (std::size_t k = 0; k < v.size(); ++k)
        if (sgn(v[k]) != 0)
            out[std::to_string(k + 1)] = to_json(v[k]);
    return out;
}

Vector sparse_from_json(const Json &j, int dim, const std::string &at)
{
    Vector out(static_cast<std::size_t>(dim));
    if (j.is_array()) {
        if (j.size() != static_cast<std::size_t>(dim))
            fail(at, "dense vector must have " + std::to_string(dim) + " entries");
        for (std::size_t k = 0; k < j.size(); ++k)
            out[k] = rational_from_json(j[k], at + "/" + std::to_string(k));
        return out;
    }
    if (!j.is_object())
        fail(at, "expected {\"k\": \"p/q\"} or an array");
    for (auto it = j.begin(); it != j.end(); ++it) {
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(it.key(), &used);
            if (used != it.key().size())
                throw std::invalid_argument("trailing");
        } catch (const std::exception &) {
            fail(at, "key \"" + it.key() + "\" is not an index");
        }
        if (k < 1 || k > dim)
            fail(at, "key " + it.key() + " outside 1.." + std::to_string(dim));
        out[static_cast<std::size_t>(k - 1)] = rational_from_json(it.value(), at + "/" + it.key());
    }
    return out;
}

Json to_json(const MultiPoly &p)
{
    Json out = Json::array();
    for (const auto &[e, c] : p.terms())
        out.push_back(Json{{"exponents", e}, {"coeff", to_json(c)}});
    return out;
}

MultiPoly poly_from_json(const Json &j, int num_vars, const std::string &at)
{
    if (!j.is_array())
        fail(at, "expected a list of terms");
    MultiPoly out(num_vars);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string here = at + "/" + std::to_string(i);
        const Json &e = array_field(j[i], "exponents", here);
        if (e.size() != static_cast<std::size_t>(num_vars))
            fail(here + "/exponents", "expected " + std::to_string(num_vars) + " exponents");
        Exponents exps;
        for (std::size_t v = 0; v < e.size(); ++v) {
            if (!e[v].is_number_integer() || e[v].get<long long>() < 0)
                fail(here + "/exponents/" + std::to_string(v), "expected a natural number");
            exps.push_back(static_cast<std::uint32_t>(e[v].get<long long>()));
        }
        out.add_term(exps, rational_from_json(field(j[i], "coeff", here), here + "/coeff"));
    }
    return out;
}

Json to_json(const PolyVectorField &v)
{
    Json out = Json::array();
    for (const auto &c : v.components())
        out.push_back(to_json(c));
    return out;
}

PolyVectorField field_from_json(const Json &j, int num_vars, const std::string &at)
{
    if (!j.is_array() || j.size() != static_cast<std::size_t>(num_vars))
        fail(at, "vector field needs " + std::to_string(num_vars) + " polynomial components");
    std::vector<MultiPoly> comps;
    for (std::size_t i = 0; i < j.size(); ++i)
        comps.push_back(poly_from_json(j[i], num_vars, at + "/" + std::to_string(i)));
    return PolyVectorField(std::move(comps));
}

Json to_json(const PolySection &s)
{
    Json out = Json::array();
    for (const auto &c : s.coords)
        out.push_back(to_json(c));
    return out;
}

PolySection section_from_json(const Json &j, int num_vars, int rank, const std::string &at)
{
    if (!j.is_array() || j.size() != static_cast<std::size_t>(rank))
        fail(at, "section needs " + std::to_string(rank) + " polynomial coordinates");
    PolySection s;
    for (std::size_t i = 0; i < j.size(); ++i)
        s.coords.push_back(poly_from_json(j[i], num_vars, at + "/" + std::to_string(i)));
    return s;
}

Json to_json(const RationalMatrix &m)
{
    Json out = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

RationalMatrix matrix_from_json(const Json &j, const std::string &at)
{
    if (!j.is_array())
        fail(at, "expected a matrix as a list of rows");
    std::vector<Vector> rows;
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string here = at + "/" + std::to_string(r);
        if (!j[r].is_array())
            fail(here, "expected a row");
        if (r > 0 && j[r].size() != j[0].size())
            fail(here, "ragged matrix");
        Vector row;
        for (std::size_t c = 0; c < j[r].size(); ++c)
            row.push_back(rational_from_json(j[r][c], here + "/" + std::to_string(c)));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        return RationalMatrix();
    return RationalMatrix::from_rows(rows);
}

Json to_json(const NLieAlgebra &a)
{
    Json br = Json::array();
    const auto &keys = SubsetIndex::get(a.dim(), a.arity());
    for (std::size_t k = 0; k < a.num_keys(); ++k)
        if (!is_zero(a.structure(k)))
            br.push_back(Json{{"on", one_based(keys.elements(k))}, {"value", sparse_to_json(a.structure(k))}});
    return Json{{"arity", a.arity()}, {"dim", a.dim()}, {"brackets", std::move(br)}};
}

NLieAlgebra algebra_from_json(const Json &j, const std::string &at)
{
    const int n = int_field(j, "arity", at, 2, max_dim);
    const int m = int_field(j, "dim", at, 1, max_dim);
    NLieAlgebra a(n, m);
    if (n > m) {
        if (j.contains("brackets") && !j["brackets"].empty())
            fail(at + "/brackets", "arity exceeds dim, no brackets possible");
        return a;
    }
    const Json &br = array_field(j, "brackets", at);
    std::vector<bool> seen(a.num_keys(), false);
    for (std::size_t i = 0; i < br.size(); ++i) {
        const std::string here = at + "/brackets/" + std::to_string(i);
        auto idx = index_list(field(br[i], "on", here), m, here + "/on");
        require_increasing(idx, static_cast<std::size_t>(n), here + "/on");
        auto [rank, sign] = ranked(idx, m);
        if (seen[rank])
            fail(here + "/on", "duplicate bracket entry");
        seen[rank] = true;
        a.structure(rank) = sparse_from_json(field(br[i], "value", here), m, here + "/value");
    }
    return a;
}

Json to_json(const Representation &rho)
{
    Json act = Json::array();
    const int n = rho.arity();
    const auto &keys = SubsetIndex::get(rho.algebra_dim(), n - 1);
    for (std::size_t w = 0; w < keys.size(); ++w)
        for (int j = 0; j < rho.module_dim(); ++j)
            if (!is_zero(rho.action(w, j)))
                act.push_back(Json{{"on", one_based(keys.elements(w))},
                                   {"of", j + 1},
                                   {"value", sparse_to_json(rho.action(w, j))}});
    return Json{{"arity", n}, {"dim", rho.algebra_dim()}, {"module_dim", rho.module_dim()}, {"action", act}};
}

Representation representation_from_json(const Json &j, const std::string &at)
{
    const int n = int_field(j, "arity", at, 2, max_dim);
    const int m = int_field(j, "dim", at, 1, max_dim);
    const int r = int_field(j, "module_dim", at, 1, max_dim);
    if (n - 1 > m)
        fail(at, "arity exceeds dim + 1");
    Representation rho(n, m, r);
    const Json &act = array_field(j, "action", at);
    for (std::size_t i = 0; i < act.size(); ++i) {
        const std::string here = at + "/action/" + std::to_string(i);
        auto idx = index_list(field(act[i], "on", here), m, here + "/on");
        require_increasing(idx, static_cast<std::size_t>(n - 1), here + "/on");
        const Json &of = field(act[i], "of", here);
        if (!of.is_number_integer() || of.get<long long>() < 1 || of.get<long long>() > r)
            fail(here + "/of", "module index outside 1.." + std::to_string(r));
        rho.set_action(idx, static_cast<int>(of.get<long long>() - 1),
                       sparse_from_json(field(act[i], "value", here), r, here + "/value"));
    }
    return rho;
}

Json to_json(const Cochain &c)
{
    const int n = c.arity(), m = c.dim(), p = c.degree();
    const auto mm = static_cast<std::size_t>(m);
    Json entries = Json::array();
    if (p == -1) {
        const auto &keys = SubsetIndex::get(m, n - 1);
        for (std::size_t k = 0; k < c.size(); ++k)
            if (sgn(c.values()[k]) != 0)
                entries.push_back(Json{{"tensor_blocks", Json::array()},
                                       {"wedge", one_based(keys.elements(k))},
                                       {"value", to_json(c.values()[k])}});
    } else {
        for (std::size_t key = 0; key < c.num_keys(); ++key) {
            Vector v(c.values().begin() + static_cast<std::ptrdiff_t>(key * mm),
                     c.values().begin() + static_cast<std::ptrdiff_t>((key + 1) * mm));
            if (is_zero(v))
                continue;
            Json blocks = Json::array();
            Json wedge;
            if (p == 0) {
                wedge = Json::array({static_cast<int>(key) + 1});
            } else {
                auto [br, w] = c.key_of(key);
                const auto &bk = SubsetIndex::get(m, n - 1);
                for (std::size_t b : br)
                    blocks.push_back(one_based(bk.elements(b)));
                wedge = one_based(SubsetIndex::get(m, n).elements(w));
            }
            entries.push_back(Json{{"tensor_blocks", blocks}, {"wedge", wedge}, {"value", sparse_to_json(v)}});
        }
    }
    return Json{{"arity", n}, {"dim", m}, {"degree", p}, {"entries", entries}};
}

Cochain cochain_from_json(const Json &j, const std::string &at)
{
    const int n = int_field(j, "arity", at, 2, max_dim);
    const int m = int_field(j, "dim", at, 1, max_dim);
    const int p = int_field(j, "degree", at, -1, 8);
    if (n > m && p != -1)
        fail(at, "arity exceeds dim");
    Cochain c(n, m, p);
    const auto mm = static_cast<std::size_t>(m);
    const Json &entries = array_field(j, "entries", at);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string here = at + "/entries/" + std::to_string(i);
        const Json &e = entries[i];
        const Json *tb = e.contains("tensor_blocks") ? &e["tensor_blocks"] : nullptr;
        auto wedge = index_list(field(e, "wedge", here), m, here + "/wedge");
        if (p == -1) {
            if (wedge.size() != static_cast<std::size_t>(n - 1))
                fail(here + "/wedge", "degree -1 entries are (n-1)-wedges");
            auto [rank, sign] = ranked(wedge, m);
            if (sign == 0)
                fail(here + "/wedge", "repeated index");
            Rational v = rational_from_json(field(e, "value", here), here + "/value");
            c.values()[rank] += sign * v;
            continue;
        }
        Vector v = sparse_from_json(field(e, "value", here), m, here + "/value");
        std::size_t key = 0;
        int sign = 1;
        if (p == 0) {
            if (wedge.size() != 1)
                fail(here + "/wedge", "degree 0 entries name a single basis vector");
            if (tb && !tb->empty())
                fail(here + "/tensor_blocks", "degree 0 has no tensor blocks");
            key = static_cast<std::size_t>(wedge[0]);
        } else {
            if (!tb || !tb->is_array() || tb->size() != static_cast<std::size_t>(p - 1))
                fail(here + "/tensor_blocks", "expected " + std::to_string(p - 1) + " tensor blocks");
            if (wedge.size() != static_cast<std::size_t>(n))
                fail(here + "/wedge", "expected " + std::to_string(n) + " indices");
            std::vector<std::size_t> ranks;
            for (std::size_t b = 0; b < tb->size(); ++b) {
                auto idx = index_list((*tb)[b], m, here + "/tensor_blocks/" + std::to_string(b));
                if (idx.size() != static_cast<std::size_t>(n - 1))
                    fail(here + "/tensor_blocks/" + std::to_string(b), "blocks have n-1 indices");
                auto [r, s] = ranked(idx, m);
                if (s == 0)
                    fail(here + "/tensor_blocks/" + std::to_string(b), "repeated index");
                ranks.push_back(r);
                sign *= s;
            }
            auto [w, s] = ranked(wedge, m);
            if (s == 0)
                fail(here + "/wedge", "repeated index");
            sign *= s;
            key = c.key_offset(ranks, w) / mm;
        }
        for (std::size_t k = 0; k < mm; ++k)
            c.values()[key * mm + k] += sign * v[k];
    }
    return c;
}

Json to_json(const DeformationPath &p)
{
    Json terms = Json::array();
    for (const auto &t : p.terms)
        terms.push_back(to_json(t));
    return Json{{"base", to_json(p.base)}, {"order", p.order()}, {"terms", terms}};
}

DeformationPath path_from_json(const Json &j, const std::string &at)
{
    DeformationPath p;
    p.base = algebra_from_json(field(j, "base", at), at + "/base");
    const int k = int_field(j, "order", at, 0, 64);
    const Json &terms = array_field(j, "terms", at);
    if (terms.size() != static_cast<std::size_t>(k))
        fail(at + "/terms", "expected " + std::to_string(k) + " terms for order " + std::to_string(k));
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string here = at + "/terms/" + std::to_string(i);
        Cochain c = cochain_from_json(terms[i], here);
        if (c.degree() != 1 || c.arity() != p.base.arity() || c.dim() != p.base.dim())
            fail(here, "terms must be degree 1 cochains with the base's arity and dim");
        p.terms.push_back(std::move(c));
    }
    return p;
}

Json to_json(const EquivalenceMap &e)
{
    Json maps = Json::array();
    for (const auto &m : e.maps)
        maps.push_back(to_json(m));
    return Json{{"order", e.order()}, {"maps", maps}};
}

EquivalenceMap equivalence_from_json(const Json &j, const std::string &at)
{
    EquivalenceMap e;
    const int k = int_field(j, "order", at, 0, 64);
    const Json &maps = array_field(j, "maps", at);
    if (maps.size() != static_cast<std::size_t>(k))
        fail(at + "/maps", "expected " + std::to_string(k) + " maps");
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const std::string here = at + "/maps/" + std::to_string(i);
        auto m = matrix_from_json(maps[i], here);
        if (m.rows() != m.cols() || (!e.maps.empty() && m.rows() != e.maps.front().rows()))
            fail(here, "maps must be square and of equal size");
        e.maps.push_back(std::move(m));
    }
    return e;
}

Json to_json(const PolyFilippovAlgebroid &a)
{
    const int n = a.arity(), r = a.rank();
    Json br = Json::array(), an = Json::array();
    if (n <= r) {
        const auto &keys = SubsetIndex::get(r, n);
        for (std::size_t k = 0; k < keys.size(); ++k)
            if (!a.bracket(k).is_zero())
                br.push_back(Json{{"on", one_based(keys.elements(k))}, {"value", to_json(a.bracket(k))}});
    }
    if (n - 1 <= r) {
        const auto &keys = SubsetIndex::get(r, n - 1);
        for (std::size_t k = 0; k < keys.size(); ++k)
            if (!a.anchor(k).is_zero())
                an.push_back(Json{{"on", one_based(keys.elements(k))}, {"field", to_json(a.anchor(k))}});
    }
    return Json{{"num_vars", a.num_vars()}, {"rank", r}, {"arity", n}, {"brackets", br}, {"anchor", an}};
}

PolyFilippovAlgebroid algebroid_from_json(const Json &j, const std::string &at)
{
    const int k = int_field(j, "num_vars", at, 0, max_dim);
    const int r = int_field(j, "rank", at, 1, max_dim);
    const int n = int_field(j, "arity", at, 2, max_dim);
    PolyFilippovAlgebroid a(k, r, n);
    const Json &br = array_field(j, "brackets", at);
    for (std::size_t i = 0; i < br.size(); ++i) {
        const std::string here = at + "/brackets/" + std::to_string(i);
        auto idx = index_list(field(br[i], "on", here), r, here + "/on");
        require_increasing(idx, static_cast<std::size_t>(n), here + "/on");
        a.bracket(ranked(idx, r).first) = section_from_json(field(br[i], "value", here), k, r, here + "/value");
    }
    if (j.contains("anchor")) {
        const Json &an = array_field(j, "anchor", at);
        for (std::size_t i = 0; i < an.size(); ++i) {
            const std::string here = at + "/anchor/" + std::to_string(i);
            auto idx = index_list(field(an[i], "on", here), r, here + "/on");
            require_increasing(idx, static_cast<std::size_t>(n - 1), here + "/on");
            a.anchor(ranked(idx, r).first) = field_from_json(field(an[i], "field", here), k, here + "/field");
        }
    }
    return a;
}

Json to_json(const Witness &w)
{
    Json tuples = Json::array();
    for (const auto &t : w.tuples)
        tuples.push_back(one_based(t));
    return Json{{"condition", w.condition}, {"tuples", tuples}, {"lhs", to_json(w.lhs)}, {"rhs", to_json(w.rhs)}};
}

Json to_json(const AlgebroidWitness &w)
{
    Json args = Json::array();
    for (const auto &s : w.arguments)
        args.push_back(to_json(s));
    Json out{{"condition", w.condition}, {"arguments", args}};
    if (w.function)
        out["function"] = to_json(*w.function);
    Json lhs = Json::array(), rhs = Json::array();
    for (const auto &p : w.lhs)
        lhs.push_back(to_json(p));
    for (const auto &p : w.rhs)
        rhs.push_back(to_json(p));
    out["lhs"] = lhs;
    out["rhs"] = rhs;
    return out;
}

Json to_json(const CohomologyReport &r)
{
    Json reps = Json::array();
    for (const auto &c : r.representatives)
        reps.push_back(to_json(c));
    return Json{{"degree", r.degree},
                {"dim_cochains", r.dim_cochains},
                {"rank_d_out", r.rank_d_out},
                {"rank_d_in", r.rank_d_in},
                {"betti", r.betti},
                {"representatives", reps}};
}

} // namespace filippov::json_io
