#include "filippov/algebroid.hpp"

#include <map>

#include "filippov/combinatorics.hpp"
#include "filippov/detail/circle_terms.hpp"
#include "filippov/errors.hpp"
#include "filippov/parallel.hpp"
#include "filippov/random.hpp"

namespace filippov
{

PolySection::PolySection(int num_vars, int rank) : coords(static_cast<std::size_t>(rank), MultiPoly(num_vars)) {}

PolySection PolySection::generator(int num_vars, int rank, int g, const MultiPoly &f)
{
    PolySection s(num_vars, rank);
    s.coords.at(static_cast<std::size_t>(g)) = f;
    return s;
}

PolySection PolySection::generator(int num_vars, int rank, int g)
{
    return generator(num_vars, rank, g, MultiPoly::constant(num_vars, 1));
}

bool PolySection::is_zero() const
{
    for (const auto &c : coords)
        if (!c.is_zero())
            return false;
    return true;
}

PolySection &PolySection::operator+=(const PolySection &o)
{
    if (o.coords.size() != coords.size())
        throw dimension_error("section rank mismatch");
    for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] += o.coords[i];
    return *this;
}

PolySection &PolySection::operator-=(const PolySection &o)
{
    if (o.coords.size() != coords.size())
        throw dimension_error("section rank mismatch");
    for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] -= o.coords[i];
    return *this;
}

PolySection &PolySection::operator*=(const MultiPoly &f)
{
    for (auto &c : coords)
        c = c * f;
    return *this;
}

PolySection &PolySection::operator*=(const Rational &c)
{
    for (auto &x : coords)
        x *= c;
    return *this;
}

PolySection vf_apply(const PolyVectorField &v, const PolySection &s)
{
    PolySection out;
    for (const auto &c : s.coords)
        out.coords.push_back(vf_apply(v, c));
    return out;
}

PolyLinearBundleMap PolyLinearBundleMap::constant(int num_vars, const LinearMap &m)
{
    if (m.rows() != m.cols())
        throw dimension_error("bundle map must be square");
    PolyLinearBundleMap out;
    out.entries.assign(m.rows(), std::vector<MultiPoly>(m.cols(), MultiPoly(num_vars)));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out.entries[i][j] = MultiPoly::constant(num_vars, m(i, j));
    return out;
}

PolySection PolyLinearBundleMap::operator()(const PolySection &s) const
{
    if (s.coords.size() != entries.size())
        throw dimension_error("bundle map rank mismatch");
    PolySection out;
    for (const auto &row : entries) {
        MultiPoly acc(s.coords.empty() ? 0 : s.coords[0].num_vars());
        for (std::size_t j = 0; j < row.size(); ++j)
            if (!row[j].is_zero() && !s.coords[j].is_zero())
                acc += row[j] * s.coords[j];
        out.coords.push_back(std::move(acc));
    }
    return out;
}

// ---------------------------------------------------------------------------

PolyMultiderivation::PolyMultiderivation(int num_vars, int rank, int arity, int degree)
    : k_(num_vars), r_(rank), n_(arity), p_(degree)
{
    if (arity < 2 || rank < 1 || degree < 0 || num_vars < 0)
        throw dimension_error("unsupported multiderivation shape");
    const std::size_t b = binomial(rank, arity - 1);
    const std::size_t w = binomial(rank, arity);
    std::size_t nv = degree == 0 ? static_cast<std::size_t>(rank) : w;
    std::size_t ns = 1;
    for (int i = 0; i < degree; ++i) {
        if (i + 1 < degree)
            nv *= b;
        ns *= b;
    }
    values_.assign(nv, PolySection(num_vars, rank));
    symbols_.assign(ns, PolyVectorField(num_vars));
}

std::size_t PolyMultiderivation::key(std::span<const std::size_t> blocks, std::size_t last) const
{
    if (p_ == 0)
        return last;
    const std::size_t b = binomial(r_, n_ - 1);
    std::size_t k = 0;
    for (std::size_t br : blocks)
        k = k * b + br;
    return k * binomial(r_, n_) + last;
}

std::size_t PolyMultiderivation::symbol_key(std::span<const std::size_t> blocks) const
{
    const std::size_t b = binomial(r_, n_ - 1);
    std::size_t k = 0;
    for (std::size_t br : blocks)
        k = k * b + br;
    return k;
}

PolyMultiderivation from_cochain(const Cochain &c, int num_vars)
{
    if (c.degree() < 0)
        throw dimension_error("from_cochain: degree must be >= 0");
    PolyMultiderivation d(num_vars, c.dim(), c.arity(), c.degree());
    const auto m = static_cast<std::size_t>(c.dim());
    for (std::size_t key = 0; key < d.num_keys(); ++key)
        for (std::size_t k = 0; k < m; ++k)
            d.value(key).coords[k] = MultiPoly::constant(num_vars, c.values()[key * m + k]);
    return d;
}

Cochain to_cochain(const PolyMultiderivation &d)
{
    if (d.num_vars() != 0)
        throw dimension_error("to_cochain: only over a point");
    Cochain c(d.arity(), d.rank(), d.degree());
    const auto m = static_cast<std::size_t>(d.rank());
    for (std::size_t key = 0; key < d.num_keys(); ++key)
        for (std::size_t k = 0; k < m; ++k) {
            const auto &t = d.value(key).coords[k].terms();
            if (!t.empty())
                c.values()[key * m + k] = t.begin()->second;
        }
    return c;
}

namespace
{

using Expansion = std::vector<std::pair<std::size_t, MultiPoly>>;

// Coordinates of s_1 ^ .. ^ s_g in the basis of g-subsets of generators.
Expansion wedge_expansion(int num_vars, int rank, std::span<const PolySection *const> s)
{
    const int g = static_cast<int>(s.size());
    if (g == 0)
        return {{0, MultiPoly::constant(num_vars, 1)}};
    if (g > rank)
        return {};
    std::vector<std::vector<int>> support(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (int j = 0; j < rank; ++j)
            if (!s[i]->coords[static_cast<std::size_t>(j)].is_zero())
                support[i].push_back(j);
        if (support[i].empty())
            return {};
    }
    const auto &index = SubsetIndex::get(rank, g);
    std::map<std::size_t, MultiPoly> acc;
    std::vector<std::size_t> pos(s.size(), 0);
    std::vector<int> chosen(s.size());
    for (bool more = true; more;) {
        for (std::size_t i = 0; i < s.size(); ++i)
            chosen[i] = support[i][pos[i]];
        auto [mask, sign] = sorted_mask(chosen);
        if (sign != 0) {
            MultiPoly c = s[0]->coords[static_cast<std::size_t>(chosen[0])];
            for (std::size_t i = 1; i < s.size(); ++i)
                c = c * s[i]->coords[static_cast<std::size_t>(chosen[i])];
            if (sign < 0)
                c = -c;
            auto [it, fresh] = acc.try_emplace(index.rank(mask), num_vars);
            it->second += c;
        }
        more = false;
        for (std::size_t i = s.size(); i-- > 0;) {
            if (++pos[i] < support[i].size()) {
                more = true;
                break;
            }
            pos[i] = 0;
        }
    }
    Expansion out;
    for (auto &[r, c] : acc)
        if (!c.is_zero())
            out.emplace_back(r, std::move(c));
    return out;
}

Expansion block_expansion(const PolyMultiderivation &d, const PolyBlock &b)
{
    if (static_cast<int>(b.size()) != d.arity() - 1)
        throw dimension_error("block must have n-1 factors");
    std::vector<const PolySection *> ptr;
    for (const auto &s : b) {
        if (s.rank() != d.rank())
            throw dimension_error("section rank mismatch");
        ptr.push_back(&s);
    }
    return wedge_expansion(d.num_vars(), d.rank(), ptr);
}

// Calls f(ranks, coefficient) over the product of the expansions.
template <class F>
void for_each_product(const std::vector<Expansion> &ex, int num_vars, F &&f)
{
    std::vector<std::size_t> ranks(ex.size());
    for (const auto &e : ex)
        if (e.empty())
            return;
    std::vector<std::size_t> pos(ex.size(), 0);
    while (true) {
        MultiPoly c = MultiPoly::constant(num_vars, 1);
        for (std::size_t i = 0; i < ex.size(); ++i) {
            ranks[i] = ex[i][pos[i]].first;
            c = c * ex[i][pos[i]].second;
        }
        f(std::span<const std::size_t>(ranks), c);
        std::size_t i = ex.size();
        while (true) {
            if (i == 0)
                return;
            --i;
            if (++pos[i] < ex[i].size())
                break;
            pos[i] = 0;
        }
    }
}

} // namespace

PolySection evaluate(const PolyMultiderivation &d, std::span<const PolyBlock *const> blocks, const PolySection &z)
{
    const int p = d.degree();
    const int n = d.arity();
    const int nv = d.num_vars();
    if (static_cast<int>(blocks.size()) != p)
        throw dimension_error("evaluate: wrong number of blocks");
    if (z.rank() != d.rank())
        throw dimension_error("section rank mismatch");
    PolySection out(nv, d.rank());
    if (p == 0) {
        for (int g = 0; g < d.rank(); ++g) {
            const auto &c = z.coords[static_cast<std::size_t>(g)];
            if (c.is_zero())
                continue;
            PolySection v = d.value(static_cast<std::size_t>(g));
            v *= c;
            out += v;
        }
        if (!d.symbol(0).is_zero())
            out += vf_apply(d.symbol(0), z);
        return out;
    }

    std::vector<Expansion> leading;
    for (int i = 0; i + 1 < p; ++i)
        leading.push_back(block_expansion(d, *blocks[static_cast<std::size_t>(i)]));
    const PolyBlock &last_block = *blocks[static_cast<std::size_t>(p - 1)];
    if (static_cast<int>(last_block.size()) != n - 1)
        throw dimension_error("block must have n-1 factors");
    std::vector<const PolySection *> last;
    for (const auto &s : last_block) {
        if (s.rank() != d.rank())
            throw dimension_error("section rank mismatch");
        last.push_back(&s);
    }
    last.push_back(&z);
    Expansion top = wedge_expansion(nv, d.rank(), last);
    // Leibniz parts: slot i differentiated by the symbol of the other n-1.
    std::vector<Expansion> rest(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<const PolySection *> others;
        for (int j = 0; j < n; ++j)
            if (j != i)
                others.push_back(last[static_cast<std::size_t>(j)]);
        rest[static_cast<std::size_t>(i)] = wedge_expansion(nv, d.rank(), others);
    }

    std::vector<std::size_t> sym_ranks(static_cast<std::size_t>(p));
    for_each_product(leading, nv, [&](std::span<const std::size_t> ranks, const MultiPoly &c) {
        PolySection acc(nv, d.rank());
        for (const auto &[w, cw] : top) {
            PolySection v = d.value(d.key(ranks, w));
            v *= cw;
            acc += v;
        }
        std::copy(ranks.begin(), ranks.end(), sym_ranks.begin());
        for (int i = 0; i < n; ++i) {
            const bool negative = (n - 1 - i) % 2 != 0;
            for (const auto &[u, cu] : rest[static_cast<std::size_t>(i)]) {
                sym_ranks.back() = u;
                const auto &sigma = d.symbol(d.symbol_key(sym_ranks));
                if (sigma.is_zero())
                    continue;
                PolySection v = vf_apply(sigma, *last[static_cast<std::size_t>(i)]);
                v *= cu;
                if (negative)
                    acc -= v;
                else
                    acc += v;
            }
        }
        acc *= c;
        out += acc;
    });
    return out;
}

PolyVectorField evaluate_symbol(const PolyMultiderivation &d, std::span<const PolyBlock *const> blocks)
{
    if (static_cast<int>(blocks.size()) != d.degree())
        throw dimension_error("evaluate_symbol: wrong number of blocks");
    std::vector<Expansion> ex;
    for (const auto *b : blocks)
        ex.push_back(block_expansion(d, *b));
    PolyVectorField out(d.num_vars());
    for_each_product(ex, d.num_vars(), [&](std::span<const std::size_t> ranks, const MultiPoly &c) {
        const auto &sigma = d.symbol(d.symbol_key(ranks));
        if (sigma.is_zero())
            return;
        PolyVectorField v = sigma;
        v *= c;
        out += v;
    });
    return out;
}

// ---------------------------------------------------------------------------

PolyFilippovAlgebroid::PolyFilippovAlgebroid(int num_vars, int rank, int arity) : phi_(num_vars, rank, arity, 1) {}

PolySection section_bracket(const PolyFilippovAlgebroid &a, std::span<const PolySection> sections)
{
    if (static_cast<int>(sections.size()) != a.arity())
        throw dimension_error("section_bracket: need n sections");
    PolyBlock block(sections.begin(), sections.end() - 1);
    const PolyBlock *b = &block;
    return evaluate(a.structure(), std::span<const PolyBlock *const>(&b, 1), sections.back());
}

PolyVectorField anchor_of(const PolyFilippovAlgebroid &a, std::span<const PolySection> sections)
{
    if (static_cast<int>(sections.size()) != a.arity() - 1)
        throw dimension_error("anchor_of: need n-1 sections");
    PolyBlock block(sections.begin(), sections.end());
    const PolyBlock *b = &block;
    return evaluate_symbol(a.structure(), std::span<const PolyBlock *const>(&b, 1));
}

std::vector<MultiPoly> function_family(int num_vars, int max_degree)
{
    std::vector<MultiPoly> out{MultiPoly::constant(num_vars, 1)};
    auto x = [&](int i) { return MultiPoly::variable(num_vars, i); };
    if (max_degree >= 1)
        for (int i = 0; i < num_vars; ++i)
            out.push_back(x(i));
    if (max_degree >= 2)
        for (int i = 0; i < num_vars; ++i)
            for (int j = i; j < num_vars; ++j)
                out.push_back(x(i) * x(j));
    if (max_degree >= 3 && num_vars > 0) {
        if (num_vars >= 3)
            out.push_back(x(0) * x(1) * x(2));
        else if (num_vars == 2)
            out.push_back(x(0) * x(0) * x(1));
        else
            out.push_back(x(0) * x(0) * x(0));
    }
    return out;
}

namespace
{

std::vector<MultiPoly> field_coords(const PolyVectorField &v) { return v.components(); }

PolySection gen(const PolyFilippovAlgebroid &a, int g) { return PolySection::generator(a.num_vars(), a.rank(), g); }

std::vector<PolySection> gens(const PolyFilippovAlgebroid &a, std::span<const int> idx)
{
    std::vector<PolySection> out;
    for (int g : idx)
        out.push_back(gen(a, g));
    return out;
}

// FI defect pieces for a_1..a_{n-1}, b_1..b_n.
std::pair<PolySection, PolySection> fi_sides(const PolyFilippovAlgebroid &a, const std::vector<PolySection> &args)
{
    const auto n = static_cast<std::size_t>(a.arity());
    std::vector<PolySection> x(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(n - 1));
    std::vector<PolySection> y(args.begin() + static_cast<std::ptrdiff_t>(n - 1), args.end());
    auto with_last = [&](const PolySection &s) {
        auto v = x;
        v.push_back(s);
        return section_bracket(a, v);
    };
    PolySection lhs = with_last(section_bracket(a, y));
    PolySection rhs(a.num_vars(), a.rank());
    for (std::size_t i = 0; i < n; ++i) {
        auto v = y;
        v[i] = with_last(y[i]);
        rhs += section_bracket(a, v);
    }
    return {std::move(lhs), std::move(rhs)};
}

std::pair<PolyVectorField, PolyVectorField> anchor_sides(const PolyFilippovAlgebroid &a,
                                                         const std::vector<PolySection> &args)
{
    const auto k = static_cast<std::size_t>(a.arity() - 1);
    std::vector<PolySection> x(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<PolySection> y(args.begin() + static_cast<std::ptrdiff_t>(k), args.end());
    PolyVectorField lhs = vf_bracket(anchor_of(a, x), anchor_of(a, y));
    PolyVectorField rhs(a.num_vars());
    for (std::size_t i = 0; i < k; ++i) {
        auto v = x;
        v.push_back(y[i]);
        auto w = y;
        w[i] = section_bracket(a, v);
        rhs += anchor_of(a, w);
    }
    return {std::move(lhs), std::move(rhs)};
}

} // namespace

AlgebroidVerdict check_algebroid_axioms(const PolyFilippovAlgebroid &a, const AlgebroidCheckOptions &opt)
{
    const int n = a.arity();
    const int r = a.rank();
    const int nv = a.num_vars();
    auto family = function_family(nv, opt.max_degree);
    auto xs = increasing_tuples(r, n - 1);
    auto ys = increasing_tuples(r, n);

    // (i) fundamental identity on generators with one slot scaled by f
    struct FiItem
    {
        std::size_t x, y, f;
        int slot;
    };
    std::vector<FiItem> fi;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j)
            for (std::size_t f = 0; f < family.size(); ++f)
                for (int s = 0; s < (f == 0 ? 1 : 2 * n - 1); ++s)
                    fi.push_back({i, j, f, s});
    auto fi_args = [&](const FiItem &it) {
        auto args = gens(a, xs[it.x]);
        auto ys_ = gens(a, ys[it.y]);
        args.insert(args.end(), ys_.begin(), ys_.end());
        args[static_cast<std::size_t>(it.slot)] *= family[it.f];
        return args;
    };
    if (auto hit = parallel_find_first(fi.size(), [&](std::size_t i) {
            auto [l, rr] = fi_sides(a, fi_args(fi[i]));
            return !(l == rr);
        })) {
        auto args = fi_args(fi[*hit]);
        auto [l, rr] = fi_sides(a, args);
        return {false, AlgebroidWitness{"fundamental identity", std::move(args), std::nullopt, l.coords, rr.coords}};
    }

    // (ii) anchor bracket
    struct AnItem
    {
        std::size_t x, y, f;
        int slot;
    };
    std::vector<AnItem> an;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) {
            an.push_back({i, j, 0, 0});
            if (opt.anchor_level == AnchorLevel::sections)
                for (std::size_t f = 1; f < family.size(); ++f)
                    for (int s = 0; s < 2 * (n - 1); ++s)
                        an.push_back({i, j, f, s});
        }
    auto an_args = [&](const AnItem &it) {
        auto args = gens(a, xs[it.x]);
        auto y = gens(a, xs[it.y]);
        args.insert(args.end(), y.begin(), y.end());
        args[static_cast<std::size_t>(it.slot)] *= family[it.f];
        return args;
    };
    if (auto hit = parallel_find_first(an.size(), [&](std::size_t i) {
            auto [l, rr] = anchor_sides(a, an_args(an[i]));
            return !(l == rr);
        })) {
        auto args = an_args(an[*hit]);
        auto [l, rr] = anchor_sides(a, args);
        return {false, AlgebroidWitness{"anchor bracket (a)", std::move(args), std::nullopt, field_coords(l),
                                        field_coords(rr)}};
    }

    // (iii) Leibniz rule on sampled polynomial sections
    Rng rng(opt.seed);
    const int deg = std::min(opt.max_degree, 2);
    for (int t = 0; t < opt.leibniz_samples; ++t) {
        std::vector<PolySection> args;
        for (int i = 0; i < n; ++i) {
            PolySection s(nv, r);
            for (auto &c : s.coords)
                if (rng.chance(60))
                    c = rng.small_poly(nv, deg);
            args.push_back(std::move(s));
        }
        MultiPoly f = rng.small_poly(nv, std::max(opt.max_degree, 1));
        auto scaled = args;
        scaled.back() *= f;
        PolySection lhs = section_bracket(a, scaled);
        PolySection rhs = f * section_bracket(a, args);
        auto ax = anchor_of(a, std::span<const PolySection>(args).first(static_cast<std::size_t>(n - 1)));
        rhs += vf_apply(ax, f) * args.back();
        if (!(lhs == rhs))
            return {false, AlgebroidWitness{"Leibniz rule (b)", std::move(args), f, lhs.coords, rhs.coords}};
    }
    return {};
}

PolyFilippovAlgebroid example_tangent_fc(const NLieAlgebra &algebra, const MultiPoly &f)
{
    const int m = algebra.dim();
    if (f.num_vars() != m)
        throw dimension_error("example_tangent_fc: f must have dim(algebra) variables");
    if (!check_fundamental_identity(algebra).holds)
        throw precondition_error("example_tangent_fc: structure constants violate the fundamental identity");
    PolyFilippovAlgebroid out(m, m, algebra.arity());
    for (std::size_t key = 0; key < algebra.num_keys(); ++key)
        for (int k = 0; k < m; ++k) {
            const auto &c = algebra.structure(key)[static_cast<std::size_t>(k)];
            if (sgn(c) != 0)
                out.bracket(key).coords[static_cast<std::size_t>(k)] = f * c;
        }
    return out;
}

PolyFilippovAlgebroid example_tangent_topform(int m_base, int n)
{
    if (n < 1 || n > m_base)
        throw precondition_error("example_tangent_topform: need 1 <= n <= m_base");
    PolyFilippovAlgebroid out(m_base, m_base, n + 1);
    // {0..n-1} is the first n-subset.
    out.anchor(0) = PolyVectorField::coordinate(m_base, 0);
    return out;
}

// ---------------------------------------------------------------------------

namespace
{

struct PolyModel
{
    using Block = PolyBlock;
    using Section = PolySection;
    std::size_t factor_count(const Block &b) const { return b.size(); }
    const Section &factor(const Block &b, std::size_t s) const { return b[s]; }
    Block replace(const Block &b, std::size_t s, Section v) const
    {
        Block out = b;
        out[s] = std::move(v);
        return out;
    }
    bool is_zero(const Section &s) const { return s.is_zero(); }
};

void check_compatible(const PolyMultiderivation &d1, const PolyMultiderivation &d2)
{
    if (d1.num_vars() != d2.num_vars() || d1.rank() != d2.rank() || d1.arity() != d2.arity())
        throw dimension_error("multiderivations over different bundles");
}

PolySection circle_value(const PolyMultiderivation &d1, const PolyMultiderivation &d2,
                         const std::vector<const PolyBlock *> &x, const PolySection &z)
{
    const int p = d1.degree(), q = d2.degree();
    PolyModel model;
    PolySection acc(d1.num_vars(), d1.rank());
    auto emit = [&](PolySection v, int sign) {
        if (sign < 0)
            acc -= v;
        else
            acc += v;
    };
    auto inner = [&](const std::vector<const PolyBlock *> &in, const PolySection &s) { return evaluate(d2, in, s); };
    detail::insertion_terms(
        model, p, q, x, [&](const std::vector<const PolyBlock *> &args) { return evaluate(d1, args, z); }, inner,
        emit);
    detail::composition_terms(
        model, p, q, x, z,
        [&](const std::vector<const PolyBlock *> &args, const PolySection &v) { return evaluate(d1, args, v); },
        inner, emit);
    return acc;
}

PolyVectorField odot_value(const PolyMultiderivation &d1, const PolyMultiderivation &d2,
                           const std::vector<const PolyBlock *> &x)
{
    PolyModel model;
    PolyVectorField acc(d1.num_vars());
    detail::insertion_terms(
        model, d1.degree(), d2.degree(), x,
        [&](const std::vector<const PolyBlock *> &args) { return evaluate_symbol(d1, args); },
        [&](const std::vector<const PolyBlock *> &in, const PolySection &s) { return evaluate(d2, in, s); },
        [&](PolyVectorField v, int sign) {
            if (sign < 0)
                acc -= v;
            else
                acc += v;
        });
    return acc;
}

PolyVectorField curly_value(const PolyMultiderivation &d1, const PolyMultiderivation &d2,
                            const std::vector<const PolyBlock *> &x)
{
    const auto p = static_cast<std::size_t>(d1.degree());
    const auto q = static_cast<std::size_t>(d2.degree());
    PolyVectorField acc(d1.num_vars());
    for (const auto &sh : shuffles_cached(d1.degree(), d2.degree())) {
        std::vector<const PolyBlock *> a, b;
        for (std::size_t i = 0; i < p; ++i)
            a.push_back(x[static_cast<std::size_t>(sh.perm[i])]);
        for (std::size_t i = 0; i < q; ++i)
            b.push_back(x[static_cast<std::size_t>(sh.perm[p + i])]);
        PolyVectorField v = vf_bracket(evaluate_symbol(d1, a), evaluate_symbol(d2, b));
        if (sh.sign < 0)
            acc -= v;
        else
            acc += v;
    }
    return acc;
}

// Generator wedges for every symbol key of degree p.
std::vector<std::vector<PolyBlock>> generator_block_tuples(int num_vars, int rank, int arity, int p)
{
    auto xs = increasing_tuples(rank, arity - 1);
    std::vector<std::vector<PolyBlock>> out{{}};
    for (int i = 0; i < p; ++i) {
        std::vector<std::vector<PolyBlock>> next;
        for (const auto &prefix : out)
            for (const auto &t : xs) {
                auto v = prefix;
                PolyBlock b;
                for (int g : t)
                    b.push_back(PolySection::generator(num_vars, rank, g));
                v.push_back(std::move(b));
                next.push_back(std::move(v));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<const PolyBlock *> pointers(const std::vector<PolyBlock> &v)
{
    std::vector<const PolyBlock *> out;
    for (const auto &b : v)
        out.push_back(&b);
    return out;
}

std::vector<PolySection> flatten(const std::vector<PolyBlock> &blocks, const PolySection &z)
{
    std::vector<PolySection> out;
    for (const auto &b : blocks)
        out.insert(out.end(), b.begin(), b.end());
    out.push_back(z);
    return out;
}

} // namespace

PolySection bracket_value(const PolyMultiderivation &d1, const PolyMultiderivation &d2,
                          std::span<const PolyBlock *const> blocks, const PolySection &z)
{
    check_compatible(d1, d2);
    const int p = d1.degree(), q = d2.degree();
    if (static_cast<int>(blocks.size()) != p + q)
        throw dimension_error("bracket_value: wrong number of blocks");
    std::vector<const PolyBlock *> x(blocks.begin(), blocks.end());
    PolySection out = circle_value(d1, d2, x, z);
    if ((p * q) % 2)
        out *= Rational(-1);
    out -= circle_value(d2, d1, x, z);
    return out;
}

std::vector<PolyVectorField> symbol_bracket(const PolyMultiderivation &d1, const PolyMultiderivation &d2)
{
    check_compatible(d1, d2);
    const int p = d1.degree(), q = d2.degree();
    auto tuples = generator_block_tuples(d1.num_vars(), d1.rank(), d1.arity(), p + q);
    std::vector<PolyVectorField> out(tuples.size(), PolyVectorField(d1.num_vars()));
    parallel_for(tuples.size(), [&](std::size_t i) {
        auto x = pointers(tuples[i]);
        PolyVectorField v = odot_value(d1, d2, x);
        if ((p * q) % 2)
            v *= Rational(-1);
        v -= odot_value(d2, d1, x);
        v += curly_value(d1, d2, x);
        out[i] = std::move(v);
    });
    return out;
}

PolyMultiderivation poly_gla_bracket(const PolyMultiderivation &d1, const PolyMultiderivation &d2)
{
    check_compatible(d1, d2);
    const int deg = d1.degree() + d2.degree();
    const int nv = d1.num_vars(), r = d1.rank(), n = d1.arity();
    PolyMultiderivation out(nv, r, n, deg);
    auto sym = symbol_bracket(d1, d2);
    for (std::size_t i = 0; i < sym.size(); ++i)
        out.symbol(i) = std::move(sym[i]);
    if (deg == 0) {
        for (int g = 0; g < r; ++g)
            out.value(static_cast<std::size_t>(g)) = bracket_value(d1, d2, {}, PolySection::generator(nv, r, g));
        return out;
    }
    auto lead = generator_block_tuples(nv, r, n, deg - 1);
    auto ws = increasing_tuples(r, n);
    parallel_for(lead.size() * ws.size(), [&](std::size_t idx) {
        std::size_t li = idx / ws.size(), wi = idx % ws.size();
        auto blocks = lead[li];
        PolyBlock last;
        for (std::size_t s = 0; s + 1 < ws[wi].size(); ++s)
            last.push_back(PolySection::generator(nv, r, ws[wi][s]));
        blocks.push_back(std::move(last));
        auto x = pointers(blocks);
        out.value(li * ws.size() + wi) = bracket_value(d1, d2, x, PolySection::generator(nv, r, ws[wi].back()));
    });
    return out;
}

AlgebroidVerdict check_multiderivation(const PolyMultiderivation &d, const std::vector<MultiPoly> &family)
{
    const int nv = d.num_vars(), r = d.rank();
    auto tuples = generator_block_tuples(nv, r, d.arity(), d.degree());
    const std::size_t per = static_cast<std::size_t>(r) * family.size();
    auto sides = [&](std::size_t idx) {
        const auto &blocks = tuples[idx / per];
        int g = static_cast<int>((idx % per) / family.size());
        const MultiPoly &f = family[idx % family.size()];
        auto x = pointers(blocks);
        PolySection lhs = evaluate(d, x, PolySection::generator(nv, r, g, f));
        PolySection rhs = f * evaluate(d, x, PolySection::generator(nv, r, g));
        rhs += PolySection::generator(nv, r, g, vf_apply(evaluate_symbol(d, x), f));
        return std::pair{std::move(lhs), std::move(rhs)};
    };
    auto hit = parallel_find_first(tuples.size() * per, [&](std::size_t i) {
        auto [l, rr] = sides(i);
        return !(l == rr);
    });
    if (!hit)
        return {};
    auto [l, rr] = sides(*hit);
    int g = static_cast<int>((*hit % per) / family.size());
    return {false, AlgebroidWitness{"multiderivation Leibniz rule",
                                    flatten(tuples[*hit / per], PolySection::generator(nv, r, g)),
                                    family[*hit % family.size()], l.coords, rr.coords}};
}

AlgebroidVerdict check_symbol_leibniz(const PolyFilippovAlgebroid &a, const PolyMultiderivation &d1,
                                      const PolyMultiderivation &d2, int max_degree)
{
    check_compatible(d1, d2);
    if (d1.num_vars() != a.num_vars() || d1.rank() != a.rank() || d1.arity() != a.arity())
        throw dimension_error("check_symbol_leibniz: multiderivations do not live on this algebroid");
    const int nv = a.num_vars(), r = a.rank();
    auto family = function_family(nv, max_degree);
    if (!check_multiderivation(d1, family).holds || !check_multiderivation(d2, family).holds)
        throw precondition_error("check_symbol_leibniz: an input violates its own Leibniz rule");

    auto sigma = symbol_bracket(d1, d2);
    auto tuples = generator_block_tuples(nv, r, a.arity(), d1.degree() + d2.degree());
    const auto nr = static_cast<std::size_t>(r);
    // first failing family index per (tuple, generator)
    auto first_bad = [&](std::size_t idx) -> std::optional<std::size_t> {
        auto x = pointers(tuples[idx / nr]);
        int g = static_cast<int>(idx % nr);
        PolySection base = bracket_value(d1, d2, x, PolySection::generator(nv, r, g));
        const auto &s = sigma[idx / nr];
        for (std::size_t fi = 0; fi < family.size(); ++fi) {
            const auto &f = family[fi];
            PolySection lhs = bracket_value(d1, d2, x, PolySection::generator(nv, r, g, f));
            PolySection rhs = f * base;
            rhs += PolySection::generator(nv, r, g, vf_apply(s, f));
            if (!(lhs == rhs))
                return fi;
        }
        return std::nullopt;
    };
    auto hit = parallel_find_first(tuples.size() * nr, [&](std::size_t i) { return first_bad(i).has_value(); });
    if (!hit)
        return {};
    std::size_t fi = *first_bad(*hit);
    auto x = pointers(tuples[*hit / nr]);
    int g = static_cast<int>(*hit % nr);
    const auto &f = family[fi];
    PolySection lhs = bracket_value(d1, d2, x, PolySection::generator(nv, r, g, f));
    PolySection rhs = f * bracket_value(d1, d2, x, PolySection::generator(nv, r, g));
    rhs += PolySection::generator(nv, r, g, vf_apply(sigma[*hit / nr], f));
    return {false, AlgebroidWitness{"symbol of the bracket", flatten(tuples[*hit / nr], PolySection::generator(nv, r, g)),
                                    f, lhs.coords, rhs.coords}};
}

// ---------------------------------------------------------------------------

namespace
{

void check_bundle_map(const PolyFilippovAlgebroid &a, const PolyLinearBundleMap &nmap)
{
    if (nmap.rank() != a.rank())
        throw dimension_error("bundle map rank mismatch");
    for (const auto &row : nmap.entries) {
        if (static_cast<int>(row.size()) != a.rank())
            throw dimension_error("bundle map must be square");
        for (const auto &e : row)
            if (e.num_vars() != a.num_vars())
                throw dimension_error("bundle map entries over the wrong ring");
    }
}

// Sum over j-subsets of positions of the bracket with N applied there.
PolySection twisted_sum(const PolyFilippovAlgebroid &a, const PolyLinearBundleMap &nmap,
                        std::span<const PolySection> s, int j)
{
    PolySection acc(a.num_vars(), a.rank());
    for (const auto &subset : increasing_tuples(static_cast<int>(s.size()), j)) {
        std::vector<PolySection> args(s.begin(), s.end());
        for (int pos : subset)
            args[static_cast<std::size_t>(pos)] = nmap(args[static_cast<std::size_t>(pos)]);
        acc += section_bracket(a, args);
    }
    return acc;
}

PolySection nijenhuis_chain(const PolyFilippovAlgebroid &a, const PolyLinearBundleMap &nmap, int k,
                            std::span<const PolySection> s)
{
    PolySection c = section_bracket(a, s);
    for (int j = 1; j <= k; ++j)
        c = twisted_sum(a, nmap, s, j) - nmap(c);
    return c;
}

} // namespace

PolySection poly_nijenhuis_bracket(const PolyFilippovAlgebroid &a, const PolyLinearBundleMap &nmap, int k,
                                   std::span<const PolySection> sections)
{
    check_bundle_map(a, nmap);
    if (k < 1 || k > a.arity() - 1)
        throw dimension_error("poly_nijenhuis_bracket: k out of range");
    if (static_cast<int>(sections.size()) != a.arity())
        throw dimension_error("poly_nijenhuis_bracket: need n sections");
    return nijenhuis_chain(a, nmap, k, sections);
}

AlgebroidVerdict check_poly_nijenhuis(const PolyFilippovAlgebroid &a, const PolyLinearBundleMap &nmap)
{
    check_bundle_map(a, nmap);
    auto ys = increasing_tuples(a.rank(), a.arity());
    auto sides = [&](std::size_t i) {
        auto s = gens(a, ys[i]);
        std::vector<PolySection> ns;
        for (const auto &x : s)
            ns.push_back(nmap(x));
        return std::pair{section_bracket(a, ns), nmap(nijenhuis_chain(a, nmap, a.arity() - 1, s))};
    };
    auto hit = parallel_find_first(ys.size(), [&](std::size_t i) {
        auto [l, r] = sides(i);
        return !(l == r);
    });
    if (!hit)
        return {};
    auto [l, r] = sides(*hit);
    return {false, AlgebroidWitness{"Nijenhuis condition", gens(a, ys[*hit]), std::nullopt, l.coords, r.coords}};
}

AlgebroidVerdict nijenhuis_symbol_check(const PolyFilippovAlgebroid &a, const PolyLinearBundleMap &nmap,
                                        int max_degree)
{
    if (!check_poly_nijenhuis(a, nmap).holds)
        throw precondition_error("nijenhuis_symbol_check: operator is not Nijenhuis");
    const int n = a.arity(), r = a.rank(), nv = a.num_vars();
    auto family = function_family(nv, max_degree);
    auto xs = increasing_tuples(r, n - 1);
    struct Item
    {
        int k;
        std::size_t x;
        int g;
        std::size_t f;
    };
    std::vector<Item> items;
    for (int k = 1; k <= n - 1; ++k)
        for (std::size_t x = 0; x < xs.size(); ++x)
            for (int g = 0; g < r; ++g)
                for (std::size_t f = 1; f < family.size(); ++f)
                    items.push_back({k, x, g, f});
    auto sides = [&](const Item &it) {
        auto s = gens(a, xs[it.x]);
        const auto &f = family[it.f];
        auto with = [&](const PolySection &z) {
            auto v = s;
            v.push_back(z);
            return nijenhuis_chain(a, nmap, it.k, v);
        };
        PolySection lhs = with(PolySection::generator(nv, r, it.g, f)) - f * with(gen(a, it.g));
        PolyVectorField sigma(nv);
        for (const auto &subset : increasing_tuples(n - 1, it.k)) {
            auto v = s;
            for (int pos : subset)
                v[static_cast<std::size_t>(pos)] = nmap(v[static_cast<std::size_t>(pos)]);
            sigma += anchor_of(a, v);
        }
        PolySection rhs = PolySection::generator(nv, r, it.g, vf_apply(sigma, f));
        return std::pair{std::move(lhs), std::move(rhs)};
    };
    auto hit = parallel_find_first(items.size(), [&](std::size_t i) {
        auto [l, rr] = sides(items[i]);
        return !(l == rr);
    });
    if (!hit)
        return {};
    const auto &it = items[*hit];
    auto [l, rr] = sides(it);
    auto args = gens(a, xs[it.x]);
    args.push_back(gen(a, it.g));
    return {false, AlgebroidWitness{"symbol of deformed bracket k=" + std::to_string(it.k), std::move(args),
                                    family[it.f], l.coords, rr.coords}};
}

} // namespace filippov
