#include "filippov/cochain.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "filippov/detail/circle_terms.hpp"
#include "filippov/errors.hpp"
#include "filippov/parallel.hpp"

namespace filippov
{

std::size_t der_dimension(int m, int n, int p)
{
    if (p < -1)
        throw dimension_error("cochain degree must be at least -1");
    if (p == -1)
        return binomial(m, n - 1);
    if (p == 0)
        return static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
    std::size_t d = binomial(m, n) * static_cast<std::size_t>(m);
    for (int i = 1; i < p; ++i)
        d *= binomial(m, n - 1);
    return d;
}

std::size_t cochain_dim(int m, int n, int p)
{
    if (p < 1)
        throw dimension_error("cochain_dim: degree must be at least 1");
    return der_dimension(m, n, p);
}

Cochain::Cochain(int arity, int dim, int degree) : n_(arity), m_(dim), p_(degree)
{
    if (arity < 2)
        throw dimension_error("arity must be at least 2");
    if (dim < 1 || dim > max_dimension)
        throw dimension_error("dimension out of range");
    values_.assign(der_dimension(dim, arity, degree), Rational(0));
}

Cochain Cochain::from_wedge(int arity, const WedgeElement &x)
{
    if (x.grade != arity - 1)
        throw dimension_error("degree -1 cochains are wedges of grade n-1");
    Cochain c(arity, x.dim, -1);
    c.values_ = x.coords;
    return c;
}

Cochain Cochain::from_linear_map(int arity, const LinearMap &d)
{
    if (!d.is_square())
        throw dimension_error("degree 0 cochains are square matrices");
    const auto m = d.rows();
    Cochain c(arity, static_cast<int>(m), 0);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
            c.values_[j * m + k] = d(k, j);
    return c;
}

WedgeElement Cochain::as_wedge() const
{
    if (p_ != -1)
        throw dimension_error("as_wedge: cochain degree is not -1");
    WedgeElement w(m_, n_ - 1);
    w.coords = values_;
    return w;
}

LinearMap Cochain::as_linear_map() const
{
    if (p_ != 0)
        throw dimension_error("as_linear_map: cochain degree is not 0");
    const auto m = static_cast<std::size_t>(m_);
    LinearMap d(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
            d(k, j) = values_[j * m + k];
    return d;
}

std::size_t Cochain::num_keys() const
{
    if (p_ < 0)
        throw dimension_error("degree -1 cochains have no keys");
    return values_.size() / static_cast<std::size_t>(m_);
}

std::size_t Cochain::key_offset(std::span<const std::size_t> block_ranks, std::size_t wedge_rank) const
{
    if (p_ < 1 || block_ranks.size() != static_cast<std::size_t>(p_ - 1))
        throw dimension_error("key_offset: wrong number of blocks");
    const std::size_t b = binomial(m_, n_ - 1);
    std::size_t off = 0;
    for (auto r : block_ranks)
        off = off * b + r;
    return (off * binomial(m_, n_) + wedge_rank) * static_cast<std::size_t>(m_);
}

std::pair<std::vector<std::size_t>, std::size_t> Cochain::key_of(std::size_t key) const
{
    if (p_ < 1)
        throw dimension_error("key_of: degree must be at least 1");
    const std::size_t b = binomial(m_, n_ - 1);
    const std::size_t w = binomial(m_, n_);
    std::size_t wr = key % w;
    key /= w;
    std::vector<std::size_t> blocks(static_cast<std::size_t>(p_ - 1));
    for (std::size_t i = blocks.size(); i-- > 0;) {
        blocks[i] = key % b;
        key /= b;
    }
    return {std::move(blocks), wr};
}

void Cochain::check_same_shape(const Cochain &o) const
{
    if (n_ != o.n_ || m_ != o.m_ || p_ != o.p_)
        throw dimension_error("cochains of different shape");
}

Cochain &Cochain::operator+=(const Cochain &o)
{
    check_same_shape(o);
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (sgn(o.values_[i]) != 0)
            values_[i] += o.values_[i];
    return *this;
}

Cochain &Cochain::operator-=(const Cochain &o)
{
    check_same_shape(o);
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (sgn(o.values_[i]) != 0)
            values_[i] -= o.values_[i];
    return *this;
}

Cochain &Cochain::operator*=(const Rational &c)
{
    for (auto &v : values_)
        v *= c;
    return *this;
}

std::vector<Cochain> der_basis(int m, int n, int p)
{
    Cochain zero(n, m, p);
    std::vector<Cochain> out(zero.size(), zero);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].values()[i] = 1;
    return out;
}

std::vector<Cochain> basis(int m, int n, int p)
{
    if (p < 1)
        throw dimension_error("basis: degree must be at least 1");
    return der_basis(m, n, p);
}

SparseWedge sparse_wedge(const WedgeElement &x)
{
    SparseWedge out;
    for (std::size_t i = 0; i < x.coords.size(); ++i)
        if (sgn(x.coords[i]) != 0)
            out.emplace_back(i, x.coords[i]);
    return out;
}

SparseWedge sparse_product(int dim, const std::vector<Vector> &factors)
{
    const auto g = factors.size();
    const auto &idx = SubsetIndex::get(dim, static_cast<int>(g));
    // Nonzero entries per factor.
    std::vector<std::vector<int>> support(g);
    for (std::size_t i = 0; i < g; ++i) {
        if (factors[i].size() != static_cast<std::size_t>(dim))
            throw dimension_error("wedge factor has wrong length");
        for (int k = 0; k < dim; ++k)
            if (sgn(factors[i][static_cast<std::size_t>(k)]) != 0)
                support[i].push_back(k);
        if (support[i].empty())
            return {};
    }
    SparseWedge terms;
    std::vector<std::size_t> pos(g, 0);
    std::vector<int> cur(g);
    while (true) {
        for (std::size_t i = 0; i < g; ++i)
            cur[i] = support[i][pos[i]];
        auto [mask, sign] = sorted_mask(cur);
        if (sign != 0) {
            Rational c = sign;
            for (std::size_t i = 0; i < g; ++i)
                c *= factors[i][static_cast<std::size_t>(cur[i])];
            terms.emplace_back(idx.rank(mask), std::move(c));
        }
        std::size_t i = g;
        while (i > 0 && ++pos[i - 1] == support[i - 1].size())
            pos[--i] = 0;
        if (i == 0)
            break;
    }
    std::sort(terms.begin(), terms.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    SparseWedge out;
    for (auto &t : terms) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const auto &t) { return sgn(t.second) == 0; });
    return out;
}

namespace
{

Vector evaluate_core(const Cochain &d, std::span<const SparseWedge *const> blocks, const Vector &z)
{
    const int p = d.degree();
    const int m = d.dim();
    const int n = d.arity();
    const auto mm = static_cast<std::size_t>(m);
    if (p < 0)
        throw dimension_error("evaluate: degree -1 cochains are not maps");
    if (blocks.size() != static_cast<std::size_t>(p))
        throw dimension_error("evaluate: number of blocks must equal the degree");
    if (z.size() != mm)
        throw dimension_error("evaluate: argument has wrong length");
    Vector out(mm);
    const auto &vals = d.values();
    if (p == 0) {
        for (std::size_t j = 0; j < mm; ++j) {
            if (sgn(z[j]) == 0)
                continue;
            for (std::size_t k = 0; k < mm; ++k)
                if (sgn(vals[j * mm + k]) != 0)
                    out[k] += vals[j * mm + k] * z[j];
        }
        return out;
    }

    // Final block wedged with z.
    const auto &low = SubsetIndex::get(m, n - 1);
    const auto &top = SubsetIndex::get(m, n);
    SparseWedge last;
    for (const auto &[r, c] : *blocks.back()) {
        Mask s = low.mask(r);
        for (int k = 0; k < m; ++k) {
            const auto &zk = z[static_cast<std::size_t>(k)];
            if (sgn(zk) == 0 || (s >> k & 1u))
                continue;
            Rational coef = c * zk;
            if (count_above(s, k) % 2)
                coef = -coef;
            last.emplace_back(top.rank(s | (Mask(1) << k)), std::move(coef));
        }
    }
    if (last.empty())
        return out;

    const std::size_t b = low.size();
    const std::size_t w = top.size();
    const auto tensor = static_cast<std::size_t>(p - 1);
    for (std::size_t i = 0; i < tensor; ++i)
        if (blocks[i]->empty())
            return out;
    std::vector<std::size_t> pos(tensor, 0);
    Rational c, cc;
    while (true) {
        std::size_t off = 0;
        c = 1;
        for (std::size_t i = 0; i < tensor; ++i) {
            const auto &[r, bc] = (*blocks[i])[pos[i]];
            off = off * b + r;
            c *= bc;
        }
        for (const auto &[wr, wc] : last) {
            cc = c * wc;
            std::size_t base = (off * w + wr) * mm;
            for (std::size_t k = 0; k < mm; ++k)
                if (sgn(vals[base + k]) != 0)
                    out[k] += cc * vals[base + k];
        }
        std::size_t i = tensor;
        while (i > 0 && ++pos[i - 1] == blocks[i - 1]->size())
            pos[--i] = 0;
        if (i == 0)
            break;
    }
    return out;
}

} // namespace

Vector evaluate(const Cochain &d, const std::vector<SparseWedge> &blocks, const Vector &z)
{
    std::vector<const SparseWedge *> ptrs;
    for (const auto &b : blocks)
        ptrs.push_back(&b);
    return evaluate_core(d, ptrs, z);
}

Vector evaluate(const Cochain &d, const std::vector<WedgeElement> &blocks, const Vector &z)
{
    std::vector<SparseWedge> sw;
    sw.reserve(blocks.size());
    for (const auto &x : blocks) {
        if (x.dim != d.dim() || x.grade != d.arity() - 1)
            throw dimension_error("evaluate: blocks must be wedges of grade n-1");
        sw.push_back(sparse_wedge(x));
    }
    return evaluate(d, sw, z);
}

Vector evaluate_factors(const Cochain &d, const std::vector<std::vector<Vector>> &blocks, const Vector &z)
{
    std::vector<SparseWedge> sw;
    sw.reserve(blocks.size());
    for (const auto &f : blocks) {
        if (f.size() != static_cast<std::size_t>(d.arity() - 1))
            throw dimension_error("evaluate: blocks need n-1 factors");
        sw.push_back(sparse_product(d.dim(), f));
    }
    return evaluate(d, sw, z);
}

namespace
{

using FactorBlock = std::vector<Vector>;

void check_pair(const Cochain &d1, const Cochain &d2)
{
    if (d1.arity() != d2.arity() || d1.dim() != d2.dim())
        throw dimension_error("cochains over different spaces");
    if (d1.degree() < 0 || d2.degree() < 0)
        throw dimension_error("circle product needs degrees >= 0");
}

// A block with its factors and its expansion in the wedge basis.
struct PointBlock
{
    FactorBlock factors;
    SparseWedge wedge;
};

struct PointModel
{
    using Block = PointBlock;
    using Section = Vector;
    int dim;

    std::size_t factor_count(const Block &b) const { return b.factors.size(); }
    const Vector &factor(const Block &b, std::size_t s) const { return b.factors[s]; }
    Block replace(const Block &b, std::size_t s, Vector v) const
    {
        Block r{b.factors, {}};
        r.factors[s] = std::move(v);
        r.wedge = sparse_product(dim, r.factors);
        return r;
    }
    bool is_zero(const Vector &v) const { return filippov::is_zero(v); }
};

PointBlock make_block(int dim, FactorBlock f)
{
    PointBlock b{std::move(f), {}};
    b.wedge = sparse_product(dim, b.factors);
    return b;
}

Vector eval_blocks(const Cochain &d, const std::vector<const PointBlock *> &blocks, const Vector &z)
{
    std::vector<const SparseWedge *> w;
    w.reserve(blocks.size());
    for (const auto *b : blocks)
        w.push_back(&b->wedge);
    return evaluate_core(d, w, z);
}

void add_signed(Vector &acc, const Vector &v, int sign)
{
    for (std::size_t i = 0; i < acc.size(); ++i)
        if (sgn(v[i]) != 0) {
            if (sign > 0)
                acc[i] += v[i];
            else
                acc[i] -= v[i];
        }
}

Vector circle_blocks(const Cochain &d1, const Cochain &d2, const std::vector<const PointBlock *> &blocks,
                     const Vector &z)
{
    const int p = d1.degree();
    const int q = d2.degree();
    PointModel model{d1.dim()};
    Vector acc(static_cast<std::size_t>(d1.dim()));
    auto emit = [&](const Vector &v, int sign) { add_signed(acc, v, sign); };
    auto inner = [&](const std::vector<const PointBlock *> &in, const Vector &v) { return eval_blocks(d2, in, v); };
    detail::insertion_terms(
        model, p, q, blocks, [&](const std::vector<const PointBlock *> &args) { return eval_blocks(d1, args, z); },
        inner, emit);
    detail::composition_terms(
        model, p, q, blocks, z,
        [&](const std::vector<const PointBlock *> &args, const Vector &v) { return eval_blocks(d1, args, v); }, inner,
        emit);
    return acc;
}

// Fills every key of `out` from a value function on (basis blocks, z). Blocks
// point into a table of basis (n-1)-wedges; the final n-subset is split into
// its first n-1 elements and z.
template <class F>
void assemble(Cochain &out, F &&value)
{
    const int m = out.dim();
    const int n = out.arity();
    const auto mm = static_cast<std::size_t>(m);
    std::vector<Vector> units;
    for (std::size_t j = 0; j < mm; ++j)
        units.push_back(unit_vector(mm, j));
    if (out.degree() == 0) {
        parallel_for(mm, [&](std::size_t j) {
            Vector v = value(std::vector<const PointBlock *>{}, units[j]);
            std::copy(v.begin(), v.end(), out.values().begin() + static_cast<std::ptrdiff_t>(j * mm));
        });
        return;
    }
    const auto &low = SubsetIndex::get(m, n - 1);
    const auto &top = SubsetIndex::get(m, n);
    std::vector<PointBlock> table;
    table.reserve(low.size());
    for (std::size_t r = 0; r < low.size(); ++r) {
        FactorBlock f;
        for (int i : low.elements(r))
            f.push_back(units[static_cast<std::size_t>(i)]);
        table.push_back(PointBlock{std::move(f), SparseWedge{{r, Rational(1)}}});
    }
    parallel_for(out.num_keys(), [&](std::size_t key) {
        auto [ranks, wr] = out.key_of(key);
        std::vector<const PointBlock *> blocks;
        blocks.reserve(ranks.size() + 1);
        for (auto r : ranks)
            blocks.push_back(&table[r]);
        Mask wm = top.mask(wr);
        int last = 31 - __builtin_clz(wm);
        blocks.push_back(&table[low.rank(wm & ~(Mask(1) << last))]);
        Vector v = value(blocks, units[static_cast<std::size_t>(last)]);
        std::copy(v.begin(), v.end(), out.values().begin() + static_cast<std::ptrdiff_t>(key * mm));
    });
}

} // namespace

Vector circle_value(const Cochain &d1, const Cochain &d2, const std::vector<FactorBlock> &blocks, const Vector &z)
{
    check_pair(d1, d2);
    if (blocks.size() != static_cast<std::size_t>(d1.degree() + d2.degree()))
        throw dimension_error("circle_value: need p+q blocks");
    std::vector<PointBlock> owned;
    for (const auto &f : blocks) {
        if (f.size() != static_cast<std::size_t>(d1.arity() - 1))
            throw dimension_error("circle_value: blocks need n-1 factors");
        owned.push_back(make_block(d1.dim(), f));
    }
    std::vector<const PointBlock *> ptrs;
    for (const auto &b : owned)
        ptrs.push_back(&b);
    return circle_blocks(d1, d2, ptrs, z);
}

Cochain circle(const Cochain &d1, const Cochain &d2)
{
    check_pair(d1, d2);
    Cochain out(d1.arity(), d1.dim(), d1.degree() + d2.degree());
    if (d1.is_zero() || d2.is_zero())
        return out;
    assemble(out, [&](const std::vector<const PointBlock *> &blocks, const Vector &z) {
        return circle_blocks(d1, d2, blocks, z);
    });
    return out;
}

Cochain gla_bracket(const Cochain &d1, const Cochain &d2)
{
    check_pair(d1, d2);
    Cochain out = circle(d1, d2);
    if ((d1.degree() * d2.degree()) % 2)
        out *= Rational(-1);
    out -= circle(d2, d1);
    return out;
}

Cochain from_bracket(const NLieAlgebra &a)
{
    Cochain c(a.arity(), a.dim(), 1);
    const auto m = static_cast<std::size_t>(a.dim());
    for (std::size_t w = 0; w < a.num_keys(); ++w)
        std::copy(a.structure(w).begin(), a.structure(w).end(), c.values().begin() + static_cast<std::ptrdiff_t>(w * m));
    return c;
}

NLieAlgebra to_algebra(const Cochain &d)
{
    if (d.degree() != 1)
        throw dimension_error("to_algebra: cochain degree must be 1");
    NLieAlgebra a(d.arity(), d.dim());
    const auto m = static_cast<std::size_t>(d.dim());
    for (std::size_t w = 0; w < a.num_keys(); ++w)
        a.structure(w) = Vector(d.values().begin() + static_cast<std::ptrdiff_t>(w * m),
                                d.values().begin() + static_cast<std::ptrdiff_t>((w + 1) * m));
    return a;
}

Cochain maurer_cartan_defect(const Cochain &d)
{
    if (d.degree() != 1)
        throw dimension_error("maurer_cartan_defect: cochain degree must be 1");
    return gla_bracket(d, d);
}

CoboundaryOperator::CoboundaryOperator(Cochain phi) : phi_(std::move(phi))
{
    if (phi_.degree() != 1)
        throw dimension_error("coboundary needs a degree 1 cochain");
    if (!maurer_cartan_defect(phi_).is_zero())
        throw precondition_error("[phi, phi] != 0: the bracket violates the fundamental identity");
    algebra_ = to_algebra(phi_);
}

CoboundaryOperator::CoboundaryOperator(const NLieAlgebra &a) : CoboundaryOperator(from_bracket(a))
{
}

Cochain CoboundaryOperator::operator()(const Cochain &psi) const
{
    if (psi.arity() != arity() || psi.dim() != dim())
        throw dimension_error("cochain does not match the bracket");
    if (psi.degree() == -1)
        return Cochain::from_linear_map(arity(), ad_map(algebra_, psi.as_wedge()));
    return gla_bracket(phi_, psi);
}

Cochain differential(const Cochain &phi, const Cochain &psi)
{
    return CoboundaryOperator(phi)(psi);
}

Cochain coboundary_explicit(const NLieAlgebra &a, const Cochain &psi)
{
    if (psi.arity() != a.arity() || psi.dim() != a.dim())
        throw dimension_error("cochain does not match the bracket");
    if (psi.degree() < 0)
        throw dimension_error("coboundary_explicit: degree must be at least 0");
    if (!check_fundamental_identity(a).holds)
        throw precondition_error("coboundary_explicit: the bracket violates the fundamental identity");
    const int m = a.dim();
    const int n = a.arity();
    const int p = psi.degree();
    Cochain out(n, m, p + 1);
    if (psi.is_zero() || a.is_zero())
        return out;
    const auto mm = static_cast<std::size_t>(m);

    assemble(out, [&](const std::vector<const PointBlock *> &blocks, const Vector &z) {
        // X_1..X_{p+1} as wedges.
        std::vector<WedgeElement> x;
        for (const auto *b : blocks)
            x.push_back(WedgeElement::product(m, b->factors));
        auto without = [&](std::size_t i) {
            std::vector<WedgeElement> r;
            for (std::size_t j = 0; j < x.size(); ++j)
                if (j != i)
                    r.push_back(x[j]);
            return r;
        };
        Vector acc(mm);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const int sign_i = (i + 1) % 2 ? -1 : 1;
            // (-1)^i psi(.. ^X_i .., [X_i, z])
            add_signed(acc, evaluate(psi, without(i), bracket_wedge(a, x[i], z)), sign_i);
            // (-1)^i psi(.. ^X_i .., [X_i, X_j], .., z)
            for (std::size_t j = i + 1; j < x.size(); ++j) {
                auto args = without(i);
                args[j - 1] = fundamental_bracket(a, x[i], x[j]);
                add_signed(acc, evaluate(psi, args, z), sign_i);
            }
            // (-1)^{i+1} [X_i, psi(.. ^X_i .., z)]
            add_signed(acc, bracket_wedge(a, x[i], evaluate(psi, without(i), z)), -sign_i);
        }
        // (-1)^p sum_s [X^1_{p+1}, .., psi(X_1..X_p, X^s_{p+1}), .., z]
        std::vector<WedgeElement> head(x.begin(), x.end() - 1);
        const auto &last = blocks.back()->factors;
        for (std::size_t s = 0; s < last.size(); ++s) {
            std::vector<Vector> args = last;
            args[s] = evaluate(psi, head, last[s]);
            args.push_back(z);
            add_signed(acc, bracket_eval(a, args), p % 2 ? -1 : 1);
        }
        return acc;
    });
    return out;
}

bool is_filippov_derivation(const NLieAlgebra &a, const LinearMap &d)
{
    return is_derivation(a, d);
}

} // namespace filippov
