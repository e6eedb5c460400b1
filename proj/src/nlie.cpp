#include "filippov/nlie.hpp"

#include <functional>

#include "filippov/errors.hpp"
#include "filippov/parallel.hpp"

namespace filippov
{

namespace
{

void check_length(const Vector &v, int m, const char *what)
{
    if (v.size() != static_cast<std::size_t>(m))
        throw dimension_error(std::string(what) + ": expected length " + std::to_string(m) + ", got " +
                              std::to_string(v.size()));
}

void check_increasing(std::span<const int> idx, int m, std::size_t len, const char *what)
{
    if (idx.size() != len)
        throw dimension_error(std::string(what) + ": wrong tuple length");
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= m)
            throw dimension_error(std::string(what) + ": index out of range");
        if (i > 0 && idx[i] <= idx[i - 1])
            throw dimension_error(std::string(what) + ": tuple not strictly increasing");
    }
}

void add_scaled(Vector &out, const Vector &v, const Rational &c)
{
    for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0)
            out[i] += c * v[i];
}

std::vector<int> with(std::span<const int> head, int last)
{
    std::vector<int> v(head.begin(), head.end());
    v.push_back(last);
    return v;
}

} // namespace

WedgeElement::WedgeElement(int dim_, int grade_)
    : dim(dim_), grade(grade_), coords(SubsetIndex::get(dim_, grade_).size())
{
}

WedgeElement WedgeElement::basis(int dim, std::span<const int> indices)
{
    WedgeElement w(dim, static_cast<int>(indices.size()));
    for (int i : indices)
        if (i < 0 || i >= dim)
            throw dimension_error("wedge index out of range");
    auto [mask, sign] = sorted_mask(indices);
    if (sign != 0)
        w.coords[SubsetIndex::get(dim, w.grade).rank(mask)] = sign;
    return w;
}

WedgeElement WedgeElement::product(int dim, const std::vector<Vector> &factors)
{
    const int g = static_cast<int>(factors.size());
    for (const auto &f : factors)
        check_length(f, dim, "wedge factor");
    WedgeElement w(dim, g);
    const auto &idx = SubsetIndex::get(dim, g);
    std::vector<int> cur;
    std::function<void(int, Rational)> rec = [&](int depth, Rational c) {
        if (depth == g) {
            auto [mask, sign] = sorted_mask(cur);
            if (sign != 0)
                w.coords[idx.rank(mask)] += sign * c;
            return;
        }
        const auto &f = factors[static_cast<std::size_t>(depth)];
        for (int k = 0; k < dim; ++k) {
            if (sgn(f[static_cast<std::size_t>(k)]) == 0)
                continue;
            cur.push_back(k);
            rec(depth + 1, c * f[static_cast<std::size_t>(k)]);
            cur.pop_back();
        }
    };
    rec(0, Rational(1));
    return w;
}

WedgeElement &WedgeElement::operator+=(const WedgeElement &o)
{
    if (dim != o.dim || grade != o.grade)
        throw dimension_error("wedge shapes differ");
    for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] += o.coords[i];
    return *this;
}

WedgeElement &WedgeElement::operator-=(const WedgeElement &o)
{
    if (dim != o.dim || grade != o.grade)
        throw dimension_error("wedge shapes differ");
    for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] -= o.coords[i];
    return *this;
}

WedgeElement &WedgeElement::operator*=(const Rational &c)
{
    for (auto &x : coords)
        x *= c;
    return *this;
}

NLieAlgebra::NLieAlgebra(int arity, int dim) : n_(arity), m_(dim)
{
    if (arity < 2)
        throw dimension_error("arity must be at least 2");
    if (dim < 1 || dim > max_dimension)
        throw dimension_error("dimension out of range");
    table_.assign(binomial(dim, arity), Vector(static_cast<std::size_t>(dim)));
}

void NLieAlgebra::set_bracket(std::span<const int> indices, const Vector &value)
{
    check_increasing(indices, m_, static_cast<std::size_t>(n_), "bracket key");
    check_length(value, m_, "bracket value");
    auto [mask, sign] = sorted_mask(indices);
    table_[SubsetIndex::get(m_, n_).rank(mask)] = value;
}

Vector NLieAlgebra::basis_bracket(std::span<const int> indices) const
{
    Vector out(static_cast<std::size_t>(m_));
    add_basis_bracket(indices, Rational(1), out);
    return out;
}

void NLieAlgebra::add_basis_bracket(std::span<const int> indices, const Rational &c, Vector &out) const
{
    if (indices.size() != static_cast<std::size_t>(n_))
        throw dimension_error("bracket needs exactly n arguments");
    if (table_.empty())
        return;
    auto [mask, sign] = sorted_mask(indices);
    if (sign == 0)
        return;
    const auto &v = table_[SubsetIndex::get(m_, n_).rank(mask)];
    add_scaled(out, v, sign > 0 ? c : Rational(-c));
}

bool NLieAlgebra::is_zero() const
{
    for (const auto &v : table_)
        if (!filippov::is_zero(v))
            return false;
    return true;
}

Representation::Representation(int arity, int algebra_dim, int module_dim)
    : n_(arity), m_(algebra_dim), r_(module_dim)
{
    if (arity < 2)
        throw dimension_error("arity must be at least 2");
    if (algebra_dim < 1 || module_dim < 1 || algebra_dim + module_dim > max_dimension)
        throw dimension_error("representation dimensions out of range");
    table_.assign(binomial(algebra_dim, arity - 1) * static_cast<std::size_t>(module_dim),
                  Vector(static_cast<std::size_t>(module_dim)));
}

void Representation::set_action(std::span<const int> indices, int module_index, const Vector &value)
{
    check_increasing(indices, m_, static_cast<std::size_t>(n_ - 1), "action key");
    if (module_index < 0 || module_index >= r_)
        throw dimension_error("module index out of range");
    check_length(value, r_, "action value");
    auto [mask, sign] = sorted_mask(indices);
    action(SubsetIndex::get(m_, n_ - 1).rank(mask), module_index) = value;
}

RationalMatrix Representation::matrix(const WedgeElement &x) const
{
    if (x.dim != m_ || x.grade != n_ - 1)
        throw dimension_error("action needs a wedge of grade n-1");
    RationalMatrix out(static_cast<std::size_t>(r_), static_cast<std::size_t>(r_));
    for (std::size_t w = 0; w < x.coords.size(); ++w) {
        if (sgn(x.coords[w]) == 0)
            continue;
        for (int j = 0; j < r_; ++j) {
            const auto &v = action(w, j);
            for (int i = 0; i < r_; ++i)
                if (sgn(v[static_cast<std::size_t>(i)]) != 0)
                    out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +=
                        x.coords[w] * v[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

Vector bracket_eval(const NLieAlgebra &a, const std::vector<Vector> &args)
{
    const int n = a.arity();
    if (args.size() != static_cast<std::size_t>(n))
        throw dimension_error("bracket needs exactly n arguments");
    for (const auto &v : args)
        check_length(v, a.dim(), "bracket argument");
    Vector out(static_cast<std::size_t>(a.dim()));
    std::vector<int> cur;
    Mask used = 0;
    std::function<void(int, Rational)> rec = [&](int depth, Rational c) {
        if (depth == n) {
            a.add_basis_bracket(cur, c, out);
            return;
        }
        const auto &v = args[static_cast<std::size_t>(depth)];
        for (int k = 0; k < a.dim(); ++k) {
            if (sgn(v[static_cast<std::size_t>(k)]) == 0 || (used >> k & 1u))
                continue;
            cur.push_back(k);
            used |= Mask(1) << k;
            rec(depth + 1, c * v[static_cast<std::size_t>(k)]);
            used &= ~(Mask(1) << k);
            cur.pop_back();
        }
    };
    rec(0, Rational(1));
    return out;
}

Vector bracket_wedge(const NLieAlgebra &a, const WedgeElement &x, const Vector &y)
{
    if (x.dim != a.dim() || x.grade != a.arity() - 1)
        throw dimension_error("bracket_wedge: wedge must have grade n-1");
    check_length(y, a.dim(), "bracket argument");
    const auto &idx = SubsetIndex::get(a.dim(), x.grade);
    Vector out(static_cast<std::size_t>(a.dim()));
    for (std::size_t w = 0; w < x.coords.size(); ++w) {
        if (sgn(x.coords[w]) == 0)
            continue;
        auto el = idx.elements(w);
        for (int k = 0; k < a.dim(); ++k)
            if (sgn(y[static_cast<std::size_t>(k)]) != 0)
                a.add_basis_bracket(with(el, k), x.coords[w] * y[static_cast<std::size_t>(k)], out);
    }
    return out;
}

namespace
{

std::pair<Vector, Vector> fi_sides(const NLieAlgebra &a, std::span<const int> x, std::span<const int> y)
{
    const auto m = static_cast<std::size_t>(a.dim());
    Vector lhs(m), rhs(m);
    Vector inner = a.basis_bracket(y);
    for (std::size_t k = 0; k < m; ++k)
        if (sgn(inner[k]) != 0)
            a.add_basis_bracket(with(x, static_cast<int>(k)), inner[k], lhs);
    std::vector<int> yy(y.begin(), y.end());
    for (std::size_t i = 0; i < yy.size(); ++i) {
        Vector v = a.basis_bracket(with(x, y[i]));
        for (std::size_t k = 0; k < m; ++k) {
            if (sgn(v[k]) == 0)
                continue;
            yy[i] = static_cast<int>(k);
            a.add_basis_bracket(yy, v[k], rhs);
        }
        yy[i] = y[i];
    }
    return {std::move(lhs), std::move(rhs)};
}

} // namespace

Vector fi_defect(const NLieAlgebra &a, std::span<const int> x, std::span<const int> y)
{
    if (x.size() != static_cast<std::size_t>(a.arity() - 1) || y.size() != static_cast<std::size_t>(a.arity()))
        throw dimension_error("fi_defect: tuple lengths must be n-1 and n");
    for (int i : x)
        if (i < 0 || i >= a.dim())
            throw dimension_error("fi_defect: index out of range");
    for (int i : y)
        if (i < 0 || i >= a.dim())
            throw dimension_error("fi_defect: index out of range");
    auto [lhs, rhs] = fi_sides(a, x, y);
    for (std::size_t i = 0; i < lhs.size(); ++i)
        lhs[i] -= rhs[i];
    return lhs;
}

Verdict check_fundamental_identity(const NLieAlgebra &a)
{
    const auto &xs = SubsetIndex::get(a.dim(), a.arity() - 1);
    const auto &ys = SubsetIndex::get(a.dim(), a.arity());
    const std::size_t ny = ys.size();
    auto hit = parallel_find_first(xs.size() * ny, [&](std::size_t p) {
        auto [l, r] = fi_sides(a, xs.elements(p / ny), ys.elements(p % ny));
        return l != r;
    });
    Verdict v;
    if (!hit)
        return v;
    auto x = xs.elements(*hit / ny);
    auto y = ys.elements(*hit % ny);
    auto [l, r] = fi_sides(a, x, y);
    v.holds = false;
    v.witness = Witness{"fundamental identity",
                        {std::vector<int>(x.begin(), x.end()), std::vector<int>(y.begin(), y.end())},
                        std::move(l),
                        std::move(r)};
    return v;
}

WedgeElement fundamental_bracket(const NLieAlgebra &a, const WedgeElement &x, const WedgeElement &y)
{
    const int g = a.arity() - 1;
    if (x.dim != a.dim() || y.dim != a.dim() || x.grade != g || y.grade != g)
        throw dimension_error("fundamental_bracket: both arguments need grade n-1");
    const auto &idx = SubsetIndex::get(a.dim(), g);
    WedgeElement out(a.dim(), g);
    for (std::size_t wx = 0; wx < x.coords.size(); ++wx) {
        if (sgn(x.coords[wx]) == 0)
            continue;
        auto ex = idx.elements(wx);
        for (std::size_t wy = 0; wy < y.coords.size(); ++wy) {
            if (sgn(y.coords[wy]) == 0)
                continue;
            Rational c = x.coords[wx] * y.coords[wy];
            auto ey = idx.elements(wy);
            std::vector<int> yy(ey.begin(), ey.end());
            for (int i = 0; i < g; ++i) {
                Vector v = a.basis_bracket(with(ex, ey[static_cast<std::size_t>(i)]));
                for (int k = 0; k < a.dim(); ++k) {
                    if (sgn(v[static_cast<std::size_t>(k)]) == 0)
                        continue;
                    yy[static_cast<std::size_t>(i)] = k;
                    auto [mask, sign] = sorted_mask(yy);
                    if (sign != 0)
                        out.coords[idx.rank(mask)] += sign * c * v[static_cast<std::size_t>(k)];
                }
                yy[static_cast<std::size_t>(i)] = ey[static_cast<std::size_t>(i)];
            }
        }
    }
    return out;
}

LinearMap ad_map(const NLieAlgebra &a, const WedgeElement &x)
{
    const auto m = static_cast<std::size_t>(a.dim());
    LinearMap out(m, m);
    for (std::size_t j = 0; j < m; ++j)
        out.set_column(j, bracket_wedge(a, x, unit_vector(m, j)));
    return out;
}

bool is_derivation(const NLieAlgebra &a, const LinearMap &d)
{
    const auto m = static_cast<std::size_t>(a.dim());
    if (d.rows() != m || d.cols() != m)
        throw dimension_error("derivation must be an m x m matrix");
    const auto &ys = SubsetIndex::get(a.dim(), a.arity());
    auto bad = parallel_find_first(ys.size(), [&](std::size_t r) {
        auto y = ys.elements(r);
        Vector lhs = d * a.structure(r);
        Vector rhs(m);
        std::vector<int> yy(y.begin(), y.end());
        for (std::size_t i = 0; i < yy.size(); ++i) {
            for (std::size_t k = 0; k < m; ++k) {
                const auto &c = d(k, static_cast<std::size_t>(y[i]));
                if (sgn(c) == 0)
                    continue;
                yy[i] = static_cast<int>(k);
                a.add_basis_bracket(yy, c, rhs);
            }
            yy[i] = y[i];
        }
        return lhs != rhs;
    });
    return !bad;
}

Vector rho_eval(const Representation &rho, const std::vector<Vector> &xs, const Vector &xi)
{
    if (xs.size() != static_cast<std::size_t>(rho.arity() - 1))
        throw dimension_error("action needs n-1 algebra arguments");
    check_length(xi, rho.module_dim(), "module argument");
    return rho.matrix(WedgeElement::product(rho.algebra_dim(), xs)) * xi;
}

namespace
{

// Signed action matrix on basis vectors in any order; nullopt on a repeat.
struct BasisActions
{
    const Representation &rho;
    const SubsetIndex &idx;
    std::vector<RationalMatrix> mats;

    explicit BasisActions(const Representation &r)
        : rho(r), idx(SubsetIndex::get(r.algebra_dim(), r.arity() - 1))
    {
        mats.reserve(idx.size());
        for (std::size_t w = 0; w < idx.size(); ++w)
            mats.push_back(r.matrix(WedgeElement::basis(r.algebra_dim(), idx.elements(w))));
    }

    // out += c * M(indices)
    void add(std::span<const int> indices, const Rational &c, RationalMatrix &out) const
    {
        auto [mask, sign] = sorted_mask(indices);
        if (sign == 0)
            return;
        RationalMatrix t = mats[idx.rank(mask)];
        t *= sign > 0 ? c : Rational(-c);
        out += t;
    }
};

std::optional<Witness> first_column_mismatch(const RationalMatrix &l, const RationalMatrix &r, std::string cond,
                                             std::vector<std::vector<int>> tuples)
{
    for (std::size_t j = 0; j < l.cols(); ++j) {
        Vector lc = l.column(j), rc = r.column(j);
        if (lc != rc) {
            tuples.push_back({static_cast<int>(j)});
            return Witness{std::move(cond), std::move(tuples), std::move(lc), std::move(rc)};
        }
    }
    return std::nullopt;
}

} // namespace

Verdict check_representation(const NLieAlgebra &a, const Representation &rho)
{
    if (a.arity() != rho.arity() || a.dim() != rho.algebra_dim())
        throw dimension_error("representation does not match the algebra");
    const int n = a.arity();
    const int m = a.dim();
    const auto r = static_cast<std::size_t>(rho.module_dim());
    BasisActions acts(rho);
    const auto &xs = acts.idx;

    // condition (1)
    auto cond1 = [&](std::size_t p) {
        std::size_t ix = p / xs.size(), iy = p % xs.size();
        auto x = xs.elements(ix);
        auto y = xs.elements(iy);
        RationalMatrix lhs = acts.mats[ix] * acts.mats[iy] - acts.mats[iy] * acts.mats[ix];
        RationalMatrix rhs(r, r);
        std::vector<int> yy(y.begin(), y.end());
        for (std::size_t i = 0; i < yy.size(); ++i) {
            Vector v = a.basis_bracket(with(x, y[i]));
            for (int k = 0; k < m; ++k) {
                if (sgn(v[static_cast<std::size_t>(k)]) == 0)
                    continue;
                yy[i] = k;
                acts.add(yy, v[static_cast<std::size_t>(k)], rhs);
            }
            yy[i] = y[i];
        }
        return std::pair{std::move(lhs), std::move(rhs)};
    };
    auto hit1 = parallel_find_first(xs.size() * xs.size(), [&](std::size_t p) {
        auto [l, rr] = cond1(p);
        return l != rr;
    });
    if (hit1) {
        auto [l, rr] = cond1(*hit1);
        auto x = xs.elements(*hit1 / xs.size());
        auto y = xs.elements(*hit1 % xs.size());
        return {false, first_column_mismatch(l, rr, "representation condition (1)",
                                             {std::vector<int>(x.begin(), x.end()),
                                              std::vector<int>(y.begin(), y.end())})};
    }

    // condition (2), signed form
    const auto &x2 = SubsetIndex::get(m, n - 2);
    const auto &ys = SubsetIndex::get(m, n);
    auto cond2 = [&](std::size_t p) {
        auto x = x2.elements(p / ys.size());
        auto y = ys.elements(p % ys.size());
        RationalMatrix lhs(r, r), rhs(r, r);
        Vector c = a.basis_bracket(y);
        for (int k = 0; k < m; ++k)
            if (sgn(c[static_cast<std::size_t>(k)]) != 0)
                acts.add(with(x, k), c[static_cast<std::size_t>(k)], lhs);
        for (int i = 0; i < n; ++i) {
            std::vector<int> hat;
            for (int j = 0; j < n; ++j)
                if (j != i)
                    hat.push_back(y[static_cast<std::size_t>(j)]);
            RationalMatrix outer(r, r), inner(r, r);
            acts.add(hat, Rational(1), outer);
            acts.add(with(x, y[static_cast<std::size_t>(i)]), Rational(1), inner);
            RationalMatrix term = outer * inner;
            if ((n - 1 - i) % 2 != 0)
                term *= Rational(-1);
            rhs += term;
        }
        return std::pair{std::move(lhs), std::move(rhs)};
    };
    auto hit2 = parallel_find_first(x2.size() * ys.size(), [&](std::size_t p) {
        auto [l, rr] = cond2(p);
        return l != rr;
    });
    if (hit2) {
        auto [l, rr] = cond2(*hit2);
        auto x = x2.elements(*hit2 / ys.size());
        auto y = ys.elements(*hit2 % ys.size());
        return {false, first_column_mismatch(l, rr, "representation condition (2)",
                                             {std::vector<int>(x.begin(), x.end()),
                                              std::vector<int>(y.begin(), y.end())})};
    }
    return {};
}

Representation adjoint_representation(const NLieAlgebra &a)
{
    Representation rho(a.arity(), a.dim(), a.dim());
    const auto &xs = SubsetIndex::get(a.dim(), a.arity() - 1);
    for (std::size_t w = 0; w < xs.size(); ++w)
        for (int j = 0; j < a.dim(); ++j)
            rho.action(w, j) = a.basis_bracket(with(xs.elements(w), j));
    return rho;
}

NLieAlgebra semidirect_product(const NLieAlgebra &a, const Representation &rho)
{
    auto v = check_representation(a, rho);
    if (!v.holds)
        throw precondition_error("semidirect product: action is not a representation (" + v.witness->condition + ")");
    const int m = a.dim();
    const int total = m + rho.module_dim();
    const int n = a.arity();
    NLieAlgebra out(n, total);
    const auto &keys = SubsetIndex::get(total, n);
    const auto &xs = SubsetIndex::get(m, n - 1);
    for (std::size_t k = 0; k < keys.size(); ++k) {
        auto el = keys.elements(k);
        int modules = 0;
        for (int i : el)
            modules += i >= m ? 1 : 0;
        Vector val(static_cast<std::size_t>(total));
        if (modules == 0) {
            Vector c = a.basis_bracket(el);
            std::copy(c.begin(), c.end(), val.begin());
        } else if (modules == 1) {
            std::vector<int> x(el.begin(), el.end() - 1);
            Mask mask = 0;
            for (int i : x)
                mask |= Mask(1) << i;
            const auto &act = rho.action(xs.rank(mask), el.back() - m);
            std::copy(act.begin(), act.end(), val.begin() + m);
        }
        out.structure(k) = std::move(val);
    }
    return out;
}

Verdict check_o_operator(const NLieAlgebra &a, const Representation &rho, const LinearMap &t)
{
    if (a.arity() != rho.arity() || a.dim() != rho.algebra_dim())
        throw dimension_error("representation does not match the algebra");
    const auto m = static_cast<std::size_t>(a.dim());
    const int r = rho.module_dim();
    if (t.rows() != m || t.cols() != static_cast<std::size_t>(r))
        throw dimension_error("O-operator must be an m x r matrix");
    const int n = a.arity();
    if (r < n)
        return {};
    const auto &keys = SubsetIndex::get(r, n);
    auto sides = [&](std::size_t k) {
        auto xi = keys.elements(k);
        std::vector<Vector> txi;
        for (int i : xi)
            txi.push_back(t.column(static_cast<std::size_t>(i)));
        Vector lhs = bracket_eval(a, txi);
        Vector inner(static_cast<std::size_t>(r));
        for (int i = 0; i < n; ++i) {
            std::vector<Vector> rest;
            for (int j = 0; j < n; ++j)
                if (j != i)
                    rest.push_back(txi[static_cast<std::size_t>(j)]);
            Vector term = rho_eval(rho, rest, unit_vector(static_cast<std::size_t>(r),
                                                          static_cast<std::size_t>(xi[static_cast<std::size_t>(i)])));
            add_scaled(inner, term, (n - 1 - i) % 2 == 0 ? Rational(1) : Rational(-1));
        }
        return std::pair{std::move(lhs), t * inner};
    };
    auto hit = parallel_find_first(keys.size(), [&](std::size_t k) {
        auto [l, rr] = sides(k);
        return l != rr;
    });
    if (!hit)
        return {};
    auto [l, rr] = sides(*hit);
    auto xi = keys.elements(*hit);
    return {false, Witness{"O-operator", {std::vector<int>(xi.begin(), xi.end())}, std::move(l), std::move(rr)}};
}

} // namespace filippov
