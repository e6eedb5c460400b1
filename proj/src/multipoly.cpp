#include "filippov/multipoly.hpp"

#include <algorithm>
#include <numeric>

#include "filippov/errors.hpp"

namespace filippov
{

MultiPoly MultiPoly::constant(int num_vars, const Rational &c)
{
    MultiPoly p(num_vars);
    p.add_term(Exponents(static_cast<std::size_t>(num_vars), 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int num_vars, int i)
{
    if (i < 0 || i >= num_vars)
        throw dimension_error("variable index out of range");
    Exponents e(static_cast<std::size_t>(num_vars), 0);
    e[static_cast<std::size_t>(i)] = 1;
    return monomial(num_vars, std::move(e), Rational(1));
}

MultiPoly MultiPoly::monomial(int num_vars, Exponents exps, const Rational &c)
{
    MultiPoly p(num_vars);
    p.add_term(exps, c);
    return p;
}

bool MultiPoly::is_constant() const
{
    if (terms_.empty())
        return true;
    if (terms_.size() > 1)
        return false;
    const auto &e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
}

int MultiPoly::degree() const
{
    int d = -1;
    for (const auto &[e, c] : terms_)
        d = std::max(d, static_cast<int>(std::accumulate(e.begin(), e.end(), 0u)));
    return d;
}

void MultiPoly::add_term(const Exponents &exps, const Rational &c)
{
    if (exps.size() != static_cast<std::size_t>(num_vars_))
        throw dimension_error("exponent vector length does not match num_vars");
    if (sgn(c) == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(exps, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0)
            terms_.erase(it);
    }
}

void MultiPoly::check_compatible(const MultiPoly &other) const
{
    if (num_vars_ != other.num_vars_)
        throw dimension_error("polynomials over different numbers of variables");
}

MultiPoly &MultiPoly::operator+=(const MultiPoly &other)
{
    check_compatible(other);
    for (const auto &[e, c] : other.terms_)
        add_term(e, c);
    return *this;
}

MultiPoly &MultiPoly::operator-=(const MultiPoly &other)
{
    check_compatible(other);
    for (const auto &[e, c] : other.terms_)
        add_term(e, -c);
    return *this;
}

MultiPoly &MultiPoly::operator*=(const Rational &c)
{
    if (sgn(c) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto &[e, v] : terms_)
        v *= c;
    return *this;
}

MultiPoly operator*(const MultiPoly &a, const MultiPoly &b)
{
    a.check_compatible(b);
    MultiPoly r(a.num_vars_);
    Exponents e(static_cast<std::size_t>(a.num_vars_));
    for (const auto &[ea, ca] : a.terms_)
        for (const auto &[eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

MultiPoly MultiPoly::operator-() const
{
    MultiPoly r(*this);
    for (auto &[e, c] : r.terms_)
        c = -c;
    return r;
}

MultiPoly MultiPoly::derivative(int i) const
{
    if (i < 0 || i >= num_vars_)
        throw dimension_error("derivative variable out of range");
    MultiPoly r(num_vars_);
    for (const auto &[e, c] : terms_) {
        auto k = e[static_cast<std::size_t>(i)];
        if (k == 0)
            continue;
        Exponents d = e;
        --d[static_cast<std::size_t>(i)];
        r.add_term(d, c * k);
    }
    return r;
}

MultiPoly poly_arith(const MultiPoly &a, const MultiPoly &b, PolyOp op, const Rational &factor)
{
    if (a.num_vars() != b.num_vars())
        throw dimension_error("poly_arith: mismatched num_vars");
    switch (op) {
    case PolyOp::add:
        return a + b;
    case PolyOp::mul:
        return a * b;
    case PolyOp::scale:
        return a * factor;
    }
    return MultiPoly(a.num_vars());
}

std::ostream &operator<<(std::ostream &os, const MultiPoly &p)
{
    if (p.is_zero())
        return os << "0";
    bool first = true;
    for (const auto &[e, c] : p.terms()) {
        if (!first)
            os << (sgn(c) < 0 ? " - " : " + ");
        else if (sgn(c) < 0)
            os << "-";
        first = false;
        Rational a = abs(c);
        bool unit = a == 1;
        bool has_var = std::any_of(e.begin(), e.end(), [](auto x) { return x != 0; });
        if (!unit || !has_var)
            os << to_string(a);
        bool need_star = !unit || !has_var;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (need_star)
                os << "*";
            os << "x" << (i + 1);
            if (e[i] > 1)
                os << "^" << e[i];
            need_star = true;
        }
    }
    return os;
}

PolyVectorField::PolyVectorField(int num_vars)
    : components_(static_cast<std::size_t>(num_vars), MultiPoly(num_vars))
{
}

PolyVectorField::PolyVectorField(std::vector<MultiPoly> components) : components_(std::move(components))
{
    for (const auto &c : components_)
        if (c.num_vars() != static_cast<int>(components_.size()))
            throw dimension_error("vector field component count must equal num_vars");
}

PolyVectorField PolyVectorField::coordinate(int num_vars, int i)
{
    PolyVectorField v(num_vars);
    v[static_cast<std::size_t>(i)] = MultiPoly::constant(num_vars, 1);
    return v;
}

bool PolyVectorField::is_zero() const
{
    return std::all_of(components_.begin(), components_.end(), [](const auto &c) { return c.is_zero(); });
}

PolyVectorField &PolyVectorField::operator+=(const PolyVectorField &other)
{
    if (other.num_vars() != num_vars())
        throw dimension_error("vector fields over different bases");
    for (std::size_t i = 0; i < components_.size(); ++i)
        components_[i] += other.components_[i];
    return *this;
}

PolyVectorField &PolyVectorField::operator-=(const PolyVectorField &other)
{
    if (other.num_vars() != num_vars())
        throw dimension_error("vector fields over different bases");
    for (std::size_t i = 0; i < components_.size(); ++i)
        components_[i] -= other.components_[i];
    return *this;
}

PolyVectorField &PolyVectorField::operator*=(const MultiPoly &f)
{
    for (auto &c : components_)
        c = c * f;
    return *this;
}

PolyVectorField &PolyVectorField::operator*=(const Rational &c)
{
    for (auto &x : components_)
        x *= c;
    return *this;
}

MultiPoly vf_apply(const PolyVectorField &v, const MultiPoly &f)
{
    if (v.num_vars() != f.num_vars())
        throw dimension_error("vf_apply: mismatched num_vars");
    MultiPoly r(f.num_vars());
    for (int i = 0; i < v.num_vars(); ++i) {
        const auto &vi = v[static_cast<std::size_t>(i)];
        if (vi.is_zero())
            continue;
        r += vi * f.derivative(i);
    }
    return r;
}

PolyVectorField vf_bracket(const PolyVectorField &v, const PolyVectorField &w)
{
    if (v.num_vars() != w.num_vars())
        throw dimension_error("vf_bracket: mismatched num_vars");
    PolyVectorField r(v.num_vars());
    for (std::size_t i = 0; i < r.components().size(); ++i)
        r[i] = vf_apply(v, w[i]) - vf_apply(w, v[i]);
    return r;
}

} // namespace filippov
