#include "filippov/cohomology.hpp"

#include "filippov/errors.hpp"
#include "filippov/parallel.hpp"

namespace filippov
{

RationalMatrix differential_matrix(const CoboundaryOperator &d, int k)
{
    if (k < 0)
        throw dimension_error("differential_matrix: degree must be at least 0");
    const int m = d.dim();
    const int n = d.arity();
    auto dom = der_basis(m, n, k - 1);
    std::vector<Vector> cols(dom.size());
    parallel_for(dom.size(), [&](std::size_t j) { cols[j] = d(dom[j]).values(); });
    return RationalMatrix::from_columns(der_dimension(m, n, k), cols);
}

RationalMatrix differential_matrix(const NLieAlgebra &a, int k)
{
    return differential_matrix(CoboundaryOperator(a), k);
}

CohomologyReport cohomology(const NLieAlgebra &a, int k, bool allow_high_degree)
{
    if (k < 0)
        throw dimension_error("cohomology: degree must be at least 0");
    if (k > default_degree_cap && !allow_high_degree)
        throw precondition_error("cohomology: degree " + std::to_string(k) + " exceeds the cap of " +
                                 std::to_string(default_degree_cap));
    CoboundaryOperator d(a);
    const int m = a.dim();
    const int n = a.arity();
    CohomologyReport rep;
    rep.degree = k;
    rep.dim_cochains = der_dimension(m, n, k - 1);

    auto out = rank_nullspace(differential_matrix(d, k));
    rep.rank_d_out = out.rank;
    SpanBuilder span(rep.dim_cochains);
    if (k >= 1) {
        RationalMatrix din = differential_matrix(d, k - 1);
        rep.rank_d_in = rank(din);
        for (std::size_t j = 0; j < din.cols(); ++j)
            span.add(din.column(j));
    }
    rep.betti = rep.dim_cochains - rep.rank_d_out - rep.rank_d_in;
    for (const auto &v : out.nullspace) {
        if (!span.add(v))
            continue;
        Cochain c(n, m, k - 1);
        c.values() = v;
        rep.representatives.push_back(std::move(c));
    }
    return rep;
}

std::vector<LinearMap> outer_derivations(const NLieAlgebra &a)
{
    std::vector<LinearMap> out;
    for (const auto &c : cohomology(a, 1).representatives)
        out.push_back(c.as_linear_map());
    return out;
}

namespace
{

// d applied to c in Hom(Lambda^k L, L), c indexed rank(subset)*m + component.
Vector ce_apply(const NLieAlgebra &a, int k, const Vector &c)
{
    const int m = a.dim();
    const auto mm = static_cast<std::size_t>(m);
    const auto &dom = SubsetIndex::get(m, k);
    const auto &cod = SubsetIndex::get(m, k + 1);
    auto c_at = [&](std::span<const int> args) {
        Vector v(mm);
        auto [mask, sign] = sorted_mask(args);
        if (sign == 0)
            return v;
        std::size_t base = dom.rank(mask) * mm;
        for (std::size_t t = 0; t < mm; ++t)
            v[t] = sign * c[base + t];
        return v;
    };
    Vector out(cod.size() * mm);
    for (std::size_t r = 0; r < cod.size(); ++r) {
        auto t = cod.elements(r);
        Vector acc(mm);
        for (int i = 0; i <= k; ++i) {
            std::vector<int> rest;
            for (int l = 0; l <= k; ++l)
                if (l != i)
                    rest.push_back(t[static_cast<std::size_t>(l)]);
            Vector ci = c_at(rest);
            Vector term(mm);
            for (int l = 0; l < m; ++l)
                if (sgn(ci[static_cast<std::size_t>(l)]) != 0)
                    a.add_basis_bracket(std::vector{t[static_cast<std::size_t>(i)], l}, ci[static_cast<std::size_t>(l)],
                                        term);
            for (std::size_t x = 0; x < mm; ++x)
                acc[x] += (i % 2 ? -1 : 1) * term[x];
            for (int j = i + 1; j <= k; ++j) {
                Vector br = a.basis_bracket(std::vector{t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]});
                std::vector<int> others;
                for (int l = 0; l <= k; ++l)
                    if (l != i && l != j)
                        others.push_back(t[static_cast<std::size_t>(l)]);
                for (int l = 0; l < m; ++l) {
                    if (sgn(br[static_cast<std::size_t>(l)]) == 0)
                        continue;
                    std::vector<int> args{l};
                    args.insert(args.end(), others.begin(), others.end());
                    Vector v = c_at(args);
                    Rational f = br[static_cast<std::size_t>(l)] * ((i + j) % 2 ? -1 : 1);
                    for (std::size_t x = 0; x < mm; ++x)
                        acc[x] += f * v[x];
                }
            }
        }
        std::copy(acc.begin(), acc.end(), out.begin() + static_cast<std::ptrdiff_t>(r * mm));
    }
    return out;
}

// Hom(Lambda^3 L, L) -> Hom(L (x) Lambda^2 L, L), f -> ((x, y^z) -> f(x,y,z)).
RationalMatrix embed_degree3(int m)
{
    const auto mm = static_cast<std::size_t>(m);
    const auto &pairs = SubsetIndex::get(m, 2);
    const auto &triples = SubsetIndex::get(m, 3);
    RationalMatrix e(der_dimension(m, 2, 2), triples.size() * mm);
    for (int b = 0; b < m; ++b)
        for (std::size_t w = 0; w < pairs.size(); ++w) {
            auto el = pairs.elements(w);
            std::vector<int> args{b, el[0], el[1]};
            auto [mask, sign] = sorted_mask(args);
            if (sign == 0)
                continue;
            std::size_t row = (static_cast<std::size_t>(b) * pairs.size() + w) * mm;
            std::size_t col = triples.rank(mask) * mm;
            for (std::size_t t = 0; t < mm; ++t)
                e(row + t, col + t) = sign;
        }
    return e;
}

} // namespace

RationalMatrix ce_differential_matrix(const NLieAlgebra &a, int k)
{
    if (a.arity() != 2)
        throw dimension_error("Chevalley-Eilenberg differential needs arity 2");
    if (k < 0 || k >= a.dim())
        throw dimension_error("Chevalley-Eilenberg degree out of range");
    const auto mm = static_cast<std::size_t>(a.dim());
    const std::size_t cols = SubsetIndex::get(a.dim(), k).size() * mm;
    std::vector<Vector> out(cols);
    parallel_for(cols, [&](std::size_t j) { out[j] = ce_apply(a, k, unit_vector(cols, j)); });
    return RationalMatrix::from_columns(SubsetIndex::get(a.dim(), k + 1).size() * mm, out);
}

std::vector<LieReductionReport> reduce_lie(const NLieAlgebra &a, int max_degree)
{
    if (a.arity() != 2)
        throw dimension_error("reduce-lie needs a bracket of arity 2");
    if (max_degree < 0 || max_degree > 2)
        throw dimension_error("reduce-lie compares degrees 0..2 only");
    CoboundaryOperator d(a);
    std::vector<LieReductionReport> out;
    for (int k = 0; k <= max_degree; ++k) {
        LieReductionReport r;
        r.degree = k;
        RationalMatrix g = differential_matrix(d, k);
        RationalMatrix ce;
        if (k + 1 > a.dim()) {
            // Lambda^{k+1} L = 0; the comparison is against the zero map.
            ce = RationalMatrix(g.rows(), g.cols());
        } else {
            ce = ce_differential_matrix(a, k);
            if (k == 0)
                ce *= Rational(-1);
            if (k == 2)
                ce = embed_degree3(a.dim()) * ce;
        }
        r.rows = g.rows();
        r.cols = g.cols();
        r.generic_zero = g.is_zero();
        r.ce_zero = ce.is_zero();
        r.agree = g == ce;
        out.push_back(r);
    }
    return out;
}

} // namespace filippov
