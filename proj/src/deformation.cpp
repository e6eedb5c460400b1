#include "filippov/deformation.hpp"

#include <functional>

#include "filippov/cohomology.hpp"
#include "filippov/errors.hpp"
#include "filippov/parallel.hpp"
#include "filippov/random.hpp"

namespace filippov
{

namespace
{

void check_path_shape(const DeformationPath &path)
{
    for (const auto &t : path.terms)
        if (t.degree() != 1 || t.arity() != path.base.arity() || t.dim() != path.base.dim())
            throw dimension_error("deformation terms must be degree 1 cochains over the base");
}

void require_fi(const NLieAlgebra &a, const char *what)
{
    if (!check_fundamental_identity(a).holds)
        throw precondition_error(std::string(what) + ": the base bracket violates the fundamental identity");
}

void require_square(const LinearMap &n, int m, const char *what)
{
    if (n.rows() != static_cast<std::size_t>(m) || n.cols() != static_cast<std::size_t>(m))
        throw dimension_error(std::string(what) + ": operator must be an m x m matrix");
}

// Calls f(parts) for every split of `total` into `slots` non-negative parts
// with parts[i] <= bound.
void compositions(int total, int slots, int bound, const std::function<void(const std::vector<int> &)> &f)
{
    std::vector<int> parts(static_cast<std::size_t>(slots), 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == slots - 1) {
            if (left <= bound) {
                parts[static_cast<std::size_t>(i)] = left;
                f(parts);
            }
            return;
        }
        for (int v = 0; v <= std::min(left, bound); ++v) {
            parts[static_cast<std::size_t>(i)] = v;
            rec(i + 1, left - v);
        }
    };
    if (slots == 0) {
        if (total == 0)
            f(parts);
        return;
    }
    rec(0, total);
}

std::vector<LinearMap> padded_maps(const EquivalenceMap &phi, int order, std::size_t m)
{
    std::vector<LinearMap> out;
    out.push_back(LinearMap::identity(m));
    for (int i = 1; i <= order; ++i) {
        if (i <= phi.order()) {
            require_square(phi.maps[static_cast<std::size_t>(i - 1)], static_cast<int>(m), "equivalence map");
            out.push_back(phi.maps[static_cast<std::size_t>(i - 1)]);
        } else {
            out.emplace_back(m, m);
        }
    }
    return out;
}

Cochain sum_of_brackets(const std::vector<Cochain> &phi, int r, int lo)
{
    Cochain acc(phi[0].arity(), phi[0].dim(), 2);
    const int k = static_cast<int>(phi.size()) - 1;
    for (int i = lo; i <= r - lo; ++i) {
        int j = r - i;
        if (i > k || j > k || j < lo)
            continue;
        acc += gla_bracket(phi[static_cast<std::size_t>(i)], phi[static_cast<std::size_t>(j)]);
    }
    return acc;
}

} // namespace

Cochain DeformationPath::term(int i) const
{
    if (i == 0)
        return from_bracket(base);
    if (i < 0 || i > order())
        throw dimension_error("deformation term index out of range");
    return terms[static_cast<std::size_t>(i - 1)];
}

DeformationCheck check_deformation(const DeformationPath &path, DeformationMode mode)
{
    check_path_shape(path);
    require_fi(path.base, "check_deformation");
    const int k = path.order();
    const int top = mode == DeformationMode::full ? 2 * k : k;
    std::vector<Cochain> phi;
    for (int i = 0; i <= k; ++i)
        phi.push_back(path.term(i));
    std::vector<std::optional<Cochain>> defects(static_cast<std::size_t>(top + 1));
    parallel_for(static_cast<std::size_t>(top), [&](std::size_t idx) {
        int r = static_cast<int>(idx) + 1;
        Cochain s = sum_of_brackets(phi, r, 0);
        if (!s.is_zero())
            defects[static_cast<std::size_t>(r)] = std::move(s);
    });
    DeformationCheck out;
    for (int r = 1; r <= top; ++r) {
        if (!defects[static_cast<std::size_t>(r)])
            continue;
        out.holds = false;
        out.first_failing_power = r;
        out.condition = r == 1 ? 1 : (r <= k ? 2 : 3);
        out.defect = std::move(defects[static_cast<std::size_t>(r)]);
        break;
    }
    return out;
}

InfinitesimalClass infinitesimal_class(const DeformationPath &path)
{
    if (!check_deformation(path).holds)
        throw precondition_error("infinitesimal_class: the path fails the deformation equations");
    InfinitesimalClass out;
    for (int i = 1; i <= path.order(); ++i)
        if (!path.terms[static_cast<std::size_t>(i - 1)].is_zero()) {
            out.power = i;
            break;
        }
    auto h2 = cohomology(path.base, 2);
    out.coordinates.assign(h2.betti, Rational(0));
    if (out.power == 0)
        return out;
    const Cochain &phi = path.terms[static_cast<std::size_t>(out.power - 1)];
    CoboundaryOperator d(path.base);
    out.cocycle = d(phi).is_zero();
    // phi = sum c_i rep_i + (coboundary)
    std::vector<Vector> cols;
    for (const auto &rep : h2.representatives)
        cols.push_back(rep.values());
    RationalMatrix din = differential_matrix(d, 1);
    for (std::size_t j = 0; j < din.cols(); ++j)
        cols.push_back(din.column(j));
    auto x = solve(RationalMatrix::from_columns(phi.size(), cols), phi.values());
    if (!x)
        throw precondition_error("infinitesimal_class: term is not a cocycle");
    for (std::size_t i = 0; i < h2.betti; ++i)
        out.coordinates[i] = (*x)[i];
    out.exact = is_zero(out.coordinates);
    return out;
}

std::vector<LinearMap> inverse_series(const EquivalenceMap &phi, int order)
{
    if (phi.maps.empty() && order >= 0)
        return std::vector<LinearMap>(1, LinearMap());
    const std::size_t m = phi.maps.front().rows();
    auto f = padded_maps(phi, order, m);
    std::vector<LinearMap> psi{LinearMap::identity(m)};
    for (int j = 1; j <= order; ++j) {
        LinearMap acc(m, m);
        for (int i = 1; i <= j; ++i)
            acc -= f[static_cast<std::size_t>(i)] * psi[static_cast<std::size_t>(j - i)];
        psi.push_back(std::move(acc));
    }
    return psi;
}

EquivalenceMap compose(const EquivalenceMap &a, const EquivalenceMap &b, int order)
{
    std::size_t m = 0;
    if (!a.maps.empty())
        m = a.maps.front().rows();
    else if (!b.maps.empty())
        m = b.maps.front().rows();
    else
        return EquivalenceMap{};
    auto fa = padded_maps(a, order, m);
    auto fb = padded_maps(b, order, m);
    EquivalenceMap out;
    for (int r = 1; r <= order; ++r) {
        LinearMap acc(m, m);
        for (int i = 0; i <= r; ++i)
            acc += fa[static_cast<std::size_t>(i)] * fb[static_cast<std::size_t>(r - i)];
        out.maps.push_back(std::move(acc));
    }
    return out;
}

DeformationPath conjugate(const DeformationPath &path, const EquivalenceMap &phi)
{
    check_path_shape(path);
    const int k = path.order();
    const int n = path.base.arity();
    const int m = path.base.dim();
    const auto mm = static_cast<std::size_t>(m);
    auto f = padded_maps(phi, k, mm);
    std::vector<LinearMap> psi{LinearMap::identity(mm)};
    for (int j = 1; j <= k; ++j) {
        LinearMap acc(mm, mm);
        for (int i = 1; i <= j; ++i)
            acc -= f[static_cast<std::size_t>(i)] * psi[static_cast<std::size_t>(j - i)];
        psi.push_back(std::move(acc));
    }
    std::vector<NLieAlgebra> alg;
    for (int i = 0; i <= k; ++i)
        alg.push_back(i == 0 ? path.base : to_algebra(path.terms[static_cast<std::size_t>(i - 1)]));

    std::vector<NLieAlgebra> out(static_cast<std::size_t>(k + 1), NLieAlgebra(n, m));
    const auto &keys = SubsetIndex::get(m, n);
    parallel_for(keys.size(), [&](std::size_t key) {
        auto el = keys.elements(key);
        // args[l][j] = Phi_j e_{el[l]}
        std::vector<std::vector<Vector>> args(static_cast<std::size_t>(n));
        for (int l = 0; l < n; ++l)
            for (int j = 0; j <= k; ++j)
                args[static_cast<std::size_t>(l)].push_back(
                    f[static_cast<std::size_t>(j)].column(static_cast<std::size_t>(el[static_cast<std::size_t>(l)])));
        std::vector<Vector> c(static_cast<std::size_t>(k + 1), Vector(mm));
        for (int r = 0; r <= k; ++r)
            for (int i = 0; i <= r; ++i)
                compositions(r - i, n, k, [&](const std::vector<int> &parts) {
                    std::vector<Vector> a;
                    for (int l = 0; l < n; ++l)
                        a.push_back(args[static_cast<std::size_t>(l)][static_cast<std::size_t>(parts[static_cast<std::size_t>(l)])]);
                    Vector v = bracket_eval(alg[static_cast<std::size_t>(i)], a);
                    for (std::size_t x = 0; x < mm; ++x)
                        c[static_cast<std::size_t>(r)][x] += v[x];
                });
        for (int r = 0; r <= k; ++r) {
            Vector acc(mm);
            for (int a = 0; a <= r; ++a) {
                Vector v = psi[static_cast<std::size_t>(a)] * c[static_cast<std::size_t>(r - a)];
                for (std::size_t x = 0; x < mm; ++x)
                    acc[x] += v[x];
            }
            out[static_cast<std::size_t>(r)].structure(key) = std::move(acc);
        }
    });
    DeformationPath res;
    res.base = out[0];
    for (int r = 1; r <= k; ++r)
        res.terms.push_back(from_bracket(out[static_cast<std::size_t>(r)]));
    return res;
}

EquivalenceCheck check_equivalence(const DeformationPath &path1, const DeformationPath &path2,
                                   const EquivalenceMap &phi)
{
    if (path1.order() != path2.order())
        throw dimension_error("check_equivalence: deformation orders differ");
    if (path1.base.arity() != path2.base.arity() || path1.base.dim() != path2.base.dim())
        throw dimension_error("check_equivalence: paths over different spaces");
    auto conj = conjugate(path1, phi);
    EquivalenceCheck out;
    for (int r = 0; r <= path1.order(); ++r)
        if (!(conj.term(r) == path2.term(r))) {
            out.holds = false;
            out.failing_power = r;
            break;
        }
    return out;
}

namespace
{

// [x]^j_N on one basis tuple for j = 0..top.
std::vector<Vector> nijenhuis_values(const NLieAlgebra &a, const LinearMap &nmap, std::span<const int> el, int top)
{
    const int n = a.arity();
    const auto mm = static_cast<std::size_t>(a.dim());
    std::vector<Vector> plain, twisted;
    for (int i : el) {
        plain.push_back(unit_vector(mm, static_cast<std::size_t>(i)));
        twisted.push_back(nmap.column(static_cast<std::size_t>(i)));
    }
    std::vector<Vector> c{bracket_eval(a, plain)};
    for (int j = 1; j <= top; ++j) {
        Vector acc(mm);
        for (const auto &subset : increasing_tuples(n, j)) {
            auto args = plain;
            for (int pos : subset)
                args[static_cast<std::size_t>(pos)] = twisted[static_cast<std::size_t>(pos)];
            Vector v = bracket_eval(a, args);
            for (std::size_t x = 0; x < mm; ++x)
                acc[x] += v[x];
        }
        Vector prev = nmap * c.back();
        for (std::size_t x = 0; x < mm; ++x)
            acc[x] -= prev[x];
        c.push_back(std::move(acc));
    }
    return c;
}

} // namespace

Cochain nijenhuis_bracket(const NLieAlgebra &a, const LinearMap &nmap, int k)
{
    require_square(nmap, a.dim(), "nijenhuis_bracket");
    if (k < 1 || k > a.arity() - 1)
        throw dimension_error("nijenhuis_bracket: k out of range");
    NLieAlgebra out(a.arity(), a.dim());
    const auto &keys = SubsetIndex::get(a.dim(), a.arity());
    parallel_for(keys.size(), [&](std::size_t key) {
        out.structure(key) = nijenhuis_values(a, nmap, keys.elements(key), k).back();
    });
    return from_bracket(out);
}

Verdict check_nijenhuis(const NLieAlgebra &a, const LinearMap &nmap)
{
    require_square(nmap, a.dim(), "check_nijenhuis");
    require_fi(a, "check_nijenhuis");
    const int n = a.arity();
    const auto &keys = SubsetIndex::get(a.dim(), n);
    auto sides = [&](std::size_t key) {
        auto el = keys.elements(key);
        std::vector<Vector> args;
        for (int i : el)
            args.push_back(nmap.column(static_cast<std::size_t>(i)));
        Vector lhs = bracket_eval(a, args);
        Vector rhs = nmap * nijenhuis_values(a, nmap, el, n - 1).back();
        return std::pair{std::move(lhs), std::move(rhs)};
    };
    auto hit = parallel_find_first(keys.size(), [&](std::size_t key) {
        auto [l, r] = sides(key);
        return l != r;
    });
    if (!hit)
        return {};
    auto [l, r] = sides(*hit);
    auto el = keys.elements(*hit);
    return {false, Witness{"Nijenhuis condition", {std::vector<int>(el.begin(), el.end())}, std::move(l), std::move(r)}};
}

DeformationPath deformation_from_nijenhuis(const NLieAlgebra &a, const LinearMap &nmap)
{
    if (!check_nijenhuis(a, nmap).holds)
        throw precondition_error("deformation_from_nijenhuis: operator is not Nijenhuis");
    DeformationPath path{a, {}};
    for (int i = 1; i < a.arity(); ++i)
        path.terms.push_back(nijenhuis_bracket(a, nmap, i));
    return path;
}

std::optional<int> trivial_identity_defect(const DeformationPath &path, const LinearMap &nmap)
{
    check_path_shape(path);
    const NLieAlgebra &a = path.base;
    require_square(nmap, a.dim(), "trivial_identity_defect");
    const int n = a.arity();
    const int k = path.order();
    const auto mm = static_cast<std::size_t>(a.dim());
    const int top = std::max(k + 1, n);
    std::vector<NLieAlgebra> alg{a};
    for (const auto &t : path.terms)
        alg.push_back(to_algebra(t));
    const auto &keys = SubsetIndex::get(a.dim(), n);
    std::vector<int> first(keys.size(), -1);
    parallel_for(keys.size(), [&](std::size_t key) {
        auto el = keys.elements(key);
        std::vector<Vector> plain, twisted;
        for (int i : el) {
            plain.push_back(unit_vector(mm, static_cast<std::size_t>(i)));
            twisted.push_back(nmap.column(static_cast<std::size_t>(i)));
        }
        for (int r = 0; r <= top; ++r) {
            // (Id + tN) phi_t: t^r coefficient phi_r + N phi_{r-1}
            Vector lhs(mm);
            if (r <= k)
                lhs = bracket_eval(alg[static_cast<std::size_t>(r)], plain);
            if (r >= 1 && r - 1 <= k) {
                Vector v = nmap * bracket_eval(alg[static_cast<std::size_t>(r - 1)], plain);
                for (std::size_t x = 0; x < mm; ++x)
                    lhs[x] += v[x];
            }
            // [(Id + tN) x_1, ..]: N applied in exactly r slots
            Vector rhs(mm);
            if (r <= n)
                for (const auto &subset : increasing_tuples(n, r)) {
                    auto args = plain;
                    for (int pos : subset)
                        args[static_cast<std::size_t>(pos)] = twisted[static_cast<std::size_t>(pos)];
                    Vector v = bracket_eval(a, args);
                    for (std::size_t x = 0; x < mm; ++x)
                        rhs[x] += v[x];
                }
            if (lhs != rhs) {
                first[key] = r;
                return;
            }
        }
    });
    std::optional<int> out;
    for (int r : first)
        if (r >= 0 && (!out || r < *out))
            out = r;
    return out;
}

OOperatorLift o_operator_lift(const NLieAlgebra &a, const Representation &rho, const LinearMap &t)
{
    const auto m = static_cast<std::size_t>(a.dim());
    const auto r = static_cast<std::size_t>(rho.module_dim());
    if (t.rows() != m || t.cols() != r)
        throw dimension_error("O-operator must be an m x r matrix");
    OOperatorLift out;
    NLieAlgebra s = semidirect_product(a, rho);
    out.n_tilde = LinearMap(m + r, m + r);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < r; ++j)
            out.n_tilde(i, m + j) = t(i, j);
    out.o_operator = check_o_operator(a, rho, t);
    out.nijenhuis = check_nijenhuis(s, out.n_tilde);
    out.agree = out.o_operator.holds == out.nijenhuis.holds;
    return out;
}

Obstruction obstruction(const DeformationPath &path)
{
    if (!check_deformation(path).holds)
        throw precondition_error("obstruction: the path fails the deformation equations");
    const int k = path.order();
    std::vector<Cochain> phi;
    for (int i = 0; i <= k; ++i)
        phi.push_back(path.term(i));
    Obstruction out{sum_of_brackets(phi, k + 1, 1), true};
    out.theta *= Rational(-1, 2);
    out.cocycle = CoboundaryOperator(path.base)(out.theta).is_zero();
    return out;
}

Extension extend(const DeformationPath &path)
{
    Obstruction ob = obstruction(path);
    Extension out{ob.theta, std::nullopt, std::nullopt};
    RationalMatrix d = differential_matrix(path.base, 2);
    if (auto x = solve(d, ob.theta.values())) {
        Cochain next(path.base.arity(), path.base.dim(), 1);
        next.values() = std::move(*x);
        out.next = std::move(next);
        return out;
    }
    for (auto &y : rank_nullspace(d.transpose()).nullspace) {
        Rational dot = 0;
        for (std::size_t i = 0; i < y.size(); ++i)
            dot += y[i] * ob.theta.values()[i];
        if (sgn(dot) != 0) {
            out.certificate = std::move(y);
            break;
        }
    }
    return out;
}

RigidityReport rigidity_probe(const NLieAlgebra &a, int max_order, int trials, std::uint64_t seed)
{
    require_fi(a, "rigidity_probe");
    RigidityReport rep;
    rep.note = "sampler, not a decision procedure: rigidity quantifies over all finite-order deformations";
    rep.h2 = cohomology(a, 2).betti;
    if (max_order <= 0 || trials <= 0)
        return rep;

    const int n = a.arity();
    const int m = a.dim();
    CoboundaryOperator d(a);
    RationalMatrix d1 = differential_matrix(d, 1);
    auto cocycles = rank_nullspace(differential_matrix(d, 2)).nullspace;
    Rng rng(seed);
    auto random_cocycle = [&] {
        Cochain c(n, m, 1);
        for (const auto &z : cocycles) {
            int coef = rng.uniform(-2, 2);
            if (coef == 0)
                continue;
            for (std::size_t i = 0; i < z.size(); ++i)
                c.values()[i] += coef * z[i];
        }
        return c;
    };

    for (int t = 0; t < trials; ++t) {
        RigidityTrial trial;
        trial.path.base = a;
        trial.path.terms.push_back(random_cocycle());
        while (trial.path.order() < max_order) {
            Extension e = extend(trial.path);
            if (!e.next)
                break;
            Cochain next = *e.next;
            if (rng.chance(50))
                next += random_cocycle();
            trial.path.terms.push_back(std::move(next));
        }
        trial.order = trial.path.order();

        const int k = trial.order;
        DeformationPath cur = trial.path;
        EquivalenceMap total;
        while (true) {
            int first = 0;
            for (int i = 1; i <= k; ++i)
                if (!cur.terms[static_cast<std::size_t>(i - 1)].is_zero()) {
                    first = i;
                    break;
                }
            if (first == 0) {
                trial.trivialized = true;
                break;
            }
            auto psi = solve(d1, cur.terms[static_cast<std::size_t>(first - 1)].values());
            if (!psi) {
                trial.blocked_power = first;
                break;
            }
            Cochain pc(n, m, 0);
            pc.values() = std::move(*psi);
            EquivalenceMap step;
            for (int i = 1; i < first; ++i)
                step.maps.emplace_back(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
            step.maps.push_back(pc.as_linear_map() * Rational(-1));
            cur = conjugate(cur, step);
            total = total.maps.empty() ? compose(step, EquivalenceMap{}, k) : compose(total, step, k);
        }
        if (trial.trivialized) {
            if (total.maps.empty())
                for (int i = 0; i < k; ++i)
                    total.maps.emplace_back(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
            DeformationPath constant{a, std::vector<Cochain>(static_cast<std::size_t>(k), Cochain(n, m, 1))};
            trial.verified = check_equivalence(trial.path, constant, total).holds;
            trial.equivalence = std::move(total);
        }
        rep.all_trivialized = rep.all_trivialized && trial.trivialized && trial.verified;
        rep.trials.push_back(std::move(trial));
    }
    return rep;
}

} // namespace filippov
