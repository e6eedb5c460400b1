// One line per acceptance criterion; exit status 0 only when all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "filippov/algebroid.hpp"
#include "filippov/cohomology.hpp"
#include "filippov/deformation.hpp"
#include "filippov/random.hpp"
#include "filippov/standard_algebras.hpp"

#include "oracles.hpp"

using namespace filippov;

namespace
{

struct Outcome
{
    bool pass = true;
    std::string detail;
};

int sign_of(int k)
{
    return k % 2 ? -1 : 1;
}

Cochain random_cochain(Rng &rng, int n, int m, int p, int density = 40)
{
    Cochain c(n, m, p);
    for (auto &v : c.values())
        if (rng.chance(density))
            v = rng.small_rational(2, 2);
    return c;
}

// Brackets that satisfy FI mixed in so that both verdicts occur.
NLieAlgebra fi_friendly(Rng &rng, int t)
{
    switch (t % 4) {
    case 0:
        return change_basis(epsilon_algebra(), rng.invertible_matrix(4));
    case 1: {
        // a single nonzero key
        NLieAlgebra a(3, 4);
        std::vector<int> key{0, 1, 2};
        Vector v = zero_vector(4);
        v[static_cast<std::size_t>(rng.uniform(0, 3))] = rng.small_rational();
        a.set_bracket(key, v);
        return a;
    }
    case 2:
        return zero_algebra(3, rng.uniform(3, 4));
    default:
        return random_bracket(rng, 3, 3, 100);
    }
}

Outcome criterion1()
{
    Rng rng(101);
    std::size_t holds = 0, fails = 0, total = 0;
    auto test = [&](const NLieAlgebra &a) {
        bool fi = check_fundamental_identity(a).holds;
        bool mc = maurer_cartan_defect(from_bracket(a)).is_zero();
        bool orc = oracle::fundamental_identity(a);
        ++total;
        (fi ? holds : fails)++;
        return fi == mc && fi == orc;
    };
    bool ok = test(epsilon_algebra()) && test(fi_violating_example());
    for (int t = 0; t < 240; ++t) {
        NLieAlgebra a = t % 3 == 0 ? fi_friendly(rng, t / 3) : random_bracket(rng, 3, t % 4 == 1 ? 3 : 4, rng.uniform(10, 60));
        ok = test(a) && ok;
    }
    return {ok && holds > 0 && fails > 0, std::to_string(total) + " brackets, " + std::to_string(holds) + " satisfy FI"};
}

Outcome criterion2()
{
    std::size_t checked = 0;
    bool ok = true;
    for (const auto &a : {epsilon_algebra(), sl2()}) {
        CoboundaryOperator d(a);
        for (int p = -1; p <= 2; ++p)
            for (const auto &psi : der_basis(a.dim(), a.arity(), p)) {
                ok = ok && d(d(psi)).is_zero();
                ++checked;
            }
    }
    return {ok, std::to_string(checked) + " basis cochains in C^0..C^3"};
}

Outcome criterion3()
{
    Rng rng(303);
    bool ok = true;
    int triples = 60;
    for (int t = 0; t < triples; ++t) {
        int p = rng.uniform(0, 2), q = rng.uniform(0, 2), r = rng.uniform(0, 2);
        auto a = random_cochain(rng, 3, 3, p), b = random_cochain(rng, 3, 3, q), c = random_cochain(rng, 3, 3, r);
        ok = ok && (gla_bracket(a, b) + gla_bracket(b, a) * Rational(sign_of(p * q))).is_zero();
        auto j = gla_bracket(gla_bracket(a, b), c) * Rational(sign_of(p * r)) +
                 gla_bracket(gla_bracket(b, c), a) * Rational(sign_of(q * p)) +
                 gla_bracket(gla_bracket(c, a), b) * Rational(sign_of(r * q));
        ok = ok && j.is_zero();
    }
    return {ok, std::to_string(triples) + " triples, degrees 0..2"};
}

Outcome criterion4()
{
    auto eps = epsilon_algebra();
    CoboundaryOperator d(eps);
    bool ok = true;
    std::size_t n = 0;
    for (int p = 0; p <= 1; ++p)
        for (const auto &psi : der_basis(4, 3, p)) {
            ok = ok && coboundary_explicit(eps, psi) == d(psi);
            ++n;
        }
    return {ok, std::to_string(n) + " basis cochains of C^1, C^2"};
}

Outcome criterion5()
{
    Rng rng(505);
    bool ok = true;
    std::vector<NLieAlgebra> algs{sl2()};
    for (int t = 0; t < 5; ++t)
        algs.push_back(random_lie_algebra_3d(rng));
    for (const auto &a : algs) {
        ok = ok && check_fundamental_identity(a).holds;
        for (const auto &r : reduce_lie(a))
            ok = ok && r.agree;
    }
    auto s = sl2();
    std::size_t h1 = oracle::derivation_dim(s) - oracle::inner_rank(s);
    auto d1 = oracle::ce_matrix(s, 1), d2 = oracle::ce_matrix(s, 2);
    std::size_t h2 = oracle::cols_of(d2, 0) - oracle::rank(d2) - oracle::rank(d1);
    ok = ok && h1 == 0 && h2 == 0 && cohomology(s, 1).betti == h1 && cohomology(s, 2).betti == h2;
    return {ok, "sl2 + 5 random Lie algebras; H^1 = H^2 = 0 for sl2"};
}

Outcome criterion6()
{
    bool ok = true;
    for (auto [m, n] : {std::pair{4, 3}, std::pair{3, 2}, std::pair{3, 3}, std::pair{5, 3}}) {
        std::size_t expect = binomial(m, n) * static_cast<std::size_t>(m);
        auto r = cohomology(zero_algebra(n, m), 2);
        ok = ok && cochain_dim(m, n, 1) == expect && r.dim_cochains == expect && r.betti == expect;
    }
    ok = ok && cochain_dim(4, 3, 1) == 16 && cohomology(zero_algebra(3, 4), 2).betti == 16;
    return {ok, "dim C^2 = C(m,n) m and H^2 = C^2 on zero brackets"};
}

Outcome criterion7()
{
    Rng rng(707);
    std::vector<std::pair<NLieAlgebra, RationalMatrix>> family;
    auto eps = epsilon_algebra();
    for (const auto &a : {eps, sl2(), so3(), r_ltimes_r2()}) {
        auto m = static_cast<std::size_t>(a.dim());
        family.emplace_back(a, RationalMatrix(m, m));
        for (int l : {1, 2, -1})
            family.emplace_back(a, RationalMatrix::identity(m) * Rational(l));
        family.emplace_back(a, RationalMatrix::identity(m) * rng.small_rational());
        for (int t = 0; t < 4; ++t) {
            RationalMatrix d(m, m);
            for (std::size_t i = 0; i < m; ++i)
                d(i, i) = rng.uniform(0, 2);
            family.emplace_back(a, d);
            family.emplace_back(a, rng.small_matrix(m, m, 1, 1));
        }
    }
    std::size_t passing = 0;
    bool ok = true;
    for (const auto &[a, n] : family) {
        bool holds = check_nijenhuis(a, n).holds;
        ok = ok && holds == oracle::nijenhuis_holds(a, n);
        if (!holds)
            continue;
        ++passing;
        auto p = deformation_from_nijenhuis(a, n);
        ok = ok && p.order() == a.arity() - 1;
        ok = ok && check_deformation(p, DeformationMode::full).holds;
        ok = ok && !trivial_identity_defect(p, n) && oracle::trivial_identity(a, n);
        ok = ok && p.term(1) == CoboundaryOperator(a)(Cochain::from_linear_map(a.arity(), n));
    }
    return {ok && passing >= 8,
            std::to_string(passing) + " of " + std::to_string(family.size()) + " operators are Nijenhuis"};
}

Outcome criterion8()
{
    Rng rng(808);
    auto z = zero_algebra(3, 4);
    std::size_t extended = 0, paths = 0;
    bool ok = true;
    for (int t = 0; t < 120; ++t) {
        Cochain phi1 = t % 2 ? from_bracket(fi_friendly(rng, t / 2)) : random_cochain(rng, 3, 4, 1, rng.uniform(5, 40));
        if (phi1.dim() != 4)
            phi1 = from_bracket(change_basis(epsilon_algebra(), rng.invertible_matrix(4)));
        DeformationPath p{z, {phi1}};
        bool mc = maurer_cartan_defect(phi1).is_zero();
        auto e = extend(p);
        ok = ok && e.next.has_value() == mc && e.certificate.has_value() == !mc;
        extended += e.next.has_value();
        ++paths;
    }
    // obstructions over the epsilon bracket are cocycles on valid paths
    auto eps = epsilon_algebra();
    CoboundaryOperator d(eps);
    std::size_t valid = 0;
    for (int t = 0; t < 30; ++t) {
        DeformationPath p{eps, {d(Cochain::from_linear_map(3, rng.small_matrix(4, 4)))}};
        if (t % 3 == 0) {
            auto e = extend(p);
            if (e.next)
                p.terms.push_back(*e.next);
        }
        if (!check_deformation(p).holds)
            continue;
        ++valid;
        auto ob = obstruction(p);
        ok = ok && ob.cocycle && d(ob.theta).is_zero();
    }
    return {ok && extended > 0 && extended < paths && valid >= 20,
            std::to_string(paths) + " paths, " + std::to_string(extended) + " extend; " + std::to_string(valid) +
                " obstruction cocycles"};
}

Outcome criterion9()
{
    Rng rng(909);
    auto eps = epsilon_algebra();
    auto ad = adjoint_representation(eps);
    bool ok = true;
    std::size_t holds = 0, total = 0;
    auto test = [&](const RationalMatrix &t) {
        auto lift = o_operator_lift(eps, ad, t);
        bool o = check_o_operator(eps, ad, t).holds;
        bool n = check_nijenhuis(semidirect_product(eps, ad), lift.n_tilde).holds;
        ok = ok && lift.agree && o == n && lift.o_operator.holds == o && lift.nijenhuis.holds == n;
        holds += o;
        ++total;
    };
    test(RationalMatrix(4, 4));
    for (int t = 0; t < 60; ++t) {
        RationalMatrix m(4, 4);
        switch (t % 3) {
        case 0:
            m = rng.small_matrix(4, 4, 1, 1);
            break;
        case 1: {
            std::size_t i = static_cast<std::size_t>(rng.uniform(0, 3)), j = static_cast<std::size_t>(rng.uniform(0, 3));
            m(i, j) = rng.small_rational();
            break;
        }
        default:
            m = RationalMatrix::identity(4) * rng.small_rational();
        }
        test(m);
    }
    return {ok && holds > 0, std::to_string(total) + " operators T, " + std::to_string(holds) + " are O-operators"};
}

Outcome criterion10()
{
    bool ok = true;
    auto eps = epsilon_algebra();
    std::vector<PolyFilippovAlgebroid> models;
    for (const auto &f : {MultiPoly::constant(4, 1), MultiPoly::variable(4, 0),
                          MultiPoly::variable(4, 0) * MultiPoly::variable(4, 0)})
        models.push_back(example_tangent_fc(eps, f));
    models.push_back(example_tangent_topform(3, 2));
    ok = ok && models.back().arity() == 3;
    for (const auto &a : models) {
        ok = ok && check_algebroid_axioms(a).holds;
        ok = ok && check_symbol_leibniz(a, a.structure(), a.structure()).holds;
    }
    return {ok, "f in {1, x1, x1^2} and the top-form model"};
}

} // namespace

int main()
{
    struct Row
    {
        int id;
        const char *name;
        double budget_s;
        std::function<Outcome()> run;
    };
    std::vector<Row> rows{
        {1, "FI iff Maurer-Cartan", 60, criterion1},
        {2, "delta o delta = 0", 300, criterion2},
        {3, "graded Lie axioms", 0, criterion3},
        {4, "explicit coboundary agrees", 0, criterion4},
        {5, "n = 2 reduction", 0, criterion5},
        {6, "counting check", 0, criterion6},
        {7, "Nijenhuis pipeline", 0, criterion7},
        {8, "obstruction calculus", 0, criterion8},
        {9, "O-operator vs lifted Nijenhuis", 0, criterion9},
        {10, "algebroid layer", 120, criterion10},
    };
    int failures = 0;
    for (const auto &row : rows) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = row.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (row.budget_s > 0 && secs > row.budget_s) {
            o.pass = false;
            o.detail += " (over the time budget)";
        }
        failures += !o.pass;
        std::printf("criterion %2d: %s  %s: %s [%.2fs]\n", row.id, o.pass ? "PASS" : "FAIL", row.name,
                    o.detail.c_str(), secs);
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
