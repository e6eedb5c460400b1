#ifndef FILIPPOV_ALGEBROID_HPP
#define FILIPPOV_ALGEBROID_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "filippov/cochain.hpp"
#include "filippov/multipoly.hpp"
#include "filippov/nlie.hpp"

namespace filippov
{

// Section of the free module of rank r over Q[x_1..x_k].
struct PolySection
{
    std::vector<MultiPoly> coords;

    PolySection() = default;
    PolySection(int num_vars, int rank);
    explicit PolySection(std::vector<MultiPoly> c) : coords(std::move(c)) {}
    // f * e_g.
    static PolySection generator(int num_vars, int rank, int g, const MultiPoly &f);
    static PolySection generator(int num_vars, int rank, int g);

    int rank() const { return static_cast<int>(coords.size()); }
    bool is_zero() const;
    PolySection &operator+=(const PolySection &o);
    PolySection &operator-=(const PolySection &o);
    PolySection &operator*=(const MultiPoly &f);
    PolySection &operator*=(const Rational &c);
    friend PolySection operator+(PolySection a, const PolySection &b) { return a += b; }
    friend PolySection operator-(PolySection a, const PolySection &b) { return a -= b; }
    friend PolySection operator*(const MultiPoly &f, PolySection a) { return a *= f; }
    bool operator==(const PolySection &o) const = default;
};

// v applied to every coordinate.
PolySection vf_apply(const PolyVectorField &v, const PolySection &s);

// Bundle map A -> A, r x r matrix of functions.
struct PolyLinearBundleMap
{
    std::vector<std::vector<MultiPoly>> entries;

    static PolyLinearBundleMap constant(int num_vars, const LinearMap &m);
    int rank() const { return static_cast<int>(entries.size()); }
    PolySection operator()(const PolySection &s) const;
};

// Degree p >= 0 multiderivation given by its values on generators and its
// symbol. Values are indexed like Cochain keys: p-1 leading (n-1)-wedges of
// generators times one n-wedge (the last block followed by the section slot);
// for p = 0 one value per generator. The symbol is indexed by p-tuples of
// (n-1)-wedges. On polynomial arguments the leading blocks are
// function-linear and the last n slots obey the Leibniz rule through skewness.
class PolyMultiderivation
{
public:
    PolyMultiderivation() = default;
    PolyMultiderivation(int num_vars, int rank, int arity, int degree);

    int num_vars() const { return k_; }
    int rank() const { return r_; }
    int arity() const { return n_; }
    int degree() const { return p_; }

    std::size_t num_keys() const { return values_.size(); }
    std::size_t num_symbol_keys() const { return symbols_.size(); }
    // key for leading wedge ranks and the final n-wedge rank (ignored for p = 0
    // where the final index is the generator).
    std::size_t key(std::span<const std::size_t> blocks, std::size_t last) const;
    std::size_t symbol_key(std::span<const std::size_t> blocks) const;

    const PolySection &value(std::size_t key) const { return values_[key]; }
    PolySection &value(std::size_t key) { return values_[key]; }
    const PolyVectorField &symbol(std::size_t key) const { return symbols_[key]; }
    PolyVectorField &symbol(std::size_t key) { return symbols_[key]; }

    bool operator==(const PolyMultiderivation &o) const = default;

private:
    int k_ = 0, r_ = 0, n_ = 0, p_ = 0;
    std::vector<PolySection> values_;
    std::vector<PolyVectorField> symbols_;
};

// Constant coefficients, zero symbol.
PolyMultiderivation from_cochain(const Cochain &c, int num_vars);
// Inverse over a point (num_vars = 0).
Cochain to_cochain(const PolyMultiderivation &d);

using PolyBlock = std::vector<PolySection>;

// D(X_1,..,X_p, z) with each X_i a wedge of n-1 polynomial sections.
PolySection evaluate(const PolyMultiderivation &d, std::span<const PolyBlock *const> blocks, const PolySection &z);
// sigma_D(X_1,..,X_p), function-multilinear.
PolyVectorField evaluate_symbol(const PolyMultiderivation &d, std::span<const PolyBlock *const> blocks);

class PolyFilippovAlgebroid
{
public:
    PolyFilippovAlgebroid() = default;
    PolyFilippovAlgebroid(int num_vars, int rank, int arity);

    int num_vars() const { return phi_.num_vars(); }
    int rank() const { return phi_.rank(); }
    int arity() const { return phi_.arity(); }

    // Bracket of the generators of an increasing n-tuple, by rank.
    const PolySection &bracket(std::size_t rank) const { return phi_.value(rank); }
    PolySection &bracket(std::size_t rank) { return phi_.value(rank); }
    // Anchor on an increasing (n-1)-tuple, by rank.
    const PolyVectorField &anchor(std::size_t rank) const { return phi_.symbol(rank); }
    PolyVectorField &anchor(std::size_t rank) { return phi_.symbol(rank); }

    // The bracket as a degree 1 multiderivation with symbol the anchor.
    const PolyMultiderivation &structure() const { return phi_; }

    bool operator==(const PolyFilippovAlgebroid &o) const = default;

private:
    PolyMultiderivation phi_;
};

PolySection section_bracket(const PolyFilippovAlgebroid &a, std::span<const PolySection> sections);
// a(x_1 ^ .. ^ x_{n-1}).
PolyVectorField anchor_of(const PolyFilippovAlgebroid &a, std::span<const PolySection> sections);

// {1, each variable, each product x_i x_j (i <= j), one cubic}, truncated at
// max_degree.
std::vector<MultiPoly> function_family(int num_vars, int max_degree = 3);

struct AlgebroidWitness
{
    std::string condition;
    std::vector<PolySection> arguments;
    std::optional<MultiPoly> function;
    std::vector<MultiPoly> lhs;
    std::vector<MultiPoly> rhs;
};

struct AlgebroidVerdict
{
    bool holds = true;
    std::optional<AlgebroidWitness> witness;
};

enum class AnchorLevel
{
    generators,
    sections
};

struct AlgebroidCheckOptions
{
    int max_degree = 3;
    AnchorLevel anchor_level = AnchorLevel::generators;
    int leibniz_samples = 12;
    std::uint64_t seed = 1;
};

AlgebroidVerdict check_algebroid_axioms(const PolyFilippovAlgebroid &a, const AlgebroidCheckOptions &opt = {});

PolyFilippovAlgebroid example_tangent_fc(const NLieAlgebra &algebra, const MultiPoly &f);
PolyFilippovAlgebroid example_tangent_topform(int m_base, int n);

// [D1,D2](X_1,..,X_{p+q}, z) straight from the circle products.
PolySection bracket_value(const PolyMultiderivation &d1, const PolyMultiderivation &d2,
                          std::span<const PolyBlock *const> blocks, const PolySection &z);
// Symbol of [D1,D2] on generator blocks, indexed like PolyMultiderivation
// symbols of degree p+q.
std::vector<PolyVectorField> symbol_bracket(const PolyMultiderivation &d1, const PolyMultiderivation &d2);
// [D1,D2] tabulated on generators, with symbol from symbol_bracket.
PolyMultiderivation poly_gla_bracket(const PolyMultiderivation &d1, const PolyMultiderivation &d2);

// D(X, f e_g) = f D(X, e_g) + sigma_D(X)(f) e_g on generators.
AlgebroidVerdict check_multiderivation(const PolyMultiderivation &d, const std::vector<MultiPoly> &family);
AlgebroidVerdict check_symbol_leibniz(const PolyFilippovAlgebroid &a, const PolyMultiderivation &d1,
                                      const PolyMultiderivation &d2, int max_degree = 3);

// [N e_1,..,N e_n] = N [e_1,..,e_n]^{n-1}_N on generators.
AlgebroidVerdict check_poly_nijenhuis(const PolyFilippovAlgebroid &a, const PolyLinearBundleMap &n);
// [x_1,..,x_n]^k_N on polynomial sections, 1 <= k <= n-1.
PolySection poly_nijenhuis_bracket(const PolyFilippovAlgebroid &a, const PolyLinearBundleMap &n, int k,
                                   std::span<const PolySection> sections);
AlgebroidVerdict nijenhuis_symbol_check(const PolyFilippovAlgebroid &a, const PolyLinearBundleMap &n,
                                        int max_degree = 3);

} // namespace filippov

#endif
