#ifndef FILIPPOV_DEFORMATION_HPP
#define FILIPPOV_DEFORMATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "filippov/cochain.hpp"
#include "filippov/matrix.hpp"
#include "filippov/nlie.hpp"

namespace filippov
{

// phi_t = phi_0 + sum_{i=1..k} t^i phi_i with phi_0 the bracket of `base`.
struct DeformationPath
{
    NLieAlgebra base;
    std::vector<Cochain> terms;

    int order() const { return static_cast<int>(terms.size()); }
    // phi_i for 0 <= i <= order.
    Cochain term(int i) const;
};

// Phi_t = Id + sum_{i=1..k} t^i maps[i-1].
struct EquivalenceMap
{
    std::vector<LinearMap> maps;

    int order() const { return static_cast<int>(maps.size()); }
};

enum class DeformationMode
{
    // powers r <= order ("modulo t^{k+1}")
    truncated,
    // every power r <= 2 order
    full
};

struct DeformationCheck
{
    bool holds = true;
    // Smallest r with sum_{i+j=r} [phi_i, phi_j] != 0.
    std::optional<int> first_failing_power;
    // 1: delta phi_1 = 0; 2: r <= order; 3: r > order.
    int condition = 0;
    std::optional<Cochain> defect;
};

DeformationCheck check_deformation(const DeformationPath &path, DeformationMode mode = DeformationMode::truncated);

struct InfinitesimalClass
{
    // Index m of the first nonzero term; 0 when every term vanishes.
    int power = 0;
    bool cocycle = true;
    // Coordinates in the H^2 representative basis of cohomology(base, 2).
    Vector coordinates;
    bool exact = true;
};

InfinitesimalClass infinitesimal_class(const DeformationPath &path);

// phi~_t = Phi_t^{-1} phi_t(Phi_t x_1, .., Phi_t x_n) mod t^{k+1}; Phi_t^{-1}
// as a truncated power series.
DeformationPath conjugate(const DeformationPath &path, const EquivalenceMap &phi);

// Truncated inverse series: psi_0 = Id, psi_j = -sum_{i=1..j} phi_i psi_{j-i}.
std::vector<LinearMap> inverse_series(const EquivalenceMap &phi, int order);

// Product of Phi_t and Psi_t mod t^{order+1}.
EquivalenceMap compose(const EquivalenceMap &a, const EquivalenceMap &b, int order);

struct EquivalenceCheck
{
    bool holds = true;
    std::optional<int> failing_power;
};

// path2 = Phi^{-1} path1(Phi .) power by power up to the common order.
EquivalenceCheck check_equivalence(const DeformationPath &path1, const DeformationPath &path2,
                                   const EquivalenceMap &phi);

// [x]^k_N = sum_{|I|=k} [.. N x_I ..] - N [x]^{k-1}_N with [x]^0_N = [x]; 1 <= k <= n-1.
Cochain nijenhuis_bracket(const NLieAlgebra &a, const LinearMap &n, int k);

// [N x_1, .., N x_n] = N [x_1, .., x_n]^{n-1}_N. Witness tuples: {x (n)}.
Verdict check_nijenhuis(const NLieAlgebra &a, const LinearMap &n);

// Terms [.]^i_N for i = 1..n-1. Throws precondition_error when N fails.
DeformationPath deformation_from_nijenhuis(const NLieAlgebra &a, const LinearMap &n);

// (Id + tN) phi_t(x) = [(Id + tN) x_1, .., (Id + tN) x_n] as a polynomial
// identity in t on basis tuples; returns the first failing power.
std::optional<int> trivial_identity_defect(const DeformationPath &path, const LinearMap &n);

struct OOperatorLift
{
    LinearMap n_tilde;
    Verdict o_operator;
    Verdict nijenhuis;
    bool agree = false;
};

OOperatorLift o_operator_lift(const NLieAlgebra &a, const Representation &rho, const LinearMap &t);

struct Obstruction
{
    Cochain theta;
    bool cocycle = true;
};

// -1/2 sum_{i+j=k+1, i,j>0} [phi_i, phi_j].
Obstruction obstruction(const DeformationPath &path);

struct Extension
{
    Cochain theta;
    std::optional<Cochain> next;
    // y with y^T D = 0 and y . theta != 0, D the matrix of delta_F on C^2.
    std::optional<Vector> certificate;
};

Extension extend(const DeformationPath &path);

struct RigidityTrial
{
    int order = 0;
    DeformationPath path;
    bool trivialized = false;
    // Present when trivialized; re-verified with check_equivalence.
    std::optional<EquivalenceMap> equivalence;
    bool verified = false;
    // First power whose term is not a coboundary.
    std::optional<int> blocked_power;
};

struct RigidityReport
{
    std::string note;
    std::size_t h2 = 0;
    std::vector<RigidityTrial> trials;
    bool all_trivialized = true;
};

// Samples valid deformations order by order (random cocycle, then random
// extensions) and tries to trivialize each by solving delta Psi = phi_m and
// conjugating by Id - t^m Psi.
RigidityReport rigidity_probe(const NLieAlgebra &a, int max_order, int trials, std::uint64_t seed);

} // namespace filippov

#endif
