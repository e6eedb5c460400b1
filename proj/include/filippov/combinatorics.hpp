#ifndef FILIPPOV_COMBINATORICS_HPP
#define FILIPPOV_COMBINATORICS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace filippov
{

// Subsets of {0,..,n-1} are carried as bitmasks; n is limited to 30.
using Mask = std::uint32_t;

inline constexpr int max_dimension = 30;

std::size_t binomial(int n, int k);

// Lexicographic enumeration of the k-element subsets of {0,..,n-1}, with
// constant-time ranking. Instances are shared and immutable; obtain them
// through get().
class SubsetIndex
{
public:
    static const SubsetIndex &get(int n, int k);

    int universe() const { return n_; }
    int grade() const { return k_; }
    std::size_t size() const { return masks_.size(); }

    Mask mask(std::size_t rank) const { return masks_[rank]; }
    // Elements of the rank-th subset, ascending.
    std::span<const int> elements(std::size_t rank) const
    {
        return {elements_.data() + rank * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_)};
    }
    // Rank of a k-subset given as a mask.
    std::size_t rank(Mask m) const;

    SubsetIndex(int n, int k);

private:
    int n_;
    int k_;
    std::vector<Mask> masks_;
    std::vector<int> elements_;
    std::vector<std::uint32_t> rank_of_mask_;
};

// Sign of the permutation sorting `indices` ascending; 0 if an index repeats.
int sort_sign(std::span<const int> indices);

// Mask of distinct indices, or nullopt-like 0 flag through the sign: returns
// {mask, sign}; sign is 0 on a repeat.
std::pair<Mask, int> sorted_mask(std::span<const int> indices);

// Number of elements of `m` strictly greater than `i`.
inline int count_above(Mask m, int i)
{
    return __builtin_popcount(m >> (i + 1));
}

// Number of elements of `m` strictly between `a` and `b`.
int count_between(Mask m, int a, int b);

// A (k,q)-shuffle: perm[0..k-1] and perm[k..k+q-1] are increasing, 0-based.
struct Shuffle
{
    int k = 0;
    int q = 0;
    std::vector<int> perm;
    int sign = 1;
};

// All C(k+q, k) shuffles, in lexicographic order of their first block.
std::vector<Shuffle> shuffles(int k, int q);

// Cached variant for hot loops.
const std::vector<Shuffle> &shuffles_cached(int k, int q);

// Index tuples of `count` strictly increasing entries drawn from
// {0,..,n-1}, lexicographic.
std::vector<std::vector<int>> increasing_tuples(int n, int count);

} // namespace filippov

#endif
