#include "filippov/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace filippov
{

std::size_t binomial(int n, int k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

SubsetIndex::SubsetIndex(int n, int k) : n_(n), k_(k)
{
    if (n < 0 || n > max_dimension || k < 0 || k > n)
        throw std::invalid_argument("SubsetIndex: unsupported (n, k)");
    for (const auto &t : increasing_tuples(n, k)) {
        Mask m = 0;
        for (int i : t) {
            m |= Mask(1) << i;
            elements_.push_back(i);
        }
        masks_.push_back(m);
    }
    // Dense rank table only for small universes; larger ones use binary search.
    if (n <= 20) {
        rank_of_mask_.assign(std::size_t(1) << n, 0);
        for (std::size_t r = 0; r < masks_.size(); ++r)
            rank_of_mask_[masks_[r]] = static_cast<std::uint32_t>(r);
    }
}

std::size_t SubsetIndex::rank(Mask m) const
{
    if (!rank_of_mask_.empty())
        return rank_of_mask_[m];
    // Lexicographic order of ascending tuples is not mask order, so search by
    // comparing element lists.
    auto it = std::lower_bound(masks_.begin(), masks_.end(), m, [this](Mask a, Mask b) {
        for (int i = 0; i < n_; ++i) {
            bool ia = (a >> i) & 1, ib = (b >> i) & 1;
            if (ia != ib)
                return ia;
        }
        return false;
    });
    return static_cast<std::size_t>(it - masks_.begin());
}

const SubsetIndex &SubsetIndex::get(int n, int k)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<SubsetIndex>> cache;
    std::lock_guard lock(mutex);
    auto &slot = cache[{n, k}];
    if (!slot)
        slot = std::make_unique<SubsetIndex>(n, k);
    return *slot;
}

int sort_sign(std::span<const int> indices)
{
    int inversions = 0;
    for (std::size_t i = 0; i < indices.size(); ++i)
        for (std::size_t j = i + 1; j < indices.size(); ++j) {
            if (indices[i] == indices[j])
                return 0;
            if (indices[i] > indices[j])
                ++inversions;
        }
    return inversions % 2 ? -1 : 1;
}

std::pair<Mask, int> sorted_mask(std::span<const int> indices)
{
    Mask m = 0;
    int inversions = 0;
    for (int i : indices) {
        Mask bit = Mask(1) << i;
        if (m & bit)
            return {0, 0};
        inversions += count_above(m, i);
        m |= bit;
    }
    return {m, inversions % 2 ? -1 : 1};
}

int count_between(Mask m, int a, int b)
{
    if (a > b)
        std::swap(a, b);
    if (b - a <= 1)
        return 0;
    Mask window = ((Mask(1) << (b - a - 1)) - 1) << (a + 1);
    return __builtin_popcount(m & window);
}

std::vector<Shuffle> shuffles(int k, int q)
{
    std::vector<Shuffle> out;
    for (const auto &first : increasing_tuples(k + q, k)) {
        Shuffle s;
        s.k = k;
        s.q = q;
        s.perm = first;
        std::vector<bool> used(static_cast<std::size_t>(k + q), false);
        for (int i : first)
            used[static_cast<std::size_t>(i)] = true;
        for (int i = 0; i < k + q; ++i)
            if (!used[static_cast<std::size_t>(i)])
                s.perm.push_back(i);
        s.sign = sort_sign(s.perm);
        out.push_back(std::move(s));
    }
    return out;
}

const std::vector<Shuffle> &shuffles_cached(int k, int q)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<std::vector<Shuffle>>> cache;
    std::lock_guard lock(mutex);
    auto &slot = cache[{k, q}];
    if (!slot)
        slot = std::make_unique<std::vector<Shuffle>>(shuffles(k, q));
    return *slot;
}

std::vector<std::vector<int>> increasing_tuples(int n, int count)
{
    std::vector<std::vector<int>> out;
    if (count < 0 || count > n)
        return out;
    std::vector<int> t(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        t[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(t);
        int i = count - 1;
        while (i >= 0 && t[static_cast<std::size_t>(i)] == n - count + i)
            --i;
        if (i < 0)
            break;
        ++t[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < count; ++j)
            t[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

} // namespace filippov
