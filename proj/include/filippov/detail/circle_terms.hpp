#ifndef FILIPPOV_DETAIL_CIRCLE_TERMS_HPP
#define FILIPPOV_DETAIL_CIRCLE_TERMS_HPP

#include <cstddef>
#include <vector>

#include "filippov/combinatorics.hpp"

// The shuffle sums behind the circle product, written once for every section
// model. A model supplies
//   Block, Section
//   std::size_t factor_count(const Block &)
//   const Section &factor(const Block &, std::size_t s)
//   Block replace(const Block &, std::size_t s, Section v)
//   bool is_zero(const Section &)
// Blocks are passed around by pointer; outer and inner take
// (const std::vector<const Block *> &, ...).
namespace filippov::detail
{

// k = 0..p-1: insert inner(X_sigma(k+1..k+q), X^s_{k+q+1}) into factor s of
// block X_{k+q+1}, then emit outer(X_sigma(1..k), modified block,
// X_{k+q+2}, .., X_{p+q}) with sign sgn(sigma) (-1)^{kq}.
template <class Model, class Outer, class Inner, class Emit>
void insertion_terms(const Model &model, int p, int q, const std::vector<const typename Model::Block *> &x,
                     Outer &&outer, Inner &&inner, Emit &&emit)
{
    using Block = typename Model::Block;
    const auto nq = static_cast<std::size_t>(q);
    for (int k = 0; k < p; ++k) {
        const auto nk = static_cast<std::size_t>(k);
        const int kq_sign = (k * q) % 2 ? -1 : 1;
        const Block &host = *x[nk + nq];
        for (const auto &sh : shuffles_cached(k, q)) {
            std::vector<const Block *> args;
            args.reserve(static_cast<std::size_t>(p));
            for (std::size_t i = 0; i < nk; ++i)
                args.push_back(x[static_cast<std::size_t>(sh.perm[i])]);
            std::vector<const Block *> in;
            in.reserve(nq);
            for (std::size_t i = 0; i < nq; ++i)
                in.push_back(x[static_cast<std::size_t>(sh.perm[nk + i])]);
            args.push_back(nullptr);
            for (std::size_t i = nk + nq + 1; i < x.size(); ++i)
                args.push_back(x[i]);
            for (std::size_t s = 0; s < model.factor_count(host); ++s) {
                auto v = inner(in, model.factor(host, s));
                if (model.is_zero(v))
                    continue;
                Block modified = model.replace(host, s, std::move(v));
                args[nk] = &modified;
                emit(outer(args), sh.sign * kq_sign);
            }
        }
    }
}

// k = p: emit outer(X_sigma(1..p), inner(X_sigma(p+1..p+q), z)) with sign
// sgn(sigma) (-1)^{pq}.
template <class Model, class Outer, class Inner, class Emit>
void composition_terms(const Model &model, int p, int q, const std::vector<const typename Model::Block *> &x,
                       const typename Model::Section &z, Outer &&outer, Inner &&inner, Emit &&emit)
{
    using Block = typename Model::Block;
    const int pq_sign = (p * q) % 2 ? -1 : 1;
    const auto np = static_cast<std::size_t>(p);
    const auto nq = static_cast<std::size_t>(q);
    for (const auto &sh : shuffles_cached(p, q)) {
        std::vector<const Block *> out, in;
        out.reserve(np);
        in.reserve(nq);
        for (std::size_t i = 0; i < np; ++i)
            out.push_back(x[static_cast<std::size_t>(sh.perm[i])]);
        for (std::size_t i = 0; i < nq; ++i)
            in.push_back(x[static_cast<std::size_t>(sh.perm[np + i])]);
        auto v = inner(in, z);
        if (model.is_zero(v))
            continue;
        emit(outer(out, v), sh.sign * pq_sign);
    }
}

} // namespace filippov::detail

#endif
