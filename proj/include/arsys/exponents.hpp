#pragma once

/**
 * @file exponents.hpp
 * @brief Exact arithmetic in the value group Z^r x Z/N.
 *
 * Every structure constant is a product of finitely many generic
 * parameters (free generators) and a root of unity of order dividing N.
 * An element is stored by its exponent vector on the free part and its
 * residue on the cyclic part, so equality is decidable and exact.
 *
 * Elements carry their context; combining elements from different
 * contexts throws ContextMismatch. Use embed() with common_context() to
 * move values into a shared context explicitly.
 */

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arsys/checked.hpp"
#include "arsys/error.hpp"

namespace arsys {

/// Largest supported number of free generators. Table rows need at most two.
inline constexpr int kMaxFreeRank = 4;

struct GroupContext {
    int free_rank = 0;
    std::int64_t torsion_order = 1;

    static GroupContext make(int free_rank, std::int64_t torsion_order) {
        if (free_rank < 0 || free_rank > kMaxFreeRank)
            throw InputError("free_rank must lie in [0, " + std::to_string(kMaxFreeRank) + "]");
        if (torsion_order < 1) throw InputError("torsion_order must be >= 1");
        return GroupContext{free_rank, torsion_order};
    }

    bool operator==(const GroupContext&) const = default;
    auto operator<=>(const GroupContext&) const = default;
};

/// Smallest context into which both arguments embed.
inline GroupContext common_context(const GroupContext& a, const GroupContext& b) {
    return GroupContext::make(std::max(a.free_rank, b.free_rank),
                              checked::lcm(a.torsion_order, b.torsion_order));
}

class GroupElement {
public:
    GroupElement() = default;

    static GroupElement identity(const GroupContext& ctx) { return GroupElement(ctx); }

    /// The k-th free generator (0-based).
    static GroupElement free_generator(const GroupContext& ctx, int k) {
        if (k < 0 || k >= ctx.free_rank) throw InputError("free generator index out of range");
        GroupElement g(ctx);
        g.free_[k] = 1;
        return g;
    }

    /// z^k where z is the fixed primitive N-th root of unity of the context.
    static GroupElement root_of_unity(const GroupContext& ctx, std::int64_t k) {
        GroupElement g(ctx);
        g.tor_ = checked::mod(k, ctx.torsion_order);
        return g;
    }

    /// -1; requires an even torsion order.
    static GroupElement minus_one(const GroupContext& ctx) {
        if (ctx.torsion_order % 2 != 0)
            throw InputError("-1 is not representable when torsion_order is odd");
        return root_of_unity(ctx, ctx.torsion_order / 2);
    }

    static GroupElement from_parts(const GroupContext& ctx, std::span<const std::int64_t> free,
                                   std::int64_t tor) {
        if (static_cast<int>(free.size()) != ctx.free_rank)
            throw InputError("free part has length " + std::to_string(free.size()) +
                             ", context expects " + std::to_string(ctx.free_rank));
        GroupElement g(ctx);
        std::copy(free.begin(), free.end(), g.free_.begin());
        g.tor_ = checked::mod(tor, ctx.torsion_order);
        return g;
    }

    const GroupContext& context() const noexcept { return ctx_; }
    std::span<const std::int64_t> free_part() const noexcept {
        return {free_.data(), static_cast<std::size_t>(ctx_.free_rank)};
    }
    std::int64_t free(int k) const noexcept { return free_[k]; }
    std::int64_t torsion_part() const noexcept { return tor_; }

    bool has_free_part() const noexcept {
        return std::any_of(free_.begin(), free_.begin() + ctx_.free_rank,
                           [](std::int64_t v) { return v != 0; });
    }

    bool operator==(const GroupElement&) const = default;
    /// Total order used for canonical forms: context, then free part, then residue.
    auto operator<=>(const GroupElement&) const = default;

private:
    explicit GroupElement(const GroupContext& ctx) : ctx_(ctx) {}

    GroupContext ctx_{};
    std::array<std::int64_t, kMaxFreeRank> free_{};
    std::int64_t tor_ = 0;

    friend GroupElement mul(const GroupElement& a, const GroupElement& b);
    friend GroupElement inv(const GroupElement& a);
    friend GroupElement pow(const GroupElement& a, std::int64_t m);
    friend GroupElement embed(const GroupElement& a, const GroupContext& target);
};

inline void require_same_context(const GroupElement& a, const GroupElement& b) {
    if (a.context() != b.context()) throw ContextMismatch("group elements belong to different contexts");
}

inline GroupElement mul(const GroupElement& a, const GroupElement& b) {
    require_same_context(a, b);
    GroupElement r(a.ctx_);
    for (int k = 0; k < a.ctx_.free_rank; ++k) r.free_[k] = checked::add(a.free_[k], b.free_[k]);
    r.tor_ = (a.tor_ + b.tor_) % a.ctx_.torsion_order;
    return r;
}

inline GroupElement inv(const GroupElement& a) {
    GroupElement r(a.ctx_);
    for (int k = 0; k < a.ctx_.free_rank; ++k) r.free_[k] = checked::neg(a.free_[k]);
    r.tor_ = checked::mod(-a.tor_, a.ctx_.torsion_order);
    return r;
}

inline GroupElement pow(const GroupElement& a, std::int64_t m) {
    GroupElement r(a.ctx_);
    for (int k = 0; k < a.ctx_.free_rank; ++k) r.free_[k] = checked::mul(a.free_[k], m);
    const std::int64_t n = a.ctx_.torsion_order;
    r.tor_ = checked::mul(checked::mod(m, n), a.tor_) % n;
    return r;
}

inline bool is_one(const GroupElement& a) { return a.torsion_part() == 0 && !a.has_free_part(); }

inline GroupElement operator*(const GroupElement& a, const GroupElement& b) { return mul(a, b); }

/// Moves a into a context whose free rank and torsion order are multiples.
inline GroupElement embed(const GroupElement& a, const GroupContext& target) {
    if (target.free_rank < a.ctx_.free_rank || target.torsion_order % a.ctx_.torsion_order != 0)
        throw ContextMismatch("target context does not contain the source context");
    GroupElement r(target);
    for (int k = 0; k < a.ctx_.free_rank; ++k) r.free_[k] = a.free_[k];
    r.tor_ = checked::mul(a.tor_, target.torsion_order / a.ctx_.torsion_order);
    return r;
}

/// Multiplicative order; std::nullopt means infinite.
inline std::optional<std::int64_t> order(const GroupElement& a) {
    if (a.has_free_part()) return std::nullopt;
    const std::int64_t n = a.context().torsion_order;
    return n / std::gcd(a.torsion_part(), n);
}

/**
 * Least m >= 0 with q^m * p == 1, or std::nullopt when none exists.
 *
 * The free part gives the exact integer equation m*free(q) = -free(p),
 * the cyclic part the congruence m*tor(q) = -tor(p) (mod N).
 */
inline std::optional<std::int64_t> solve_min_exponent(const GroupElement& q, const GroupElement& p) {
    require_same_context(q, p);
    const GroupContext& ctx = q.context();
    const std::int64_t n = ctx.torsion_order;

    std::optional<std::int64_t> forced;
    for (int k = 0; k < ctx.free_rank; ++k) {
        const std::int64_t fq = q.free(k), fp = p.free(k);
        if (fq == 0) {
            if (fp != 0) return std::nullopt;
            continue;
        }
        if (fp % fq != 0) return std::nullopt;
        const std::int64_t m = -(fp / fq);
        if (m < 0) return std::nullopt;
        if (forced && *forced != m) return std::nullopt;
        forced = m;
    }

    const std::int64_t tq = q.torsion_part();
    const std::int64_t target = checked::mod(-p.torsion_part(), n);
    if (forced) {
        if (checked::mod(checked::mul(checked::mod(*forced, n), tq), n) != target) return std::nullopt;
        return forced;
    }
    if (tq == 0) return target == 0 ? std::optional<std::int64_t>(0) : std::nullopt;

    std::int64_t x = 0, y = 0;
    const std::int64_t g = checked::ext_gcd(tq, n, x, y);
    if (target % g != 0) return std::nullopt;
    const std::int64_t reduced = n / g;
    return checked::mod(checked::mul(checked::mod(x, reduced), (target / g) % reduced), reduced);
}

/**
 * Text form used by the DOT and text outputs: free generators g1..gr,
 * the torsion generator z, and a leading '-' when the residue lies in the
 * upper half of an even cyclic group. Examples: "1", "-1", "-z^2", "g1^-1*z".
 */
inline std::string to_string(const GroupElement& a) {
    const GroupContext& ctx = a.context();
    std::int64_t t = a.torsion_part();
    bool negative = false;
    if (ctx.torsion_order % 2 == 0 && t >= ctx.torsion_order / 2) {
        negative = true;
        t -= ctx.torsion_order / 2;
    }
    std::vector<std::string> factors;
    auto power = [](const std::string& base, std::int64_t e) {
        return e == 1 ? base : base + "^" + std::to_string(e);
    };
    for (int k = 0; k < ctx.free_rank; ++k)
        if (a.free(k) != 0) factors.push_back(power("g" + std::to_string(k + 1), a.free(k)));
    if (t != 0) factors.push_back(power("z", t));
    std::string out = negative ? "-" : "";
    if (factors.empty()) return out + "1";
    for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? "*" : "") + factors[i];
    return out;
}

} // namespace arsys
