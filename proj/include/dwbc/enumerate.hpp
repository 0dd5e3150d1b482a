#ifndef DWBC_ENUMERATE_HPP
#define DWBC_ENUMERATE_HPP

// Brute-force DWBC partition functions: explicit configuration sums and the
// column-transfer-matrix contraction. Exponential cost; capped at n = 6 by
// default.
//
// Lattice conventions. Vertex (i, j) sits on column i (numbered 1..n from
// right to left) and row j (1..n from bottom to top). Its edge signs are
// alpha (top), beta (right), gamma (bottom), delta (left). Neighbouring
// vertices share edges as
//
//   gamma(i, j+1) = alpha(i, j)        (vertical)
//   beta(i+1, j)  = delta(i, j)        (horizontal)
//
// and domain-wall boundary conditions fix alpha(i, n) = +1, beta(1, j) = -1,
// gamma(i, 1) = -1, delta(n, j) = +1. Face (i, j) lies upper-left of vertex
// (i, j); heights are stored as integer offsets from d_nn, so the dynamical
// argument at vertex (i, j) is lambda + hbar * offset(i, j).

#include "dwbc/errors.hpp"
#include "dwbc/linalg.hpp"
#include "dwbc/params.hpp"
#include "dwbc/rmatrix.hpp"
#include "dwbc/theta.hpp"

#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <vector>

namespace dwbc
{

inline constexpr std::size_t default_enumeration_cap = 6;

struct EnumerateOptions
{
    std::size_t size_cap = default_enumeration_cap;
    bool parallel = false;
};

class SignConfig
{
public:
    explicit SignConfig(std::size_t n)
        : n_(n), alpha_(n * n, 0), beta_(n * n, 0), gamma_(n * n, 0), delta_(n * n, 0)
    {}

    std::size_t size() const noexcept { return n_; }

    // 1-based (column, row).
    int alpha(std::size_t i, std::size_t j) const { return alpha_[at(i, j)]; }
    int beta(std::size_t i, std::size_t j) const { return beta_[at(i, j)]; }
    int gamma(std::size_t i, std::size_t j) const { return gamma_[at(i, j)]; }
    int delta(std::size_t i, std::size_t j) const { return delta_[at(i, j)]; }

    void set(std::size_t i, std::size_t j, int a, int b, int g, int d)
    {
        const auto k = at(i, j);
        alpha_[k] = static_cast<std::int8_t>(a);
        beta_[k] = static_cast<std::int8_t>(b);
        gamma_[k] = static_cast<std::int8_t>(g);
        delta_[k] = static_cast<std::int8_t>(d);
    }

    bool satisfies_ice_rule() const
    {
        for (std::size_t i = 1; i <= n_; ++i)
            for (std::size_t j = 1; j <= n_; ++j)
                if (alpha(i, j) + beta(i, j) != gamma(i, j) + delta(i, j))
                    return false;
        return true;
    }

    bool satisfies_edge_sharing() const
    {
        for (std::size_t i = 1; i <= n_; ++i)
            for (std::size_t j = 1; j <= n_; ++j) {
                if (j < n_ && gamma(i, j + 1) != alpha(i, j))
                    return false;
                if (i < n_ && beta(i + 1, j) != delta(i, j))
                    return false;
            }
        return true;
    }

    bool satisfies_dwbc() const
    {
        for (std::size_t k = 1; k <= n_; ++k)
            if (alpha(k, n_) != 1 || beta(1, k) != -1 || gamma(k, 1) != -1 || delta(n_, k) != 1)
                return false;
        return true;
    }

    // Alternating-sign matrix of the configuration, (delta - beta) / 2 at
    // each vertex: +1 at cbar vertices, -1 at c vertices, 0 elsewhere.
    // Index (i-1) * n + (j-1).
    std::vector<int> asm_matrix() const
    {
        std::vector<int> m(n_ * n_);
        for (std::size_t i = 1; i <= n_; ++i)
            for (std::size_t j = 1; j <= n_; ++j)
                m[at(i, j)] = (delta(i, j) - beta(i, j)) / 2;
        return m;
    }

private:
    std::size_t at(std::size_t i, std::size_t j) const { return (i - 1) * n_ + (j - 1); }

    std::size_t n_;
    std::vector<std::int8_t> alpha_, beta_, gamma_, delta_;
};

// Heights d_ij - d_nn of the (n+1) x (n+1) faces, i, j in [0, n].
class HeightField
{
public:
    explicit HeightField(std::size_t n) : n_(n), d_((n + 1) * (n + 1), 0) {}

    // Integrates the signs of a configuration starting from d_nn = 0 along
    // the top boundary and down each column.
    static HeightField from_signs(const SignConfig& cfg)
    {
        const std::size_t n = cfg.size();
        HeightField h(n);
        for (std::size_t i = 0; i <= n; ++i)
            h.at(i, n) = static_cast<int>(n - i);
        for (std::size_t j = n; j >= 1; --j) {
            h.at(0, j - 1) = h.at(0, j) + cfg.beta(1, j); // beta(1,j) = d_{0,j-1} - d_{0,j}
            for (std::size_t i = 1; i <= n; ++i)
                h.at(i, j - 1) = h.at(i, j) + cfg.delta(i, j);
        }
        return h;
    }

    std::size_t size() const noexcept { return n_; }
    int& at(std::size_t i, std::size_t j) { return d_[i * (n_ + 1) + j]; }
    int at(std::size_t i, std::size_t j) const { return d_[i * (n_ + 1) + j]; }

    bool has_unit_steps() const
    {
        for (std::size_t i = 0; i <= n_; ++i)
            for (std::size_t j = 0; j <= n_; ++j) {
                if (i >= 1 && std::abs(at(i, j) - at(i - 1, j)) != 1)
                    return false;
                if (j >= 1 && std::abs(at(i, j) - at(i, j - 1)) != 1)
                    return false;
            }
        return true;
    }

    // Every vertex sign equals the corresponding height difference.
    bool matches(const SignConfig& cfg) const
    {
        for (std::size_t i = 1; i <= n_; ++i)
            for (std::size_t j = 1; j <= n_; ++j) {
                if (cfg.alpha(i, j) != at(i - 1, j) - at(i, j))
                    return false;
                if (cfg.beta(i, j) != at(i - 1, j - 1) - at(i - 1, j))
                    return false;
                if (cfg.gamma(i, j) != at(i - 1, j - 1) - at(i, j - 1))
                    return false;
                if (cfg.delta(i, j) != at(i, j - 1) - at(i, j))
                    return false;
            }
        return true;
    }

    // DWBC boundary heights relative to d_nn.
    bool has_dwbc_boundary() const
    {
        const int n = static_cast<int>(n_);
        for (std::size_t k = 0; k <= n_; ++k) {
            const int kk = static_cast<int>(k);
            if (at(k, n_) != n - kk || at(n_, k) != n - kk || at(k, 0) != kk || at(0, k) != kk)
                return false;
        }
        return true;
    }

private:
    std::size_t n_;
    std::vector<int> d_;
};

struct EnumerationResult
{
    cplx value{};
    std::size_t configurations = 0; // configurations with nonzero weight
};

namespace detail
{

struct DwbcPrefix
{
    SignConfig cfg;
    cplx product;
};

// Depth-first walk over DWBC configurations, vertex order: columns 1..n,
// rows n..1 inside each column. `weight(i, j, height)` returns the vertex
// matrix at (i, j) whose face (i, j) has height offset `height`;
// `visit(cfg, product)` sees every complete configuration of nonzero
// weight in lexicographic order.
template <class Weight, class Visit>
class DwbcWalker
{
public:
    DwbcWalker(std::size_t n, Weight& weight, Visit& visit)
        : n_(n), weight_(weight), visit_(visit), cfg_(n)
    {}

    using Prefix = DwbcPrefix;

    void run() { descend(1, n_, 1.0, 0); }

    // Stops after column 1 and records each partial state.
    std::vector<Prefix> first_column_prefixes()
    {
        stop_after_first_ = true;
        descend(1, n_, 1.0, 0);
        stop_after_first_ = false;
        return std::move(prefixes_);
    }

    void resume(const Prefix& p)
    {
        cfg_ = p.cfg;
        descend(2, n_, p.product, 0);
    }

private:
    void descend(std::size_t i, std::size_t j, cplx product, int delta_sum)
    {
        if (j == 0) {
            if (i == n_) {
                visit_(static_cast<const SignConfig&>(cfg_), product);
                return;
            }
            if (stop_after_first_) {
                prefixes_.push_back({cfg_, product});
                return;
            }
            descend(i + 1, n_, product, 0);
            return;
        }
        const int a = (j == n_) ? 1 : cfg_.gamma(i, j + 1);
        const int b = (i == 1) ? -1 : cfg_.delta(i - 1, j);
        const int height = static_cast<int>(n_ - i) + delta_sum;
        for (int g : {1, -1}) {
            if (j == 1 && g != -1)
                continue;
            const int d = a + b - g;
            if (d != 1 && d != -1)
                continue;
            if (i == n_ && d != 1)
                continue;
            const RMatrix4 r = weight_(i, j, height);
            const cplx w = r.entry(sign_of(a), sign_of(b), sign_of(g), sign_of(d));
            if (w == cplx{})
                continue;
            cfg_.set(i, j, a, b, g, d);
            descend(i, j - 1, product * w, delta_sum + d);
        }
    }

    std::size_t n_;
    Weight& weight_;
    Visit& visit_;
    SignConfig cfg_;
    bool stop_after_first_ = false;
    std::vector<Prefix> prefixes_;
};

// Memoises weight(i, j, height); heights stay within [-2n, 2n].
template <class Weight>
class WeightCache
{
public:
    WeightCache(std::size_t n, Weight& weight)
        : n_(n), span_(4 * n + 1), weight_(weight), cache_(n * n * span_)
    {}

    const RMatrix4& operator()(std::size_t i, std::size_t j, int height)
    {
        const auto h = static_cast<std::size_t>(height + static_cast<int>(2 * n_));
        auto& slot = cache_[((i - 1) * n_ + (j - 1)) * span_ + h];
        if (!slot)
            slot = weight_(i, j, height);
        return *slot;
    }

private:
    std::size_t n_;
    std::size_t span_;
    Weight& weight_;
    std::vector<std::optional<RMatrix4>> cache_;
};

} // namespace detail

// Calls visit(const SignConfig&, cplx weight) for every DWBC configuration
// of nonzero weight.
template <class Weight, class Visit>
void for_each_dwbc_configuration(std::size_t n, Weight&& weight, Visit&& visit)
{
    detail::WeightCache cache(n, weight);
    detail::DwbcWalker walker(n, cache, visit);
    walker.run();
}

// Configuration sum Z = sum_C prod_ij R(i, j, height)^{alpha beta}_{gamma delta}.
template <class Weight>
EnumerationResult enumerate_dwbc(std::size_t n, Weight&& weight, const EnumerateOptions& opts = {})
{
    require_size_cap(n, opts.size_cap, "enumeration");
    if (n == 0)
        throw InvalidParameter("enumeration: n must be >= 1");

    if (!opts.parallel || n < 2) {
        EnumerationResult res;
        for_each_dwbc_configuration(n, weight, [&](const SignConfig&, cplx w) {
            res.value += w;
            ++res.configurations;
        });
        return res;
    }

    // Disjoint subtrees below each first-column state, combined in order.
    std::vector<detail::DwbcPrefix> prefixes;
    {
        detail::WeightCache cache(n, weight);
        std::function<void(const SignConfig&, cplx)> none = [](const SignConfig&, cplx) {};
        detail::DwbcWalker walker(n, cache, none);
        prefixes = walker.first_column_prefixes();
    }
    std::vector<std::future<EnumerationResult>> parts;
    for (const auto& prefix : prefixes)
        parts.push_back(std::async(std::launch::async, [&weight, n, &prefix] {
            EnumerationResult part;
            detail::WeightCache cache(n, weight);
            std::function<void(const SignConfig&, cplx)> add = [&](const SignConfig&, cplx w) {
                part.value += w;
                ++part.configurations;
            };
            detail::DwbcWalker walker(n, cache, add);
            walker.resume(prefix);
            return part;
        }));
    EnumerationResult res;
    for (auto& f : parts) {
        const auto part = f.get();
        res.value += part.value;
        res.configurations += part.configurations;
    }
    return res;
}

// Number of DWBC ice configurations (the alternating-sign-matrix number).
inline std::size_t count_dwbc_configurations(std::size_t n)
{
    const RMatrix4 ones = RMatrix4::six_vertex(1.0, 1.0, 1.0, 1.0, 1.0);
    std::size_t count = 0;
    for_each_dwbc_configuration(n, [&](std::size_t, std::size_t, int) { return ones; },
                                [&](const SignConfig&, cplx) { ++count; });
    return count;
}

// Column transfer matrix T^+_-(u_i) of column i as a 2^n x 2^n matrix:
// row index = upper quantum state (beta(i, n..1)), column index = lower
// quantum state (delta(i, n..1)); bit (j-1) of a state is 1 for a '-' sign
// on row j. It is the product R^{(n+1,n)} ... R^{(n+1,1)} with auxiliary
// sign + on top and - at the bottom; the dynamical argument of R^{(n+1,j)}
// reads the lower signs of rows l > j (sector decomposition of
// lambda_i + hbar sum_{l>j} H^{(l)}).
template <class Weight>
DenseMatrix column_transfer_matrix(std::size_t n, std::size_t column, Weight&& weight)
{
    const std::size_t q_dim = std::size_t{1} << n;
    const std::size_t dim = 2 * q_dim; // aux bit is the high bit
    auto sign_at = [](std::size_t state, std::size_t row) {
        return ((state >> (row - 1)) & 1U) ? -1 : 1;
    };
    DenseMatrix t(q_dim, q_dim);
    std::vector<cplx> cur(dim), next(dim);
    for (std::size_t upper = 0; upper < q_dim; ++upper) {
        std::fill(cur.begin(), cur.end(), cplx{});
        cur[upper] = 1.0; // aux '+' on top
        for (std::size_t j = n; j >= 1; --j) {
            std::fill(next.begin(), next.end(), cplx{});
            for (std::size_t s = 0; s < dim; ++s) {
                if (cur[s] == cplx{})
                    continue;
                int height = static_cast<int>(n - column);
                for (std::size_t l = j + 1; l <= n; ++l)
                    height += sign_at(s, l);
                const RMatrix4 r = weight(column, j, height);
                const Sign aux = (s & q_dim) ? Sign::minus : Sign::plus;
                const Sign up = sign_of(sign_at(s, j));
                for (Sign aux_out : {Sign::plus, Sign::minus})
                    for (Sign low : {Sign::plus, Sign::minus}) {
                        const cplx w = r.entry(aux, up, aux_out, low);
                        if (w == cplx{})
                            continue;
                        std::size_t s2 = s & ~q_dim & ~(std::size_t{1} << (j - 1));
                        if (aux_out == Sign::minus)
                            s2 |= q_dim;
                        if (low == Sign::minus)
                            s2 |= std::size_t{1} << (j - 1);
                        next[s2] += cur[s] * w;
                    }
            }
            cur.swap(next);
        }
        for (std::size_t lower = 0; lower < q_dim; ++lower)
            t(upper, lower) = cur[q_dim | lower]; // aux '-' at the bottom
    }
    return t;
}

// Z = <- ... -| T(u_1) T(u_2) ... T(u_n) |+ ... +>.
template <class Weight>
cplx column_transfer_dwbc(std::size_t n, Weight&& weight, std::size_t size_cap = default_enumeration_cap)
{
    require_size_cap(n, size_cap, "column transfer");
    if (n == 0)
        throw InvalidParameter("column transfer: n must be >= 1");
    detail::WeightCache cache(n, weight);
    const std::size_t q_dim = std::size_t{1} << n;
    std::vector<cplx> row(q_dim), next(q_dim);
    row[q_dim - 1] = 1.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const DenseMatrix t = column_transfer_matrix(n, i, cache);
        std::fill(next.begin(), next.end(), cplx{});
        for (std::size_t a = 0; a < q_dim; ++a) {
            if (row[a] == cplx{})
                continue;
            for (std::size_t b = 0; b < q_dim; ++b)
                next[b] += row[a] * t(a, b);
        }
        row.swap(next);
    }
    return row[0];
}

// ---------------------------------------------------------------------------
// Model-specific weight providers and routes.

// Elliptic SOS weights W_ij = R(u_i - v_j; lambda + hbar d_ij).
inline auto elliptic_sos_weights(const ThetaContext& ctx, const EllipticParams& p)
{
    return [&ctx, &p](std::size_t i, std::size_t j, int height) {
        const cplx lam = p.lambda + static_cast<double>(height) * p.hbar;
        require_off_lattice(ctx, lam, shift_label("λ", height) + " (height d_" +
                                          std::to_string(i) + std::to_string(j) + ")");
        return sos_rmatrix(ctx, p.u[i - 1] - p.v[j - 1], lam, p.hbar);
    };
}

inline auto six_vertex_weights(const TrigParams& p)
{
    return [&p](std::size_t i, std::size_t j, int) { return sixv_rmatrix(p.z[i - 1], p.w[j - 1], p.q); };
}

// Trigonometric SOS weights; lambda -> lambda + hbar d is mu -> mu q^{2d}.
inline auto trig_sos_weights(const TrigParams& p)
{
    if (!p.mu)
        throw InvalidParameter("trigonometric SOS model requires μ");
    return [&p](std::size_t i, std::size_t j, int height) {
        cplx mu = *p.mu;
        const cplx step = height >= 0 ? p.q * p.q : 1.0 / (p.q * p.q);
        for (int k = 0; k < std::abs(height); ++k)
            mu *= step;
        return trig_sos_rmatrix(p.z[i - 1], p.w[j - 1], mu, p.q);
    };
}

inline EnumerationResult enumerate_6v_detailed(const TrigParams& p, const EnumerateOptions& opts = {})
{
    validate(p);
    require_size_cap(p.size(), opts.size_cap, "enumerate_6v");
    return enumerate_dwbc(p.size(), six_vertex_weights(p), opts);
}

inline cplx enumerate_6v(const TrigParams& p, const EnumerateOptions& opts = {})
{
    return enumerate_6v_detailed(p, opts).value;
}

inline EnumerationResult enumerate_sos_detailed(const ThetaContext& ctx, const EllipticParams& p,
                                                const EnumerateOptions& opts = {})
{
    require_square(p.u.size(), p.v.size(), "enumerate_sos");
    require_size_cap(p.size(), opts.size_cap, "enumerate_sos");
    return enumerate_dwbc(p.size(), elliptic_sos_weights(ctx, p), opts);
}

inline cplx enumerate_sos(const ThetaContext& ctx, const EllipticParams& p,
                          const EnumerateOptions& opts = {})
{
    return enumerate_sos_detailed(ctx, p, opts).value;
}

inline cplx column_transfer_z(const ThetaContext& ctx, const EllipticParams& p,
                              std::size_t size_cap = default_enumeration_cap)
{
    require_square(p.u.size(), p.v.size(), "column_transfer_z");
    return column_transfer_dwbc(p.size(), elliptic_sos_weights(ctx, p), size_cap);
}

inline EnumerationResult enumerate_trig_sos_detailed(const TrigParams& p,
                                                     const EnumerateOptions& opts = {})
{
    validate(p);
    require_size_cap(p.size(), opts.size_cap, "enumerate_trig_sos");
    return enumerate_dwbc(p.size(), trig_sos_weights(p), opts);
}

} // namespace dwbc

#endif
