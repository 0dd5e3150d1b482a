#ifndef DWBC_CLOSEDFORM_HPP
#define DWBC_CLOSEDFORM_HPP

// Closed-form DWBC partition functions: the elliptic permutation sum, the
// Izergin determinant, the trigonometric permutation sums, the recursion
// factor, and the weight-function kernel whose symmetrisation reproduces the
// elliptic partition function.

#include "dwbc/errors.hpp"
#include "dwbc/linalg.hpp"
#include "dwbc/params.hpp"
#include "dwbc/theta.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace dwbc
{

inline constexpr std::size_t default_permutation_cap = 9;

struct SumOptions
{
    std::size_t size_cap = default_permutation_cap;
    bool parallel = false;
};

// Sum of term(sigma) over S_n with sigma iterated in lexicographic order.
// The parallel mode splits on sigma(0) and adds the n partial sums in order.
template <class Term>
cplx sum_over_permutations(std::size_t n, Term&& term, bool parallel = false)
{
    auto range_sum = [&](std::size_t first) {
        std::vector<std::size_t> sigma(n);
        sigma[0] = first;
        std::size_t next = 0;
        for (std::size_t k = 1; k < n; ++k, ++next) {
            if (next == first)
                ++next;
            sigma[k] = next;
        }
        cplx s{};
        do {
            s += term(sigma);
        } while (std::next_permutation(sigma.begin() + 1, sigma.end()));
        return s;
    };
    cplx total{};
    if (!parallel || n < 2) {
        for (std::size_t f = 0; f < n; ++f)
            total += range_sum(f);
        return total;
    }
    std::vector<std::future<cplx>> parts;
    for (std::size_t f = 0; f < n; ++f)
        parts.push_back(std::async(std::launch::async, range_sum, f));
    for (auto& p : parts)
        total += p.get();
    return total;
}

namespace detail
{

inline std::string indexed(const char* head, std::size_t a, const char* mid, std::size_t b)
{
    std::ostringstream os;
    os << head << a + 1 << mid << b + 1;
    return os.str();
}

// Product of inversion factors prod_{l<l', sigma(l)>sigma(l')} table[sigma(l)][sigma(l')].
inline cplx inversion_factor(const std::vector<std::size_t>& sigma,
                             const std::vector<std::vector<cplx>>& table)
{
    cplx f = 1.0;
    const std::size_t n = sigma.size();
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t l2 = l + 1; l2 < n; ++l2)
            if (sigma[l] > sigma[l2])
                f *= table[sigma[l]][sigma[l2]];
    return f;
}

inline void require_nonzero(cplx x, double scale, const std::string& what)
{
    if (std::abs(x) < 1e-10 * std::max(1.0, scale)) {
        std::ostringstream os;
        os << what << " vanishes (value " << x << ")";
        throw DegenerateParameter(os.str());
    }
}

inline double max_abs(const std::vector<cplx>& xs)
{
    double m = 0.0;
    for (auto x : xs)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace detail

// Elliptic SOS DWBC partition function as the permutation sum
//
//   prod_{k>m} th(v_k - v_m - h)/th(v_k - v_m)
//   * sum_sigma prod_{l<l', s(l)>s(l')} th(v_s(l) - v_s(l') + h)/th(v_s(l) - v_s(l') - h)
//     * prod_{k<m} th(u_k - v_s(m)) prod_{k>m} th(u_k - v_s(m) + h)
//     * prod_m th(u_m - v_s(m) - lam - (m-1) h) th(h) / th(-lam - (m-1) h)
//
// with every th(u - v) denominator already cancelled, so u_i = v_j is a
// regular point.
inline cplx z_sos_elliptic(const ThetaContext& ctx, const EllipticParams& p,
                           const SumOptions& opts = {})
{
    require_square(p.u.size(), p.v.size(), "z_sos_elliptic");
    const std::size_t n = p.size();
    require_size_cap(n, opts.size_cap, "z_sos_elliptic");
    const cplx h = p.hbar;

    cplx prefactor = 1.0;
    std::vector<std::vector<cplx>> inv(n, std::vector<cplx>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b)
                continue;
            require_off_lattice(ctx, p.v[a] - p.v[b], detail::indexed("θ(v_", a, " - v_", b) + ")");
            require_off_lattice(ctx, p.v[a] - p.v[b] - h,
                                detail::indexed("θ(v_", a, " - v_", b) + " - ħ)");
            inv[a][b] = ctx(p.v[a] - p.v[b] + h) / ctx(p.v[a] - p.v[b] - h);
            if (a > b)
                prefactor *= ctx(p.v[a] - p.v[b] - h) / ctx(p.v[a] - p.v[b]);
        }

    const cplx th_h = ctx(h);
    // column[m][s]: every factor of the summand that depends on sigma(m) = s alone.
    std::vector<std::vector<cplx>> column(n, std::vector<cplx>(n));
    for (std::size_t m = 0; m < n; ++m) {
        const cplx shift = p.lambda + static_cast<double>(m) * h;
        require_off_lattice(ctx, -shift, shift_label("-λ", -static_cast<long>(m)));
        const cplx denom = ctx(-shift);
        for (std::size_t s = 0; s < n; ++s) {
            cplx f = ctx(p.u[m] - p.v[s] - shift) * th_h / denom;
            for (std::size_t k = 0; k < n; ++k) {
                if (k < m)
                    f *= ctx(p.u[k] - p.v[s]);
                else if (k > m)
                    f *= ctx(p.u[k] - p.v[s] + h);
            }
            column[m][s] = f;
        }
    }

    const cplx sum = sum_over_permutations(
        n,
        [&](const std::vector<std::size_t>& sigma) {
            cplx t = detail::inversion_factor(sigma, inv);
            for (std::size_t m = 0; m < n; ++m)
                t *= column[m][sigma[m]];
            return t;
        },
        opts.parallel);
    return prefactor * sum;
}

// Coefficient relating Z_n at u_n = v_n - hbar to Z_{n-1}:
//   th(lam + n h) th(h) / th(lam + (n-1) h) * prod_{m<n} th(v_n - v_m - h) th(u_m - v_n).
inline cplx recursion_factor(const ThetaContext& ctx, const EllipticParams& p)
{
    require_square(p.u.size(), p.v.size(), "recursion_factor");
    const std::size_t n = p.size();
    if (n < 2)
        throw InvalidParameter("recursion_factor: requires n >= 2");
    const cplx h = p.hbar;
    const cplx lam_prev = p.lambda + static_cast<double>(n - 1) * h;
    require_off_lattice(ctx, lam_prev, shift_label("λ", static_cast<long>(n - 1)));
    cplx f = ctx(p.lambda + static_cast<double>(n) * h) * ctx(h) / ctx(lam_prev);
    const cplx vn = p.v[n - 1];
    for (std::size_t m = 0; m + 1 < n; ++m)
        f *= ctx(vn - p.v[m] - h) * ctx(p.u[m] - vn);
    return f;
}

// Integrand kernel of the projection of n total currents, evaluated at
// v = vperm:
//
//   prod_{k>m} th(u_k - u_m)/th(u_k - u_m + h) * prod_{k>m} th(u_k - v_m + h)/th(u_k - v_m)
//   * prod_m th(u_m - v_m - lam - (m-1) h) / (th(u_m - v_m) th(-lam - (m-1) h))
inline cplx weight_kernel(const ThetaContext& ctx, const EllipticParams& p,
                          const std::vector<cplx>& vperm)
{
    const std::size_t n = p.u.size();
    require_square(n, vperm.size(), "weight_kernel");
    const cplx h = p.hbar;
    cplx k = 1.0;
    for (std::size_t a = 0; a < n; ++a) {
        const cplx shift = p.lambda + static_cast<double>(a) * h;
        require_off_lattice(ctx, p.u[a] - vperm[a], detail::indexed("θ(u_", a, " - v_", a) + ")");
        require_off_lattice(ctx, -shift, shift_label("-λ", -static_cast<long>(a)));
        k *= ctx(p.u[a] - vperm[a] - shift) / (ctx(p.u[a] - vperm[a]) * ctx(-shift));
        for (std::size_t m = 0; m < a; ++m) {
            require_off_lattice(ctx, p.u[a] - p.u[m] + h,
                                detail::indexed("θ(u_", a, " - u_", m) + " + ħ)");
            require_off_lattice(ctx, p.u[a] - vperm[m], detail::indexed("θ(u_", a, " - v_", m) + ")");
            k *= ctx(p.u[a] - p.u[m]) / ctx(p.u[a] - p.u[m] + h);
            k *= ctx(p.u[a] - vperm[m] + h) / ctx(p.u[a] - vperm[m]);
        }
    }
    return k;
}

// Symmetrisation of the kernel with the exchange factors and the
// normalisation that turns the projection kernel into the partition function:
//
//   th(h)^n prod_ij th(u_i - v_j) prod_{k>m} th(v_k - v_m - h)/th(v_k - v_m)
//   * prod_{k>m} th(u_k - u_m + h)/th(u_k - u_m)
//   * sum_sigma [exchange factor] weight_kernel(u; v o sigma)
inline cplx z_from_kernel(const ThetaContext& ctx, const EllipticParams& p, const SumOptions& opts = {})
{
    require_square(p.u.size(), p.v.size(), "z_from_kernel");
    const std::size_t n = p.size();
    require_size_cap(n, opts.size_cap, "z_from_kernel");
    const cplx h = p.hbar;
    cplx norm = ipow(ctx(h), n);
    std::vector<std::vector<cplx>> inv(n, std::vector<cplx>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            norm *= ctx(p.u[a] - p.v[b]);
            if (a == b)
                continue;
            require_off_lattice(ctx, p.v[a] - p.v[b] - h,
                                detail::indexed("θ(v_", a, " - v_", b) + " - ħ)");
            inv[a][b] = ctx(p.v[a] - p.v[b] + h) / ctx(p.v[a] - p.v[b] - h);
            if (a > b) {
                require_off_lattice(ctx, p.v[a] - p.v[b], detail::indexed("θ(v_", a, " - v_", b) + ")");
                require_off_lattice(ctx, p.u[a] - p.u[b], detail::indexed("θ(u_", a, " - u_", b) + ")");
                norm *= ctx(p.v[a] - p.v[b] - h) / ctx(p.v[a] - p.v[b]);
                norm *= ctx(p.u[a] - p.u[b] + h) / ctx(p.u[a] - p.u[b]);
            }
        }
    const cplx sum = sum_over_permutations(
        n,
        [&](const std::vector<std::size_t>& sigma) {
            std::vector<cplx> vperm(n);
            for (std::size_t m = 0; m < n; ++m)
                vperm[m] = p.v[sigma[m]];
            return detail::inversion_factor(sigma, inv) * weight_kernel(ctx, p, vperm);
        },
        opts.parallel);
    return norm * sum;
}

// ---------------------------------------------------------------------------
// Trigonometric routes.

namespace detail
{

inline void require_distinct(const std::vector<cplx>& xs, const char* name)
{
    const double scale = max_abs(xs);
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
            if (std::abs(xs[a] - xs[b]) < 1e-10 * std::max(1.0, scale)) {
                std::ostringstream os;
                os << name << "_" << a + 1 << " = " << name << "_" << b + 1
                   << ": coinciding parameters make a denominator vanish";
                throw DegenerateParameter(os.str());
            }
}

// (q w_a - w_b/q) / (w_a/q - q w_b)
inline std::vector<std::vector<cplx>> trig_exchange_table(const std::vector<cplx>& w, cplx q)
{
    const std::size_t n = w.size();
    const cplx qi = 1.0 / q;
    const double scale = max_abs(w) * std::max(std::abs(q), std::abs(qi));
    std::vector<std::vector<cplx>> inv(n, std::vector<cplx>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b)
                continue;
            const cplx den = qi * w[a] - q * w[b];
            require_nonzero(den, scale, indexed("w_", a, "/q - q w_", b));
            inv[a][b] = (q * w[a] - qi * w[b]) / den;
        }
    return inv;
}

// prod_{k>m} (w_k/q - q w_m) / (w_k - w_m)
inline cplx trig_prefactor(const std::vector<cplx>& w, cplx q)
{
    cplx f = 1.0;
    const cplx qi = 1.0 / q;
    for (std::size_t k = 0; k < w.size(); ++k)
        for (std::size_t m = 0; m < k; ++m)
            f *= (qi * w[k] - q * w[m]) / (w[k] - w[m]);
    return f;
}

} // namespace detail

// Six-vertex DWBC partition function as the permutation sum
//
//   (q - 1/q)^n prod_m w_m prod_{i>j} (w_i/q - q w_j)/(w_i - w_j)
//   * sum_sigma [exchange factor] prod_{i>k} (q z_i - w_s(k)/q) prod_{i<k} (z_i - w_s(k)).
inline cplx z_6v_sum(const TrigParams& p, const SumOptions& opts = {})
{
    validate(p);
    const std::size_t n = p.size();
    require_size_cap(n, opts.size_cap, "z_6v_sum");
    detail::require_distinct(p.w, "w");
    const cplx q = p.q;
    const cplx qi = 1.0 / q;
    const auto inv = detail::trig_exchange_table(p.w, q);
    cplx prefactor = detail::trig_prefactor(p.w, q);
    for (std::size_t m = 0; m < n; ++m)
        prefactor *= (q - qi) * p.w[m];

    std::vector<std::vector<cplx>> column(n, std::vector<cplx>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t s = 0; s < n; ++s) {
            cplx f = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i > k)
                    f *= q * p.z[i] - qi * p.w[s];
                else if (i < k)
                    f *= p.z[i] - p.w[s];
            }
            column[k][s] = f;
        }
    const cplx sum = sum_over_permutations(
        n,
        [&](const std::vector<std::size_t>& sigma) {
            cplx t = detail::inversion_factor(sigma, inv);
            for (std::size_t k = 0; k < n; ++k)
                t *= column[k][sigma[k]];
            return t;
        },
        opts.parallel);
    return prefactor * sum;
}

// Trigonometric SOS DWBC partition function (needs mu):
//
//   prod_{k>m} (w_k/q - q w_m)/(w_k - w_m) * sum_sigma [exchange factor]
//   * prod_{k>m} (q z_k - w_s(m)/q) prod_{k<m} (z_k - w_s(m))
//   * prod_m (z_m - w_s(m) mu q^{2(m-1)}) (q - 1/q) / (1 - mu q^{2(m-1)})
inline cplx z_trig_sos(const TrigParams& p, const SumOptions& opts = {})
{
    if (!p.mu)
        throw InvalidParameter("z_trig_sos: μ is required");
    validate(p);
    const std::size_t n = p.size();
    require_size_cap(n, opts.size_cap, "z_trig_sos");
    detail::require_distinct(p.w, "w");
    const cplx q = p.q;
    const cplx qi = 1.0 / q;
    const auto inv = detail::trig_exchange_table(p.w, q);
    const cplx prefactor = detail::trig_prefactor(p.w, q);

    std::vector<std::vector<cplx>> column(n, std::vector<cplx>(n));
    cplx mu_m = *p.mu; // mu q^{2m}
    for (std::size_t m = 0; m < n; ++m) {
        const cplx denom = 1.0 - mu_m;
        for (std::size_t s = 0; s < n; ++s) {
            cplx f = (p.z[m] - p.w[s] * mu_m) * (q - qi) / denom;
            for (std::size_t k = 0; k < n; ++k) {
                if (k > m)
                    f *= q * p.z[k] - qi * p.w[s];
                else if (k < m)
                    f *= p.z[k] - p.w[s];
            }
            column[m][s] = f;
        }
        mu_m *= q * q;
    }
    const cplx sum = sum_over_permutations(
        n,
        [&](const std::vector<std::size_t>& sigma) {
            cplx t = detail::inversion_factor(sigma, inv);
            for (std::size_t m = 0; m < n; ++m)
                t *= column[m][sigma[m]];
            return t;
        },
        opts.parallel);
    return prefactor * sum;
}

inline constexpr double izergin_condition_warning = 1e12;

struct IzerginResult
{
    cplx value{};
    double condition = 0.0; // 1-norm condition number of the determinant matrix
    bool rescaled_rows = false;
};

// Izergin determinant
//
//   (q - 1/q)^n prod_m w_m prod_ij f_ij / prod_{i>j} (z_i - z_j)(w_j - w_i) * det[1/f_ij],
//   f_ij = (z_i - w_j)(q z_i - w_j/q),
//
// evaluated by partially pivoted LU. When some f_ij vanishes the removable
// singularity is taken out by absorbing prod_j f_ij into row i, i.e. using
// det[prod_{l != j} f_il] instead of prod f * det[1/f].
inline IzerginResult z_izergin_detailed(const TrigParams& p)
{
    validate(p);
    const std::size_t n = p.size();
    detail::require_distinct(p.z, "z");
    detail::require_distinct(p.w, "w");
    const cplx q = p.q;
    const cplx qi = 1.0 / q;

    DenseMatrix f(n, n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            f(i, j) = (p.z[i] - p.w[j]) * (q * p.z[i] - qi * p.w[j]);
            scale = std::max(scale, std::abs(f(i, j)));
        }
    bool singular_entry = false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(f(i, j)) < 1e-10 * std::max(1.0, scale))
                singular_entry = true;

    cplx prefactor = ipow(q - qi, n);
    for (auto w : p.w)
        prefactor *= w;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            prefactor /= (p.z[i] - p.z[j]) * (p.w[j] - p.w[i]);

    DenseMatrix m(n, n);
    IzerginResult res;
    if (!singular_entry) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = 1.0 / f(i, j);
                prefactor *= f(i, j);
            }
    } else {
        res.rescaled_rows = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx e = 1.0;
                for (std::size_t l = 0; l < n; ++l)
                    if (l != j)
                        e *= f(i, l);
                m(i, j) = e;
            }
    }
    const PartialPivotLU lu(m);
    res.condition = condition_number_1(m);
    res.value = prefactor * lu.determinant();
    return res;
}

// Appends a warning to `warnings` when the determinant is ill-conditioned.
inline cplx z_izergin(const TrigParams& p, std::vector<std::string>* warnings = nullptr)
{
    const auto res = z_izergin_detailed(p);
    if (warnings && res.condition > izergin_condition_warning) {
        std::ostringstream os;
        os << "z_izergin: determinant condition number " << res.condition << " exceeds "
           << izergin_condition_warning;
        warnings->push_back(os.str());
    }
    return res.value;
}

} // namespace dwbc

#endif
