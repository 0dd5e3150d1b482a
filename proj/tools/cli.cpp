#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

namespace dwbc::cli
{

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Parsing

namespace
{

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& token)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used == s.size())
            return x;
    } catch (const std::exception&) {
    }
    throw InvalidParameter("cannot parse complex number '" + token + "'");
}

cplx from_json_pair(const nlohmann::json& j, const std::string& token)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InvalidParameter("expected [re, im], got '" + token + "'");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

cplx parse_complex(const std::string& token)
{
    const std::string s = trim(token);
    if (s.empty())
        throw InvalidParameter("empty complex number");
    if (s.front() == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(s);
        } catch (const nlohmann::json::exception&) {
            throw InvalidParameter("cannot parse complex number '" + token + "'");
        }
        return from_json_pair(j, token);
    }
    static const std::string num = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex real_re("^[+-]?" + num + "$");
    static const std::regex imag_re("^([+-]?)(" + num + ")?\\*?i$");
    static const std::regex full_re("^([+-]?" + num + ")([+-])(" + num + ")?\\*?i$");
    std::smatch m;
    if (std::regex_match(s, real_re))
        return {to_double(s, token), 0.0};
    if (std::regex_match(s, m, imag_re)) {
        const double mag = m[2].matched ? to_double(m[2].str(), token) : 1.0;
        return {0.0, m[1].str() == "-" ? -mag : mag};
    }
    if (std::regex_match(s, m, full_re)) {
        const double mag = m[3].matched ? to_double(m[3].str(), token) : 1.0;
        return {to_double(m[1].str(), token), m[2].str() == "-" ? -mag : mag};
    }
    throw InvalidParameter("cannot parse complex number '" + token + "'");
}

std::vector<cplx> parse_complex_list(const std::vector<std::string>& tokens)
{
    // The argument parser strips the outer brackets of "[[a,b],[c,d]]" and
    // splits on commas; put the pieces back together.
    const bool fragments = std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) {
        const std::string s = trim(t);
        return !s.empty() && (s.front() == '[') != (s.back() == ']');
    });
    if (fragments) {
        std::string joined = "[";
        for (std::size_t k = 0; k < tokens.size(); ++k)
            joined += (k ? "," : "") + trim(tokens[k]);
        return parse_complex_list({joined + "]"});
    }
    std::vector<cplx> out;
    for (const auto& token : tokens) {
        const std::string s = trim(token);
        if (s.rfind("[[", 0) == 0) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(s);
            } catch (const nlohmann::json::exception&) {
                throw InvalidParameter("cannot parse complex list '" + token + "'");
            }
            for (const auto& item : j)
                out.push_back(from_json_pair(item, token));
        } else {
            out.push_back(parse_complex(s));
        }
    }
    return out;
}

std::string to_string(Model m)
{
    switch (m) {
    case Model::sos_elliptic:
        return "sos-elliptic";
    case Model::sos_trig:
        return "sos-trig";
    case Model::six_vertex:
        return "six-vertex";
    }
    return {};
}

std::string to_string(Route r)
{
    switch (r) {
    case Route::enumerate:
        return "enumerate";
    case Route::transfer:
        return "transfer";
    case Route::sum:
        return "sum";
    case Route::determinant:
        return "determinant";
    case Route::all:
        return "all";
    }
    return {};
}

std::string to_string(Command c)
{
    switch (c) {
    case Command::compute:
        return "compute";
    case Command::check:
        return "check";
    case Command::bench:
        return "bench";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Problems and routes

namespace
{

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

json to_json(cplx x) { return json::array({x.real(), x.imag()}); }

json to_json(const std::vector<cplx>& xs)
{
    json a = json::array();
    for (auto x : xs)
        a.push_back(to_json(x));
    return a;
}

std::string format_complex(cplx x)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.16e, %.16e)", x.real(), x.imag());
    return buf;
}

std::vector<Route> routes_of(Model m)
{
    if (m == Model::six_vertex)
        return {Route::enumerate, Route::transfer, Route::sum, Route::determinant};
    return {Route::enumerate, Route::transfer, Route::sum};
}

std::size_t cap_of(Route r)
{
    switch (r) {
    case Route::enumerate:
    case Route::transfer:
        return default_enumeration_cap;
    case Route::sum:
        return default_permutation_cap;
    default:
        return std::numeric_limits<std::size_t>::max();
    }
}

std::uint64_t factorial(std::size_t n)
{
    std::uint64_t f = 1;
    for (std::size_t k = 2; k <= n; ++k)
        f *= k;
    return f;
}

// Parameters of one model instance at size n.
struct Problem
{
    Model model;
    std::size_t n;
    std::optional<ThetaContext> ctx;
    EllipticParams ell;
    TrigParams trig;
};

std::vector<cplx> explicit_or_drawn(const std::vector<cplx>& given, std::size_t n, Rng& rng,
                                    const char* name)
{
    if (given.empty())
        return rng.spectral(n);
    if (given.size() != n) {
        std::ostringstream os;
        os << "--" << name << " has " << given.size() << " entries, expected n = " << n;
        throw InvalidParameter(os.str());
    }
    return given;
}

std::vector<cplx> exp_2pi_i(const std::vector<cplx>& xs)
{
    std::vector<cplx> out;
    for (auto x : xs)
        out.push_back(std::exp(2.0 * pi * I * x));
    return out;
}

Problem make_problem(const RunConfig& cfg, std::size_t n)
{
    Problem p{cfg.model, n, std::nullopt, {}, {}};
    Rng rng(cfg.seed);
    if (cfg.model == Model::sos_elliptic) {
        if (!cfg.z.empty() || !cfg.w.empty())
            throw InvalidParameter("--z/--w apply to the trigonometric models; use --u/--v");
        p.ctx.emplace(cfg.tau);
        p.ell.u = explicit_or_drawn(cfg.u, n, rng, "u");
        p.ell.v = explicit_or_drawn(cfg.v, n, rng, "v");
        p.ell.lambda = cfg.lambda;
        p.ell.hbar = cfg.hbar;
        validate(*p.ctx, p.ell);
        return p;
    }
    if ((!cfg.u.empty() && !cfg.z.empty()) || (!cfg.v.empty() && !cfg.w.empty()))
        throw InvalidParameter("give either --u/--v or --z/--w, not both");
    p.trig.z = cfg.z.empty() ? exp_2pi_i(explicit_or_drawn(cfg.u, n, rng, "u"))
                             : explicit_or_drawn(cfg.z, n, rng, "z");
    p.trig.w = cfg.w.empty() ? exp_2pi_i(explicit_or_drawn(cfg.v, n, rng, "v"))
                             : explicit_or_drawn(cfg.w, n, rng, "w");
    p.trig.q = cfg.q;
    if (cfg.model == Model::sos_trig)
        p.trig.mu = cfg.mu.value_or(std::exp(2.0 * pi * I * cfg.lambda));
    validate(p.trig);
    return p;
}

struct RouteResult
{
    Route route;
    cplx value;
    double time_ms;
    std::uint64_t terms;
};

RouteResult run_route(const Problem& p, Route r, bool parallel, std::vector<std::string>& warnings)
{
    const EnumerateOptions eopts{default_enumeration_cap, parallel};
    const SumOptions sopts{default_permutation_cap, parallel};
    const std::size_t n = p.n;
    const auto t0 = Clock::now();
    cplx value{};
    std::uint64_t terms = 0;
    switch (r) {
    case Route::enumerate: {
        EnumerationResult res;
        if (p.model == Model::sos_elliptic)
            res = enumerate_sos_detailed(*p.ctx, p.ell, eopts);
        else if (p.model == Model::sos_trig)
            res = enumerate_trig_sos_detailed(p.trig, eopts);
        else
            res = enumerate_6v_detailed(p.trig, eopts);
        value = res.value;
        terms = res.configurations;
        break;
    }
    case Route::transfer:
        if (p.model == Model::sos_elliptic)
            value = column_transfer_z(*p.ctx, p.ell);
        else if (p.model == Model::sos_trig)
            value = column_transfer_dwbc(n, trig_sos_weights(p.trig));
        else
            value = column_transfer_dwbc(n, six_vertex_weights(p.trig));
        terms = static_cast<std::uint64_t>(n * n) << n;
        break;
    case Route::sum:
        if (p.model == Model::sos_elliptic)
            value = z_sos_elliptic(*p.ctx, p.ell, sopts);
        else if (p.model == Model::sos_trig)
            value = z_trig_sos(p.trig, sopts);
        else
            value = z_6v_sum(p.trig, sopts);
        terms = factorial(n);
        break;
    case Route::determinant:
        if (p.model != Model::six_vertex)
            throw InvalidParameter("route determinant is only available for model six-vertex");
        value = z_izergin(p.trig, &warnings);
        terms = static_cast<std::uint64_t>(n * n * n);
        break;
    case Route::all:
        throw InvalidParameter("route all is not a single route");
    }
    return {r, value, ms_since(t0), terms};
}

json config_json(const RunConfig& cfg, const Problem* p)
{
    json c;
    c["command"] = to_string(cfg.command);
    if (cfg.command == Command::check)
        c["suite"] = cfg.suite;
    c["model"] = to_string(cfg.model);
    c["route"] = to_string(cfg.route);
    c["n"] = cfg.n;
    c["seed"] = cfg.seed;
    if (p && p->model == Model::sos_elliptic) {
        c["u"] = to_json(p->ell.u);
        c["v"] = to_json(p->ell.v);
    } else if (p) {
        c["z"] = to_json(p->trig.z);
        c["w"] = to_json(p->trig.w);
    }
    c["tau"] = to_json(cfg.tau);
    c["lambda"] = to_json(cfg.lambda);
    c["hbar"] = to_json(cfg.hbar);
    c["q"] = to_json(cfg.q);
    c["mu"] = to_json(cfg.mu.value_or(std::exp(2.0 * pi * I * cfg.lambda)));
    c["tolerance"] = cfg.tolerance;
    c["format"] = cfg.format == Format::json ? "json" : "text";
    c["parallel"] = cfg.parallel;
    return c;
}

json empty_report(const RunConfig& cfg, const Problem* p)
{
    json r;
    r["command"] = to_string(cfg.command);
    r["config"] = config_json(cfg, p);
    r["results"] = json::array();
    r["comparisons"] = json::array();
    r["verdict"] = "pass";
    r["residuals"] = json::object();
    return r;
}

// ---------------------------------------------------------------------------
// compute

int cmd_compute(const RunConfig& cfg, std::ostream& out)
{
    const Problem p = make_problem(cfg, cfg.n);
    std::vector<Route> routes;
    std::vector<std::pair<Route, std::string>> skipped;
    if (cfg.route == Route::all) {
        for (Route r : routes_of(cfg.model)) {
            if (cfg.n > cap_of(r)) {
                std::ostringstream os;
                os << "n = " << cfg.n << " exceeds size cap " << cap_of(r);
                skipped.emplace_back(r, os.str());
            } else {
                routes.push_back(r);
            }
        }
    } else {
        if (cfg.route == Route::determinant && cfg.model != Model::six_vertex)
            throw InvalidParameter("route determinant is only available for model six-vertex");
        routes.push_back(cfg.route);
    }

    std::vector<std::string> warnings;
    std::vector<RouteResult> results;
    for (Route r : routes)
        results.push_back(run_route(p, r, cfg.parallel, warnings));

    json report = empty_report(cfg, &p);
    bool pass = true;
    for (const auto& res : results)
        report["results"].push_back(
            {{"route", to_string(res.route)}, {"value", to_json(res.value)}, {"time_ms", res.time_ms}});
    for (std::size_t a = 0; a < results.size(); ++a)
        for (std::size_t b = a + 1; b < results.size(); ++b) {
            const double d = relative_difference(results[a].value, results[b].value);
            pass = pass && d < cfg.tolerance;
            report["comparisons"].push_back({{"a", to_string(results[a].route)},
                                             {"b", to_string(results[b].route)},
                                             {"rel_diff", d}});
        }
    report["verdict"] = pass ? "pass" : "fail";
    if (!skipped.empty()) {
        json s = json::array();
        for (const auto& [r, why] : skipped)
            s.push_back({{"route", to_string(r)}, {"reason", why}});
        report["skipped"] = s;
    }
    if (!warnings.empty())
        report["warnings"] = warnings;

    if (cfg.format == Format::json) {
        out << report.dump(2) << '\n';
    } else {
        out << "model " << to_string(cfg.model) << "  n = " << cfg.n << "\n";
        for (const auto& res : results) {
            char line[160];
            std::snprintf(line, sizeof line, "  %-12s %s  %10.3f ms\n", to_string(res.route).c_str(),
                          format_complex(res.value).c_str(), res.time_ms);
            out << line;
        }
        for (const auto& [r, why] : skipped)
            out << "  " << to_string(r) << " skipped: " << why << "\n";
        for (const auto& c : report["comparisons"]) {
            char line[160];
            std::snprintf(line, sizeof line, "  %s vs %s: rel diff %.3e\n",
                          c["a"].get<std::string>().c_str(), c["b"].get<std::string>().c_str(),
                          c["rel_diff"].get<double>());
            out << line;
        }
        for (const auto& wmsg : warnings)
            out << "  warning: " << wmsg << "\n";
        out << "verdict: " << (pass ? "pass" : "fail") << "\n";
    }
    return pass ? exit_pass : exit_tolerance_failure;
}

// ---------------------------------------------------------------------------
// check

struct Residual
{
    std::string name;
    double value;
    double tolerance;
};

using Suite = std::function<std::vector<Residual>(const RunConfig&)>;

EllipticParams elliptic_params(const RunConfig& cfg, std::size_t n)
{
    RunConfig c = cfg;
    c.model = Model::sos_elliptic;
    c.z.clear();
    c.w.clear();
    return make_problem(c, n).ell;
}

double max_rel_entries(const RMatrix4& a, const RMatrix4& b)
{
    return a.max_abs_difference(b) / std::max(a.max_abs(), b.max_abs());
}

std::vector<std::size_t> draw_permutation(Rng& rng, std::size_t n)
{
    std::vector<std::size_t> perm(n);
    for (std::size_t k = 0; k < n; ++k)
        perm[k] = k;
    for (std::size_t k = n; k > 1; --k)
        std::swap(perm[k - 1], perm[rng.next_u64() % k]);
    return perm;
}

std::vector<Residual> suite_symmetry(const RunConfig& cfg)
{
    const ThetaContext ctx(cfg.tau);
    const EllipticParams p = elliptic_params(cfg, cfg.n);
    const cplx z = z_sos_elliptic(ctx, p);
    Rng rng(cfg.seed ^ 0x5111);
    double du = 0.0, dv = 0.0;
    for (int k = 0; k < 10; ++k) {
        const auto pu = draw_permutation(rng, cfg.n);
        const auto pv = draw_permutation(rng, cfg.n);
        EllipticParams a = p, b = p;
        for (std::size_t m = 0; m < cfg.n; ++m) {
            a.u[m] = p.u[pu[m]];
            b.v[m] = p.v[pv[m]];
        }
        du = std::max(du, relative_difference(z, z_sos_elliptic(ctx, a)));
        dv = std::max(dv, relative_difference(z, z_sos_elliptic(ctx, b)));
    }
    return {{"symmetry_u", du, cfg.tolerance}, {"symmetry_v", dv, cfg.tolerance}};
}

std::vector<Residual> suite_recursion(const RunConfig& cfg)
{
    if (cfg.n < 2)
        throw InvalidParameter("check recursion: requires n >= 2");
    const ThetaContext ctx(cfg.tau);
    EllipticParams p = elliptic_params(cfg, cfg.n);
    p.u[cfg.n - 1] = p.v[cfg.n - 1] - p.hbar;
    EllipticParams sub = p;
    sub.u.pop_back();
    sub.v.pop_back();
    const double d = relative_difference(z_sos_elliptic(ctx, p),
                                         recursion_factor(ctx, p) * z_sos_elliptic(ctx, sub));
    return {{"recursion", d, cfg.tolerance}};
}

std::vector<Residual> suite_character(const RunConfig& cfg)
{
    const ThetaContext ctx(cfg.tau);
    const EllipticParams p = elliptic_params(cfg, cfg.n);
    cplx sum_u{}, sum_v{};
    for (std::size_t k = 0; k < cfg.n; ++k) {
        sum_u += p.u[k];
        sum_v += p.v[k];
    }
    // Membership is invariant under scaling; unit scale keeps the
    // max(1, |f|) normalisation meaningful.
    const double scale = std::abs(z_sos_elliptic(ctx, p));
    if (scale == 0.0)
        throw DegenerateParameter("check character: partition function vanishes at the base point");
    const int deg = static_cast<int>(cfg.n);
    double ru = 0.0, rv = 0.0;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        auto in_u = [&, i](cplx x) {
            EllipticParams q = p;
            q.u[i] = x;
            return z_sos_elliptic(ctx, q) / scale;
        };
        auto in_v = [&, i](cplx x) {
            EllipticParams q = p;
            q.v[i] = x;
            return z_sos_elliptic(ctx, q) / scale;
        };
        ru = std::max(ru, membership_residual(ctx, in_u, Character::from_alpha(deg, p.lambda + sum_v),
                                              default_membership_samples, cfg.seed));
        rv = std::max(rv, membership_residual(ctx, in_v, Character::from_alpha(deg, -p.lambda + sum_u),
                                              default_membership_samples, cfg.seed));
    }
    return {{"character_u", ru, cfg.tolerance}, {"character_v", rv, cfg.tolerance}};
}

std::vector<Residual> suite_dybe(const RunConfig& cfg)
{
    const ThetaContext ctx(cfg.tau);
    Rng rng(cfg.seed ^ 0xdbe);
    double ell = 0.0, trig = 0.0, ybe = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        const auto t = rng.spectral(3);
        ell = std::max(ell, dybe_residual(ctx, t[0], t[1], t[2], cfg.lambda, cfg.hbar));
        const auto z = exp_2pi_i(t);
        const cplx mu = cfg.mu.value_or(std::exp(2.0 * pi * I * cfg.lambda));
        trig = std::max(trig, trig_dybe_residual(z[0], z[1], z[2], mu, cfg.q));
        ybe = std::max(ybe, trig_nondyn_ybe_residual(z[0], z[1], z[2], cfg.q));
    }
    return {{"dybe_elliptic", ell, cfg.tolerance},
            {"dybe_trig", trig, cfg.tolerance},
            {"ybe_nondynamical", ybe, cfg.tolerance}};
}

std::vector<Residual> suite_degeneration(const RunConfig& cfg)
{
    const ThetaContext far(cplx{0.0, 40.0});
    const cplx big_mu = 1e8;
    RunConfig c = cfg;
    c.tau = far.tau();
    const EllipticParams p = elliptic_params(c, cfg.n);
    const TrigParams t = to_multiplicative(p);
    const cplx q = t.q;

    double r_ell = 0.0, r_mu = 0.0, r_gauge = 0.0;
    for (std::size_t i = 0; i < cfg.n; ++i)
        for (std::size_t j = 0; j < cfg.n; ++j) {
            const cplx u = p.u[i], v = p.v[j], z = t.z[i], w = t.w[j];
            const RMatrix4 ell = sos_rmatrix(far, u - v, p.lambda, p.hbar)
                                     .scaled(2.0 * pi * I * std::exp(pi * I * (u + v)));
            r_ell = std::max(r_ell, max_rel_entries(ell, trig_sos_rmatrix(z, w, *t.mu, q)));
            r_mu = std::max(r_mu, max_rel_entries(trig_sos_rmatrix(z, w, big_mu, q),
                                                  trig_nondyn_rmatrix(z, w, q)));
            r_gauge = std::max(r_gauge, max_rel_entries(gauge_rescale(trig_nondyn_rmatrix(z, w, q), 1.0 / q),
                                                        sixv_rmatrix(z, w, q)));
        }

    cplx factor = 1.0;
    for (auto uk : p.u)
        for (auto vj : p.v)
            factor *= 2.0 * pi * I * std::exp(pi * I * (uk + vj));
    const double z_ell = relative_difference(factor * z_sos_elliptic(far, p), z_trig_sos(t));
    TrigParams big = t;
    big.mu = big_mu;
    const double z_mu = relative_difference(z_trig_sos(big), z_6v_sum(t));

    const ThetaContext ctx(cfg.tau);
    const EllipticParams pe = elliptic_params(cfg, cfg.n);
    Rng rng(cfg.seed ^ 0x6a06e);
    const cplx rho = rng.complex_box(0.5, 2.0, -1.0, 1.0);
    const auto base = elliptic_sos_weights(ctx, pe);
    const cplx plain = enumerate_dwbc(cfg.n, base).value;
    const cplx gauged = enumerate_dwbc(cfg.n, [&](std::size_t i, std::size_t j, int h) {
                            return gauge_rescale(base(i, j, h), rho);
                        }).value;

    return {{"rmatrix_elliptic_to_trig", r_ell, proxy_tolerance},
            {"rmatrix_trig_to_nondynamical", r_mu, proxy_tolerance},
            {"rmatrix_nondynamical_to_six_vertex", r_gauge, proxy_tolerance},
            {"z_elliptic_to_trig", z_ell, proxy_tolerance},
            {"z_trig_to_six_vertex", z_mu, proxy_tolerance},
            {"gauge_invariance", relative_difference(plain, gauged), cfg.tolerance}};
}

std::vector<Residual> suite_appendix(const RunConfig& cfg)
{
    const ThetaContext ctx(cfg.tau);
    Rng rng(cfg.seed ^ 0xa99);
    const std::size_t n = cfg.n;
    auto cell = [&] { return rng.uniform(-0.5, 0.5) + rng.uniform(-0.5, 0.5) * ctx.tau(); };
    auto cells = [&](std::size_t k) {
        std::vector<cplx> xs(k);
        for (auto& x : xs)
            x = cell();
        return xs;
    };

    std::vector<cplx> zeros = cells(n);
    cplx alpha{};
    for (auto a : zeros)
        alpha += a;
    const auto nodes = cells(n);
    std::vector<cplx> values;
    double scale = 0.0;
    for (auto x : nodes) {
        values.push_back(theta_product_poly(ctx, zeros, x));
        scale = std::max(scale, std::abs(values.back()));
    }
    double r_interp = 0.0;
    for (int s = 0; s < 20; ++s) {
        const cplx u = cell();
        const cplx direct = theta_product_poly(ctx, zeros, u);
        r_interp = std::max(r_interp, std::abs(direct - interpolate(ctx, nodes, values, alpha, u)) /
                                          std::max(std::abs(direct), scale));
    }

    std::vector<cplx> lambdas;
    for (std::size_t k = 0; k < n; ++k)
        lambdas.push_back(rng.complex_box(0.05, 0.2, -0.05, 0.05));
    const double r_add = addition_formula_residual(ctx, lambdas, rng.spectral(n), rng.spectral());

    double r_qj = 0.0;
    if (n >= 2) {
        const auto us = rng.spectral(n);
        for (std::size_t j = 2; j <= n; ++j)
            r_qj = std::max(r_qj,
                            qj_interpolation_residual(ctx, us, cfg.lambda, cfg.hbar, j, rng.spectral()));
    }

    std::vector<ComplexFunction> basis;
    for (std::size_t b = 0; b < n; ++b) {
        auto zs = cells(n);
        cplx partial{};
        for (std::size_t k = 0; k + 1 < n; ++k)
            partial += zs[k];
        zs[n - 1] = alpha - partial;
        basis.push_back([&ctx, zs](cplx x) { return theta_product_poly(ctx, zs, x); });
    }
    const cplx c1 = vandermonde_ratio(ctx, basis, cells(n), alpha);
    const cplx c2 = vandermonde_ratio(ctx, basis, cells(n), alpha);

    std::vector<Residual> out{{"interpolation", r_interp, cfg.tolerance},
                              {"addition_formula", r_add, cfg.tolerance}};
    if (n >= 2)
        out.push_back({"qj_interpolation", r_qj, cfg.tolerance});
    out.push_back({"vandermonde_constancy", relative_difference(c1, c2), 1e-8});
    return out;
}

const std::map<std::string, Suite>& suites()
{
    static const std::map<std::string, Suite> s{
        {"symmetry", suite_symmetry},       {"recursion", suite_recursion},
        {"character", suite_character},     {"dybe", suite_dybe},
        {"degeneration", suite_degeneration}, {"appendix", suite_appendix},
    };
    return s;
}

int cmd_check(const RunConfig& cfg, std::ostream& out)
{
    std::vector<Residual> residuals;
    if (cfg.suite == "all") {
        for (const char* name : {"symmetry", "recursion", "character", "dybe", "degeneration", "appendix"}) {
            if (std::string(name) == "recursion" && cfg.n < 2)
                continue;
            for (auto& r : suites().at(name)(cfg))
                residuals.push_back(r);
        }
    } else {
        const auto it = suites().find(cfg.suite);
        if (it == suites().end())
            throw InvalidParameter("unknown check suite '" + cfg.suite + "'");
        residuals = it->second(cfg);
    }

    bool pass = true;
    json report = empty_report(cfg, nullptr);
    json verdicts = json::object();
    for (const auto& r : residuals) {
        const bool ok = r.value < r.tolerance;
        pass = pass && ok;
        report["residuals"][r.name] = r.value;
        verdicts[r.name] = {{"tolerance", r.tolerance}, {"pass", ok}};
    }
    report["verdict"] = pass ? "pass" : "fail";
    report["checks"] = verdicts;

    if (cfg.format == Format::json) {
        out << report.dump(2) << '\n';
    } else {
        out << "check " << cfg.suite << "  n = " << cfg.n << "  seed = " << cfg.seed << "\n";
        for (const auto& r : residuals) {
            char line[160];
            std::snprintf(line, sizeof line, "  %-36s %.3e  (tol %.0e)  %s\n", r.name.c_str(), r.value,
                          r.tolerance, r.value < r.tolerance ? "pass" : "FAIL");
            out << line;
        }
        out << "verdict: " << (pass ? "pass" : "fail") << "\n";
    }
    return pass ? exit_pass : exit_tolerance_failure;
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(const RunConfig& cfg, std::ostream& out)
{
    std::vector<Route> routes =
        cfg.route == Route::all ? routes_of(cfg.model) : std::vector<Route>{cfg.route};
    if (cfg.route == Route::determinant && cfg.model != Model::six_vertex)
        throw InvalidParameter("route determinant is only available for model six-vertex");

    struct Row
    {
        std::size_t n;
        RouteResult res;
    };
    std::vector<Row> rows;
    std::vector<std::string> warnings;
    for (std::size_t n = 1; n <= cfg.n; ++n) {
        RunConfig c = cfg;
        c.u.clear();
        c.v.clear();
        c.z.clear();
        c.w.clear();
        const Problem p = make_problem(c, n);
        for (Route r : routes)
            if (n <= cap_of(r))
                rows.push_back({n, run_route(p, r, cfg.parallel, warnings)});
    }

    std::optional<std::size_t> crossover;
    for (std::size_t n = 1; n <= cfg.n && !crossover; ++n) {
        double t_sum = -1.0, t_det = -1.0;
        for (const auto& row : rows)
            if (row.n == n) {
                if (row.res.route == Route::sum)
                    t_sum = row.res.time_ms;
                if (row.res.route == Route::determinant)
                    t_det = row.res.time_ms;
            }
        if (t_sum >= 0.0 && t_det >= 0.0 && t_det < t_sum)
            crossover = n;
    }

    if (cfg.format == Format::json) {
        json report = empty_report(cfg, nullptr);
        for (const auto& row : rows)
            report["results"].push_back({{"route", to_string(row.res.route)},
                                         {"n", row.n},
                                         {"value", to_json(row.res.value)},
                                         {"time_ms", row.res.time_ms},
                                         {"terms", row.res.terms}});
        if (crossover)
            report["crossover_n"] = *crossover;
        out << report.dump(2) << '\n';
    } else {
        out << "bench " << to_string(cfg.model) << "  n = 1.." << cfg.n << "\n";
        out << "  route         n        terms      time_ms\n";
        for (const auto& row : rows) {
            char line[160];
            std::snprintf(line, sizeof line, "  %-12s %2zu %12llu %12.4f\n",
                          to_string(row.res.route).c_str(), row.n,
                          static_cast<unsigned long long>(row.res.terms), row.res.time_ms);
            out << line;
        }
        if (crossover)
            out << "  determinant faster than sum from n = " << *crossover << "\n";
    }
    return exit_pass;
}

// ---------------------------------------------------------------------------
// Command line

struct RawOptions
{
    std::string model = "sos-elliptic";
    std::string route = "all";
    std::string format = "text";
    std::string tau = "i", lambda = "0.31", hbar = "0.17", q = "1.3", mu;
    std::vector<std::string> u, v, z, w;
};

void add_common_options(CLI::App& sub, RunConfig& cfg, RawOptions& raw)
{
    sub.add_option("--model", raw.model, "sos-elliptic | sos-trig | six-vertex")
        ->check(CLI::IsMember({"sos-elliptic", "sos-trig", "six-vertex"}));
    sub.add_option("--route", raw.route, "enumerate | transfer | sum | determinant | all")
        ->check(CLI::IsMember({"enumerate", "transfer", "sum", "determinant", "all"}));
    sub.add_option("--n", cfg.n, "lattice size (bench: largest size)")->check(CLI::PositiveNumber);
    sub.add_option("--seed", cfg.seed, "seed for generated spectral parameters");
    sub.add_option("--u", raw.u, "additive spectral parameters u_1..u_n");
    sub.add_option("--v", raw.v, "additive spectral parameters v_1..v_n");
    sub.add_option("--z", raw.z, "multiplicative parameters z_1..z_n (trigonometric models)");
    sub.add_option("--w", raw.w, "multiplicative parameters w_1..w_n (trigonometric models)");
    sub.add_option("--tau", raw.tau, "modular parameter, Im tau > 0");
    sub.add_option("--lambda", raw.lambda, "dynamical parameter");
    sub.add_option("--hbar", raw.hbar, "anisotropy");
    sub.add_option("--q", raw.q, "multiplicative anisotropy (trigonometric models)");
    sub.add_option("--mu", raw.mu, "multiplicative dynamical parameter (default exp(2 pi i lambda))");
    sub.add_option("--tolerance", cfg.tolerance, "relative tolerance for formula comparisons")
        ->check(CLI::PositiveNumber);
    sub.add_option("--format", raw.format, "text | json")->check(CLI::IsMember({"text", "json"}));
    sub.add_flag("--parallel", cfg.parallel, "evaluate enumeration and permutation sums concurrently");
}

void finalize(RunConfig& cfg, const RawOptions& raw)
{
    static const std::map<std::string, Model> models{{"sos-elliptic", Model::sos_elliptic},
                                                     {"sos-trig", Model::sos_trig},
                                                     {"six-vertex", Model::six_vertex}};
    static const std::map<std::string, Route> routes{{"enumerate", Route::enumerate},
                                                     {"transfer", Route::transfer},
                                                     {"sum", Route::sum},
                                                     {"determinant", Route::determinant},
                                                     {"all", Route::all}};
    cfg.model = models.at(raw.model);
    cfg.route = routes.at(raw.route);
    cfg.format = raw.format == "json" ? Format::json : Format::text;
    cfg.tau = parse_complex(raw.tau);
    cfg.lambda = parse_complex(raw.lambda);
    cfg.hbar = parse_complex(raw.hbar);
    cfg.q = parse_complex(raw.q);
    if (!raw.mu.empty())
        cfg.mu = parse_complex(raw.mu);
    cfg.u = parse_complex_list(raw.u);
    cfg.v = parse_complex_list(raw.v);
    cfg.z = parse_complex_list(raw.z);
    cfg.w = parse_complex_list(raw.w);
    if (cfg.tau.imag() <= 0.0)
        throw InvalidParameter("τ must have positive imaginary part");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Domain-wall partition functions of the elliptic SOS and six-vertex models", "dwbc"};
    app.require_subcommand(1);
    RunConfig cfg;
    RawOptions raw;

    auto* compute = app.add_subcommand("compute", "evaluate partition-function routes");
    auto* check = app.add_subcommand("check", "run a verification suite");
    auto* bench = app.add_subcommand("bench", "time each route over n = 1..N");
    check->add_option("suite", cfg.suite,
                      "symmetry | recursion | character | dybe | degeneration | appendix | all")
        ->check(CLI::IsMember(
            {"symmetry", "recursion", "character", "dybe", "degeneration", "appendix", "all"}));
    for (auto* sub : {compute, check, bench})
        add_common_options(*sub, cfg, raw);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_parameter_error;
    }

    try {
        finalize(cfg, raw);
        if (compute->parsed()) {
            cfg.command = Command::compute;
            return cmd_compute(cfg, out);
        }
        if (check->parsed()) {
            cfg.command = Command::check;
            return cmd_check(cfg, out);
        }
        cfg.command = Command::bench;
        return cmd_bench(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_parameter_error;
    }
}

} // namespace dwbc::cli
