#include "gl3twist/harness.hpp"

#include "gl3twist/bump.hpp"
#include "gl3twist/characters.hpp"
#include "gl3twist/expsums.hpp"
#include "gl3twist/oscillatory.hpp"
#include "gl3twist/parallel.hpp"
#include "gl3twist/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gl3twist {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (double x : xs) out += (out.empty() ? "" : ",") + num(x);
    return out;
}

std::string join(const std::vector<std::pair<i64, i64>>& xs) {
    std::string out;
    for (const auto& [a, b] : xs) out += (out.empty() ? "" : ",") + std::to_string(a) + ":" + std::to_string(b);
    return out;
}

void require_tolerance(double tol, const char* what) {
    if (!(tol >= kToleranceFloor)) throw std::invalid_argument(std::string(what) + " below the tolerance floor 1e-15");
}

void require_nonempty(bool empty, const char* what) {
    if (empty) throw std::invalid_argument(std::string(what) + " is empty");
}

CheckRecord bound_record(std::string check, std::string params, double value, double reference, double cap) {
    const double c = value / reference;
    return {std::move(check), std::move(params), value, reference, c, cap, c, c <= cap};
}

CheckRecord residual_record(std::string check, std::string params, double value, double reference, double residual,
                            double tol) {
    return {std::move(check), std::move(params), value, reference, residual, tol, std::nullopt, residual <= tol};
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

void require_prime_pair(i64 M1, i64 M2) {
    if (!is_prime(M1) || !is_prime(M2) || M1 == M2 || M1 < 3 || M2 < 3)
        throw std::invalid_argument("moduli must be distinct odd primes");
}

}  // namespace

std::shared_ptr<const CoefficientOracle> named_oracle(const std::string& name) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const CoefficientOracle>> cache;
    const std::lock_guard lock(mu);
    if (auto it = cache.find(name); it != cache.end()) return it->second;
    std::shared_ptr<const CoefficientOracle> o;
    if (name == "d3")
        o = std::make_shared<const CoefficientOracle>(CoefficientOracle::d3());
    else if (name == "sym2")
        o = std::make_shared<const CoefficientOracle>(CoefficientOracle::sym2_delta());
    else
        throw std::invalid_argument("unknown oracle '" + name + "' (expected d3 or sym2)");
    return cache[name] = o;
}

// ---------------------------------------------------------------- delta

Report delta_verify(const DeltaSettings& s) {
    require_tolerance(s.tol, "tol");
    require_nonempty(s.Q.empty(), "Q");
    if (s.nmax < 0) throw std::invalid_argument("nmax must be non-negative");
    Report rep{"delta-verify", {{"nmax", std::to_string(s.nmax)}, {"Q", join(s.Q)}, {"tol", num(s.tol)}}, {}, {}};
    const Stopwatch clock;
    for (double Q : s.Q) {
        double worst = -1.0, value = 0.0;
        i64 at = 0;
        for (i64 n = -s.nmax; n <= s.nmax; ++n) {
            const double v = delta_eval(n, Q);
            const double err = std::max(std::abs(v - (n == 0 ? 1.0 : 0.0)), std::abs(v - delta_eval(-n, Q)));
            if (err > worst) worst = err, value = v, at = n;
        }
        rep.checks.push_back(residual_record("pipeline.delta_eval",
                                             "Q=" + num(Q) + ";nmax=" + std::to_string(s.nmax) +
                                                 ";worst_n=" + std::to_string(at),
                                             value, at == 0 ? 1.0 : 0.0, worst, s.tol));
    }
    rep.timings.emplace_back("total", clock.seconds());
    return rep;
}

// ---------------------------------------------------------------- character sums

Report charsum_verify(const CharsumSettings& s) {
    require_tolerance(s.tol, "tol");
    require_tolerance(s.gauss_tol, "gauss_tol");
    require_prime_pair(s.M1, s.M2);
    if (s.qmax < 1 || s.qmax > 40) throw std::invalid_argument("qmax must lie in [1, 40]");
    Report rep{"charsum-verify",
               {{"M1", std::to_string(s.M1)},
                {"M2", std::to_string(s.M2)},
                {"qmax", std::to_string(s.qmax)},
                {"tol", num(s.tol)},
                {"gauss_tol", num(s.gauss_tol)},
                {"cstar_cap", num(s.cstar_cap)}},
               {},
               {}};
    const Stopwatch clock;
    const i64 M1 = s.M1, M2 = s.M2;

    for (i64 M : {M1, M2}) {
        double worst = 0.0, value = 0.0;
        for (i64 idx = 1; idx < M - 1; ++idx) {
            const double g = std::abs(gauss_sum(make_character(M, idx)).value());
            if (std::abs(g - std::sqrt(double(M))) >= worst) worst = std::abs(g - std::sqrt(double(M))), value = g;
        }
        rep.checks.push_back(residual_record("characters.gauss_sum", "M=" + std::to_string(M), value,
                                             std::sqrt(double(M)), worst, s.gauss_tol));
    }

    {
        double worst = 0.0, value = 0.0, reference = 0.0;
        for (i64 i1 = 1; i1 < M1 - 1; ++i1) {
            const auto chi1 = make_character(M1, i1);
            const auto chi2 = make_character(M2, 1 + (i1 % (M2 - 2)));
            for (i64 q = 1; q <= s.qmax; ++q) {
                const i64 qM1 = q * M1;
                for (i64 a = 1; a <= qM1; ++a) {
                    if (std::gcd(a, qM1) != 1) continue;
                    const i64 abar = mod_inverse(a, qM1);
                    for (i64 r : {-2, 0, 1, 3})
                        for (i64 off : {0, 1})
                            for (i64 n = 1; n <= M1; ++n) {
                                const CharSumParams p{a, 1, M2 * abar + r * qM1 + off, n, q, chi1, chi2};
                                const cplx brute = script_E_bruteforce(p), closed = script_E_closed(p);
                                if (rel(closed, brute) >= worst)
                                    worst = rel(closed, brute), value = std::abs(closed), reference = std::abs(brute);
                            }
                }
            }
        }
        rep.checks.push_back(residual_record("expsums.script_E_closed",
                                             "M1=" + std::to_string(M1) + ";M2=" + std::to_string(M2) +
                                                 ";qmax=" + std::to_string(s.qmax),
                                             value, reference, worst, s.tol));
    }

    {
        double worst = 0.0, value = 0.0, reference = 0.0;
        const auto chi1 = make_character(M1, 1);
        const auto chi2 = make_character(M2, M2 - 2);
        for (i64 q = 1; q <= s.qmax; ++q) {
            if (q % M1 == 0) continue;
            for (i64 a = 1; a <= q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                const i64 abar = mod_inverse(a, q);
                for (i64 b = 1; b < M1; ++b)
                    for (i64 r : {-1, 0, 2, 7})
                        for (i64 off : {0, 1}) {
                            const CharSumParams p{a, b, M2 * abar + r * q + off, 1, q, chi1, chi2};
                            const cplx brute = script_D_bruteforce(p), closed = script_D_closed(p);
                            if (rel(closed, brute) >= worst)
                                worst = rel(closed, brute), value = std::abs(closed), reference = std::abs(brute);
                        }
            }
        }
        rep.checks.push_back(residual_record("expsums.script_D_closed",
                                             "M1=" + std::to_string(M1) + ";M2=" + std::to_string(M2) +
                                                 ";qmax=" + std::to_string(s.qmax),
                                             value, reference, worst, s.tol));
    }

    {
        const i64 qc = std::min<i64>(s.qmax, 10);
        const auto chi1 = make_character(M1, 1);
        double vanish = 0.0, worst0 = 0.0, worst = 0.0;
        for (i64 q = 1; q <= qc; ++q) {
            if (q % M1 == 0) continue;
            for (i64 qp = 1; qp <= qc; ++qp) {
                if (qp % M1 == 0) continue;
                for (i64 n1 : divisors(std::gcd(q, qp))) {
                    const i64 a = q == 1 ? 1 : q - 1, ap = 1;
                    for (auto [m, mp] : {std::pair<i64, i64>{1, 1}, {-1, 2}, {4, -3}}) {
                        const CStarParams p{n1, m, mp, a, ap, q, qp, M2, chi1};
                        const cplx zero = script_C_star(0, p);
                        const double env0 = script_C_star_envelope(0, p);
                        if (q / n1 != qp / n1 || env0 == 0.0)
                            vanish = std::max(vanish, std::abs(zero));
                        else
                            worst0 = std::max(worst0, std::abs(zero) / env0);
                        for (i64 n2 : {1, -1, 2, 5, 12})
                            worst = std::max(worst, std::abs(script_C_star(n2, p)) / script_C_star_envelope(n2, p));
                    }
                }
            }
        }
        const std::string params = "M1=" + std::to_string(M1) + ";M2=" + std::to_string(M2) + ";qmax=" + std::to_string(qc);
        rep.checks.push_back(residual_record("expsums.script_C_star.vanishing", params, vanish, 0.0, vanish, s.tol));
        rep.checks.push_back({"expsums.script_C_star.zero_frequency", params, worst0, 1.0, worst0, s.cstar_cap, worst0,
                              worst0 <= s.cstar_cap});
        rep.checks.push_back({"expsums.script_C_star.envelope", params, worst, 1.0, worst, s.cstar_cap, worst,
                              worst <= s.cstar_cap});
    }
    rep.timings.emplace_back("total", clock.seconds());
    return rep;
}

// ---------------------------------------------------------------- gamma factors

Report gamma_verify(const GammaSettings& s) {
    require_nonempty(s.sigma.empty(), "sigma");
    const auto arch = ArchimedeanParams::spherical({0.0, 0.0, 0.0});
    const bool two_e = s.normalization == PsiNormalization::TwoE;
    Report rep{"gamma-verify",
               {{"sigma", join(s.sigma)},
                {"exponent_tol", num(s.exponent_tol)},
                {"slope_tol", num(s.slope_tol)},
                {"cap", num(s.cap)},
                {"normalization", two_e ? "2e" : "e"}},
               {},
               {}};
    const Stopwatch clock;
    for (double sigma : s.sigma)
        for (int side : {+1, -1}) {
            std::vector<double> x, y;
            for (double tau = 25.0; tau <= 50.0; tau += 1.0) {
                x.push_back(tau);
                y.push_back(std::abs(gamma_pm({sigma, side * tau}, -side, arch)));
            }
            const double slope = loglog_slope(x, y), expected = 3.0 * (sigma + 0.5);
            rep.checks.push_back(residual_record("special.gamma_pm.growth_exponent",
                                                 "sigma=" + num(sigma) + ";side=" + std::to_string(side) +
                                                     ";tau=25..50",
                                                 slope, expected, std::abs(slope - expected), s.exponent_tol));
        }
    for (int side : {+1, -1}) {
        const int sign = -side;
        std::vector<double> x, y;
        double flat_lo = 1e300, flat_hi = 0.0, constant = 0.0;
        for (double tau = 5.0; tau <= 100.0; tau += 1.0) {
            const double d = std::abs(psi_derivative(side * tau, sign, arch, s.normalization));
            const double v = std::abs(psi_factor(side * tau, sign, arch, s.normalization));
            x.push_back(tau);
            y.push_back(d);
            flat_lo = std::min(flat_lo, v);
            flat_hi = std::max(flat_hi, v);
            constant = std::max(constant, d * tau);
        }
        const std::string params = "mu=0,0,0;side=" + std::to_string(side) + ";tau=5..100";
        const double slope = loglog_slope(x, y);
        rep.checks.push_back(
            residual_record("special.psi_derivative.slope", params, slope, -1.0, std::abs(slope + 1.0), s.slope_tol));
        rep.checks.push_back({"special.psi_derivative.envelope", params, constant, 1.0, constant, s.cap, constant,
                              constant <= s.cap});
        const double spread = flat_hi / flat_lo;
        rep.checks.push_back({"special.psi_factor.flatness", params, flat_hi, flat_lo, spread, 4.0, spread,
                              spread <= 4.0});
    }
    rep.timings.emplace_back("total", clock.seconds());
    return rep;
}

// ---------------------------------------------------------------- stationary phase

Report stationary_verify(const StationarySettings& s) {
    if (s.r.size() < 2) throw std::invalid_argument("r needs at least two values");
    for (double r : s.r)
        if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
    require_nonempty(s.T.empty(), "T");
    BumpFunction weight = s.weight == "U"   ? BumpFunction::U()
                          : s.weight == "W" ? BumpFunction::W()
                          : s.weight == "V" ? BumpFunction::V()
                                            : throw std::invalid_argument("weight must be U, W or V");
    Report rep{"stationary-verify",
               {{"r", join(s.r)},
                {"weight", s.weight},
                {"order1_tol", num(s.order1_tol)},
                {"order5_tol", num(s.order5_tol)},
                {"T", join(s.T)},
                {"cap", num(s.cap)}},
               {},
               {}};
    const Stopwatch clock;
    constexpr double x0 = 1.5;
    std::vector<double> betas, res1, res5;
    for (double r : s.r) {
        const double beta = kTwoPi * r * x0;
        const cplx sv{0.5, beta};
        const cplx exact = u_dagger(weight, r, sv);
        betas.push_back(beta);
        res1.push_back(std::abs(exact - u_dagger_main(weight, r, sv, 1)));
        res5.push_back(std::abs(exact - u_dagger_main(weight, r, sv, 5)));
    }
    const std::string params = "weight=" + s.weight + ";x0=1.5;sigma=0.5;r=" + join(s.r);
    const double s1 = loglog_slope(betas, res1), s5 = loglog_slope(betas, res5);
    rep.checks.push_back(
        residual_record("oscillatory.u_dagger_main.order1_rate", params, s1, -1.5, std::abs(s1 + 1.5), s.order1_tol));
    rep.checks.push_back(
        residual_record("oscillatory.u_dagger_main.order5_rate", params, s5, -2.5, std::abs(s5 + 2.5), s.order5_tol));

    const auto V = BumpFunction::V();
    for (double T : s.T) {
        OscillatoryIntegrand integrand;
        integrand.phase = [T](const Jet& v) { return T * (v - 1.0) * (v - 1.0); };
        integrand.amplitude = [&V](const Jet& v) { return V.eval(v + 0.5); };
        integrand.theta_f = T;
        integrand.omega_f = 1.0;
        integrand.omega_g = 0.1;
        const auto sp = stationary_phase(integrand, 0.0, 2.0);
        const cplx direct = integrate_integrand(integrand, 0.0, 2.0);
        rep.checks.push_back(bound_record("oscillatory.stationary_phase", "phase=T(v-1)^2;T=" + num(T),
                                          std::abs(direct - sp.value), sp.error_budget, s.cap));
    }
    rep.timings.emplace_back("total", clock.seconds());
    return rep;
}

// ---------------------------------------------------------------- Voronoi

Report voronoi_verify(const VoronoiSettings& s) {
    require_tolerance(s.tol, "tol");
    require_nonempty(s.cases.empty(), "cases");
    require_nonempty(s.N.empty(), "N");
    if (s.max_terms < 0) throw std::invalid_argument("max_terms must be non-negative");
    for (double N : s.N)
        if (!(N >= 10.0 && N <= 400.0)) throw BoxError("voronoi N must lie in [10, 400]");
    Report rep{"voronoi-verify",
               {{"cases", join(s.cases)},
                {"N", join(s.N)},
                {"max_terms", std::to_string(s.max_terms)},
                {"tol", num(s.tol)},
                {"sharpness", num(s.sharpness)}},
               {},
               {}};
    const Stopwatch clock;
    const auto o = CoefficientOracle::sym2_delta(1000);
    // One calibration for every case: q = 1, a = 1, N = 100 at full dual length.
    const auto base = voronoi_check(o, 1, 1, ScaledWeight{BumpFunction::V(s.sharpness), 100.0});
    const auto cal = calibrate(base);
    rep.checks.push_back(residual_record("gl3.calibrate", "q=1;a=1;N=100;arg_omega=" + num(std::arg(cal.omega)),
                                         cal.modulus, 1.0, std::abs(cal.modulus - 1.0), s.tol));
    for (double N : s.N)
        for (const auto& [q, a] : s.cases) {
            const auto r = voronoi_check(o, a, q, ScaledWeight{BumpFunction::V(s.sharpness), N}, s.max_terms);
            rep.checks.push_back(residual_record("gl3.voronoi_check",
                                                 "q=" + std::to_string(q) + ";a=" + std::to_string(a) + ";N=" +
                                                     num(N) + ";dual_cutoff=" + std::to_string(r.dual_cutoff),
                                                 std::abs(r.lhs), std::abs(r.rhs), r.relative_error(cal.omega),
                                                 s.tol));
        }
    rep.timings.emplace_back("total", clock.seconds());
    return rep;
}

// ---------------------------------------------------------------- Poisson

Report poisson_verify(const PoissonSettings& s) {
    require_tolerance(s.tol, "tol");
    if (!(s.scale >= 10.0 && s.scale <= 1e5)) throw BoxError("poisson scale must lie in [10, 1e5]");
    Report rep{"poisson-verify", {{"scale", num(s.scale)}, {"tol", num(s.tol)}}, {}, {}};
    const Stopwatch clock;
    const auto U = BumpFunction::U();
    for (i64 idx : {0, 1, 2}) {
        const DirichletCharacter chi(5, idx);
        PoissonInput in;
        in.periodic = [&](i64 m) { return chi(m); };
        in.modulus = 5;
        in.smooth = [&](double y) { return cplx(U(y)); };
        in.scale = s.scale;
        const auto r = poisson_check(in);
        rep.checks.push_back(residual_record("pipeline.poisson_check",
                                             "periodic=chi5_" + std::to_string(idx) + ";smooth=U;scale=" + num(s.scale),
                                             std::abs(r.direct), std::abs(r.dual), r.residual, s.tol));
    }
    for (const auto& [a, q, n] : {std::array<i64, 3>{11, 8, 2}, {7, 1, 1}, {5, 6, 4}}) {
        FlatPoissonCase fc;
        fc.a = a;
        fc.q = q;
        fc.n = n;
        fc.N = s.scale;
        const auto r = flat_poisson_check(fc);
        const std::string params = "a=" + std::to_string(a) + ";q=" + std::to_string(q) + ";n=" + std::to_string(n) +
                                   ";N=" + num(s.scale);
        rep.checks.push_back(residual_record("pipeline.flat_poisson_check", params, std::abs(r.generic.direct),
                                             std::abs(r.expansion),
                                             std::abs(r.expansion - r.generic.direct) / r.generic.mass, s.tol));
        rep.checks.push_back(residual_record("pipeline.flat_poisson_check.termwise", params, std::abs(r.expansion),
                                             std::abs(r.generic.dual), r.termwise_residual, s.tol));
    }
    rep.timings.emplace_back("total", clock.seconds());
    return rep;
}

// ---------------------------------------------------------------- recomposition

Report recompose_verify(const RecomposeSettings& s) {
    require_tolerance(s.tol, "tol");
    require_nonempty(s.N.empty() || s.t.empty() || s.K.empty(), "grid");
    const auto oracle = named_oracle(s.oracle);
    std::vector<ScanParams> grid;
    for (double N : s.N)
        for (double t : s.t)
            for (double K : s.K) {
                auto p = make_scan_params(N, t, s.M1, s.M2, K, oracle);
                require_small_box(p);
                grid.push_back(std::move(p));
            }
    Report rep{"recompose-verify",
               {{"N", join(s.N)},
                {"t", join(s.t)},
                {"K", join(s.K)},
                {"M1", std::to_string(s.M1)},
                {"M2", std::to_string(s.M2)},
                {"oracle", s.oracle},
                {"tol", num(s.tol)}},
               {},
               {}};
    const Stopwatch clock;
    const auto rows = parallel_map(grid.size(), s.workers, [&](std::size_t i) {
        const auto& p = grid[i];
        const auto rc = recomposition_check(p);
        const auto sp = s0_s1_split_check(p);
        return std::array<CheckRecord, 2>{
            residual_record("pipeline.recomposition_check", p.describe(), std::abs(rc.s_plus + rc.s_minus),
                            std::abs(rc.direct), rc.residual, s.tol),
            residual_record("pipeline.s0_s1_split_check", p.describe(), std::abs(sp.s0 + sp.s1), std::abs(sp.s_sharp),
                            sp.residual, s.tol)};
    });
    for (const auto& pair : rows)
        for (const auto& r : pair) rep.checks.push_back(r);
    rep.timings.emplace_back("total", clock.seconds());
    return rep;
}

// ---------------------------------------------------------------- scans

Report s_scan(const EnvelopeScanSettings& s) {
    require_nonempty(s.moduli.empty() || s.t.empty() || s.N.empty(), "grid");
    for (const auto& [M1, M2] : s.moduli) require_prime_pair(M1, M2);
    const auto grid = envelope_grid(named_oracle(s.oracle), s.moduli, s.t, s.N);
    for (const auto& p : grid) require_desk_box(p);
    Report rep{"s-scan",
               {{"oracle", s.oracle},
                {"moduli", join(s.moduli)},
                {"t", join(s.t)},
                {"N", join(s.N)},
                {"cap", num(s.cap)}},
               {},
               {}};
    const Stopwatch clock;
    const auto rows = parallel_map(grid.size(), s.workers, [&](std::size_t i) {
        const Stopwatch point;
        auto row = envelope_row(grid[i]);
        return std::pair{std::move(row), point.seconds()};
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [row, secs] = rows[i];
        const auto& p = row.params;
        const double Mt = static_cast<double>(p.M()) * p.t;
        const double flat_env = p.N * std::sqrt(Mt) / std::pow(static_cast<double>(p.M1), 1.5);
        rep.checks.push_back(
            bound_record("pipeline.s_flat_direct", p.describe(), std::abs(row.s_flat), flat_env, s.cap));
        const auto [sharp_env, branch] = sharp_envelope(p.N, p.M(), p.t, p.M1);
        rep.checks.push_back(bound_record("pipeline.s_sharp_direct", p.describe() + ";branch=" + std::to_string(branch),
                                          std::abs(row.s_sharp), sharp_env, s.cap));
        rep.timings.emplace_back("point_" + std::to_string(i), secs);
    }
    rep.timings.emplace_back("total", clock.seconds());
    return rep;
}

Report exponent_scan_report(const ExponentScanSettings& s) {
    require_nonempty(s.moduli.empty() || s.t.empty(), "grid");
    for (const auto& [M1, M2] : s.moduli) require_prime_pair(M1, M2);
    const auto grid = exponent_grid(named_oracle(s.oracle), s.moduli, s.t, s.delta);
    Report rep{"exponent-scan",
               {{"oracle", s.oracle},
                {"moduli", join(s.moduli)},
                {"t", join(s.t)},
                {"delta", num(s.delta)},
                {"cap", num(s.cap)}},
               {},
               {}};
    const Stopwatch clock;
    const auto scan = exponent_scan(grid, s.workers);
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        const auto& r = scan.rows[i];
        rep.checks.push_back(bound_record("pipeline.compute_SN", r.params.describe(), r.normalized, r.envelope, s.cap));
        rep.timings.emplace_back("point_" + std::to_string(i), r.seconds);
    }
    if (scan.rows.size() >= 2) {
        const double target = 0.75 - s.delta;
        rep.checks.push_back({"pipeline.exponent_scan.fitted_exponent",
                              "points=" + std::to_string(scan.rows.size()) + ";delta=" + num(s.delta),
                              scan.fitted_exponent, target, scan.fitted_exponent - target, 0.0, std::nullopt,
                              scan.fitted_exponent <= target});
    }
    rep.timings.emplace_back("total", clock.seconds());
    return rep;
}

// ---------------------------------------------------------------- aggregation

std::vector<Report> load_reports(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::invalid_argument("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && e.path().extension() == ".json" && !name.starts_with("report-"))
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Report> out;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            out.push_back(Report::parse_json(buf.str()));
        } catch (const std::exception& e) {
            throw std::invalid_argument(f.string() + ": " + e.what());
        }
    }
    return out;
}

Report aggregate_reports(const std::vector<Report>& reports) {
    Report agg;
    agg.subcommand = "report";
    for (const auto& r : reports) {
        agg.config.emplace_back(r.stem(), r.all_pass() ? "PASS" : "FAIL");
        for (auto c : r.checks) {
            c.params = r.subcommand + ";" + c.params;
            agg.checks.push_back(std::move(c));
        }
    }
    return agg;
}

}  // namespace gl3twist
