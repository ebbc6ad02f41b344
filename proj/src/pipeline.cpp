#include "gl3twist/pipeline.hpp"

#include "gl3twist/bump.hpp"
#include "gl3twist/expsums.hpp"
#include "gl3twist/oscillatory.hpp"
#include "gl3twist/parallel.hpp"
#include "gl3twist/quadrature.hpp"
#include "gl3twist/special.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>

namespace gl3twist {

namespace {

/// Neumaier summation on both components.
class CompensatedSum {
public:
    void add(cplx z) {
        step(re_, cre_, z.real());
        step(im_, cim_, z.imag());
    }
    cplx value() const { return {re_ + cre_, im_ + cim_}; }

private:
    static void step(double& s, double& c, double x) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

const BumpFunction& weight_V() {
    static const BumpFunction v = BumpFunction::V();
    return v;
}
const BumpFunction& weight_U() {
    static const BumpFunction u = BumpFunction::U();
    return u;
}

/// Integers strictly inside (lo, hi).
std::pair<i64, i64> open_range(double lo, double hi) {
    return {static_cast<i64>(std::floor(lo)) + 1, static_cast<i64>(std::ceil(hi)) - 1};
}

/// int_0^1 e(-h zeta/c) d zeta.
cplx zeta_integral(i64 h, i64 c) {
    if (h == 0) return {1.0, 0.0};
    const cplx num = 1.0 - unit_phase(mod(-h, c), c);
    return num * (static_cast<double>(c) / (kTwoPi * static_cast<double>(h))) * cplx(0.0, -1.0);
}

struct PairData {
    i64 a, q;
    i64 abar;      // a^{-1} mod q
    i64 aM1bar;    // (a M1)^{-1} mod q
    double inv_aq;
};

std::vector<PairData> prepare(const std::vector<FareyPair>& pairs, i64 M1) {
    std::vector<PairData> out;
    out.reserve(pairs.size());
    for (const auto& pr : pairs) {
        const i64 aM1bar = pr.q % M1 == 0 ? 0 : mod_inverse(mul_mod(pr.a, M1, pr.q), pr.q);
        out.push_back({pr.a, pr.q, mod_inverse(pr.a, pr.q), aM1bar, 1.0 / static_cast<double>(pr.a * pr.q)});
    }
    return out;
}

/// sum (1/aq) e(abar h/q) int_0^1 e(-h zeta/(aq)) d zeta over the given pairs.
cplx delta_on(const std::vector<PairData>& pairs, i64 h) {
    CompensatedSum s;
    for (const auto& pr : pairs) {
        s.add(pr.inv_aq * unit_phase(mul_mod(pr.abar, mod(h, pr.q), pr.q), pr.q) * zeta_integral(h, pr.a * pr.q));
    }
    return s.value();
}

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr std::array<i64, 5> kDeskPrimes{3, 5, 7, 11, 13};

}  // namespace

// ---------------------------------------------------------------- parameters

double ScanParams::Q() const { return std::sqrt(N / (K * static_cast<double>(M1))); }

std::string ScanParams::describe() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "N=%.10g;t=%.10g;M1=%lld;M2=%lld;K=%.10g;delta=%.10g;oracle=%s;chi1=%lld;chi2=%lld",
                  N, t, static_cast<long long>(M1), static_cast<long long>(M2), K, delta,
                  oracle ? oracle->name().c_str() : "none", static_cast<long long>(chi1.index()),
                  static_cast<long long>(chi2.index()));
    return buf;
}

ScanParams make_scan_params(double N, double t, i64 M1, i64 M2, double K,
                            std::shared_ptr<const CoefficientOracle> oracle, i64 index1, i64 index2) {
    ScanParams p;
    p.N = N;
    p.t = t;
    p.M1 = M1;
    p.M2 = M2;
    p.K = K;
    p.oracle = std::move(oracle);
    p.chi1 = DirichletCharacter(M1, index1);
    p.chi2 = DirichletCharacter(M2, index2);
    return p;
}

void require_desk_box(const ScanParams& p) {
    auto desk_prime = [](i64 m) { return std::find(kDeskPrimes.begin(), kDeskPrimes.end(), m) != kDeskPrimes.end(); };
    if (!p.oracle) throw std::invalid_argument("ScanParams: no coefficient oracle");
    if (!(p.N >= 1.0 && p.N <= 1e5)) throw BoxError("desk box: N must lie in [1, 1e5]");
    if (!(p.t >= 0.0 && p.t <= 200.0)) throw BoxError("desk box: t must lie in [0, 200]");
    if (!(p.K > 0.0 && p.K <= 50.0)) throw BoxError("desk box: K must lie in (0, 50]");
    if (!desk_prime(p.M1) || !desk_prime(p.M2) || p.M1 == p.M2)
        throw BoxError("desk box: M1 != M2 must be primes in {3,5,7,11,13}");
    if (p.chi1.modulus() != p.M1 || p.chi2.modulus() != p.M2)
        throw std::invalid_argument("ScanParams: character moduli differ from M1, M2");
    if (p.Q() < 1.0) throw BoxError("desk box: Q = sqrt(N/(K M1)) must be at least 1");
}

void require_small_box(const ScanParams& p) {
    require_desk_box(p);
    if (p.N > 2000.0 || p.K > 10.0) throw BoxError("small box: N <= 2000 and K <= 10 required");
}

// ---------------------------------------------------------------- delta symbol

cplx delta_component(i64 n, double Q) {
    return delta_on(prepare(farey_pairs(Q), 1), n);
}

double delta_eval(i64 n, double Q) { return 2.0 * delta_component(n, Q).real(); }

// ---------------------------------------------------------------- S(N)

cplx compute_SN(const ScanParams& p) {
    require_desk_box(p);
    const auto [lo, hi] = open_range(p.N, 2.0 * p.N);
    CompensatedSum s;
    for (i64 n = lo; n <= hi; ++n) {
        const cplx c = p.chi(n);
        if (c == cplx(0.0, 0.0)) continue;
        const double w = weight_V()(static_cast<double>(n) / p.N);
        if (w == 0.0) continue;
        s.add((*p.oracle)(1, n) * w * c * std::polar(1.0, -p.t * std::log(static_cast<double>(n))));
    }
    return s.value();
}

double sn_trivial_bound(const ScanParams& p) {
    require_desk_box(p);
    const auto [lo, hi] = open_range(p.N, 2.0 * p.N);
    double s = 0.0;
    for (i64 n = lo; n <= hi; ++n) s += std::abs((*p.oracle)(1, n)) * weight_V()(static_cast<double>(n) / p.N);
    return s;
}

// ---------------------------------------------------------------- expansion

CircleExpansion::CircleExpansion(const ScanParams& p) : p_(p) {
    require_desk_box(p_);
    const auto [n_lo, n_hi] = open_range(p_.N, 2.0 * p_.N);
    const auto [m_lo, m_hi] = open_range(0.5 * p_.N, 2.5 * p_.N);
    d_min_ = n_lo - m_hi;
    d_max_ = n_hi - m_lo;
    const auto na = static_cast<std::size_t>(n_hi - n_lo + 1);
    const auto nb = static_cast<std::size_t>(m_hi - m_lo + 1);
    const std::size_t len = na + nb - 1;
    std::size_t L = 1;
    while (L < len) L <<= 1;

    // n-side in reversed order so that the convolution index is d_max - d.
    std::vector<double> a_amp(na), a_log(na), b_log(nb);
    std::vector<cplx> b_amp(nb);
    for (std::size_t i = 0; i < na; ++i) {
        const i64 n = n_hi - static_cast<i64>(i);
        const double w = weight_V()(static_cast<double>(n) / p_.N);
        a_amp[i] = w == 0.0 ? 0.0 : (*p_.oracle)(1, n) * w;
        a_log[i] = std::log(static_cast<double>(n));
    }
    for (std::size_t k = 0; k < nb; ++k) {
        const i64 m = m_lo + static_cast<i64>(k);
        b_amp[k] = p_.chi(m) * weight_U()(static_cast<double>(m) / p_.N);
        b_log[k] = std::log(static_cast<double>(m));
    }

    // v = K x with x on [1,2]; K log(n/m) reaches K log 4.
    v_nodes_ = std::max(96, static_cast<int>(std::ceil(2.0 * p_.K * std::log(4.0))));
    const auto rule = gauss_legendre(v_nodes_);

    auto* fa = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * L));
    auto* fb = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * L));
    fftw_plan fwd, bwd;
    {
        std::lock_guard lock(fftw_planner_mutex());
        fwd = fftw_plan_dft_1d(static_cast<int>(L), fa, fa, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(static_cast<int>(L), fa, fa, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    std::vector<cplx> acc(len, cplx(0.0, 0.0));
    for (int j = 0; j < v_nodes_; ++j) {
        const double x = 1.5 + 0.5 * rule.nodes[static_cast<std::size_t>(j)];
        const double omega = 0.5 * rule.weights[static_cast<std::size_t>(j)] * weight_V()(x);
        if (omega == 0.0) continue;
        const double v = p_.K * x;
        for (std::size_t i = 0; i < L; ++i) {
            cplx za{0.0, 0.0}, zb{0.0, 0.0};
            if (i < na && a_amp[i] != 0.0) za = a_amp[i] * std::polar(1.0, v * a_log[i]);
            if (i < nb && b_amp[i] != cplx(0.0, 0.0)) zb = b_amp[i] * std::polar(1.0, -(p_.t + v) * b_log[i]);
            fa[i][0] = za.real();
            fa[i][1] = za.imag();
            fb[i][0] = zb.real();
            fb[i][1] = zb.imag();
        }
        fftw_execute_dft(fwd, fa, fa);
        fftw_execute_dft(fwd, fb, fb);
        for (std::size_t i = 0; i < L; ++i) {
            const cplx z = cplx(fa[i][0], fa[i][1]) * cplx(fb[i][0], fb[i][1]);
            fa[i][0] = z.real();
            fa[i][1] = z.imag();
        }
        fftw_execute_dft(bwd, fa, fa);
        const double scale = omega / static_cast<double>(L);
        for (std::size_t s = 0; s < len; ++s) acc[s] += scale * cplx(fa[s][0], fa[s][1]);
    }
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    fftw_free(fa);
    fftw_free(fb);
    corr_ = std::move(acc);
}

cplx CircleExpansion::against(const Kernel& kernel, bool multiples_of_M1) const {
    CompensatedSum s;
    for (i64 d = d_min_; d <= d_max_; ++d) {
        if (multiples_of_M1 && mod(d, p_.M1) != 0) continue;
        s.add(kernel(d) * correlation(d));
    }
    return s.value();
}

std::vector<FareyPair> CircleExpansion::pairs(bool flat) const {
    std::vector<FareyPair> out;
    for (const auto& pr : farey_pairs(p_.Q()))
        if ((pr.q % p_.M1 == 0) == flat) out.push_back(pr);
    return out;
}

cplx CircleExpansion::diagonal() const { return correlation(0); }

cplx CircleExpansion::s_plus() const {
    const double Q = p_.Q();
    return against([&](i64 d) { return delta_component(d / p_.M1, Q); }, true);
}

cplx CircleExpansion::s_minus() const {
    const double Q = p_.Q();
    return against([&](i64 d) { return std::conj(delta_component(d / p_.M1, Q)); }, true);
}

cplx CircleExpansion::s_flat() const {
    const auto pd = prepare(pairs(true), p_.M1);
    return against([&](i64 d) { return delta_on(pd, d / p_.M1); }, true);
}

cplx CircleExpansion::s_sharp() const {
    const auto pd = prepare(pairs(false), p_.M1);
    return against([&](i64 d) { return delta_on(pd, d / p_.M1); }, true);
}

cplx CircleExpansion::s0() const {
    const auto pd = prepare(pairs(false), p_.M1);
    const double inv = 1.0 / static_cast<double>(p_.M1);
    return against(
        [&](i64 d) {
            CompensatedSum s;
            for (const auto& pr : pd) {
                const cplx ph = unit_phase(mul_mod(pr.aM1bar, mod(d, pr.q), pr.q), pr.q);
                s.add(pr.inv_aq * ph * zeta_integral(d, pr.a * pr.q * p_.M1));
            }
            return inv * s.value();
        },
        false);
}

cplx CircleExpansion::s1() const {
    const auto pd = prepare(pairs(false), p_.M1);
    const double inv = 1.0 / static_cast<double>(p_.M1);
    return against(
        [&](i64 d) {
            CompensatedSum s;
            for (const auto& pr : pd) {
                const i64 c = pr.q * p_.M1;
                const cplx z = zeta_integral(d, pr.a * c);
                for (i64 b = 1; b < p_.M1; ++b) {
                    const i64 coef = mod(pr.aM1bar * p_.M1 + b * pr.q, c);
                    s.add(pr.inv_aq * unit_phase(mul_mod(coef, mod(d, c), c), c) * z);
                }
            }
            return inv * s.value();
        },
        false);
}

RecompositionResult recomposition_check(const ScanParams& p) {
    require_small_box(p);
    const CircleExpansion e(p);
    RecompositionResult r{compute_SN(p), e.s_plus(), e.s_minus(), 0.0};
    r.residual = std::abs(r.s_plus + r.s_minus - r.direct) / std::abs(r.direct);
    return r;
}

cplx s_flat_direct(const ScanParams& p) { return CircleExpansion(p).s_flat(); }
cplx s_sharp_direct(const ScanParams& p) { return CircleExpansion(p).s_sharp(); }

SplitResult s0_s1_split_check(const ScanParams& p) {
    require_small_box(p);
    const CircleExpansion e(p);
    SplitResult r{e.s_sharp(), e.s0(), e.s1(), 0.0};
    r.residual = std::abs(r.s0 + r.s1 - r.s_sharp) / std::abs(r.s_sharp);
    return r;
}

// ---------------------------------------------------------------- Poisson

PoissonResult poisson_check(const PoissonInput& in, double dual_tol) {
    const i64 c = in.modulus;
    if (c < 1 || c > 10000) throw std::invalid_argument("poisson_check: modulus must lie in [1, 1e4]");
    if (!(in.upper > in.lower) || !(in.scale > 0.0)) throw std::invalid_argument("poisson_check: bad support");

    PoissonResult res{};
    const auto [lo, hi] = open_range(in.lower * in.scale, in.upper * in.scale);
    CompensatedSum direct;
    double mass = 0.0;
    for (i64 m = lo; m <= hi; ++m) {
        const cplx term = in.periodic(m) * in.smooth(static_cast<double>(m) / in.scale);
        direct.add(term);
        mass += std::abs(term);
    }
    res.direct = direct.value();
    res.mass = mass;

    std::vector<cplx> table(static_cast<std::size_t>(c));
    double sup = 0.0;
    for (i64 x = 0; x < c; ++x) {
        table[static_cast<std::size_t>(x)] = in.periodic(x);
        sup = std::max(sup, std::abs(table[static_cast<std::size_t>(x)]));
    }
    const RootTable roots(c);
    const double step = in.scale / static_cast<double>(c);

    const double floor_abs = dual_tol * std::max(mass, 1e-300);
    QuadratureOptions opt;
    opt.abs_tol = std::max(1e-14, 0.1 * floor_abs / (step * static_cast<double>(c) * std::max(sup, 1e-300)));
    opt.max_panels = 100000;
    // Accuracy each dual term needs; the adaptive target is ten times finer.
    const double needed = floor_abs / (step * static_cast<double>(c) * std::max(sup, 1e-300));
    auto transform = [&](double xi) {
        const double slope = std::abs(xi) + in.bandwidth + 1.0;
        try {
            return integrate_oscillatory([&](double y) { return in.smooth(y); }, [&](double y) { return -xi * y; },
                                         [&](double) { return slope; }, in.lower, in.upper, opt)
                .value;
        } catch (const QuadratureError& e) {
            // High frequencies stall at the rounding floor of the panel sums.
            if (e.best().error <= needed) return e.best().value;
            throw TruncationError("poisson_check: transform not resolved at xi = " + std::to_string(xi));
        }
    };
    auto complete = [&](i64 k) {
        CompensatedSum s;
        for (i64 x = 0; x < c; ++x) s.add(table[static_cast<std::size_t>(x)] * roots[mul_mod(mod(k, c), x, c)]);
        return s.value();
    };

    const i64 k_band = static_cast<i64>(std::ceil(in.bandwidth / step)) + 1;
    constexpr i64 kBudget = 100000;
    constexpr int kQuiet = 3;
    CompensatedSum dual;
    auto visit = [&](i64 k) {
        const cplx ft = transform(static_cast<double>(k) * step);
        const cplx term = step * complete(k) * ft;
        res.dual_terms.emplace_back(k, term);
        dual.add(term);
        return step * static_cast<double>(c) * sup * std::abs(ft) < floor_abs;
    };
    visit(0);
    for (int dir : {1, -1}) {
        int quiet = 0;
        for (i64 j = 1;; ++j) {
            if (j > kBudget) throw TruncationError("poisson_check: dual sum did not decay");
            const bool small = visit(dir * j);
            quiet = small ? quiet + 1 : 0;
            if (j > k_band && quiet >= kQuiet) break;
        }
    }
    std::sort(res.dual_terms.begin(), res.dual_terms.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    res.dual = dual.value();
    const double gap = std::abs(res.direct - res.dual);
    res.residual = mass > 0.0 ? gap / mass : gap;
    return res;
}

FlatPoissonResult flat_poisson_check(const FlatPoissonCase& fc) {
    const i64 M1 = fc.chi1.modulus(), M2 = fc.chi2.modulus();
    const i64 qM1 = fc.q * M1, qM1sq = qM1 * M1;
    const i64 C = qM1sq * M2;
    const i64 abar = mod_inverse(fc.a, qM1);
    const double tv = fc.t + fc.v;
    const cplx s(1.0, -tv);
    const BumpFunction& U = weight_U();

    PoissonInput in;
    in.modulus = C;
    in.periodic = [&](i64 m) -> cplx {
        if (mod(m - fc.n, M1) != 0) return {0.0, 0.0};
        return fc.chi1(m) * fc.chi2(m) * unit_phase(mod(-mul_mod(abar, mod(m, qM1sq), qM1sq), qM1sq), qM1sq);
    };
    const double freq = fc.N * fc.zeta / static_cast<double>(fc.a * qM1sq);
    in.smooth = [&](double y) -> cplx {
        const double u = U(y);
        if (u == 0.0) return {0.0, 0.0};
        return u * std::polar(1.0, -tv * std::log(fc.N * y)) * unit_phase(freq * y);
    };
    in.lower = U.lower();
    in.upper = U.upper();
    in.scale = fc.N;
    in.bandwidth = tv / (kTwoPi * U.lower()) + std::abs(freq);

    FlatPoissonResult out{poisson_check(in), {0.0, 0.0}, 0.0};
    const cplx pref = fc.N * std::polar(1.0, -tv * std::log(fc.N)) / static_cast<double>(C);
    CharSumParams cs{fc.a, 1, 0, fc.n, fc.q, fc.chi1, fc.chi2};
    CompensatedSum total;
    for (const auto& [k, term] : out.generic.dual_terms) {
        cs.m = k;
        const cplx E = script_E_closed(cs);
        cplx mine{0.0, 0.0};
        if (E != cplx(0.0, 0.0)) {
            const double r = fc.N * (static_cast<double>(k * fc.a) - fc.zeta * static_cast<double>(M2)) /
                             static_cast<double>(fc.a * C);
            mine = pref * E * u_dagger(U, r, s);
        }
        total.add(mine);
        out.termwise_residual = std::max(out.termwise_residual, std::abs(term - mine) / out.generic.mass);
    }
    out.expansion = total.value();
    return out;
}

// ---------------------------------------------------------------- K and ranges

KChoice choose_K(double N, i64 M, double t, i64 M1) {
    if (!(N > 0.0 && t > 0.0) || M <= 0 || M1 <= 0) throw std::invalid_argument("choose_K: positive parameters required");
    const double Mt = static_cast<double>(M) * t, m1 = static_cast<double>(M1), Md = static_cast<double>(M);
    KChoice k{};
    k.flat_branch = std::pow(N, 0.25) / m1;
    k.sharp_branch = std::pow(Mt, 1.2) / std::pow(N * m1, 0.6);
    k.K = std::max(k.flat_branch, k.sharp_branch);
    k.flat_window = k.K < std::min(t, N * m1 / (Md * Md));
    k.sharp_window = k.sharp_branch <= k.K && k.K < std::min({t, Mt * Mt / (N * m1), N * m1 / (Md * Md)});
    return k;
}

M1Range admissible_M1_range(i64 M1, i64 M2, double t, double delta) {
    const double M = static_cast<double>(M1 * M2), Mt = M * std::abs(t);
    M1Range r{};
    r.lower = std::max({std::pow(Mt, 1.0 / 3.0 + 2.0 * delta / 3.0), std::pow(M, 0.4) * std::pow(std::abs(t), -0.45),
                        std::pow(M, 0.5 + 2.0 * delta) * std::pow(std::abs(t), -0.75 + 2.0 * delta)});
    r.upper = std::min(std::pow(Mt, 0.4), std::pow(Mt, 0.5 - 8.0 * delta));
    const double m1 = static_cast<double>(M1);
    r.inside = r.lower < m1 && m1 < r.upper;
    return r;
}

// ---------------------------------------------------------------- envelopes

std::pair<double, int> sharp_envelope(double N, i64 M, double t, i64 M1) {
    const double Mt = static_cast<double>(M) * t, m1 = static_cast<double>(M1);
    if (N > std::pow(Mt, 24.0 / 17.0) * std::pow(m1, 8.0 / 17.0)) return {std::pow(N, 0.625) * std::sqrt(Mt), 1};
    return {std::pow(N, 0.2) * std::pow(Mt, 1.1) * std::pow(m1, 0.2), 2};
}

EnvelopeRow envelope_row(const ScanParams& p) {
    const CircleExpansion e(p);
    EnvelopeRow row{p, e.s_flat(), e.s_sharp(), 0.0, 0.0, 0};
    const double Mt = static_cast<double>(p.M()) * p.t;
    row.flat_constant = std::abs(row.s_flat) * std::pow(static_cast<double>(p.M1), 1.5) / (p.N * std::sqrt(Mt));
    const auto [env, branch] = sharp_envelope(p.N, p.M(), p.t, p.M1);
    row.sharp_constant = std::abs(row.s_sharp) / env;
    row.sharp_branch = branch;
    return row;
}

std::vector<ScanParams> envelope_grid(std::shared_ptr<const CoefficientOracle> oracle,
                                     const std::vector<std::pair<i64, i64>>& moduli, const std::vector<double>& ts,
                                     const std::vector<double>& Ns) {
    std::vector<ScanParams> grid;
    for (const auto& [M1, M2] : moduli)
        for (double t : ts)
            for (double N : Ns) {
                const double K = std::min(choose_K(N, M1 * M2, t, M1).K, 50.0);
                grid.push_back(make_scan_params(N, t, M1, M2, K, oracle));
            }
    return grid;
}

std::vector<ScanParams> envelope_grid(std::shared_ptr<const CoefficientOracle> oracle) {
    return envelope_grid(std::move(oracle), {{5, 3}, {11, 3}, {7, 5}}, {10.0, 50.0, 200.0}, {1e3, 1e4});
}

// ---------------------------------------------------------------- scans

ScanReport exponent_scan(const std::vector<ScanParams>& grid, unsigned workers) {
    for (const auto& p : grid) require_desk_box(p);
    ScanReport rep;
    rep.rows = parallel_map(grid.size(), workers, [&](std::size_t i) {
        const auto& p = grid[i];
        const auto t0 = std::chrono::steady_clock::now();
        const cplx S = compute_SN(p);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double Mt = static_cast<double>(p.M()) * p.t;
        return ScanRow{p, S, std::abs(S) / std::sqrt(p.N), std::pow(Mt, 0.75 - p.delta), secs};
    });
    // Least squares for log(|S|/sqrt N) = c + e log(Mt).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rep.rows.size());
    for (const auto& r : rep.rows) {
        const double x = std::log(static_cast<double>(r.params.M()) * r.params.t), y = std::log(r.normalized);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    rep.fitted_exponent = den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    return rep;
}

std::vector<ScanParams> exponent_grid(std::shared_ptr<const CoefficientOracle> oracle,
                                     const std::vector<std::pair<i64, i64>>& moduli, const std::vector<double>& ts,
                                     double delta) {
    std::vector<ScanParams> grid;
    for (const auto& [M1, M2] : moduli)
        for (double t : ts) {
            const double Mt = static_cast<double>(M1 * M2) * t;
            const double N = std::clamp(std::pow(Mt, 1.5), 1e3, 1e5);
            const double K = std::clamp(choose_K(N, M1 * M2, t, M1).K, 1.0, 50.0);
            auto p = make_scan_params(N, t, M1, M2, K, oracle);
            p.delta = delta;
            grid.push_back(std::move(p));
        }
    return grid;
}

std::vector<ScanParams> exponent_grid(std::shared_ptr<const CoefficientOracle> oracle, double delta) {
    return exponent_grid(std::move(oracle), {{5, 3}, {7, 3}, {11, 3}, {7, 5}}, {10.0, 20.0, 50.0, 100.0, 200.0},
                         delta);
}

// ---------------------------------------------------------------- L-oracle

namespace {

/// Hurwitz zeta(s, alpha), alpha in (0, 1], by Euler-Maclaurin.
cplx hurwitz_zeta(cplx s, double alpha) {
    constexpr int kTerms = 30;
    const int n_cut = static_cast<int>(std::ceil(std::abs(s))) + 40;
    CompensatedSum sum;
    for (int k = 0; k < n_cut; ++k) sum.add(std::exp(-s * std::log(k + alpha)));
    const double x = n_cut + alpha, lx = std::log(x);
    sum.add(std::exp((1.0 - s) * lx) / (s - 1.0));
    sum.add(0.5 * std::exp(-s * lx));
    // B_{2j}/(2j)! = (-1)^{j+1} 2 zeta(2j) / (2 pi)^{2j}.
    cplx rising = s;             // s (s+1) ... (s + 2j - 2)
    cplx power = std::exp(-(s + 1.0) * lx);  // x^{-s-2j+1}
    for (int j = 1; j <= kTerms; ++j) {
        const double coef = (j % 2 == 1 ? 2.0 : -2.0) * std::riemann_zeta(2.0 * j) / std::pow(kTwoPi, 2.0 * j);
        sum.add(coef * rising * power);
        rising *= (s + static_cast<double>(2 * j - 1)) * (s + static_cast<double>(2 * j));
        power /= x * x;
    }
    return sum.value();
}

/// Trapezoid weights of V_s(y) = (1/2 pi i) int_(1) y^{-u} G(u) gamma(s+u)/gamma(s) du/u
/// with G(u) = cos(pi u/(4A))^{-12A}: bounded on the real axis, and its
/// vertical decay exp(-3 pi |Im u|) beats the growth of the Gamma ratio.
class AfeWeight {
public:
    static constexpr double kA = 10.0;

    AfeWeight(cplx s, int kappa) {
        constexpr double c = kAbscissa, h = kStep, height = 14.0;
        auto log_gamma_factor = [&](cplx z) {
            return -1.5 * z * std::log(kPi) + 3.0 * log_gamma(0.5 * (z + static_cast<double>(kappa)));
        };
        const cplx base = log_gamma_factor(s);
        count_ = static_cast<int>(std::round(height / h));
        for (int k = -count_; k <= count_; ++k) {
            const cplx u(c, k * h);
            const cplx logG = -12.0 * kA * std::log(std::cos(kPi * u / (4.0 * kA)));
            weights_.push_back(h / kTwoPi * std::exp(logG + log_gamma_factor(s + u) - base) / u);
        }
    }
    /// Equally spaced nodes make the sum a polynomial in z = y^{-ih}.
    cplx operator()(double y) const {
        const double ly = std::log(y);
        const cplx z = std::polar(1.0, -kStep * ly);
        cplx acc{0.0, 0.0};
        for (auto it = weights_.rbegin(); it != weights_.rend(); ++it) acc = acc * z + *it;
        return acc * std::polar(std::exp(-kAbscissa * ly), kStep * count_ * ly);
    }

private:
    static constexpr double kAbscissa = 1.0, kStep = 0.15;
    int count_ = 0;
    std::vector<cplx> weights_;
};

}  // namespace

cplx dirichlet_L(const ComposedCharacter& chi, cplx s) {
    const i64 M = chi.modulus();
    CompensatedSum sum;
    for (i64 a = 1; a <= M; ++a) {
        const cplx c = chi(a);
        if (c == cplx(0.0, 0.0)) continue;
        sum.add(c * hurwitz_zeta(s, static_cast<double>(a) / static_cast<double>(M)));
    }
    return std::exp(-s * std::log(static_cast<double>(M))) * sum.value();
}

LOracleResult d3_L_oracle(const ComposedCharacter& chi, double t, const CoefficientOracle& d3) {
    if (!chi.first().is_primitive() || !chi.second().is_primitive())
        throw std::invalid_argument("d3_L_oracle: chi must be primitive");
    const i64 M = chi.modulus();
    const int kappa = chi.parity();
    const cplx s(0.5, t), sd(0.5, -t);

    // Root number W = tau(chi)/(i^kappa sqrt M) and the factor eps X(s).
    cplx gauss{0.0, 0.0};
    for (i64 x = 1; x <= M; ++x) gauss += chi(x) * unit_phase(x, M);
    const double sqrtM = std::sqrt(static_cast<double>(M));
    const cplx W = gauss / ((kappa ? cplx(0.0, 1.0) : cplx(1.0, 0.0)) * sqrtM);
    auto log_gamma_factor = [&](cplx z) {
        return -1.5 * z * std::log(kPi) + 3.0 * log_gamma(0.5 * (z + static_cast<double>(kappa)));
    };
    const double cond_sqrt = std::pow(static_cast<double>(M), 1.5);
    const cplx eps_X = W * W * W * std::exp((0.5 - s) * std::log(cond_sqrt * cond_sqrt) + log_gamma_factor(1.0 - s) -
                                            log_gamma_factor(s));

    const AfeWeight Vs(s, kappa), Vd(sd, kappa);
    LOracleResult res{};
    CompensatedSum total;
    std::vector<CompensatedSum> blocks;
    const double at_least = 2.0 * cond_sqrt * std::pow(std::abs(t) / kTwoPi + 1.0, 1.5);
    double quiet_since = 0.0;
    for (i64 n = 1;; ++n) {
        const double y = static_cast<double>(n) / cond_sqrt;
        const cplx v1 = Vs(y), v2 = Vd(y);
        const double small = std::max(std::abs(v1), std::abs(v2));
        if (small > 1e-11) quiet_since = static_cast<double>(n);
        const cplx c = chi(n);
        if (c != cplx(0.0, 0.0)) {
            const double lam = d3(1, n), ln = std::log(static_cast<double>(n));
            const cplx term = lam * (c * std::exp(-s * ln) * v1 + eps_X * std::conj(c) * std::exp((s - 1.0) * ln) * v2);
            const auto b = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(n))));
            if (blocks.size() <= b) blocks.resize(b + 1);
            blocks[b].add(term);
            total.add(term);
        }
        res.terms = n;
        if (static_cast<double>(n) > at_least && static_cast<double>(n) > 1.5 * quiet_since + 256.0) break;
    }
    res.afe = total.value();
    for (const auto& b : blocks) res.blocks.push_back(b.value());
    const cplx L = dirichlet_L(chi, s);
    res.reference = L * L * L;
    res.relative_error = std::abs(res.afe - res.reference) / std::abs(res.reference);
    return res;
}

}  // namespace gl3twist
