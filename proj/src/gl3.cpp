#include "gl3twist/gl3.hpp"

#include "gl3twist/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gl3twist {

namespace {

using Series = std::vector<__int128>;

// Truncated product of power series, degrees < len.
Series multiply(const Series& a, const Series& b, std::size_t len) {
    Series c(len, 0);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i] == 0) continue;
        const std::size_t top = std::min(b.size(), len - i);
        for (std::size_t j = 0; j < top; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

constexpr i64 kTauCache = 20000;

}  // namespace

std::vector<__int128> ramanujan_tau_table(i64 n_max) {
    if (n_max < 1) return {0};
    const auto len = static_cast<std::size_t>(n_max);
    // prod (1 - q^k)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}  (Jacobi)
    Series cube(len, 0);
    for (i64 k = 0; k * (k + 1) / 2 < n_max; ++k)
        cube[static_cast<std::size_t>(k * (k + 1) / 2)] = (k % 2 ? -1 : 1) * (2 * k + 1);
    const Series p6 = multiply(cube, cube, len);
    const Series p12 = multiply(p6, p6, len);
    const Series p24 = multiply(p12, p12, len);
    std::vector<__int128> tau(len + 1, 0);
    for (std::size_t n = 1; n <= len; ++n) tau[n] = p24[n - 1];
    return tau;
}

__int128 ramanujan_tau(i64 n) {
    static std::once_flag once;
    static std::vector<__int128> table;
    if (n < 1 || n > kTauCache) throw std::out_of_range("ramanujan_tau: n outside [1, 2*10^4]");
    std::call_once(once, [] { table = ramanujan_tau_table(kTauCache); });
    return table[static_cast<std::size_t>(n)];
}

double schur_two_row(const CoefficientOracle::Elementary& e, int a, int b) {
    // lambda(p^a, p^b) = s_{(a+b, a, 0)} = h_{a+b} h_a - h_{a+b+1} h_{a-1}.
    const int top = a + b + 1;
    std::vector<double> h(static_cast<std::size_t>(top) + 1, 0.0);
    h[0] = 1.0;
    for (int k = 1; k <= top; ++k) {
        double v = e[0] * h[k - 1];
        if (k >= 2) v -= e[1] * h[k - 2];
        if (k >= 3) v += e[2] * h[k - 3];
        h[k] = v;
    }
    const double lower = a >= 1 ? h[a - 1] : 0.0;
    return h[a + b] * h[a] - h[a + b + 1] * lower;
}

CoefficientOracle CoefficientOracle::d3() {
    CoefficientOracle o;
    o.name_ = "d3";
    o.arch_ = ArchimedeanParams::spherical({0.0, 0.0, 0.0});
    o.cuspidal_ = false;
    o.prime_bound_ = std::numeric_limits<i64>::max();
    o.satake_ = [](i64) { return Elementary{3.0, 3.0, 1.0}; };
    return o;
}

CoefficientOracle CoefficientOracle::sym2_delta(i64 prime_bound) {
    if (prime_bound < 2 || prime_bound > kTauCache)
        throw std::invalid_argument("sym2_delta: prime_bound must lie in [2, 2*10^4]");
    CoefficientOracle o;
    o.name_ = "sym2_delta";
    o.arch_ = ArchimedeanParams::holomorphic_sym2(12);
    o.cuspidal_ = true;
    o.prime_bound_ = prime_bound;
    o.satake_ = [](i64 p) {
        // alpha + beta = tau(p)/p^{11/2}, alpha beta = 1; triple (alpha^2, 1, beta^2).
        const double lam = static_cast<double>(ramanujan_tau(p)) / std::pow(static_cast<double>(p), 5.5);
        const double e = lam * lam - 1.0;
        return Elementary{e, e, 1.0};
    };
    return o;
}

CoefficientOracle CoefficientOracle::from_table(std::string name, ArchimedeanParams arch,
                                                std::map<std::pair<i64, i64>, double> table,
                                                bool cuspidal) {
    CoefficientOracle o;
    o.name_ = std::move(name);
    o.arch_ = std::move(arch);
    o.cuspidal_ = cuspidal;
    o.table_ = std::move(table);
    return o;
}

CoefficientOracle::Elementary CoefficientOracle::elementary(i64 p) const {
    if (!satake_) throw std::out_of_range("elementary: tabulated oracle has no Satake data");
    if (p > prime_bound_) throw std::out_of_range("elementary: prime beyond the precomputed bound");
    return satake_(p);
}

double CoefficientOracle::prime_power(i64 p, int a, int b) const {
    return schur_two_row(elementary(p), a, b);
}

double CoefficientOracle::operator()(i64 n1, i64 n2) const {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("lambda: arguments must be positive");
    if (!satake_) {
        const auto it = table_.find({n1, n2});
        if (it == table_.end()) throw std::out_of_range("lambda: pair not in the table");
        return it->second;
    }
    std::map<i64, std::pair<int, int>> exps;
    for (auto [p, e] : factorize(n1)) exps[p].first = e;
    for (auto [p, e] : factorize(n2)) exps[p].second = e;
    double v = 1.0;
    for (const auto& [p, ab] : exps) v *= prime_power(p, ab.first, ab.second);
    return v;
}

void export_table(const CoefficientOracle& oracle, i64 limit, std::ostream& out) {
    std::ostringstream line;
    line.precision(17);
    for (i64 n1 = 1; n1 * n1 <= limit; ++n1)
        for (i64 n2 = 1; n1 * n1 * n2 <= limit; ++n2) {
            line.str("");
            line << n1 << ' ' << n2 << ' ' << oracle(n1, n2) << '\n';
            out << line.str();
        }
}

std::map<std::pair<i64, i64>, double> import_table(std::istream& in) {
    std::map<std::pair<i64, i64>, double> table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream row(line);
        i64 n1 = 0, n2 = 0;
        double v = 0.0;
        if (!(row >> n1 >> n2 >> v))
            throw std::runtime_error("import_table: malformed row " + std::to_string(lineno));
        table[{n1, n2}] = v;
    }
    return table;
}

double rankin_selberg_ratio(const CoefficientOracle& oracle, double x) {
    if (x < 10.0) throw std::invalid_argument("rankin_selberg_ratio: x must be at least 10");
    const auto X = static_cast<i64>(std::floor(x));
    double s = 0.0;
    for (i64 n1 = 1; n1 * n1 <= X; ++n1)
        for (i64 n2 = 1; n1 * n1 * n2 <= X; ++n2) {
            const double l = oracle(n1, n2);
            s += l * l;
        }
    return s / std::pow(x, 1.05);
}

namespace {

// Mellin transform of a weight along w = -sigma - i tau, by the trapezoid
// rule in u = log y (the integrand vanishes to all orders at both ends).
class MellinTable {
public:
    MellinTable(const BumpFunction& base, double sigma) : sigma_(sigma) {
        if (base.lower() <= 0.0) throw std::domain_error("phi_transform: weight must live on (0, inf)");
        u0_ = std::log(base.lower());
        const double u1 = std::log(base.upper());
        du_ = (u1 - u0_) / kNodes;
        values_.resize(kNodes + 1);
        for (int j = 0; j <= kNodes; ++j) {
            const double u = u0_ + j * du_;
            values_[j] = base(std::exp(u)) * std::exp(-sigma * u) * du_;
        }
    }

    /// V~(-sigma - i tau).
    cplx operator()(double tau) const {
        const cplx step = std::polar(1.0, -tau * du_);
        cplx rot = std::polar(1.0, -tau * u0_);
        cplx s{0.0, 0.0};
        for (int j = 0; j <= kNodes; ++j) {
            s += values_[j] * rot;
            rot *= step;
        }
        return s;
    }

    /// Sum of |terms|, the scale of the rounding error of operator().
    double mass() const {
        double m = 0.0;
        for (double v : values_) m += std::abs(v);
        return m;
    }

private:
    static constexpr int kNodes = 4096;
    double sigma_;
    double u0_ = 0.0, du_ = 0.0;
    std::vector<double> values_;
};

}  // namespace

PhiTransformer::PhiTransformer(ScaledWeight phi, int sign, ArchimedeanParams arch, PhiOptions opt)
    : phi_(std::move(phi)), sign_(sign), arch_(std::move(arch)), opt_(opt) {
    if (!(opt_.sigma > arch_.rightmost_pole()))
        throw std::invalid_argument("phi_transform: sigma must lie right of every pole of gamma_pm");
    const MellinTable mellin(phi_.base, opt_.sigma);
    const double h = opt_.step;
    // Below this multiple of |gamma| the tabulated transform is rounding noise.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * mellin.mass() * (h / kTwoPi);
    double floor = 0.0;
    auto node = [&](double tau) {
        const cplx g = gamma_pm({opt_.sigma, tau}, sign_, arch_);
        floor = noise * std::abs(g);
        return g * mellin(tau) * (h / kTwoPi);
    };
    // Walk outwards until a full unit of height stays below the cut (or the
    // rounding floor, whichever is larger).
    const int quiet_needed = std::max(1, static_cast<int>(std::ceil(1.0 / h)));
    std::vector<cplx> pos{node(0.0)}, neg;
    double peak = std::abs(pos[0]);
    for (int dir : {1, -1}) {
        auto& side = dir > 0 ? pos : neg;
        int quiet = 0;
        for (int k = 1;; ++k) {
            const double tau = dir * k * h;
            if (std::abs(tau) > opt_.max_height)
                throw std::runtime_error("phi_transform: truncation not reached within the height budget");
            const cplx v = node(tau);
            side.push_back(v);
            peak = std::max(peak, std::abs(v));
            quiet = std::abs(v) < std::max(opt_.truncation * peak, floor) ? quiet + 1 : 0;
            if (quiet >= quiet_needed) break;
        }
        height_ = std::max(height_, static_cast<double>(side.size()) * h);
    }
    weight_.assign(neg.rbegin(), neg.rend());
    weight_.insert(weight_.end(), pos.begin(), pos.end());
    first_ = -static_cast<double>(neg.size()) * h;
}

cplx PhiTransformer::operator()(double x) const {
    if (!(x > 0.0)) throw std::invalid_argument("phi_transform: x must be positive");
    const double u = std::log(x * phi_.N);
    const double h = opt_.step;
    const cplx step = std::polar(1.0, -h * u);
    cplx rot = std::polar(1.0, -first_ * u);
    cplx s{0.0, 0.0};
    for (const cplx& w : weight_) {
        s += w * rot;
        rot *= step;
    }
    return std::exp(-opt_.sigma * u) * s;
}

cplx phi_transform(const ScaledWeight& phi, double x, int sign, const ArchimedeanParams& arch,
                   double sigma) {
    PhiOptions opt;
    opt.sigma = sigma;
    return PhiTransformer(phi, sign, arch, opt)(x);
}

VoronoiReport voronoi_check(const CoefficientOracle& oracle, i64 a, i64 q, const ScaledWeight& phi,
                            i64 dual_cutoff, i64 max_cutoff, PhiOptions opt) {
    if (!oracle.cuspidal())
        throw std::invalid_argument("voronoi_check: oracle " + oracle.name() +
                                    " is not cuspidal; polar terms are not modelled");
    if (q < 1 || std::gcd(a, q) != 1) throw std::invalid_argument("voronoi_check: need q >= 1 and (a,q) = 1");
    VoronoiReport rep;
    const i64 lo = static_cast<i64>(std::ceil(phi.N * phi.base.lower()));
    const i64 hi = static_cast<i64>(std::floor(phi.N * phi.base.upper()));
    for (i64 n = std::max<i64>(lo, 1); n <= hi; ++n)
        rep.lhs += oracle(1, n) * unit_phase(mod(a * n, q), q) * phi(static_cast<double>(n));

    const i64 abar = q == 1 ? 0 : mod_inverse(mod(a, q), q);
    const i64 limit = std::max(dual_cutoff, max_cutoff);
    const auto divs = divisors(q);
    const double qd = static_cast<double>(q);
    struct Row {
        i64 n2;
        cplx value;
        double bound;
    };
    std::vector<std::vector<Row>> rows;  // per (n1, sign)
    std::vector<std::pair<i64, int>> keys;
    for (int sign : {1, -1}) {
        const PhiTransformer Phi(phi, sign, oracle.archimedean(), opt);
        for (i64 n1 : divs) {
            std::vector<Row> r;
            const i64 c = q / n1;
            for (i64 n2 = 1; n2 <= limit; ++n2) {
                const double lam = oracle(n2, n1);
                const double x = static_cast<double>(n1 * n1 * n2) / (qd * qd * qd);
                const cplx Ph = Phi(x);
                const cplx S = kloosterman(abar, sign * n2, c);
                const double scale = qd * lam / static_cast<double>(n1 * n2);
                r.push_back({n2, scale * S * Ph, std::abs(scale) * weil_bound(abar, n2, c) * std::abs(Ph)});
            }
            rows.push_back(std::move(r));
            keys.emplace_back(n1, sign);
        }
    }
    // Tail beyond each candidate cutoff, from the Weil-bounded term sizes.
    auto tail = [&](i64 cut) {
        double t = 0.0;
        for (const auto& r : rows)
            for (const auto& row : r)
                if (row.n2 > cut) t += row.bound;
        return t;
    };
    i64 cut = dual_cutoff > 0 ? dual_cutoff : limit;
    if (dual_cutoff == 0) {
        const double target = 1e-4 * std::abs(rep.lhs);
        for (i64 c = 1; c <= limit; ++c)
            if (tail(c) < target) {
                cut = c;
                break;
            }
    }
    rep.dual_cutoff = cut;
    rep.truncation_bound = tail(cut);
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (const auto& row : rows[k]) {
            if (row.n2 > cut) continue;
            rep.rhs += row.value;
            rep.terms.push_back({keys[k].first, row.n2, keys[k].second, row.value});
        }
    return rep;
}

Calibration calibrate(const VoronoiReport& report) {
    const cplx ratio = report.lhs / report.rhs;
    return {ratio / std::abs(ratio), std::abs(ratio)};
}

}  // namespace gl3twist
