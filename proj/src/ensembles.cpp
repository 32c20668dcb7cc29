#include "primespec/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <vector>

#include "primespec/errors.hpp"
#include "primespec/quadrature.hpp"

namespace primespec::ensembles {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc_pi(double r) {
    if (r == 0.0) return 1.0;
    return std::sin(kPi * r) / (kPi * r);
}

// d/du [sin(pi u)/(pi u)]
double sinc_pi_deriv(double u) {
    if (u == 0.0) return 0.0;
    const double x = kPi * u;
    return kPi * (x * std::cos(x) - std::sin(x)) / (x * x);
}

// int_0^u sin(pi t)/(pi t) dt = Si(pi u)/pi
double sinc_pi_antideriv(double u) { return sine_integral(kPi * u) / kPi; }

} // namespace

double spacing_pdf(const EnsembleKind& kind, double s) {
    if (s < 0.0) throw DomainError("spacing_pdf: s must be >= 0");
    switch (kind.tag) {
    case EnsembleTag::POISSON:
        return std::exp(-s);
    case EnsembleTag::GOE:
        return 0.5 * kPi * s * std::exp(-0.25 * kPi * s * s);
    case EnsembleTag::GUE:
        return (32.0 / (kPi * kPi)) * s * s * std::exp(-4.0 * s * s / kPi);
    case EnsembleTag::GSE: {
        const double c = 262144.0 / (729.0 * kPi * kPi * kPi); // 2^18 / (3^6 pi^3)
        return c * s * s * s * s * std::exp(-64.0 * s * s / (9.0 * kPi));
    }
    case EnsembleTag::BERRY_ROBNIK: {
        const double rho1 = kind.rho1;
        if (rho1 < -0.2 || rho1 > 1.2) {
            throw DomainError("spacing_pdf: rho1 outside [-0.2, 1.2]");
        }
        const double rho_bar = 1.0 - rho1;
        // The s-linear coefficient is pi*rho_bar^3*s/2 so that rho1 = 0
        // recovers the Wigner GOE density exactly.
        const double first =
            rho1 * rho1 * std::exp(-rho1 * s) *
            std::erfc(0.5 * std::sqrt(kPi) * rho_bar * s);
        const double second =
            (2.0 * rho1 * rho_bar + 0.5 * kPi * rho_bar * rho_bar * rho_bar * s) *
            std::exp(-rho1 * s - 0.25 * kPi * rho_bar * rho_bar * s * s);
        return first + second;
    }
    }
    throw DomainError("spacing_pdf: unknown ensemble");
}

double cluster_y2(EnsembleTag kind, double r) {
    if (r < 0.0) throw DomainError("cluster_y2: r must be >= 0");
    switch (kind) {
    case EnsembleTag::POISSON:
        return 0.0;
    case EnsembleTag::GUE: {
        const double s = sinc_pi(r);
        return s * s;
    }
    case EnsembleTag::GOE: {
        const double s = sinc_pi(r);
        const double tail = 0.5 - sinc_pi_antideriv(r); // int_r^inf
        return s * s + sinc_pi_deriv(r) * tail;
    }
    case EnsembleTag::GSE: {
        const double u = 2.0 * r;
        const double s = sinc_pi(u);
        return s * s - sinc_pi_deriv(u) * sinc_pi_antideriv(u);
    }
    case EnsembleTag::BERRY_ROBNIK:
        break;
    }
    throw DomainError("cluster_y2: defined for Poisson/GOE/GUE/GSE only");
}

namespace {

constexpr double kCacheStep = 0.05;
constexpr double kCacheMax = 12.0;

// Sigma^2 at the cache nodes, built from cumulative integrals of Y2 and
// r*Y2 so each node costs only one short panel:
//   Sigma^2(L) = L - 2 L A(L) + 2 B(L),  A = int Y2, B = int r Y2.
// Two nodes beyond kCacheMax keep every interpolation stencil fully
// populated.
std::vector<double> build_sigma2_nodes(EnsembleTag kind) {
    const auto n =
        static_cast<std::size_t>(std::round(kCacheMax / kCacheStep)) + 2;
    std::vector<double> nodes(n + 1, 0.0);
    double a_cum = 0.0, b_cum = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double lo = kCacheStep * static_cast<double>(i - 1);
        const double hi = kCacheStep * static_cast<double>(i);
        a_cum += integrate([kind](double r) { return cluster_y2(kind, r); }, lo,
                           hi, 1e-11, 1e-15);
        b_cum += integrate([kind](double r) { return r * cluster_y2(kind, r); },
                           lo, hi, 1e-11, 1e-15);
        nodes[i] = hi - 2.0 * hi * a_cum + 2.0 * b_cum;
    }
    return nodes;
}

const std::vector<double>& sigma2_nodes(EnsembleTag kind) {
    static std::mutex mu;
    static std::map<EnsembleTag, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(kind);
    if (it == cache.end()) {
        it = cache.emplace(kind, build_sigma2_nodes(kind)).first;
    }
    return it->second;
}

// Catmull-Rom interpolation on the uniform node grid. The ghost node left
// of zero encodes the exact boundary behavior Sigma^2(0) = 0 with unit
// slope (dSigma^2/dL -> 1 as L -> 0 for every ensemble).
double interp_nodes(const std::vector<double>& nodes, double L) {
    const double t = L / kCacheStep;
    auto i = static_cast<std::ptrdiff_t>(std::floor(t));
    const auto max_cell = static_cast<std::ptrdiff_t>(nodes.size()) - 3;
    i = std::clamp<std::ptrdiff_t>(i, 0, max_cell);
    const double x = t - static_cast<double>(i);
    const double p0 = i == 0 ? nodes[1] - 2.0 * kCacheStep
                             : nodes[static_cast<std::size_t>(i - 1)];
    const double p1 = nodes[static_cast<std::size_t>(i)];
    const double p2 = nodes[static_cast<std::size_t>(i + 1)];
    const double p3 = nodes[static_cast<std::size_t>(i + 2)];
    return p1 + 0.5 * x * (p2 - p0 +
                           x * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                x * (3.0 * (p1 - p2) + p3 - p0)));
}

} // namespace

double sigma2_theory_direct(EnsembleTag kind, double L) {
    if (!(L > 0.0)) throw DomainError("sigma2_theory: L must be positive");
    if (kind == EnsembleTag::POISSON) return L;
    const double corr = integrate(
        [kind, L](double r) { return (L - r) * cluster_y2(kind, r); }, 0.0, L,
        1e-11, 1e-15);
    return L - 2.0 * corr;
}

double sigma2_theory(EnsembleTag kind, double L) {
    if (!(L > 0.0)) throw DomainError("sigma2_theory: L must be positive");
    if (kind == EnsembleTag::POISSON) return L;
    if (kind == EnsembleTag::BERRY_ROBNIK) {
        throw DomainError("sigma2_theory: use sigma2_br for Berry-Robnik");
    }
    if (L > kCacheMax) return sigma2_theory_direct(kind, L);
    return interp_nodes(sigma2_nodes(kind), L);
}

double sigma2_br(double L, double rho1) {
    if (!(L > 0.0)) throw DomainError("sigma2_br: L must be positive");
    const double goe_arg = std::max(0.0, (1.0 - rho1) * L);
    const double goe_part =
        goe_arg > 0.0 ? sigma2_theory(EnsembleTag::GOE, goe_arg) : 0.0;
    return rho1 * L + goe_part;
}

namespace {

struct GammaTable {
    // (statistic order, ensemble) -> sorted (L, value, stderr)
    std::map<std::pair<int, EnsembleTag>, std::vector<CurvePoint>> series;
    double l_min = 0.0;
    double l_max = 0.0;
};

std::string& gamma_path_storage() {
    static std::string path;
    return path;
}

std::string resolve_gamma_path() {
    if (!gamma_path_storage().empty()) return gamma_path_storage();
    if (const char* env = std::getenv("PRIMESPEC_GAMMA_REFERENCE")) {
        return env;
    }
#ifdef PRIMESPEC_DATA_DIR
    return std::string(PRIMESPEC_DATA_DIR) + "/gamma_reference.csv";
#else
    return "data/gamma_reference.csv";
#endif
}

GammaTable load_gamma_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open gamma reference table '" + path +
                      "'; run `primespec mc-tabulate` to generate it");
    }
    GammaTable table;
    std::string line;
    long line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true; // kind,statistic,L,value,stderr
            continue;
        }
        std::istringstream ss(line);
        std::string kind_s, stat_s, l_s, v_s, e_s;
        if (!std::getline(ss, kind_s, ',') || !std::getline(ss, stat_s, ',') ||
            !std::getline(ss, l_s, ',') || !std::getline(ss, v_s, ',') ||
            !std::getline(ss, e_s)) {
            throw ParseError("gamma reference table: bad row", line_no);
        }
        const auto kind = ensemble_from_string(kind_s);
        if (!kind) throw ParseError("gamma reference table: unknown ensemble", line_no);
        int order = 0;
        if (stat_s == "gamma1") order = 1;
        else if (stat_s == "gamma2") order = 2;
        else throw ParseError("gamma reference table: unknown statistic", line_no);
        CurvePoint pt;
        try {
            pt.L = std::stod(l_s);
            pt.value = std::stod(v_s);
            pt.stderr_ = std::stod(e_s);
        } catch (const std::exception&) {
            throw ParseError("gamma reference table: bad number", line_no);
        }
        table.series[{order, *kind}].push_back(pt);
    }
    if (table.series.empty()) {
        throw ParseError("gamma reference table '" + path + "' has no rows");
    }
    table.l_min = 1e300;
    table.l_max = -1e300;
    for (auto& [key, pts] : table.series) {
        std::sort(pts.begin(), pts.end(),
                  [](const CurvePoint& a, const CurvePoint& b) { return a.L < b.L; });
        table.l_min = std::min(table.l_min, pts.front().L);
        table.l_max = std::max(table.l_max, pts.back().L);
    }
    return table;
}

const GammaTable& gamma_table() {
    static const GammaTable table = load_gamma_table(resolve_gamma_path());
    return table;
}

} // namespace

void set_gamma_reference_path(const std::string& path) {
    gamma_path_storage() = path;
}

std::pair<double, double> gamma_reference_range() {
    const auto& t = gamma_table();
    return {t.l_min, t.l_max};
}

ValueWithError gamma_theory(EnsembleTag kind, double L, int order) {
    if (!(L > 0.0)) throw DomainError("gamma_theory: L must be positive");
    if (order != 1 && order != 2) {
        throw DomainError("gamma_theory: order must be 1 or 2");
    }
    if (kind == EnsembleTag::POISSON) {
        return {order == 1 ? 1.0 / std::sqrt(L) : 1.0 / L, 0.0};
    }
    if (kind == EnsembleTag::BERRY_ROBNIK) {
        throw DomainError("gamma_theory: no Berry-Robnik gamma reference");
    }
    const auto& table = gamma_table();
    const auto it = table.series.find({order, kind});
    if (it == table.series.end()) {
        throw IoError("gamma reference table lacks " + to_string(kind) +
                      " gamma" + std::to_string(order));
    }
    const auto& pts = it->second;
    if (L < pts.front().L - 1e-9 || L > pts.back().L + 1e-9) {
        throw DomainError("gamma_theory: L = " + std::to_string(L) +
                          " outside tabulated range");
    }
    auto upper = std::lower_bound(
        pts.begin(), pts.end(), L,
        [](const CurvePoint& p, double l) { return p.L < l; });
    if (upper == pts.begin()) return {upper->value, upper->stderr_};
    if (upper == pts.end()) return {pts.back().value, pts.back().stderr_};
    const auto& hi = *upper;
    const auto& lo = *(upper - 1);
    const double w = (L - lo.L) / (hi.L - lo.L);
    return {lo.value + w * (hi.value - lo.value),
            std::max(lo.stderr_, hi.stderr_)};
}

} // namespace primespec::ensembles
