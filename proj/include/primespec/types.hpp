#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace primespec {

// A contiguous run of primes p_k, p_{k+1}, ... with its absolute position
// in the full prime sequence. start_index is 1-based: the sequence of all
// primes starts with p_1 = 2.
struct PrimeSequence {
    std::uint64_t start_index = 1;
    std::vector<std::uint64_t> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

enum class UnfoldMethod {
    X_OVER_LOG_X,
    LI,
    RIEMANN_R,
};

std::string to_string(UnfoldMethod m);
std::optional<UnfoldMethod> unfold_method_from_string(const std::string& name);

// A spectrum mapped through a smooth staircase approximation so that the
// mean spacing is (approximately) one. `rescaled` means an affine map was
// applied afterwards to make the mean spacing exactly one.
struct UnfoldedSequence {
    std::vector<double> values;
    UnfoldMethod method = UnfoldMethod::RIEMANN_R;
    bool rescaled = false;
    std::uint64_t source_start_index = 1;

    std::size_t size() const { return values.size(); }
    double span() const {
        return values.empty() ? 0.0 : values.back() - values.front();
    }
};

// Binned probability density of nearest-neighbor spacings. Spacings larger
// than s_max are counted in total_spacings but not binned, so the density
// integrates to <= 1.
struct SpacingHistogram {
    double bin_width = 0.1;
    double s_max = 4.0;
    std::vector<double> densities;
    std::uint64_t total_spacings = 0;

    std::size_t bins() const { return densities.size(); }
    double bin_left(std::size_t i) const { return static_cast<double>(i) * bin_width; }
    double bin_right(std::size_t i) const { return static_cast<double>(i + 1) * bin_width; }
};

enum class Statistic {
    SIGMA2,
    GAMMA1,
    GAMMA2,
};

std::string to_string(Statistic s);

struct CurvePoint {
    double L = 0.0;
    double value = 0.0;
    double stderr_ = 0.0;
};

// A sampled statistic-vs-L curve with block standard errors.
// n_windows_per_L records the window count at the largest L of the grid
// (the smallest count over the curve).
struct StatisticCurve {
    Statistic statistic = Statistic::SIGMA2;
    std::vector<CurvePoint> points;
    double window_step = 0.25;
    std::uint64_t n_windows_per_L = 0;
};

struct SaturationEstimate {
    double l_saturation = 0.0;
    double plateau_value = 0.0;
};

enum class EnsembleTag {
    POISSON,
    GOE,
    GUE,
    GSE,
    BERRY_ROBNIK,
};

std::string to_string(EnsembleTag t);
std::optional<EnsembleTag> ensemble_from_string(const std::string& name);

// Reference ensemble selector. rho1 is meaningful only for BERRY_ROBNIK;
// fitted values may fall slightly outside [0, 1].
struct EnsembleKind {
    EnsembleTag tag = EnsembleTag::POISSON;
    double rho1 = 0.0;

    static EnsembleKind poisson() { return {EnsembleTag::POISSON, 0.0}; }
    static EnsembleKind goe() { return {EnsembleTag::GOE, 0.0}; }
    static EnsembleKind gue() { return {EnsembleTag::GUE, 0.0}; }
    static EnsembleKind gse() { return {EnsembleTag::GSE, 0.0}; }
    static EnsembleKind berry_robnik(double rho1) {
        return {EnsembleTag::BERRY_ROBNIK, rho1};
    }
};

// Result of fitting the Berry-Robnik mixing parameter to a number-variance
// curve.
struct BRFit {
    double rho1 = 0.0;
    double rss = 0.0;
    double fit_l_min = 0.0;
    double fit_l_max = 5.0;
    std::uint64_t n_points = 0;
    bool weighted = false;
    bool boundary_warning = false;
};

struct ValueWithError {
    double value = 0.0;
    double stderr_ = 0.0;
};

} // namespace primespec
