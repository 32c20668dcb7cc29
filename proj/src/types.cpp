#include "primespec/types.hpp"

namespace primespec {

std::string to_string(UnfoldMethod m) {
    switch (m) {
    case UnfoldMethod::X_OVER_LOG_X: return "x_over_log_x";
    case UnfoldMethod::LI: return "li";
    case UnfoldMethod::RIEMANN_R: return "riemann_r";
    }
    return "unknown";
}

std::optional<UnfoldMethod> unfold_method_from_string(const std::string& name) {
    if (name == "x_over_log_x" || name == "xlogx" || name == "xlog") {
        return UnfoldMethod::X_OVER_LOG_X;
    }
    if (name == "li" || name == "lilog") return UnfoldMethod::LI;
    if (name == "riemann_r" || name == "r" || name == "rr") {
        return UnfoldMethod::RIEMANN_R;
    }
    return std::nullopt;
}

std::string to_string(Statistic s) {
    switch (s) {
    case Statistic::SIGMA2: return "sigma2";
    case Statistic::GAMMA1: return "gamma1";
    case Statistic::GAMMA2: return "gamma2";
    }
    return "unknown";
}

std::string to_string(EnsembleTag t) {
    switch (t) {
    case EnsembleTag::POISSON: return "poisson";
    case EnsembleTag::GOE: return "goe";
    case EnsembleTag::GUE: return "gue";
    case EnsembleTag::GSE: return "gse";
    case EnsembleTag::BERRY_ROBNIK: return "berry_robnik";
    }
    return "unknown";
}

std::optional<EnsembleTag> ensemble_from_string(const std::string& name) {
    if (name == "poisson") return EnsembleTag::POISSON;
    if (name == "goe") return EnsembleTag::GOE;
    if (name == "gue") return EnsembleTag::GUE;
    if (name == "gse") return EnsembleTag::GSE;
    if (name == "berry_robnik" || name == "br") return EnsembleTag::BERRY_ROBNIK;
    return std::nullopt;
}

} // namespace primespec
