#include "arps/params.hpp"

#include <cmath>
#include <sstream>

namespace arps {

std::string_view to_string(ModelKind model) {
    switch (model) {
        case ModelKind::ConstantVol: return "const-vol";
        case ModelKind::LinearVol: return "linear-vol";
    }
    return "unknown";
}

ModelKind parse_model(std::string_view name) {
    if (name == "const-vol" || name == "constant" || name == "model1") return ModelKind::ConstantVol;
    if (name == "linear-vol" || name == "linear" || name == "model2") return ModelKind::LinearVol;
    throw DomainError("unknown model '" + std::string(name) + "' (expected const-vol or linear-vol)");
}

ArpsParams::ArpsParams(double q0, double d0, double b, double sigma)
    : q0_(q0), d0_(d0), b_(b), sigma_(sigma) {
    if (!(std::isfinite(q0) && q0 > 0.0)) throw DomainError("q0 must be finite and > 0");
    if (!(std::isfinite(d0) && d0 > 0.0)) throw DomainError("d0 must be finite and > 0");
    if (!(b >= 0.0 && b <= 1.0)) throw DomainError("b must lie in [0, 1]");
    if (!(std::isfinite(sigma) && sigma >= 0.0)) throw DomainError("sigma must be finite and >= 0");
}

ArpsParams ArpsParams::from_sigma2(double q0, double d0, double b, double sigma2) {
    if (!(std::isfinite(sigma2) && sigma2 >= 0.0)) throw DomainError("sigma^2 must be finite and >= 0");
    return {q0, d0, b, std::sqrt(sigma2)};
}

std::string ArpsParams::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "q0=" << q0_ << " d0=" << d0_ << " b=" << b_ << " sigma=" << sigma_;
    return os.str();
}

}  // namespace arps
