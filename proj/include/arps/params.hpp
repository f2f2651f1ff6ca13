#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arps {

/// Raised when an argument lies outside the domain of a formula or model.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure (series, quadrature, inversion) fails
/// to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape parameters below this value are evaluated with the exact b -> 0
/// (exponential decline) limits; |b - 1| below it selects harmonic forms
/// where those need their own branch. Hyperbolic forms are evaluated through
/// log1p/expm1 and stay accurate far below this, so the seam jump is
/// O(kShapeEpsilon (d0 t)^2).
inline constexpr double kShapeEpsilon = 1e-12;

enum class ModelKind { ConstantVol, LinearVol };

std::string_view to_string(ModelKind model);
ModelKind parse_model(std::string_view name);

/// Parameter bundle of the stochastic Arps decline models.
///
///   q0     initial production rate, > 0
///   d0     initial decline rate, > 0
///   b      hyperbolic shape, in [0, 1]
///   sigma  volatility, >= 0 (absolute for the constant-volatility model,
///          relative for the linear-volatility model)
class ArpsParams {
public:
    ArpsParams(double q0, double d0, double b, double sigma);

    static ArpsParams from_sigma2(double q0, double d0, double b, double sigma2);

    double q0() const noexcept { return q0_; }
    double d0() const noexcept { return d0_; }
    double b() const noexcept { return b_; }
    double sigma() const noexcept { return sigma_; }
    double sigma2() const noexcept { return sigma_ * sigma_; }

    bool exponential() const noexcept { return b_ < kShapeEpsilon; }
    bool harmonic() const noexcept { return 1.0 - b_ < kShapeEpsilon; }

    ArpsParams with_b(double b) const { return {q0_, d0_, b, sigma_}; }
    ArpsParams with_sigma(double sigma) const { return {q0_, d0_, b_, sigma}; }

    std::string describe() const;

private:
    double q0_;
    double d0_;
    double b_;
    double sigma_;
};

}  // namespace arps
