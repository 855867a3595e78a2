#pragma once

#include <functional>

#include "tauq/grid.hpp"
#include "tauq/symbols.hpp"

namespace tauq {

/// Analytic test function with derivatives and a declared effective support
/// radius (values and derivatives below 1e-12 outside it).
class SmoothTestFunction {
public:
    using ValueFn = std::function<double(const Vec&)>;
    using GradFn = std::function<Vec(const Vec&)>;
    using HessFn = std::function<Mat(const Vec&)>;

    SmoothTestFunction(int dim, ValueFn value, GradFn grad, HessFn hess, double support_radius);

    static SmoothTestFunction gaussian_bump(const Vec& center, double width);

    int dim() const { return dim_; }
    double support_radius() const { return support_radius_; }
    double operator()(const Vec& q) const { return value_(q); }
    Vec grad(const Vec& q) const { return grad_(q); }
    Mat hess(const Vec& q) const { return hess_(q); }

    RealGridFunction sample(const GridSpec& grid) const;

private:
    int dim_;
    ValueFn value_;
    GradFn grad_;
    HessFn hess_;
    double support_radius_;
};

/// Generator applied in differential + jump form:
///   -tr(A Hess phi) + (b - 2(1-tau) Div A) . grad phi
///   + (c + (1-tau) Div b - (1-tau)^2 tr Hess A) phi
///   - sum_j w_j (phi(q+y_j) - phi(q) - y_j . grad phi(q) / (1+|y_j|^2)).
/// The jump sign is fixed by the quantization rule (symbol e^{iy.p} acts as
/// the shift phi -> phi(.+y)), so that (F(t)phi - phi)/t -> -H phi.
Cplx apply_generator(const HamiltonSymbol& H, double tau, const SmoothTestFunction& phi,
                     const Vec& q);

/// Spectral application of a generic qp-symbol (tau = 1, d = 1):
/// out(q_i) = (2 pi)^{-1/2} Int e^{ipq} S(q_i, p) F[phi](p) dp via the DFT.
ComplexGridFunction apply_symbol_spectral(const std::function<Cplx(double q, double p)>& symbol,
                                          const RealGridFunction& phi);

/// Same, specialized to a Hamilton symbol (coefficients hoisted out of the
/// double loop). Warns when the datum is under-resolved at the Nyquist
/// frequency.
ComplexGridFunction apply_pdo_spectral(const HamiltonSymbol& H, const RealGridFunction& phi);

/// L1 grid norm of (F_tau(t) phi - phi)/t + H_tau phi; decays like O(t).
double derivative_residual(const HamiltonSymbol& H, double tau, double t,
                           const SmoothTestFunction& phi, const GridSpec& grid);

}  // namespace tauq
