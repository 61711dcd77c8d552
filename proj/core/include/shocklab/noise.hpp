#pragma once

// Spatially smooth, temporally white Gaussian forcing V = rho * W and the
// increment of its derivative, synthesized by circular convolution.

#include <cstdint>
#include <memory>

#include "shocklab/fields.hpp"
#include "shocklab/philox.hpp"

namespace shocklab {

enum class KernelKind { gaussian, bump };

/// Smooth kernel rho with unit integral, sampled on a grid.
class Mollifier {
public:
    /// width is sigma for the Gaussian and the support radius for the bump.
    Mollifier(KernelKind kind, double width, const GridSpec& grid);

    KernelKind kind() const noexcept { return kind_; }
    double width() const noexcept { return width_; }
    const GridSpec& grid() const noexcept { return rho_.grid(); }

    /// Samples rho(x_j) and rho'(x_j) centred at x = 0.
    const Field& rho() const noexcept { return rho_; }
    const Field& rho_prime() const noexcept { return rho_prime_; }

    /// Riemann sums of rho^2 and rho'^2 over the circular kernel.
    double l2_rho_sq() const noexcept { return l2_rho_sq_; }
    double l2_rho_prime_sq() const noexcept { return l2_rho_prime_sq_; }

    /// Continuous kernel and derivative (zero outside the support).
    double density(double x) const noexcept;
    double derivative(double x) const noexcept;

    /// Distance beyond which the kernel is treated as zero.
    double reach() const noexcept;

private:
    KernelKind kind_;
    double width_;
    double norm_ = 1.0;
    Field rho_;
    Field rho_prime_;
    double l2_rho_sq_ = 0.0;
    double l2_rho_prime_sq_ = 0.0;
};

/// Covariance rate of the derivative forcing at separation lag,
/// int rho'(y) rho'(y + lag) dy, by fine quadrature.
double covariance_rate(const Mollifier& m, double lag);

/// One time step of forcing: dV and the matching increment of d_x V.
struct ForcingIncrement {
    Field dV;
    Field dVx;
    double dt;
};

/// Draws forcing increments for one realization. Increment k depends only
/// on (seed, realization, k), never on scheduling.
class ForcingSampler {
public:
    ForcingSampler(const Mollifier& m, double amplitude, std::uint64_t seed, std::uint32_t realization);
    ~ForcingSampler();
    ForcingSampler(ForcingSampler&&) noexcept;
    ForcingSampler& operator=(ForcingSampler&&) noexcept;
    ForcingSampler(const ForcingSampler&) = delete;
    ForcingSampler& operator=(const ForcingSampler&) = delete;

    /// Increment for the next step; advances the step counter.
    ForcingIncrement next(double dt);

    /// Increment for an explicit step index; does not touch the counter.
    ForcingIncrement at_step(std::uint64_t step, double dt);

    std::uint64_t step() const noexcept;
    double amplitude() const noexcept;
    const Mollifier& mollifier() const noexcept;

    /// amplitude^2 * ||rho||^2, the Ito constant in the KPZ drift.
    double kpz_constant() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace shocklab
