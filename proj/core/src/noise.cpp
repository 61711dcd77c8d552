#include "shocklab/noise.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <sstream>
#include <vector>

namespace shocklab {

namespace {

// FFTW planning is not thread-safe; execution with the new-array API is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

double bump_shape(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

double bump_shape_integral() {
    // midpoint rule; the integrand is flat at the ends so this converges fast
    constexpr int m = 20000;
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += bump_shape(-1.0 + (i + 0.5) * 2.0 / m);
    return s * 2.0 / m;
}

// Signed offset of node k in circular order: 0, dx, ..., then negatives.
double circular_offset(const GridSpec& g, std::size_t k) {
    const std::size_t n = g.size();
    const auto kk = static_cast<double>(k);
    return (k <= n / 2 ? kk : kk - static_cast<double>(n)) * g.dx();
}

} // namespace

Mollifier::Mollifier(KernelKind kind, double width, const GridSpec& grid)
    : kind_(kind), width_(width), rho_(Field::constant(grid, 0.0)), rho_prime_(Field::constant(grid, 0.0)) {
    const double dx = grid.dx();
    if (!(width >= 4.0 * dx)) {
        std::ostringstream os;
        os << "kernel width " << width << " is below 4*dx = " << 4.0 * dx
           << "; increase the cell count to at least " << static_cast<std::size_t>(std::ceil(8.0 * grid.half_length() / width));
        throw DomainError(os.str());
    }
    if (kind == KernelKind::gaussian) {
        norm_ = 1.0 / (width * std::sqrt(2.0 * std::numbers::pi));
        const double tail = std::erfc(grid.half_length() / (width * std::numbers::sqrt2));
        if (tail > 1e-12) throw DomainError("Gaussian kernel does not fit the domain: tail mass above 1e-12");
    } else {
        if (width >= grid.half_length()) throw DomainError("bump radius must be smaller than the half-length");
        norm_ = 1.0 / (width * bump_shape_integral());
    }

    std::vector<double> r(grid.size()), rp(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        r[j] = density(grid.node(j));
        rp[j] = derivative(grid.node(j));
    }
    rho_ = Field(grid, std::move(r));
    rho_prime_ = Field(grid, std::move(rp));

    double s0 = 0.0, s1 = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double d = circular_offset(grid, k);
        s0 += density(d) * density(d);
        s1 += derivative(d) * derivative(d);
    }
    l2_rho_sq_ = dx * s0;
    l2_rho_prime_sq_ = dx * s1;
}

double Mollifier::density(double x) const noexcept {
    if (kind_ == KernelKind::gaussian) return norm_ * std::exp(-0.5 * x * x / (width_ * width_));
    return norm_ * bump_shape(x / width_);
}

double Mollifier::derivative(double x) const noexcept {
    if (kind_ == KernelKind::gaussian) return -x / (width_ * width_) * density(x);
    const double t = x / width_;
    if (std::abs(t) >= 1.0) return 0.0;
    const double q = 1.0 - t * t;
    return density(x) * (-2.0 * t / (q * q)) / width_;
}

double Mollifier::reach() const noexcept { return kind_ == KernelKind::gaussian ? 12.0 * width_ : width_; }

double covariance_rate(const Mollifier& m, double lag) {
    if (!(std::abs(lag) < m.grid().length())) throw DomainError("covariance lag must satisfy |lag| < 2L");
    const double R = m.reach();
    const double lo = std::min(-R, -R - lag), hi = std::max(R, R - lag);
    constexpr int pts = 40000;
    const double h = (hi - lo) / pts;
    double s = 0.0;
    for (int i = 0; i < pts; ++i) {
        const double y = lo + (i + 0.5) * h;
        s += m.derivative(y) * m.derivative(y + lag);
    }
    return s * h;
}

struct ForcingSampler::Impl {
    Mollifier moll;
    double amplitude;
    NormalStream stream;
    std::uint64_t step = 0;
    std::size_t n;
    std::size_t nc;
    double* real_buf = nullptr;
    fftw_complex* spec = nullptr;
    fftw_complex* work = nullptr;
    std::vector<std::complex<double>> k_rho;
    std::vector<std::complex<double>> k_rho_prime;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    Impl(const Mollifier& m, double amp, std::uint64_t seed, std::uint32_t realization)
        : moll(m), amplitude(amp), stream(seed, realization), n(m.grid().size()), nc(n / 2 + 1) {
        real_buf = fftw_alloc_real(n);
        spec = fftw_alloc_complex(nc);
        work = fftw_alloc_complex(nc);
        {
            std::lock_guard lock(fftw_planner_mutex());
            fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_buf, spec, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), work, real_buf, FFTW_ESTIMATE);
        }
        // Kernel transforms carry the dx of the convolution sum and the 1/n
        // of the unnormalized inverse transform.
        const auto& g = m.grid();
        const double scale = g.dx() / static_cast<double>(n);
        k_rho = transform([&](double d) { return m.density(d); }, scale);
        k_rho_prime = transform([&](double d) { return m.derivative(d); }, scale);
        k_rho_prime[0] = 0.0;
    }

    template <class Fn>
    std::vector<std::complex<double>> transform(Fn&& kernel, double scale) {
        const auto& g = moll.grid();
        for (std::size_t k = 0; k < n; ++k) real_buf[k] = kernel(circular_offset(g, k));
        fftw_execute_dft_r2c(fwd, real_buf, spec);
        std::vector<std::complex<double>> out(nc);
        for (std::size_t k = 0; k < nc; ++k) out[k] = std::complex<double>(spec[k][0], spec[k][1]) * scale;
        return out;
    }

    ~Impl() {
        std::lock_guard lock(fftw_planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(spec);
        fftw_free(work);
    }

    Field convolve(const std::vector<std::complex<double>>& kernel) {
        for (std::size_t k = 0; k < nc; ++k) {
            const std::complex<double> z = std::complex<double>(spec[k][0], spec[k][1]) * kernel[k];
            work[k][0] = z.real();
            work[k][1] = z.imag();
        }
        fftw_execute_dft_c2r(bwd, work, real_buf);
        return Field(moll.grid(), std::vector<double>(real_buf, real_buf + n));
    }

    ForcingIncrement draw(std::uint64_t s, double dt) {
        if (!(dt > 0.0)) throw DomainError("forcing increment needs dt > 0");
        stream.fill(s, real_buf, n);
        const double scale = amplitude * std::sqrt(dt / moll.grid().dx());
        for (std::size_t j = 0; j < n; ++j) real_buf[j] *= scale;
        fftw_execute_dft_r2c(fwd, real_buf, spec);
        Field dV = convolve(k_rho);
        Field dVx = convolve(k_rho_prime);
        return ForcingIncrement{std::move(dV), std::move(dVx), dt};
    }
};

ForcingSampler::ForcingSampler(const Mollifier& m, double amplitude, std::uint64_t seed, std::uint32_t realization)
    : impl_(std::make_unique<Impl>(m, amplitude, seed, realization)) {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw DomainError("noise amplitude must be finite and >= 0");
}

ForcingSampler::~ForcingSampler() = default;
ForcingSampler::ForcingSampler(ForcingSampler&&) noexcept = default;
ForcingSampler& ForcingSampler::operator=(ForcingSampler&&) noexcept = default;

ForcingIncrement ForcingSampler::next(double dt) {
    auto inc = impl_->draw(impl_->step, dt);
    ++impl_->step;
    return inc;
}

ForcingIncrement ForcingSampler::at_step(std::uint64_t step, double dt) { return impl_->draw(step, dt); }

std::uint64_t ForcingSampler::step() const noexcept { return impl_->step; }
double ForcingSampler::amplitude() const noexcept { return impl_->amplitude; }
const Mollifier& ForcingSampler::mollifier() const noexcept { return impl_->moll; }
double ForcingSampler::kpz_constant() const noexcept {
    return impl_->amplitude * impl_->amplitude * impl_->moll.l2_rho_sq();
}

} // namespace shocklab
