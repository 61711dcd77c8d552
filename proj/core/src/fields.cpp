#include "shocklab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace shocklab {

GridSpec::GridSpec(double half_length, std::size_t cell_count, Topology topology)
    : half_length_(half_length), cell_count_(cell_count), dx_(0.0), topology_(topology) {
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw DomainError("grid half-length must be positive and finite");
    if (cell_count < 8) throw DomainError("grid needs at least 8 cells");
    dx_ = 2.0 * half_length / static_cast<double>(cell_count);
}

Field::Field(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw GridMismatch("field has " + std::to_string(values_.size()) + " values for a grid of " +
                           std::to_string(grid_.size()) + " nodes");
    for (std::size_t j = 0; j < values_.size(); ++j)
        if (!std::isfinite(values_[j]))
            throw NonFiniteValue("non-finite field value at node " + std::to_string(j));
}

Field Field::constant(const GridSpec& grid, double c) {
    return Field(grid, std::vector<double>(grid.size(), c));
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

Field Field::shifted_cyclic(std::ptrdiff_t k) const {
    const auto n = static_cast<std::ptrdiff_t>(values_.size());
    const std::ptrdiff_t s = ((k % n) + n) % n;
    std::vector<double> out(values_.size());
    for (std::ptrdiff_t j = 0; j < n; ++j) out[j] = values_[(j + s) % n];
    return Field(grid_, std::move(out));
}

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch("fields live on different grids");
}

Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + b[j];
    return Field(a.grid(), std::move(v));
}

Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] - b[j];
    return Field(a.grid(), std::move(v));
}

Field operator*(double s, const Field& a) {
    std::vector<double> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = s * a[j];
    return Field(a.grid(), std::move(v));
}

Field operator+(const Field& a, double c) {
    std::vector<double> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + c;
    return Field(a.grid(), std::move(v));
}

MonotoneField::MonotoneField(Field f) : field_(std::move(f)) {
    for (std::size_t j = 0; j + 1 < field_.size(); ++j)
        if (!(field_[j + 1] > field_[j]))
            throw OrderingViolation("values not strictly increasing at node " + std::to_string(j));
}

Field spatial_derivative(const Field& f) {
    const auto& g = f.grid();
    const std::size_t n = f.size();
    const double inv2dx = 1.0 / (2.0 * g.dx());
    std::vector<double> d(n);
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) * inv2dx;
    if (g.periodic()) {
        d[0] = (f[1] - f[n - 1]) * inv2dx;
        d[n - 1] = (f[0] - f[n - 2]) * inv2dx;
    } else {
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2dx;
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2dx;
    }
    return Field(g, std::move(d));
}

namespace {

void require_in_domain(const GridSpec& g, double x, const char* what) {
    if (!g.contains(x)) {
        std::ostringstream os;
        os << what << " = " << x << " outside [" << -g.half_length() << ", " << g.half_length() << ")";
        throw DomainError(os.str());
    }
}

// Cell index and fractional offset of x in [-L, L); node hits snap to frac 0.
std::pair<std::size_t, double> locate(const GridSpec& g, double x) {
    double s = (x + g.half_length()) / g.dx();
    const double r = std::round(s);
    if (std::abs(s - r) < 1e-9) s = r;
    auto j = static_cast<std::ptrdiff_t>(std::floor(s));
    j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(g.size()) - 1);
    return {static_cast<std::size_t>(j), s - static_cast<double>(j)};
}

// Value at signed node index i, unwrapped for periodic grids. Clamped grids
// never call this outside [0, n).
double at(const Field& f, std::ptrdiff_t i) {
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    return f[static_cast<std::size_t>(((i % n) + n) % n)];
}

// Integral of the cubic through nodes i0..i0+3 over [x_j, x_j + s*dx],
// by two-point Gauss-Legendre (exact for cubics).
double cubic_cell_integral(const Field& f, std::ptrdiff_t j, double s) {
    if (s <= 0.0) return 0.0;
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    std::ptrdiff_t i0 = j - 1;
    if (!f.grid().periodic()) i0 = std::clamp<std::ptrdiff_t>(i0, 0, n - 4);
    double y[4];
    for (int k = 0; k < 4; ++k) y[k] = at(f, i0 + k);
    // abscissae in cell units relative to node j
    const double t0 = static_cast<double>(i0 - j);
    auto p = [&](double t) {
        double sum = 0.0;
        for (int a = 0; a < 4; ++a) {
            double w = y[a];
            for (int b = 0; b < 4; ++b)
                if (b != a) w *= (t - (t0 + b)) / static_cast<double>(a - b);
            sum += w;
        }
        return sum;
    };
    const double h = 0.5 * s;
    const double off = h / std::sqrt(3.0);
    return h * (p(h - off) + p(h + off)) * f.grid().dx();
}

} // namespace

Field cumulative_from(const Field& f, double b, Quadrature q) {
    const auto& g = f.grid();
    require_in_domain(g, b, "anchor b");
    const std::size_t n = f.size();
    std::vector<double> G(n + 1, 0.0);
    double Gb = 0.0;
    if (q == Quadrature::trapezoid) {
        for (std::size_t j = 0; j + 1 < n; ++j) G[j + 1] = G[j] + 0.5 * g.dx() * (f[j] + f[j + 1]);
        const double fn = g.periodic() ? f[0] : f[n - 1];
        G[n] = G[n - 1] + 0.5 * g.dx() * (f[n - 1] + fn);
        const auto [j, frac] = locate(g, b);
        Gb = G[j] + frac * (G[j + 1] - G[j]);
    } else {
        const Antiderivative A(f);
        std::vector<double> out(n);
        const double Ab = A(b);
        for (std::size_t j = 0; j < n; ++j) out[j] = A(g.node(j)) - Ab;
        return Field(g, std::move(out));
    }
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = G[j] - Gb;
    return Field(g, std::move(out));
}

Antiderivative::Antiderivative(Field f) : f_(std::move(f)), nodal_(f_.size() + 1, 0.0) {
    const std::size_t n = f_.size();
    for (std::size_t j = 0; j + 1 < n; ++j)
        nodal_[j + 1] = nodal_[j] + cubic_cell_integral(f_, static_cast<std::ptrdiff_t>(j), 1.0);
    nodal_[n] = nodal_[n - 1] + (f_.grid().periodic()
                                     ? cubic_cell_integral(f_, static_cast<std::ptrdiff_t>(n - 1), 1.0)
                                     : f_.grid().dx() * f_[n - 1]);
}

double Antiderivative::operator()(double x) const {
    const auto& g = f_.grid();
    if (x == g.half_length()) return nodal_.back();
    require_in_domain(g, x, "integration limit");
    const auto [j, frac] = locate(g, x);
    if (j + 1 == f_.size() && !g.periodic()) return nodal_[j] + frac * g.dx() * f_[j];
    return nodal_[j] + cubic_cell_integral(f_, static_cast<std::ptrdiff_t>(j), frac);
}

double integral_between(const Field& f, double a, double b) {
    const Antiderivative A(f);
    return A(b) - A(a);
}

double interpolate(const Field& f, double x) {
    const auto& g = f.grid();
    if (g.periodic()) {
        const double len = g.length();
        x = std::fmod(x + g.half_length(), len);
        if (x < 0.0) x += len;
        x -= g.half_length();
        if (x >= g.half_length()) x = -g.half_length();
    } else {
        require_in_domain(g, x, "interpolation point");
    }
    const auto [j, frac] = locate(g, x);
    if (frac == 0.0) return f[j];
    const std::size_t n = f.size();
    double right;
    if (j + 1 < n) right = f[j + 1];
    else right = g.periodic() ? f[0] : f[n - 1];
    return f[j] + frac * (right - f[j]);
}

double invert_monotone(const MonotoneField& F, double target) {
    const auto v = F.values();
    const std::size_t n = v.size();
    const double range = v[n - 1] - v[0];
    const double slack = 1e-13 * range;
    if (!(target >= v[0] - slack && target <= v[n - 1] + slack)) {
        std::ostringstream os;
        os << "inversion target " << target << " outside [" << v[0] << ", " << v[n - 1] << "]";
        throw OutOfRange(os.str());
    }
    target = std::clamp(target, v[0], v[n - 1]);
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (v[mid] <= target) lo = mid;
        else hi = mid;
    }
    const auto& g = F.grid();
    const double t = (target - v[lo]) / (v[hi] - v[lo]);
    return g.node(lo) + t * g.dx();
}

double invert_quasi_periodic(const MonotoneField& F, double increment, double target) {
    if (!(increment > 0.0)) throw DomainError("quasi-periodic increment must be positive");
    const auto v = F.values();
    const std::size_t n = v.size();
    const auto& g = F.grid();
    const double k = std::floor((target - v[0]) / increment);
    double t = target - k * increment;
    double x;
    if (t <= v[n - 1]) {
        x = invert_monotone(F, std::max(t, v[0]));
    } else {
        const double top = v[0] + increment;
        x = g.node(n - 1) + g.dx() * (t - v[n - 1]) / (top - v[n - 1]);
    }
    return x + k * g.length();
}

double l1_distance(const Field& f, const Field& g, std::optional<Window> window) {
    require_same_grid(f, g);
    const auto& grid = f.grid();
    if (window && (window->lo < -grid.half_length() || window->hi > grid.half_length() || window->lo > window->hi))
        throw DomainError("L1 window outside the domain");
    double sum = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = grid.node(j);
        if (window && (x < window->lo || x > window->hi)) continue;
        sum += std::abs(f[j] - g[j]);
    }
    return grid.dx() * sum;
}

void write_csv(std::ostream& os, const Field& f) {
    const auto old = os.precision(17);
    os << "x,value\n";
    for (std::size_t j = 0; j < f.size(); ++j) os << f.grid().node(j) << ',' << f[j] << '\n';
    os.precision(old);
}

Field read_csv(std::istream& is, const GridSpec& grid) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,value", 0) != 0) throw ConfigError("CSV snapshot lacks the x,value header");
    std::vector<double> v;
    v.reserve(grid.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("malformed CSV row: " + line);
        const double x = std::stod(line.substr(0, comma));
        if (v.size() >= grid.size() || std::abs(x - grid.node(v.size())) > 1e-9 * grid.length())
            throw GridMismatch("CSV node positions do not match the grid");
        v.push_back(std::stod(line.substr(comma + 1)));
    }
    return Field(grid, std::move(v));
}

} // namespace shocklab
