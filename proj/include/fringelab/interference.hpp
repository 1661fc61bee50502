#pragma once

// Detector-channel intensity under the equal-overlap assumption
//   I = |alpha|^2 sum_jk A_jk exp(i (theta_j - theta_k)),  A = rho o conj(Gamma),
// and its extrema over either the (n-1)-torus of independent path phases or the
// single parameter of a linear phase model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

#include "fringelab/core_model.hpp"

namespace fringelab {

template <typename Real = double>
struct PhaseConfiguration {
    RealVector<Real> phases;        ///< theta_1..theta_n, theta_1 = 0 for independent phases
    std::optional<Real> parameter;  ///< theta of a linear phase model
};

template <typename Real = double>
struct ExtremaResult {
    Real i_max = 0;
    Real i_min = 0;
    Real i_inc = 0;
    PhaseConfiguration<Real> argmax;
    PhaseConfiguration<Real> argmin;
    /// All effective coherences can be made real-positive at once (I_max hits the
    /// closed form |alpha|^2 (1 + sum |A_jk|)).
    bool absorbable = false;
    /// i_max came from the closed form rather than a numerical search.
    bool closed_form_max = false;
};

template <typename Real = double>
struct IntensityPattern {
    RealVector<Real> thetas;
    RealVector<Real> intensities;
    Scenario<Real> scenario;

    /// `theta,intensity` header, 12 significant digits.
    void write_csv(std::ostream& out) const
    {
        const auto old_precision = out.precision(12);
        out << "theta,intensity\n";
        for (Eigen::Index i = 0; i < thetas.size(); ++i)
            out << thetas[i] << ',' << intensities[i] << '\n';
        out.precision(old_precision);
    }
};

struct ExtremizeOptions {
    int grid = 4096;          ///< 1-D samples before refinement (raised to 4096 if lower)
    int starts = 64;          ///< quasi-random starts on the torus (raised to 32 if lower)
    int max_iterations = 500; ///< BFGS iterations per start
};

namespace detail {

template <typename Real>
constexpr Real two_pi = Real(2) * std::numbers::pi_v<Real>;

template <typename Real>
Real wrap_angle(Real t)
{
    t = std::fmod(t, two_pi<Real>);
    if (t < Real(0))
        t += two_pi<Real>;
    if (t >= two_pi<Real> - Real(1e-13))
        t = Real(0);
    return t;
}

/// Principal value in (-pi, pi].
template <typename Real>
Real wrap_signed(Real t)
{
    t = std::remainder(t, two_pi<Real>);
    return t;
}

template <typename Real>
ComplexMatrix<Real> effective_coherences(const Scenario<Real>& s)
{
    return s.reduced_state().matrix();
}

/// I(theta) for independent phases, evaluated as Re(v^H A v) with v_k = exp(-i theta_k).
template <typename Real>
class TorusIntensity {
public:
    TorusIntensity(ComplexMatrix<Real> a, Real alpha_sq) : a_(std::move(a)), alpha_sq_(alpha_sq) {}

    Eigen::Index paths() const { return a_.rows(); }

    /// Full phase vector from the n-1 free angles (theta_1 pinned at 0).
    RealVector<Real> phases(const RealVector<Real>& free) const
    {
        RealVector<Real> full(paths());
        full[0] = Real(0);
        full.tail(paths() - 1) = free;
        return full;
    }

    Real value(const RealVector<Real>& free) const
    {
        const ComplexVector<Real> v = phase_vector(free);
        return alpha_sq_ * v.dot(a_ * v).real();
    }

    Real value_and_gradient(const RealVector<Real>& free, RealVector<Real>& grad) const
    {
        const ComplexVector<Real> v = phase_vector(free);
        const ComplexVector<Real> w = a_ * v;
        // dI/dtheta_m = -2 Im(conj(v_m) w_m)
        grad.resize(free.size());
        for (Eigen::Index m = 1; m < paths(); ++m)
            grad[m - 1] = -Real(2) * alpha_sq_ * (std::conj(v[m]) * w[m]).imag();
        return alpha_sq_ * v.dot(w).real();
    }

private:
    ComplexVector<Real> phase_vector(const RealVector<Real>& free) const
    {
        ComplexVector<Real> v(paths());
        v[0] = Complex<Real>(1);
        for (Eigen::Index m = 1; m < paths(); ++m)
            v[m] = std::polar(Real(1), -free[m - 1]);
        return v;
    }

    ComplexMatrix<Real> a_;
    Real alpha_sq_;
};

/// I(theta) for theta_k = k theta + offset_k as a trigonometric polynomial
/// c_0 + 2 sum_{m>0} Re(c_m exp(i m theta)), c_m = sum_{j-k=m} A_jk exp(i(off_j - off_k)).
template <typename Real>
class LinearIntensity {
public:
    LinearIntensity(const ComplexMatrix<Real>& a, const RealVector<Real>& offsets, Real alpha_sq)
        : harmonics_(ComplexVector<Real>::Zero(a.rows())), alpha_sq_(alpha_sq)
    {
        const Eigen::Index n = a.rows();
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k <= j; ++k)
                harmonics_[j - k] += a(j, k) * std::polar(Real(1), offsets[j] - offsets[k]);
    }

    Real value(Real theta) const
    {
        Real sum = harmonics_[0].real();
        for (Eigen::Index m = 1; m < harmonics_.size(); ++m)
            sum += Real(2) * (harmonics_[m] * std::polar(Real(1), Real(m) * theta)).real();
        return alpha_sq_ * sum;
    }

    Real derivative(Real theta) const
    {
        Real sum = 0;
        for (Eigen::Index m = 1; m < harmonics_.size(); ++m)
            sum -= Real(2) * Real(m) * (harmonics_[m] * std::polar(Real(1), Real(m) * theta)).imag();
        return alpha_sq_ * sum;
    }

private:
    ComplexVector<Real> harmonics_;
    Real alpha_sq_;
};

template <typename Real>
Real closed_form_max(const ComplexMatrix<Real>& a, Real alpha_sq)
{
    Real off = 0;
    for (Eigen::Index j = 0; j < a.rows(); ++j)
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            if (j != k)
                off += std::abs(a(j, k));
    return alpha_sq * (a.trace().real() + off);
}

/// Phases theta with arg(A_jk) + theta_j - theta_k = 0 (mod 2 pi) on every nonzero
/// coherence, or nothing when the coherence phases are not of the form phi_j - phi_k.
template <typename Real>
std::optional<RealVector<Real>> absorbing_phases(const ComplexMatrix<Real>& a,
                                                 Real magnitude_floor = Real(1e-12),
                                                 Real angle_tol = Real(1e-9))
{
    const Eigen::Index n = a.rows();
    RealVector<Real> theta = RealVector<Real>::Zero(n);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (Eigen::Index root = 0; root < n; ++root) {
        if (seen[root])
            continue;
        seen[root] = true;
        std::queue<Eigen::Index> frontier;
        frontier.push(root);
        while (!frontier.empty()) {
            const Eigen::Index j = frontier.front();
            frontier.pop();
            for (Eigen::Index k = 0; k < n; ++k) {
                if (k == j || std::abs(a(j, k)) <= magnitude_floor || seen[k])
                    continue;
                theta[k] = theta[j] + std::arg(a(j, k));
                seen[k] = true;
                frontier.push(k);
            }
        }
    }
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            if (j != k && std::abs(a(j, k)) > magnitude_floor
                && std::abs(wrap_signed(std::arg(a(j, k)) + theta[j] - theta[k])) > angle_tol)
                return std::nullopt;
    const Real first = theta[0];
    for (Eigen::Index k = 0; k < n; ++k)
        theta[k] = wrap_angle(theta[k] - first);
    return theta;
}

/// Additive recurrence with the generalized golden ratio; start k of dimension d.
template <typename Real>
RealVector<Real> quasi_random_point(int k, Eigen::Index d)
{
    // phi_d solves x^{d+1} = x + 1
    double phi = 2.0;
    for (int it = 0; it < 64; ++it)
        phi = std::pow(1.0 + phi, 1.0 / double(d + 1));
    RealVector<Real> x(d);
    double inv = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        inv /= phi;
        const double u = std::fmod(0.5 + inv * double(k), 1.0);
        x[i] = Real(u) * two_pi<Real>;
    }
    return x;
}

template <typename Real>
struct LocalMinimum {
    RealVector<Real> x;
    Real value;
};

/// BFGS with Armijo backtracking; stops when the accepted step is below `step_tol`.
template <typename Real, typename ValueGrad>
LocalMinimum<Real> bfgs_minimize(const ValueGrad& fg, RealVector<Real> x, int max_iterations,
                                 Real step_tol = Real(1e-10))
{
    const Eigen::Index d = x.size();
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    Mat h = Mat::Identity(d, d);
    RealVector<Real> g(d), g_new(d);
    Real f = fg(x, g);
    for (int iter = 0; iter < max_iterations; ++iter) {
        if (g.norm() == Real(0))
            break;
        RealVector<Real> p = -h * g;
        if (p.dot(g) >= Real(0)) {
            h.setIdentity();
            p = -g;
        }
        const Real cap = std::numbers::pi_v<Real>;
        if (p.norm() > cap)
            p *= cap / p.norm();
        const Real slope = p.dot(g);
        Real step = 1;
        RealVector<Real> x_new(d);
        Real f_new = f;
        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            x_new = x + step * p;
            f_new = fg(x_new, g_new);
            if (f_new <= f + Real(1e-4) * step * slope) {
                accepted = true;
                break;
            }
            step /= Real(2);
        }
        if (!accepted)
            break;
        const RealVector<Real> s = x_new - x;
        const RealVector<Real> y = g_new - g;
        x = x_new;
        f = f_new;
        g = g_new;
        if (s.norm() < step_tol)
            break;
        const Real sy = s.dot(y);
        if (sy > std::numeric_limits<Real>::epsilon() * s.norm() * y.norm()) {
            const RealVector<Real> hy = h * y;
            const Real yhy = y.dot(hy);
            h += ((sy + yhy) / (sy * sy)) * (s * s.transpose())
                 - (hy * s.transpose() + s * hy.transpose()) / sy;
        }
    }
    return {std::move(x), f};
}

/// Lexicographic comparison of wrapped phase vectors, used to break value ties.
template <typename Real>
bool phases_before(const RealVector<Real>& a, const RealVector<Real>& b)
{
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const Real wa = wrap_angle(a[i]);
        const Real wb = wrap_angle(b[i]);
        if (std::abs(wa - wb) > Real(1e-12))
            return wa < wb;
    }
    return false;
}

template <typename Real>
constexpr Real tie_tolerance = Real(1e-12);

/// Global minimum over the torus by multi-start BFGS. `sign` = -1 maximizes.
template <typename Real>
LocalMinimum<Real> torus_minimize(const TorusIntensity<Real>& f, Real sign,
                                  const ExtremizeOptions& options)
{
    const Eigen::Index d = f.paths() - 1;
    const auto fg = [&](const RealVector<Real>& x, RealVector<Real>& g) {
        const Real v = f.value_and_gradient(x, g);
        g *= sign;
        return sign * v;
    };
    const int starts = std::max(options.starts, 32);
    std::optional<LocalMinimum<Real>> best;
    for (int k = 0; k < starts; ++k) {
        LocalMinimum<Real> local =
            bfgs_minimize<Real>(fg, quasi_random_point<Real>(k, d), options.max_iterations);
        local.x = local.x.unaryExpr([](Real t) { return wrap_angle(t); });
        if (!best || local.value < best->value - tie_tolerance<Real>
            || (local.value <= best->value + tie_tolerance<Real>
                && phases_before<Real>(local.x, best->x))) {
            best = std::move(local);
        }
    }
    best->value *= sign;
    return *best;
}

/// Refine a grid extremum by bisection on the sign of dI/dtheta inside the neighbouring cells.
template <typename Real>
Real refine_linear(const LinearIntensity<Real>& f, Real centre, Real half_width, Real sign)
{
    Real lo = centre - half_width;
    Real hi = centre + half_width;
    // For a minimum of sign*I, sign*I' goes from <= 0 to >= 0.
    Real d_lo = sign * f.derivative(lo);
    Real d_hi = sign * f.derivative(hi);
    if (!(d_lo <= Real(0) && d_hi >= Real(0)))
        return centre;
    for (int it = 0; it < 200 && hi - lo > Real(1e-15); ++it) {
        const Real mid = (lo + hi) / Real(2);
        const Real d_mid = sign * f.derivative(mid);
        if (d_mid < Real(0))
            lo = mid;
        else if (d_mid > Real(0))
            hi = mid;
        else
            return mid;
    }
    const Real refined = (lo + hi) / Real(2);
    return sign * f.value(refined) <= sign * f.value(centre) ? refined : centre;
}

/// Global minimum of sign*I over [0, 2 pi): grid, then refine every discrete local minimum.
template <typename Real>
std::pair<Real, Real> linear_minimize(const LinearIntensity<Real>& f, Real sign, int grid)
{
    const int samples = std::max(grid, 4096);
    const Real h = two_pi<Real> / Real(samples);
    std::vector<Real> values(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
        values[i] = sign * f.value(h * Real(i));
    Real best_theta = 0;
    Real best_value = std::numeric_limits<Real>::infinity();
    for (int i = 0; i < samples; ++i) {
        const Real prev = values[(i + samples - 1) % samples];
        const Real next = values[(i + 1) % samples];
        if (values[i] > prev || values[i] > next)
            continue;
        const Real theta = wrap_angle(refine_linear(f, h * Real(i), h, sign));
        const Real value = sign * f.value(theta);
        if (value < best_value - tie_tolerance<Real>
            || (value <= best_value + tie_tolerance<Real> && theta < best_theta)) {
            best_value = value;
            best_theta = theta;
        }
    }
    return {best_theta, sign * best_value};
}

template <typename Real>
Real clamp_intensity(Real value)
{
    return std::max(value, Real(0));
}

} // namespace detail

/// Probability of detection in the output channel, in units where |alpha|^2 is the
/// coupling; computed as |alpha|^2 sum_jk of the phased, decohered state.
template <typename Real>
Real intensity(const Scenario<Real>& s)
{
    const ComplexMatrix<Real> a = detail::effective_coherences(s);
    const RealVector<Real> thetas = path_phases(s.phases());
    const ComplexVector<Real> u = thetas.unaryExpr([](Real t) { return std::polar(Real(1), t); });
    const Complex<Real> total = a.cwiseProduct(u * u.adjoint()).sum();
    return detail::clamp_intensity(s.alpha_sq() * total.real());
}

/// Uniform samples theta_i = 2 pi i / grid of a linear-phase scenario.
template <typename Real>
IntensityPattern<Real> sweep(const Scenario<Real>& s, int grid)
{
    const auto* lin = std::get_if<LinearPhases<Real>>(&s.phases());
    if (lin == nullptr)
        throw UnsupportedOperation("sweep needs a linear phase model; independent phases "
                                   "have no single sweep parameter");
    if (grid < 2)
        throw InvalidArgument("sweep grid must have at least 2 samples");
    IntensityPattern<Real> pattern{RealVector<Real>(grid), RealVector<Real>(grid), s};
    for (int i = 0; i < grid; ++i) {
        const Real theta = detail::two_pi<Real> * Real(i) / Real(grid);
        pattern.thetas[i] = theta;
        pattern.intensities[i] = intensity(s.with_phases(LinearPhases<Real>{theta, lin->offsets}));
    }
    return pattern;
}

/// I_max, I_min and I_inc of a scenario. Independent phases: closed-form I_max when the
/// coherence phases are absorbable, multi-start BFGS on the torus otherwise and for I_min.
/// Linear phases: dense grid plus derivative-bracketed refinement for both extrema.
template <typename Real>
ExtremaResult<Real> extremize(const Scenario<Real>& s, const ExtremizeOptions& options = {})
{
    const ComplexMatrix<Real> a = detail::effective_coherences(s);
    const Eigen::Index n = s.size();
    const Real alpha_sq = s.alpha_sq();
    const Real closed = detail::closed_form_max(a, alpha_sq);
    ExtremaResult<Real> r;
    r.i_inc = alpha_sq;

    if (const auto* lin = std::get_if<LinearPhases<Real>>(&s.phases())) {
        const detail::LinearIntensity<Real> f(a, lin->offsets, alpha_sq);
        const auto [t_max, v_max] = detail::linear_minimize(f, Real(-1), options.grid);
        const auto [t_min, v_min] = detail::linear_minimize(f, Real(1), options.grid);
        r.i_max = detail::clamp_intensity(v_max);
        r.i_min = detail::clamp_intensity(v_min);
        r.argmax = {path_phases<Real>(LinearPhases<Real>{t_max, lin->offsets}), t_max};
        r.argmin = {path_phases<Real>(LinearPhases<Real>{t_min, lin->offsets}), t_min};
        r.absorbable = r.i_max >= closed - Real(1e-9) * alpha_sq;
        r.closed_form_max = false;
        return r;
    }

    if (n == 1) {
        const Real value = alpha_sq * a(0, 0).real();
        r.i_max = r.i_min = value;
        r.argmax = r.argmin = {RealVector<Real>::Zero(1), std::nullopt};
        r.absorbable = true;
        r.closed_form_max = true;
        return r;
    }

    const detail::TorusIntensity<Real> f(a, alpha_sq);
    if (const auto phases = detail::absorbing_phases(a)) {
        r.i_max = closed;
        r.argmax = {*phases, std::nullopt};
        r.absorbable = true;
        r.closed_form_max = true;
    } else {
        const auto best = detail::torus_minimize(f, Real(-1), options);
        r.i_max = detail::clamp_intensity(best.value);
        r.argmax = {f.phases(best.x), std::nullopt};
        r.absorbable = false;
        r.closed_form_max = false;
    }
    const auto low = detail::torus_minimize(f, Real(1), options);
    r.i_min = detail::clamp_intensity(low.value);
    r.argmin = {f.phases(low.x), std::nullopt};
    return r;
}

namespace detail {

/// Direct double sum, kept separate from the engine's evaluation routes.
template <typename Real>
Real brute_intensity(const ComplexMatrix<Real>& a, const RealVector<Real>& thetas, Real alpha_sq)
{
    Real total = 0;
    for (Eigen::Index j = 0; j < a.rows(); ++j)
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            total += (a(j, k) * std::polar(Real(1), thetas[j] - thetas[k])).real();
    return alpha_sq * total;
}

/// Derivative-free compass search with step halving on failure.
template <typename Real, typename F>
std::pair<RealVector<Real>, Real> compass_search(const F& f, RealVector<Real> x, Real step)
{
    Real fx = f(x);
    for (int iter = 0; iter < 20000 && step > Real(1e-13); ++iter) {
        bool moved = false;
        for (Eigen::Index i = 0; i < x.size() && !moved; ++i) {
            for (Real dir : {Real(1), Real(-1)}) {
                RealVector<Real> y = x;
                y[i] += dir * step;
                const Real fy = f(y);
                if (fy < fx) {
                    x = std::move(y);
                    fx = fy;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved)
            step /= Real(2);
    }
    return {std::move(x), fx};
}

} // namespace detail

/// Brute-force reference: exhaustive grid of per_axis^(n-1) points (independent phases,
/// n <= 5) or per_axis points (linear phases), then a compass search from the best grid
/// local extrema. Used to bound the optimizer in tests.
template <typename Real>
ExtremaResult<Real> extremize_oracle(const Scenario<Real>& s, int per_axis)
{
    const ComplexMatrix<Real> a = detail::effective_coherences(s);
    const Eigen::Index n = s.size();
    const Real alpha_sq = s.alpha_sq();
    if (per_axis < 2)
        throw InvalidArgument("oracle grid needs at least 2 points per axis");

    const auto* lin = std::get_if<LinearPhases<Real>>(&s.phases());
    Eigen::Index d = 0;
    std::function<RealVector<Real>(const RealVector<Real>&)> to_phases;
    if (lin != nullptr) {
        d = 1;
        to_phases = [lin](const RealVector<Real>& x) {
            return path_phases<Real>(LinearPhases<Real>{x[0], lin->offsets});
        };
    } else {
        if (n > 5)
            throw UnsupportedOperation("oracle grid limited to n <= 5 independent phases");
        d = n - 1;
        to_phases = [n](const RealVector<Real>& x) {
            RealVector<Real> full = RealVector<Real>::Zero(n);
            full.tail(n - 1) = x;
            return full;
        };
    }

    ExtremaResult<Real> r;
    r.i_inc = alpha_sq;
    if (d == 0) {
        r.i_max = r.i_min = alpha_sq * a(0, 0).real();
        r.argmax = r.argmin = {RealVector<Real>::Zero(1), std::nullopt};
        r.absorbable = true;
        return r;
    }

    std::size_t total = 1;
    for (Eigen::Index i = 0; i < d; ++i) {
        total *= static_cast<std::size_t>(per_axis);
        if (total > (std::size_t(1) << 28))
            throw UnsupportedOperation("oracle grid too large");
    }
    const Real h = detail::two_pi<Real> / Real(per_axis);
    const auto point = [&](std::size_t idx) {
        RealVector<Real> x(d);
        for (Eigen::Index i = 0; i < d; ++i) {
            x[i] = h * Real(idx % per_axis);
            idx /= per_axis;
        }
        return x;
    };
    std::vector<Real> values(total);
    for (std::size_t idx = 0; idx < total; ++idx)
        values[idx] = detail::brute_intensity<Real>(a, to_phases(point(idx)), alpha_sq);

    const auto is_local = [&](std::size_t idx, Real sign) {
        std::size_t stride = 1;
        for (Eigen::Index i = 0; i < d; ++i) {
            const std::size_t digit = (idx / stride) % per_axis;
            const std::size_t up = idx - digit * stride + ((digit + 1) % per_axis) * stride;
            const std::size_t down =
                idx - digit * stride + ((digit + per_axis - 1) % per_axis) * stride;
            if (sign * values[up] < sign * values[idx] || sign * values[down] < sign * values[idx])
                return false;
            stride *= per_axis;
        }
        return true;
    };

    const auto search = [&](Real sign) {
        std::vector<std::size_t> candidates;
        for (std::size_t idx = 0; idx < total; ++idx)
            if (is_local(idx, sign))
                candidates.push_back(idx);
        std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t l, std::size_t r) {
            return sign * values[l] < sign * values[r];
        });
        if (candidates.size() > 8)
            candidates.resize(8);
        const auto objective = [&](const RealVector<Real>& x) {
            return sign * detail::brute_intensity<Real>(a, to_phases(x), alpha_sq);
        };
        RealVector<Real> best_x;
        Real best = std::numeric_limits<Real>::infinity();
        for (std::size_t idx : candidates) {
            auto [x, fx] = detail::compass_search<Real>(objective, point(idx), h);
            if (fx < best) {
                best = fx;
                best_x = x.unaryExpr([](Real t) { return detail::wrap_angle(t); });
            }
        }
        return std::make_pair(best_x, sign * best);
    };

    const auto [x_max, v_max] = search(Real(-1));
    const auto [x_min, v_min] = search(Real(1));
    r.i_max = detail::clamp_intensity(v_max);
    r.i_min = detail::clamp_intensity(v_min);
    const std::optional<Real> p_max = lin ? std::optional<Real>(x_max[0]) : std::nullopt;
    const std::optional<Real> p_min = lin ? std::optional<Real>(x_min[0]) : std::nullopt;
    r.argmax = {to_phases(x_max), p_max};
    r.argmin = {to_phases(x_min), p_min};
    r.absorbable = r.i_max >= detail::closed_form_max(a, alpha_sq) - Real(1e-6) * alpha_sq;
    return r;
}

} // namespace fringelab
