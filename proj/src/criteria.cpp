#include "fringelab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fringelab/interference.hpp"
#include "fringelab/measures.hpp"
#include "fringelab/sampling.hpp"
#include "fringelab/scenario_io.hpp"

namespace fringelab {

namespace {

using Matrix = ComplexMatrix<double>;
using Rng = std::mt19937_64;

std::string fmt(double x)
{
    std::ostringstream s;
    s.precision(12);
    s << x;
    return s.str();
}

/// Nearest density matrix in the sense of clipping negative eigenvalues and renormalizing.
DensityMatrix<double> project_to_density(const Matrix& m)
{
    const Eigen::Index n = m.rows();
    const Matrix h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    RealVector<double> ev = solver.eigenvalues().cwiseMax(0.0);
    ev /= ev.sum();
    Matrix out = solver.eigenvectors() * ev.cast<Complex<double>>().asDiagonal()
                 * solver.eigenvectors().adjoint();
    out = (out + out.adjoint().eval()) / 2.0;
    const double excess = out.trace().real() - 1.0;
    out.diagonal().array() -= Complex<double>(excess / double(n));
    return DensityMatrix<double>(std::move(out));
}

Matrix random_traceless_hermitian(Eigen::Index n, Rng& rng)
{
    std::normal_distribution<double> normal;
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            g(i, j) = Complex<double>(normal(rng), normal(rng));
    Matrix h = (g + g.adjoint()) / 2.0;
    h.diagonal().array() -= h.trace() / double(n);
    return h / h.norm();
}

DensityMatrix<double> random_diagonal(Eigen::Index n, Rng& rng)
{
    std::exponential_distribution<double> expo(1.0);
    RealVector<double> p(n);
    for (Eigen::Index i = 0; i < n; ++i)
        p[i] = expo(rng);
    p /= p.sum();
    p[0] = 1.0 - p.tail(n - 1).sum();
    return DensityMatrix<double>::diagonal(p);
}

DensityMatrix<double> density_from_factor(const Matrix& a)
{
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    rho = (rho + rho.adjoint().eval()) / 2.0;
    const double excess = rho.trace().real() - 1.0;
    rho.diagonal().array() -= Complex<double>(excess / double(rho.rows()));
    return DensityMatrix<double>(std::move(rho));
}

/// Coordinate view of the complex factor A as 2 n^2 reals.
Matrix factor_from_params(const RealVector<double>& x, Eigen::Index n)
{
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n * n; ++i)
        a(i % n, i / n) = Complex<double>(x[2 * i], x[2 * i + 1]);
    return a;
}

struct ClimbOutcome {
    double value;
    DensityMatrix<double> state;
};

RealVector<double> params_from_density(const DensityMatrix<double>& rho)
{
    const Eigen::Index n = rho.size();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
    const Matrix a = solver.eigenvectors()
                     * solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex<double>>().asDiagonal();
    RealVector<double> x(2 * n * n);
    for (Eigen::Index i = 0; i < n * n; ++i) {
        x[2 * i] = a(i % n, i / n).real();
        x[2 * i + 1] = a(i % n, i / n).imag();
    }
    return x;
}

/// Normalized-gradient climb of sign * m(A A^H / tr) with adaptive step length. Where the
/// measure has kinks the central difference can point nowhere useful, so a failed gradient
/// step falls back to a batch of random directions before giving up.
std::pair<RealVector<double>, double> gradient_climb(const MeasureFunctional& m,
                                                     RealVector<double> x, Eigen::Index n,
                                                     double sign, int iterations, Rng& rng)
{
    const auto f = [&](const RealVector<double>& p) {
        return sign * m.evaluate(density_from_factor(factor_from_params(p, n)));
    };
    std::normal_distribution<double> normal;
    double fx = f(x);
    double step = 0.25;
    const double h = 1e-6;
    const Eigen::Index dim = x.size();
    RealVector<double> grad(dim);

    const auto try_direction = [&](const RealVector<double>& dir) {
        for (double s = step; s > 1e-9; s *= 0.5) {
            const RealVector<double> trial = x + s * dir;
            const double ft = f(trial);
            if (ft > fx) {
                x = trial;
                fx = ft;
                step = std::min(1.5 * s, 1.0);
                return true;
            }
        }
        return false;
    };

    for (int it = 0; it < iterations; ++it) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            RealVector<double> up = x, down = x;
            up[i] += h;
            down[i] -= h;
            grad[i] = (f(up) - f(down)) / (2.0 * h);
        }
        const double norm = grad.norm();
        if (norm > 0.0 && try_direction(grad / norm))
            continue;
        bool moved = false;
        step = std::max(step, 1e-2);
        for (Eigen::Index k = 0; k < 2 * dim && !moved; ++k) {
            RealVector<double> dir(dim);
            for (Eigen::Index i = 0; i < dim; ++i)
                dir[i] = normal(rng);
            moved = try_direction(dir / dir.norm());
        }
        if (!moved)
            break;
    }
    return {std::move(x), fx};
}

/// Traceless Hermitian moves of single matrix elements: Re and Im of each rho_jk, and
/// population transfer between path j and path n.
std::vector<Matrix> element_moves(Eigen::Index n)
{
    std::vector<Matrix> moves;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = j + 1; k < n; ++k) {
            Matrix re = Matrix::Zero(n, n), im = Matrix::Zero(n, n);
            re(j, k) = re(k, j) = 1.0;
            im(j, k) = Complex<double>(0, 1);
            im(k, j) = Complex<double>(0, -1);
            moves.push_back(std::move(re));
            moves.push_back(std::move(im));
        }
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        Matrix d = Matrix::Zero(n, n);
        d(j, j) = 1.0;
        d(n - 1, n - 1) = -1.0;
        moves.push_back(std::move(d));
    }
    return moves;
}

/// Compass search over the matrix elements, staying inside the PSD cone. Kinks of measures
/// built from |rho_jk| lie along these axes, which the A-space gradient cannot follow.
std::pair<Matrix, double> element_compass(const MeasureFunctional& m, Matrix rho, double sign,
                                          long budget)
{
    const auto moves = element_moves(rho.rows());
    double fr = sign * m.evaluate(DensityMatrix<double>(rho));
    long evaluations = 0;
    for (double step = 0.1; step > 1e-12 && evaluations < budget;) {
        bool moved = false;
        for (const auto& move : moves) {
            for (double dir : {1.0, -1.0}) {
                const Matrix trial = rho + (dir * step) * move;
                if (detail::min_eigenvalue(trial) < 0.0)
                    continue;
                ++evaluations;
                const double ft = sign * m.evaluate(DensityMatrix<double>(trial));
                if (ft > fr) {
                    rho = trial;
                    fr = ft;
                    moved = true;
                    break;
                }
            }
            if (moved)
                break;
        }
        if (!moved)
            step *= 0.5;
    }
    return {std::move(rho), fr};
}

/// Alternates the factor-space gradient climb and the element-wise compass search until
/// neither improves sign * m.
ClimbOutcome climb(const MeasureFunctional& m, RealVector<double> x, Eigen::Index n, double sign,
                   int iterations, Rng& rng)
{
    double best = -std::numeric_limits<double>::infinity();
    DensityMatrix<double> state = density_from_factor(factor_from_params(x, n));
    for (int round = 0; round < 4; ++round) {
        auto [x_end, f_grad] = gradient_climb(m, x, n, sign, iterations, rng);
        const DensityMatrix<double> reached = density_from_factor(factor_from_params(x_end, n));
        auto [rho, f_compass] =
            element_compass(m, reached.matrix(), sign, long(iterations) * 4 * n * n);
        const double previous = best;
        best = std::max(f_grad, f_compass);
        state = f_compass >= f_grad ? DensityMatrix<double>(std::move(rho)) : reached;
        if (!(best > previous + 1e-13))
            break;
        x = params_from_density(state);
    }
    return {sign * best, state};
}

CriterionResult make(std::string id, std::string title)
{
    CriterionResult r;
    r.id = std::move(id);
    r.title = std::move(title);
    return r;
}

} // namespace

std::string_view status_name(CriterionStatus status)
{
    switch (status) {
    case CriterionStatus::pass: return "pass";
    case CriterionStatus::fail: return "fail";
    case CriterionStatus::not_testable: return "not_testable";
    }
    return "unknown";
}

const CriterionResult& CriteriaVerdict::criterion(std::string_view id) const
{
    for (const auto& c : criteria)
        if (c.id == id)
            return c;
    throw InvalidArgument("no criterion '" + std::string(id) + "' in verdict");
}

bool CriteriaVerdict::all_testable_pass() const
{
    return std::none_of(criteria.begin(), criteria.end(),
                        [](const CriterionResult& c) { return c.status == CriterionStatus::fail; });
}

CriteriaVerdict certify(const MeasureFunctional& measure, int n, int samples, std::uint64_t seed,
                        const CertifyOptions& options)
{
    if (n < 2)
        throw InvalidArgument("certification needs at least two paths");
    if (samples < 100)
        throw InvalidArgument("certification needs at least 100 samples");

    Rng rng(seed);
    const double tol = options.value_tolerance;
    const auto& m = measure.evaluate;

    CriteriaVerdict verdict;
    verdict.measure = measure.name;
    verdict.paths = n;
    verdict.samples = samples;
    verdict.seed = seed;

    // Sample pool: pure states, mixtures, and pure states decohered by random ancillas.
    std::vector<DensityMatrix<double>> pool;
    std::vector<double> pool_values;
    pool.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        switch (i % 3) {
        case 0:
            pool.push_back(sampling::random_pure<double>(n, rng));
            break;
        case 1: {
            std::uniform_int_distribution<int> terms(2, n);
            pool.push_back(sampling::random_mixture<double>(n, terms(rng), rng));
            break;
        }
        default: {
            std::uniform_int_distribution<int> dim(1, n + 1);
            const auto rho = sampling::random_pure<double>(n, rng);
            pool.push_back(decohere(rho, sampling::random_gram<double>(n, dim(rng), rng)));
        }
        }
        pool_values.push_back(m(pool.back()));
    }

    const int extremal_count = std::max(samples / 10, 20);
    std::vector<DensityMatrix<double>> diagonals;
    diagonals.push_back(DensityMatrix<double>::diagonal(RealVector<double>::Constant(n, 1.0 / n)));
    {
        RealVector<double> corner = RealVector<double>::Zero(n);
        corner[0] = 1.0;
        diagonals.push_back(DensityMatrix<double>::diagonal(corner));
    }
    while (static_cast<int>(diagonals.size()) < extremal_count)
        diagonals.push_back(random_diagonal(n, rng));

    std::vector<DensityMatrix<double>> balanced;
    const DensityMatrix<double> uniform = DensityMatrix<double>::from_pure_amplitudes(
        ComplexVector<double>::Constant(n, 1.0 / std::sqrt(double(n))));
    balanced.push_back(uniform);
    while (static_cast<int>(balanced.size()) < extremal_count)
        balanced.push_back(sampling::random_equal_population_pure<double>(n, rng));

    std::vector<double> diagonal_values, balanced_values;
    for (const auto& d : diagonals)
        diagonal_values.push_back(m(d));
    for (const auto& b : balanced)
        balanced_values.push_back(m(b));

    double global_min = std::numeric_limits<double>::infinity();
    double global_max = -global_min;
    for (const auto* values : {&pool_values, &diagonal_values, &balanced_values})
        for (double v : *values) {
            global_min = std::min(global_min, v);
            global_max = std::max(global_max, v);
        }

    // (1)
    {
        CriterionResult r = make("1", "definable from the interference pattern alone");
        if (measure.pattern_recipe) {
            r.status = CriterionStatus::pass;
            r.detail = "satisfied by construction: the measure has a pattern-based recipe";
        } else {
            r.status = CriterionStatus::not_testable;
            r.detail = "no pattern-based recipe attached to this measure";
        }
        verdict.criteria.push_back(std::move(r));
    }

    // (2)
    {
        CriterionResult r = make("2", "continuous in the matrix elements");
        const int count = std::min<int>(options.continuity_states, static_cast<int>(pool.size()));
        double lipschitz_coarse = 0, lipschitz_fine = 0;
        std::optional<DensityMatrix<double>> worst;
        for (int i = 0; i < count; ++i) {
            const Matrix delta = random_traceless_hermitian(n, rng);
            for (double eps : {1e-4, 1e-6}) {
                const DensityMatrix<double> moved =
                    project_to_density(pool[i].matrix() + eps * delta);
                const double distance = (moved.matrix() - pool[i].matrix()).norm();
                if (!(distance > 0.0))
                    continue;
                const double ratio = std::abs(m(moved) - pool_values[i]) / distance;
                double& slot = eps > 1e-5 ? lipschitz_coarse : lipschitz_fine;
                if (!(ratio <= slot)) {
                    slot = ratio;
                    if (eps < 1e-5)
                        worst = pool[i];
                }
            }
        }
        const bool finite = std::isfinite(lipschitz_coarse) && std::isfinite(lipschitz_fine);
        const bool stable = lipschitz_fine <= 10.0 * std::max(lipschitz_coarse, 1e-3);
        r.status = finite && stable ? CriterionStatus::pass : CriterionStatus::fail;
        if (r.status == CriterionStatus::fail)
            r.witness = worst;
        r.detail = "empirical Lipschitz constant " + fmt(lipschitz_coarse) + " at eps=1e-4, "
                   + fmt(lipschitz_fine) + " at eps=1e-6 over " + std::to_string(count) + " states";
        verdict.criteria.push_back(std::move(r));
    }

    // (3)
    {
        CriterionResult r = make("3", "global minimum 0 without interference");
        r.status = CriterionStatus::pass;
        for (std::size_t i = 0; i < diagonals.size(); ++i)
            if (std::abs(diagonal_values[i]) > tol) {
                r.status = CriterionStatus::fail;
                r.witness = diagonals[i];
                r.detail = "diagonal state gives " + fmt(diagonal_values[i]);
                break;
            }
        if (r.status == CriterionStatus::pass)
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (pool_values[i] < -tol) {
                    r.status = CriterionStatus::fail;
                    r.witness = pool[i];
                    r.detail = "sampled state falls below the diagonal value: " + fmt(pool_values[i]);
                    break;
                }
        if (r.status == CriterionStatus::pass)
            r.detail = std::to_string(diagonals.size()) + " diagonal states at 0; no sample below";
        verdict.criteria.push_back(std::move(r));
    }

    // (4)
    {
        CriterionResult r = make("4", "global maximum 1 for pure equally populated states");
        r.status = CriterionStatus::pass;
        for (std::size_t i = 0; i < balanced.size(); ++i)
            if (std::abs(balanced_values[i] - 1.0) > tol) {
                r.status = CriterionStatus::fail;
                r.witness = balanced[i];
                r.detail = "pure equally populated state gives " + fmt(balanced_values[i]);
                break;
            }
        if (r.status == CriterionStatus::pass)
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (pool_values[i] > 1.0 + tol) {
                    r.status = CriterionStatus::fail;
                    r.witness = pool[i];
                    r.detail = "sampled state exceeds the maximum: " + fmt(pool_values[i]);
                    break;
                }
        if (r.status == CriterionStatus::pass)
            r.detail = std::to_string(balanced.size())
                       + " pure equally populated states at 1; no sample above";
        verdict.criteria.push_back(std::move(r));
    }

    // (5)
    {
        CriterionResult r = make("5", "no local extrema (evidence, not proof)");
        r.status = CriterionStatus::pass;
        std::normal_distribution<double> normal;
        double lowest_peak = std::numeric_limits<double>::infinity();
        double highest_valley = -lowest_peak;
        for (int s = 0; s < options.ascent_starts && r.status == CriterionStatus::pass; ++s) {
            for (double sign : {1.0, -1.0}) {
                RealVector<double> x(2 * n * n);
                for (Eigen::Index i = 0; i < x.size(); ++i)
                    x[i] = normal(rng);
                const ClimbOutcome out = climb(measure, x, n, sign, options.ascent_iterations, rng);
                const double target = sign > 0 ? global_max : global_min;
                if (sign > 0)
                    lowest_peak = std::min(lowest_peak, out.value);
                else
                    highest_valley = std::max(highest_valley, out.value);
                if (std::abs(out.value - target) > options.extremum_tolerance) {
                    r.status = CriterionStatus::fail;
                    r.witness = out.state;
                    r.detail = std::string(sign > 0 ? "ascent" : "descent") + " stalled at "
                               + fmt(out.value) + ", global extremum " + fmt(target);
                    break;
                }
            }
        }
        if (r.status == CriterionStatus::pass)
            r.detail = "evidence from " + std::to_string(options.ascent_starts)
                       + " ascents and descents: worst peak " + fmt(lowest_peak)
                       + " (max " + fmt(global_max) + "), worst valley " + fmt(highest_valley)
                       + " (min " + fmt(global_min) + ")";
        verdict.criteria.push_back(std::move(r));
    }

    // (6)
    {
        CriterionResult r = make("6", "independent of path labels and diagonal phases");
        r.status = CriterionStatus::pass;
        const int count = std::min<int>(options.invariance_states, static_cast<int>(pool.size()));
        for (int i = 0; i < count && r.status == CriterionStatus::pass; ++i) {
            const auto perm = sampling::random_permutation(n, rng);
            const double relabeled = m(relabel_paths(pool[i], perm));
            const double rephased =
                m(apply_phases(pool[i], sampling::random_phases<double>(n, rng)));
            for (double v : {relabeled, rephased})
                if (std::abs(v - pool_values[i]) > tol) {
                    r.status = CriterionStatus::fail;
                    r.witness = pool[i];
                    r.detail = "value changes from " + fmt(pool_values[i]) + " to " + fmt(v);
                    break;
                }
        }
        if (r.status == CriterionStatus::pass)
            r.detail = std::to_string(count) + " states under random relabeling and rephasing";
        verdict.criteria.push_back(std::move(r));
    }

    // Decoherence by an ancilla must not increase the measure.
    {
        CriterionResult r = make(std::string(monotonicity_id), "never increased by decoherence");
        r.status = CriterionStatus::pass;
        const auto probe = [&](const DensityMatrix<double>& rho, const GramMatrix<double>& gram,
                               double before) {
            const DensityMatrix<double> after = decohere(rho, gram);
            const double value = m(after);
            if (value > before + tol) {
                r.status = CriterionStatus::fail;
                r.witness = rho;
                r.witness_partner = after;
                r.detail = "measure rises from " + fmt(before) + " to " + fmt(value);
                return true;
            }
            return false;
        };
        bool found = false;
        for (int k = 1; k <= n && !found; ++k)
            found = probe(uniform, sampling::isolating_gram<double>(n, PathIndex{k}),
                          balanced_values[0]);
        std::uniform_int_distribution<int> dim(1, n + 1);
        int pairs = 0;
        for (; pairs < options.monotonicity_pairs && !found; ++pairs) {
            const std::size_t i = static_cast<std::size_t>(pairs) % pool.size();
            found = probe(pool[i], sampling::random_gram<double>(n, dim(rng), rng), pool_values[i]);
        }
        if (!found)
            r.detail = std::to_string(n + pairs) + " (state, ancilla) pairs without an increase";
        verdict.criteria.push_back(std::move(r));
    }

    return verdict;
}

nlohmann::json to_json(const CriteriaVerdict& v)
{
    nlohmann::json out;
    out["measure"] = v.measure;
    out["paths"] = v.paths;
    out["samples"] = v.samples;
    out["seed"] = v.seed;
    out["criteria"] = nlohmann::json::array();
    for (const auto& c : v.criteria) {
        nlohmann::json entry{{"id", c.id},
                             {"title", c.title},
                             {"status", std::string(status_name(c.status))},
                             {"detail", c.detail}};
        if (c.witness)
            entry["witness"] = matrix_to_json(c.witness->matrix());
        if (c.witness_partner)
            entry["witness_partner"] = matrix_to_json(c.witness_partner->matrix());
        out["criteria"].push_back(std::move(entry));
    }
    out["all_testable_pass"] = v.all_testable_pass();
    return out;
}

MeasureFunctional coherence_functional()
{
    return {"l1_coherence", [](const DensityMatrix<double>& rho) { return l1_coherence(rho); },
            true};
}

MeasureFunctional contrast_functional(PhaseModel<double> phases)
{
    return {"contrast",
            [phases = std::move(phases)](const DensityMatrix<double>& rho) {
                const Scenario<double> s(rho, std::nullopt, phases);
                const ExtremaResult<double> e = extremize(s);
                return visibility_traditional(e.i_max, e.i_min);
            },
            true};
}

} // namespace fringelab
