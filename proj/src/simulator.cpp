#include "trivirus/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trivirus/random.hpp"

namespace trivirus {
namespace {

// Dormand-Prince 5(4) tableau; the field is autonomous so the nodes c_i are unused.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants.
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

constexpr double kFitFloor = 1e-13;

class SampleSchedule {
public:
    SampleSchedule(double t_end, const IntegratorOptions& opts) : explicit_(opts.sample_times) {
        if (!explicit_.empty()) return;
        const std::size_t count = opts.max_samples - 2;
        const double first = t_end * 1e-6;
        grid_.reserve(count);
        for (std::size_t j = 0; j < count; ++j) {
            const double frac = count == 1 ? 1.0 : static_cast<double>(j) / static_cast<double>(count - 1);
            grid_.push_back(first * std::pow(t_end / first, frac));
        }
        grid_.back() = t_end;
    }

    bool uses_explicit_times() const { return !explicit_.empty(); }

    /// Next time a step must land on exactly, or +inf.
    double landing_time() const {
        return next_ < explicit_.size() ? explicit_[next_] : std::numeric_limits<double>::infinity();
    }

    /// Whether the state reached at time t is stored; consumes grid points.
    bool take(double t) {
        const auto& times = uses_explicit_times() ? explicit_ : grid_;
        if (next_ >= times.size() || t < times[next_]) return false;
        while (next_ < times.size() && times[next_] <= t) ++next_;
        return true;
    }

private:
    std::vector<double> explicit_;
    std::vector<double> grid_;
    std::size_t next_ = 0;
};

double initial_step(const Vector& y, const Vector& f, const IntegratorOptions& o) {
    const Vector scale = (o.abs_tol + o.rel_tol * y.array().abs()).matrix();
    const double d0 = (y.array() / scale.array()).abs().maxCoeff();
    const double d1 = (f.array() / scale.array()).abs().maxCoeff();
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min(h, o.max_step);
}

void validate_options(double t_end, const IntegratorOptions& o) {
    require(o.rel_tol > 0.0 && o.abs_tol > 0.0, ErrorCode::ParameterOutOfRange, "tolerances must be positive");
    require(o.max_step > 0.0, ErrorCode::ParameterOutOfRange, "max_step must be positive");
    require(o.invariance_tol >= 0.0, ErrorCode::ParameterOutOfRange, "invariance_tol must be nonnegative");
    require(o.max_samples >= 3, ErrorCode::ParameterOutOfRange, "max_samples must be at least 3");
    double prev = 0.0;
    for (double t : o.sample_times) {
        require(t > prev && t <= t_end, ErrorCode::ParameterOutOfRange,
                "sample_times must be increasing and within (0, t_end]");
        prev = t;
    }
}

} // namespace

std::string to_string(Termination t) {
    switch (t) {
    case Termination::TimeLimit: return "TimeLimit";
    case Termination::Converged: return "Converged";
    case Termination::StepFailure: return "StepFailure";
    }
    return "Unknown";
}

Trajectory integrate(const MultiVirusSystem& system, const SystemState& x0, double t_end,
                     const IntegratorOptions& opts) {
    require_dimensions(system, x0);
    require(t_end > 0.0 && std::isfinite(t_end), ErrorCode::EmptyTrajectory,
            "t_end must be positive, a zero-length run has no trajectory");
    validate_options(t_end, opts);
    require(in_domain(x0, opts.invariance_tol), ErrorCode::InitialStateOutsideDomain,
            "initial state lies outside the domain");

    Trajectory traj;
    traj.n = x0.n;
    traj.m = x0.m;
    traj.domain_violation_max = domain_violation(x0);

    SampleSchedule schedule(t_end, opts);
    const Eigen::Index dim = x0.x.size();
    Vector y = x0.x;
    double t = 0.0;
    traj.times.push_back(t);
    traj.states.push_back(y);

    Vector k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), stage(dim), y_new(dim), err(dim);
    vector_field(system, y, k1);
    double h = initial_step(y, k1, opts);
    double err_prev = 1e-4;
    bool last_stored = true;

    auto store = [&](double time) {
        traj.times.push_back(time);
        traj.states.push_back(y);
        last_stored = true;
    };

    while (t < t_end) {
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < h_min) {
            traj.terminated_reason = Termination::StepFailure;
            if (!last_stored) store(t);
            return traj;
        }
        double target = std::min(t_end, schedule.landing_time());
        bool lands = false;
        h = std::min(h, opts.max_step);
        double step = h;
        if (t + step >= target - h_min) {
            step = target - t;
            lands = true;
        }

        stage = y + step * a21 * k1;
        vector_field(system, stage, k2);
        stage = y + step * (a31 * k1 + a32 * k2);
        vector_field(system, stage, k3);
        stage = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
        vector_field(system, stage, k4);
        stage = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        vector_field(system, stage, k5);
        stage = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        vector_field(system, stage, k6);
        y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        vector_field(system, y_new, k7);
        err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double ratio = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
            ratio = std::max(ratio, std::abs(err(i)) / scale);
        }
        if (!std::isfinite(ratio) || ratio > 1.0) {
            ++traj.rejected_steps;
            const double factor = std::isfinite(ratio) ? std::max(kMinFactor, kSafety * std::pow(ratio, -0.2)) : kMinFactor;
            h = step * factor;
            continue;
        }

        const SystemState candidate(traj.n, traj.m, y_new);
        const double excursion = domain_violation(candidate);
        if (excursion > opts.invariance_tol) {
            ++traj.rejected_steps;
            ++traj.domain_rejections;
            h = 0.5 * step;
            continue;
        }

        ++traj.accepted_steps;
        traj.max_error_ratio = std::max(traj.max_error_ratio, ratio);
        traj.domain_violation_max = std::max(traj.domain_violation_max, excursion);
        t = lands ? target : t + step;
        y = y_new;
        k1 = k7;
        bool clamped = false;
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (y(i) < 0.0) {
                y(i) = 0.0;
                clamped = true;
                ++traj.clamp_events;
            }
        }
        if (clamped) vector_field(system, y, k1);

        double factor = kSafety * std::pow(std::max(ratio, 1e-10), -kAlpha) * std::pow(err_prev, kBeta);
        factor = std::clamp(factor, kMinFactor, kMaxFactor);
        err_prev = std::max(ratio, 1e-4);
        // A step shortened to land on a time says nothing about the proposal.
        h = lands ? std::max(step * factor, h) : step * factor;

        last_stored = false;
        if (schedule.take(t)) store(t);
        if (opts.steady_state_tol > 0.0 && k1.lpNorm<Eigen::Infinity>() <= opts.steady_state_tol) {
            traj.terminated_reason = Termination::Converged;
            if (!last_stored) store(t);
            return traj;
        }
    }
    if (!last_stored) store(t);
    traj.terminated_reason = Termination::TimeLimit;
    return traj;
}

SystemState random_initial_condition(int n, int m, std::uint64_t seed) {
    require(n >= 1 && m >= 1, ErrorCode::ParameterOutOfRange, "n and m must be positive");
    Pcg64 rng(seed);
    SystemState state = SystemState::zeros(n, m);
    std::vector<double> shares(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i < n; ++i) {
        double total = 0.0;
        for (auto& s : shares) {
            s = rng.uniform();
            total += s;
        }
        for (int k = 0; k < m; ++k) state.x(static_cast<Eigen::Index>(k) * n + i) = shares[k] / total;
    }
    return state;
}

double distance_to_target(const EquilibriumDescriptor& target, const SystemState& state, double* beta1) {
    switch (target.kind) {
    case EquilibriumKind::LineSegment: {
        require(state.m == 3 && target.generator.size() == state.n, ErrorCode::DimensionMismatch,
                "segment distance needs a tri-virus state matching the generator");
        const Vector& z = target.generator;
        const double rest = state.virus(2).lpNorm<Eigen::Infinity>();
        // Max of convex functions of b, hence unimodal on [0, 1].
        auto gap = [&](double b) {
            return std::max({(state.virus(0) - b * z).lpNorm<Eigen::Infinity>(),
                             (state.virus(1) - (1.0 - b) * z).lpNorm<Eigen::Infinity>(), rest});
        };
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = 0.0, hi = 1.0;
        double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
        double f1 = gap(x1), f2 = gap(x2);
        while (hi - lo > 1e-12) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = gap(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = gap(x2);
            }
        }
        double best_b = 0.5 * (lo + hi);
        double best = gap(best_b);
        for (double end : {0.0, 1.0}) {
            const double g = gap(end);
            if (g < best) {
                best = g;
                best_b = end;
            }
        }
        if (beta1) *beta1 = best_b;
        return best;
    }
    case EquilibriumKind::Plane: return plane_projection(target.generator, state).residual;
    case EquilibriumKind::DFE:
    case EquilibriumKind::Boundary:
    case EquilibriumKind::CoexistencePoint:
        require(target.base_point.x.size() == state.x.size(), ErrorCode::DimensionMismatch,
                "target point dimension differs from state");
        return (state.x - target.base_point.x).lpNorm<Eigen::Infinity>();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

ExponentialFit fit_exponential_decay(const std::vector<double>& times, const std::vector<double>& distances,
                                     double floor) {
    double st = 0, sl = 0, stt = 0, stl = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(distances[i] > floor)) continue;
        const double l = std::log(distances[i]);
        st += times[i];
        sl += l;
        stt += times[i] * times[i];
        stl += times[i] * l;
        ++count;
    }
    if (count < 2) return {0.0, std::numeric_limits<double>::infinity()};
    const double cnt = static_cast<double>(count);
    const double denom = cnt * stt - st * st;
    if (!(denom > 0.0)) return {0.0, std::numeric_limits<double>::infinity()};
    const double slope = (cnt * stl - st * sl) / denom;
    const double intercept = (sl - slope * st) / cnt;
    return {std::exp(intercept), -slope};
}

ConvergenceReport detect_convergence(const Trajectory& trajectory, const EquilibriumDescriptor& target, double tol,
                                     double tail_fraction) {
    require(!trajectory.empty(), ErrorCode::EmptyTrajectory, "trajectory has no samples");
    require(tail_fraction > 0.0 && tail_fraction <= 1.0, ErrorCode::ParameterOutOfRange,
            "tail_fraction must lie in (0, 1]");

    ConvergenceReport report;
    report.target = target;
    report.tol = tol;
    const std::size_t count = trajectory.size();
    report.distances.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double b = std::numeric_limits<double>::quiet_NaN();
        report.distances.push_back(distance_to_target(target, trajectory.state(i), &b));
        if (i + 1 == count) report.beta1 = b;
    }
    report.final_distance = report.distances.back();
    if (target.kind == EquilibriumKind::Plane) {
        report.alpha = plane_projection(target.generator, trajectory.final_state()).alpha;
    }

    const auto first = static_cast<std::size_t>(std::floor((1.0 - tail_fraction) * static_cast<double>(count)));
    const std::vector<double> tail_t(trajectory.times.begin() + static_cast<std::ptrdiff_t>(first),
                                     trajectory.times.end());
    const std::vector<double> tail_d(report.distances.begin() + static_cast<std::ptrdiff_t>(first),
                                     report.distances.end());
    ExponentialFit fit = fit_exponential_decay(tail_t, tail_d, kFitFloor);
    if (std::isinf(fit.rate)) {
        // The tail sits at roundoff; refit on the later half of the resolved stretch.
        std::size_t last = count;
        while (last > 0 && !(report.distances[last - 1] > kFitFloor)) --last;
        const std::size_t start = std::min(first, last / 2);
        fit = fit_exponential_decay(
            std::vector<double>(trajectory.times.begin() + static_cast<std::ptrdiff_t>(start),
                                trajectory.times.begin() + static_cast<std::ptrdiff_t>(last)),
            std::vector<double>(report.distances.begin() + static_cast<std::ptrdiff_t>(start),
                                report.distances.begin() + static_cast<std::ptrdiff_t>(last)),
            kFitFloor);
    }
    report.fitted_rate = fit.rate;
    report.fitted_amplitude = fit.amplitude;
    report.converged = report.final_distance <= tol;
    return report;
}

} // namespace trivirus
