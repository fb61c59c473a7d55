#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "trivirus/equilibria.hpp"
#include "trivirus/model.hpp"

namespace trivirus {

enum class Termination { TimeLimit, Converged, StepFailure };

std::string to_string(Termination t);

struct Trajectory {
    int n = 0;
    int m = 0;
    std::vector<double> times;
    std::vector<Vector> states;
    /// Worst excursion beyond the domain over accepted steps, including the
    /// magnitude of every clamp of a small negative coordinate to zero.
    double domain_violation_max = 0.0;
    Termination terminated_reason = Termination::TimeLimit;

    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    /// Steps rejected because the candidate left the relaxed domain.
    std::size_t domain_rejections = 0;
    std::size_t clamp_events = 0;
    /// Largest accepted embedded-error ratio; <= 1 by construction.
    double max_error_ratio = 0.0;

    bool empty() const noexcept { return times.empty(); }
    std::size_t size() const noexcept { return times.size(); }
    SystemState state(std::size_t i) const { return {n, m, states.at(i), times.at(i)}; }
    SystemState final_state() const { return state(size() - 1); }
};

struct IntegratorOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 1.0;
    double invariance_tol = kDefaultDomainTol;
    /// Upper bound on stored samples; stored times are thinned on a
    /// logarithmic grid between t_end * 1e-6 and t_end.
    std::size_t max_samples = 5000;
    /// When non-empty, steps land exactly on these times and only they (plus
    /// t = 0) are stored. Must be increasing and within (0, t_end].
    std::vector<double> sample_times;
    /// Stop early with Termination::Converged once ||f(x)||_inf drops to this
    /// value. 0 disables the check.
    double steady_state_tol = 0.0;
};

/// Dormand-Prince 5(4) with a PI step-size controller. A candidate step that
/// leaves the domain relaxed by invariance_tol is rejected and the step
/// halved. Negative coordinates within invariance_tol are clamped to zero and
/// recorded. If the step size collapses the partial trajectory is returned
/// with Termination::StepFailure.
///
/// Errors: InitialStateOutsideDomain, EmptyTrajectory (t_end <= 0),
/// DimensionMismatch, ParameterOutOfRange (bad options).
Trajectory integrate(const MultiVirusSystem& system, const SystemState& x0, double t_end,
                     const IntegratorOptions& options = {});

/// Initial condition recipe: per node draw m + 1 shares uniform on (0, 1) and
/// set x_i^k = p_i^k / sum_s p_i^s, so every node keeps a susceptible share.
/// Draws come from Pcg64 seeded with `seed`, node-major.
SystemState random_initial_condition(int n, int m, std::uint64_t seed);

struct ConvergenceReport {
    EquilibriumDescriptor target;
    std::vector<double> distances;
    double final_distance = 0.0;
    /// a and b of the log-linear tail fit d(t) ~ a e^{-b t}. A distance that
    /// is identically zero on the tail gives b = +inf and a = 0.
    double fitted_rate = 0.0;
    double fitted_amplitude = 0.0;
    bool converged = false;
    double tol = 0.0;
    /// Line targets: b of the closest segment point to the final state.
    double beta1 = std::numeric_limits<double>::quiet_NaN();
    /// Plane targets: weights of the final state.
    std::vector<double> alpha;
};

/// Distance from a state to a target set. Points use the max-norm; segments
/// minimize the max-norm over b in [0, 1] by golden-section search; planes use
/// plane_projection's residual. `beta1` receives the minimizing b for segments.
double distance_to_target(const EquilibriumDescriptor& target, const SystemState& state, double* beta1 = nullptr);

/// Errors: EmptyTrajectory, ParameterOutOfRange (tail_fraction outside (0, 1]).
ConvergenceReport detect_convergence(const Trajectory& trajectory, const EquilibriumDescriptor& target, double tol,
                                     double tail_fraction = 0.5);

struct ExponentialFit {
    double amplitude = 0.0;
    double rate = 0.0;
};

/// Least-squares fit of log d = log a - b t over samples with d > floor.
/// Fewer than two usable samples give {0, +inf}.
ExponentialFit fit_exponential_decay(const std::vector<double>& times, const std::vector<double>& distances,
                                     double floor = 1e-300);

} // namespace trivirus
