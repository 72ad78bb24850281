#include "romheading/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "romheading/error.hpp"

namespace romheading {

double orientation_error(const Quaternion& q_true, const Quaternion& q_est) {
  return rotation_angle(inverse(q_true) * q_est);
}

double delta_error(double delta_true, double delta_est) noexcept { return angular_distance(delta_true, delta_est); }

namespace {

// Index of the truth sample nearest to t, if within tol.
std::optional<std::size_t> nearest(std::span<const TruthSample> truth, double t, double tol) {
  auto it = std::lower_bound(truth.begin(), truth.end(), t,
                             [](const TruthSample& s, double value) { return s.t < value; });
  std::optional<std::size_t> best;
  double best_gap = tol;
  auto consider = [&](auto pos) {
    if (pos < truth.begin() || pos >= truth.end()) return;
    const double gap = std::abs(pos->t - t);
    if (gap <= best_gap) {
      best_gap = gap;
      best = static_cast<std::size_t>(pos - truth.begin());
    }
  };
  consider(it);
  if (it != truth.begin()) consider(std::prev(it));
  return best;
}

double heading_twist(const Quaternion& q) { return 2.0 * std::atan2(q.z, q.w); }

}  // namespace

ErrorReport evaluate(const DeltaTimeline& timeline, std::span<const OrientationSample> stream1,
                     std::span<const OrientationSample> stream2, std::span<const TruthSample> truth,
                     const EvaluationOptions& options) {
  if (stream1.size() != stream2.size()) throw InvalidInput("evaluate: orientation streams differ in length");
  const double tol = 0.5 * options.sample_interval + 1e-12;

  ErrorReport report;
  double sum_eps = 0.0, sum_delta = 0.0;
  for (std::size_t k = 0; k < stream1.size(); ++k) {
    const double t = stream1[k].t;
    if (t < options.start_time) continue;
    const auto delta_hat = timeline.lookup(t);
    if (!delta_hat) continue;
    const auto idx = nearest(truth, t, tol);
    if (!idx) continue;
    const TruthSample& ref = truth[*idx];

    const Quaternion q_true = inverse(ref.q1) * ref.q2;
    const Quaternion q_est = relative_orientation(stream1[k].q, stream2[k].q, *delta_hat);
    const double eps = orientation_error(q_true, q_est);
    const double eps_delta = delta_error(ref.delta, *delta_hat);

    report.t.push_back(t);
    report.epsilon.push_back(eps);
    report.epsilon_delta.push_back(eps_delta);
    sum_eps += eps * eps;
    sum_delta += eps_delta * eps_delta;
    report.epsilon_max = std::max(report.epsilon_max, eps);
    report.epsilon_delta_max = std::max(report.epsilon_delta_max, eps_delta);
  }
  if (report.t.empty()) throw InvalidInput("evaluate: estimate and truth do not overlap");

  const auto n = static_cast<double>(report.t.size());
  report.epsilon_rms = std::sqrt(sum_eps / n);
  report.epsilon_delta_rms = std::sqrt(sum_delta / n);

  std::optional<double> run_start;
  for (std::size_t k = 0; k < report.t.size(); ++k) {
    if (report.epsilon[k] >= options.convergence_threshold) {
      run_start.reset();
      continue;
    }
    if (!run_start) run_start = report.t[k];
    if (report.t[k] - *run_start >= options.convergence_hold - 1e-9) {
      report.convergence_time = run_start;
      break;
    }
  }
  return report;
}

std::vector<TruthSample> with_effective_heading_offset(std::span<const OrientationSample> stream1,
                                                       std::span<const OrientationSample> stream2,
                                                       std::span<const TruthSample> truth,
                                                       double sample_interval) {
  if (stream1.size() != stream2.size()) throw InvalidInput("effective heading offset: streams differ in length");
  const double tol = 0.5 * sample_interval + 1e-12;
  std::vector<TruthSample> out;
  out.reserve(stream1.size());
  for (std::size_t k = 0; k < stream1.size(); ++k) {
    const auto idx = nearest(truth, stream1[k].t, tol);
    if (!idx) {
      throw InvalidInput("effective heading offset: no truth sample near t=" + std::to_string(stream1[k].t));
    }
    TruthSample s = truth[*idx];
    const double h1 = heading_twist(stream1[k].q * inverse(s.q1));
    const double h2 = heading_twist(stream2[k].q * inverse(s.q2));
    s.t = stream1[k].t;
    s.delta = wrap_two_pi(h1 - h2);
    out.push_back(s);
  }
  return out;
}

}  // namespace romheading
