#include "romheading/heading_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "romheading/error.hpp"

namespace romheading {

std::size_t WindowConfig::window_samples() const {
  return static_cast<std::size_t>(std::llround(window_length / sample_interval));
}

std::size_t WindowConfig::min_samples() const { return std::max<std::size_t>(2, window_samples() / 8); }

void WindowConfig::validate() const {
  if (!(sample_interval > 0.0)) throw ConfigError("window: T_s must be positive");
  if (!(estimation_interval >= sample_interval)) throw ConfigError("window: T_est must be >= T_s");
  if (!(estimation_interval <= window_length)) throw ConfigError("window: T_est must be <= T_w");
  if (window_samples() < 2) throw ConfigError("window: T_w / T_s must give at least 2 samples");
}

void OptimizerConfig::validate() const {
  if (!(grid_step > 0.0 && grid_step <= kPi)) throw ConfigError("optimizer: grid_step must lie in (0, 180] deg");
  if (!(refine_tol > 0.0)) throw ConfigError("optimizer: refine_tol must be positive");
  if (stride < 1) throw ConfigError("optimizer: stride must be >= 1");
}

void DeltaTimeline::append(const HeadingEstimate& estimate) {
  if (!estimates_.empty() && !(estimate.t_w > estimates_.back().t_w)) {
    throw InvalidInput("timeline estimates must have strictly increasing t_w");
  }
  estimates_.push_back(estimate);
}

const HeadingEstimate* DeltaTimeline::lookup_estimate(double t) const {
  auto it = std::upper_bound(estimates_.begin(), estimates_.end(), t + 1e-9,
                             [](double value, const HeadingEstimate& e) { return value < e.t_w; });
  if (it == estimates_.begin()) return nullptr;
  return &*std::prev(it);
}

std::optional<double> DeltaTimeline::lookup(double t) const {
  const HeadingEstimate* e = lookup_estimate(t);
  if (e == nullptr) return std::nullopt;
  return e->delta_hat;
}

Quaternion heading_quat(double delta) noexcept { return {std::cos(0.5 * delta), 0.0, 0.0, std::sin(0.5 * delta)}; }

Quaternion relative_orientation(const Quaternion& q1, const Quaternion& q2, double delta_hat) {
  return inverse(q1) * heading_quat(delta_hat) * q2;
}

int constraint_violation(const Quaternion& q1, const Quaternion& q2, double delta_hat, const JointModel& model,
                         RomMargin margin) {
  return static_cast<int>(rom_check(model, relative_orientation(q1, q2, delta_hat), margin));
}

namespace {

struct Evaluation {
  double delta = 0.0;  // wrapped to [0, 2pi)
  double cost = 0.0;
  std::size_t violations = 0;
};

// Cost of a window as a function of delta_hat. For each evaluated sample,
// q1^-1 * heading_quat(d) * q2 = cos(d/2) P + sin(d/2) Q with P = q1^-1 q2 and
// Q = q1^-1 k q2, so candidates cost a handful of multiply-adds each.
class WindowObjective {
public:
  WindowObjective(std::span<const SamplePair> window, std::optional<double> prev, const JointModel& model,
                  RomMargin margin, std::size_t stride)
      : checker_(model, margin), prev_(prev), stride_(stride) {
    if (window.empty()) throw InvalidInput("window_cost needs a non-empty window");
    if (stride_ < 1) throw InvalidInput("constraint stride must be >= 1");
    distance_scale_ = static_cast<double>(window.size()) / kPi;
    const Quaternion k{0.0, 0.0, 0.0, 1.0};
    for (std::size_t i = 0; i < window.size(); i += stride_) {
      const Quaternion inv1 = inverse(window[i].q1);
      p_.push_back(inv1 * window[i].q2);
      q_.push_back(inv1 * k * window[i].q2);
    }
  }

  std::size_t evaluated_samples() const noexcept { return p_.size(); }

  double distance_term(double delta) const noexcept {
    return prev_ ? distance_scale_ * angular_distance(delta, *prev_) : 0.0;
  }

  Evaluation evaluate(double delta) const {
    const double c = std::cos(0.5 * delta), s = std::sin(0.5 * delta);
    std::size_t violations = 0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
      if (!checker_.inside(combine(i, c, s))) ++violations;
    }
    return finish(delta, violations);
  }

  // Same as evaluate() for many candidates at once, samples in the outer loop.
  std::vector<Evaluation> evaluate(std::span<const double> deltas) const {
    std::vector<double> cs(deltas.size()), ss(deltas.size());
    for (std::size_t j = 0; j < deltas.size(); ++j) {
      cs[j] = std::cos(0.5 * deltas[j]);
      ss[j] = std::sin(0.5 * deltas[j]);
    }
    std::vector<std::size_t> violations(deltas.size(), 0);
    for (std::size_t i = 0; i < p_.size(); ++i) {
      for (std::size_t j = 0; j < deltas.size(); ++j) {
        if (!checker_.inside(combine(i, cs[j], ss[j]))) ++violations[j];
      }
    }
    std::vector<Evaluation> out(deltas.size());
    for (std::size_t j = 0; j < deltas.size(); ++j) out[j] = finish(deltas[j], violations[j]);
    return out;
  }

  // Strict weak order implementing the documented tie-break.
  bool better(const Evaluation& a, const Evaluation& b) const noexcept {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (prev_) {
      const double da = angular_distance(a.delta, *prev_), db = angular_distance(b.delta, *prev_);
      if (da != db) return da < db;
    }
    return a.delta < b.delta;
  }

private:
  Quaternion combine(std::size_t i, double c, double s) const noexcept {
    const Quaternion& p = p_[i];
    const Quaternion& q = q_[i];
    return {c * p.w + s * q.w, c * p.x + s * q.x, c * p.y + s * q.y, c * p.z + s * q.z};
  }

  Evaluation finish(double delta, std::size_t violations) const noexcept {
    const double d = wrap_two_pi(delta);
    return {d, distance_term(d) + static_cast<double>(stride_) * static_cast<double>(violations), violations};
  }

  RomChecker checker_;
  std::optional<double> prev_;
  std::size_t stride_;
  double distance_scale_ = 0.0;
  std::vector<Quaternion> p_, q_;
};

// Golden-section search on [lo, hi] (lo < hi, unwrapped), keeping the best
// point seen under the objective's ordering.
Evaluation golden_section(const WindowObjective& objective, double lo, double hi, double tol, Evaluation best) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  Evaluation fc = objective.evaluate(c);
  Evaluation fd = objective.evaluate(d);
  auto keep = [&](const Evaluation& e) {
    if (objective.better(e, best)) best = e;
  };
  keep(fc);
  keep(fd);
  while (b - a > tol) {
    if (fc.cost < fd.cost) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective.evaluate(c);
      keep(fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective.evaluate(d);
      keep(fd);
    }
  }
  return best;
}

HeadingEstimate to_estimate(const Evaluation& e, const WindowObjective& objective) {
  HeadingEstimate out;
  out.delta_hat = e.delta;
  out.cost = e.cost;
  out.violation_count = e.violations;
  out.samples_used = objective.evaluated_samples();
  return out;
}

// Midpoint of the largest circular run of grid nodes sharing the minimum
// cost; ties between runs go to the run starting at the smaller index.
std::optional<double> plateau_midpoint(const std::vector<Evaluation>& grid, double step) {
  const std::size_t n = grid.size();
  double min_cost = grid.front().cost;
  for (const auto& e : grid) min_cost = std::min(min_cost, e.cost);
  std::vector<char> at_min(n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    at_min[i] = grid[i].cost == min_cost;
    count += at_min[i];
  }
  if (count < 2) return std::nullopt;
  if (count == n) return std::nullopt;  // flat: no structure at all

  // Start scanning right after a non-minimal node so runs never straddle the scan origin.
  std::size_t origin = 0;
  while (at_min[origin]) ++origin;
  std::size_t best_start = 0, best_len = 0, run_start = 0, run_len = 0;
  for (std::size_t s = 1; s <= n; ++s) {
    const std::size_t i = (origin + s) % n;
    if (at_min[i]) {
      if (run_len == 0) run_start = i;
      ++run_len;
      if (run_len > best_len || (run_len == best_len && run_start < best_start)) {
        best_len = run_len;
        best_start = run_start;
      }
    } else {
      run_len = 0;
    }
  }
  if (best_len < 2) return std::nullopt;
  return wrap_two_pi((static_cast<double>(best_start) + 0.5 * static_cast<double>(best_len - 1)) * step);
}

double min_cost(const std::vector<Evaluation>& evaluations) {
  double out = evaluations.front().cost;
  for (const auto& e : evaluations) out = std::min(out, e.cost);
  return out;
}

}  // namespace

double window_cost(std::span<const SamplePair> window, double delta_hat, std::optional<double> prev,
                   const JointModel& model, RomMargin margin, std::size_t stride) {
  return WindowObjective(window, prev, model, margin, stride).evaluate(delta_hat).cost;
}

HeadingEstimate minimize_window(std::span<const SamplePair> window, std::optional<double> prev,
                                const JointModel& model, RomMargin margin, const OptimizerConfig& opt) {
  opt.validate();
  const WindowObjective objective(window, prev, model, margin, opt.stride);

  const auto n_grid = static_cast<std::size_t>(std::max<long long>(1, std::llround(kTwoPi / opt.grid_step)));
  const double step = kTwoPi / static_cast<double>(n_grid);
  const double fine = step / 10.0;

  if (!prev) {
    // Without the distance term the cost is piecewise constant, so the whole
    // circle is scanned at the fine spacing and the widest minimal run wins.
    std::vector<double> candidates(10 * n_grid);
    for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = static_cast<double>(i) * fine;
    const std::vector<Evaluation> grid = objective.evaluate(candidates);
    if (auto mid = plateau_midpoint(grid, fine)) {
      const Evaluation at_mid = objective.evaluate(*mid);
      if (at_mid.cost == min_cost(grid)) return to_estimate(at_mid, objective);
    }
    Evaluation best = grid.front();
    for (const auto& e : grid) {
      if (objective.better(e, best)) best = e;
    }
    return to_estimate(best, objective);
  }

  std::vector<double> candidates(n_grid);
  for (std::size_t i = 0; i < n_grid; ++i) candidates[i] = static_cast<double>(i) * step;
  Evaluation best = objective.evaluate(*prev);
  for (const auto& e : objective.evaluate(candidates)) {
    if (objective.better(e, best)) best = e;
  }

  // Scan the best cell's neighbourhood at the refinement tolerance; narrow
  // dips in the violation count are easily narrower than the fine step.
  const double centre = best.delta;
  const auto half_span = static_cast<long long>(std::ceil(step / opt.refine_tol));
  const double spacing = step / static_cast<double>(half_span);
  std::vector<double> local;
  local.reserve(static_cast<std::size_t>(2 * half_span + 2));
  for (long long m = -half_span; m <= half_span; ++m) local.push_back(centre + static_cast<double>(m) * spacing);
  if (angular_distance(*prev, centre) <= step) local.push_back(*prev);
  for (const auto& e : objective.evaluate(local)) {
    if (objective.better(e, best)) best = e;
  }

  // Golden-section on the last cell toward prev: the distance term keeps
  // falling toward prev until the violation count steps up.
  const double toward = wrap_pi(*prev - best.delta);
  if (std::abs(toward) > 0.0) {
    const double reach = std::min(std::abs(toward), spacing);
    const double lo = toward > 0.0 ? best.delta : best.delta - reach;
    const double hi = toward > 0.0 ? best.delta + reach : best.delta;
    best = golden_section(objective, lo, hi, 1e-3 * spacing, best);
  }
  return to_estimate(best, objective);
}

DeltaTimeline run_estimator(std::span<const OrientationSample> stream1, std::span<const OrientationSample> stream2,
                            const JointModel& model, const WindowConfig& window, const OptimizerConfig& opt,
                            RomMargin margin) {
  window.validate();
  opt.validate();
  if (stream1.size() != stream2.size()) {
    throw InvalidInput("orientation streams differ in length (" + std::to_string(stream1.size()) + " vs " +
                       std::to_string(stream2.size()) + ")");
  }
  const double half_ts = 0.5 * window.sample_interval;
  for (std::size_t k = 0; k < stream1.size(); ++k) {
    if (std::abs(stream1[k].t - stream2[k].t) > half_ts + 1e-12) {
      throw InvalidInput("orientation streams misaligned at sample " + std::to_string(k) + " (t=" +
                         std::to_string(stream1[k].t) + " vs " + std::to_string(stream2[k].t) + ")");
    }
    if (k > 0 && !(stream1[k].t > stream1[k - 1].t)) {
      throw InvalidInput("orientation timestamps must strictly increase (sample " + std::to_string(k) + ")");
    }
  }

  DeltaTimeline timeline;
  if (stream1.empty()) return timeline;

  std::vector<SamplePair> pairs(stream1.size());
  std::vector<double> times(stream1.size());
  for (std::size_t k = 0; k < stream1.size(); ++k) {
    pairs[k] = {stream1[k].q, stream2[k].q};
    times[k] = stream1[k].t;
  }

  const std::size_t n_w = window.window_samples();
  const std::size_t min_samples = window.min_samples();
  const double tol = 1e-6 * window.sample_interval;
  const double t_est = window.estimation_interval;

  std::optional<double> prev;
  auto w = static_cast<long long>(std::max(1.0, std::ceil((times.front() - tol) / t_est)));
  for (;; ++w) {
    const double t_w = static_cast<double>(w) * t_est;
    if (t_w > times.back() + tol) break;
    const auto end = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t_w + tol) - times.begin());
    std::size_t begin = end > n_w ? end - n_w : 0;
    const double oldest = t_w - window.window_length - half_ts;
    while (begin < end && times[begin] < oldest) ++begin;
    if (end - begin < min_samples) continue;
    HeadingEstimate e =
        minimize_window(std::span(pairs).subspan(begin, end - begin), prev, model, margin, opt);
    e.t_w = t_w;
    timeline.append(e);
    prev = e.delta_hat;
  }
  return timeline;
}

}  // namespace romheading
