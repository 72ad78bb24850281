#include "romheading/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "romheading/error.hpp"

namespace romheading {

namespace {

template <class Sample>
AlignedStreams<Sample> align(std::span<const Sample> a, std::span<const Sample> b, double ts, double min_overlap) {
  if (!(ts > 0.0)) throw InvalidInput("resample: T_s must be positive");
  if (a.empty() || b.empty()) throw InsufficientData("resample: empty stream");
  const double start = std::max(a.front().t, b.front().t);
  const double end = std::min(a.back().t, b.back().t);
  if (end - start < min_overlap) {
    throw InsufficientData("resample: streams overlap for " + std::to_string(std::max(0.0, end - start)) +
                           " s, need at least " + std::to_string(min_overlap) + " s");
  }

  AlignedStreams<Sample> out;
  const auto n = static_cast<std::size_t>(std::floor((end - start) / ts + 1e-9)) + 1;
  out.first.reserve(n);
  out.second.reserve(n);

  auto pick = [&](std::span<const Sample> s, std::size_t& cursor, double t) {
    while (cursor + 1 < s.size() && std::abs(s[cursor + 1].t - t) <= std::abs(s[cursor].t - t)) ++cursor;
    const double dev = std::abs(s[cursor].t - t);
    if (dev > ts) {
      throw InvalidInput("resample: gap in data near t=" + std::to_string(t) + " s");
    }
    out.max_deviation = std::max(out.max_deviation, dev);
    Sample sample = s[cursor];
    sample.t = t;
    return sample;
  };

  std::size_t ca = 0, cb = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = start + static_cast<double>(k) * ts;
    out.first.push_back(pick(a, ca, t));
    out.second.push_back(pick(b, cb, t));
  }
  return out;
}

}  // namespace

AlignedStreams<OrientationSample> resample_align(std::span<const OrientationSample> first,
                                                 std::span<const OrientationSample> second, double sample_interval,
                                                 double min_overlap) {
  return align(first, second, sample_interval, min_overlap);
}

AlignedStreams<ImuSample> resample_align(std::span<const ImuSample> first, std::span<const ImuSample> second,
                                         double sample_interval, double min_overlap) {
  return align(first, second, sample_interval, min_overlap);
}

}  // namespace romheading
