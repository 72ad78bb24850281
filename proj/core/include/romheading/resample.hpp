#pragma once

#include <span>
#include <vector>

#include "romheading/fusion.hpp"

namespace romheading {

template <class Sample>
struct AlignedStreams {
  std::vector<Sample> first;
  std::vector<Sample> second;
  double max_deviation = 0.0;  ///< largest |t_source - t_grid| over both streams, s
};

/// Puts two streams on a common grid start + n * T_s over their overlap, by
/// nearest neighbour (ties go to the later sample); output samples carry the
/// grid time. Throws
/// InsufficientData when the overlap is shorter than `min_overlap` (callers
/// pass 2 * T_w), InvalidInput when a source sample is further than T_s from
/// its grid point (a gap in the data).
AlignedStreams<OrientationSample> resample_align(std::span<const OrientationSample> first,
                                                 std::span<const OrientationSample> second, double sample_interval,
                                                 double min_overlap);
AlignedStreams<ImuSample> resample_align(std::span<const ImuSample> first, std::span<const ImuSample> second,
                                         double sample_interval, double min_overlap);

}  // namespace romheading
