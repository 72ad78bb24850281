#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "romheading/fusion.hpp"
#include "romheading/heading_estimator.hpp"
#include "romheading/metrics.hpp"
#include "romheading/simulator.hpp"

namespace romheading {

// Column layouts. Comma separated, '.' decimal point, 9 significant digits.
inline constexpr const char* kImuHeader = "t_s,gyr_x,gyr_y,gyr_z,acc_x,acc_y,acc_z";
inline constexpr const char* kOrientationHeader = "t_s,q_w,q_x,q_y,q_z";
inline constexpr const char* kTruthHeader =
    "t_s,delta_deg,q1_w,q1_x,q1_y,q1_z,q2_w,q2_x,q2_y,q2_z,alpha_deg,beta_deg,gamma_deg";
inline constexpr const char* kTimelineHeader = "t_w,delta_hat_deg,cost,violation_count";
inline constexpr const char* kErrorsHeader = "t,epsilon_deg,epsilon_delta_deg";

/// Formats a value with 9 significant digits.
std::string format_value(double v);

/// Throws ParseError (file, line, column) for malformed rows, a wrong header,
/// or timestamps that do not strictly increase.
std::vector<ImuSample> load_imu_csv(const std::filesystem::path& path);
std::pair<std::vector<ImuSample>, std::vector<ImuSample>> load_imu_pair(const std::filesystem::path& first,
                                                                       const std::filesystem::path& second);
std::vector<OrientationSample> load_orientation_csv(const std::filesystem::path& path);
std::vector<TruthSample> load_truth_csv(const std::filesystem::path& path);
DeltaTimeline load_timeline_csv(const std::filesystem::path& path);

void write_imu_csv(const std::filesystem::path& path, std::span<const ImuSample> samples);
void write_orientation_csv(const std::filesystem::path& path, std::span<const OrientationSample> samples);
void write_truth_csv(const std::filesystem::path& path, std::span<const TruthSample> samples);
void write_timeline_csv(const std::filesystem::path& path, const DeltaTimeline& timeline);

/// Text block in the layout of the usual "mean (max) errors" table: RMS and
/// maximum of epsilon and epsilon_delta, in degrees.
std::string format_summary(const ErrorReport& report);

/// Writes timeline.csv and, when a report is given, errors.csv, summary.txt
/// and report.csv into `directory` (created if missing).
void emit_results(const DeltaTimeline& timeline, const ErrorReport* report, const std::filesystem::path& directory);

}  // namespace romheading
