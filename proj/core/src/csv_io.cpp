#include "romheading/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/os.h>

#include "romheading/error.hpp"

namespace romheading {

namespace fs = std::filesystem;

std::string format_value(double v) { return fmt::format("{:.9g}", v); }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Reads a headed CSV with a fixed number of numeric columns and hands each
// row to `row(values, line_number)`.
template <class RowFn>
void read_numeric_csv(const fs::path& path, std::string_view header, std::size_t columns, RowFn row) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path.string(), 1, 1, "missing header row");
  ++line_no;
  if (trim(line) != header) {
    throw ParseError(path.string(), 1, 1, "expected header '" + std::string(header) + "'");
  }
  std::vector<double> values(columns);
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    std::size_t col = 0, pos = 0;
    while (true) {
      const std::size_t comma = text.find(',', pos);
      const std::string_view field = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                                            : comma - pos));
      if (col >= columns) {
        throw ParseError(path.string(), line_no, col + 1, "expected " + std::to_string(columns) + " columns");
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size() || field.empty() || !std::isfinite(v)) {
        throw ParseError(path.string(), line_no, col + 1, "invalid number '" + std::string(field) + "'");
      }
      values[col++] = v;
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (col != columns) {
      throw ParseError(path.string(), line_no, col + 1, "expected " + std::to_string(columns) + " columns");
    }
    row(values, line_no);
  }
}

template <class Samples>
void check_increasing(const fs::path& path, const Samples& samples, double t, std::size_t line_no,
                      const char* what = "t_s") {
  if (!samples.empty() && !(t > samples.back().t)) {
    throw ParseError(path.string(), line_no, 1, std::string(what) + " does not strictly increase");
  }
}

fmt::ostream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  return fmt::output_file(path.string());
}

}  // namespace

std::vector<ImuSample> load_imu_csv(const fs::path& path) {
  std::vector<ImuSample> out;
  read_numeric_csv(path, kImuHeader, 7, [&](const std::vector<double>& v, std::size_t line) {
    check_increasing(path, out, v[0], line);
    out.push_back({v[0], Vec3(v[1], v[2], v[3]), Vec3(v[4], v[5], v[6])});
  });
  return out;
}

std::pair<std::vector<ImuSample>, std::vector<ImuSample>> load_imu_pair(const fs::path& first,
                                                                       const fs::path& second) {
  return {load_imu_csv(first), load_imu_csv(second)};
}

std::vector<OrientationSample> load_orientation_csv(const fs::path& path) {
  std::vector<OrientationSample> out;
  read_numeric_csv(path, kOrientationHeader, 5, [&](const std::vector<double>& v, std::size_t line) {
    check_increasing(path, out, v[0], line);
    const Quaternion q{v[1], v[2], v[3], v[4]};
    if (std::abs(q.norm() - 1.0) > 1e-6) throw ParseError(path.string(), line, 2, "quaternion is not unit");
    out.push_back({v[0], q.normalized()});
  });
  return out;
}

std::vector<TruthSample> load_truth_csv(const fs::path& path) {
  std::vector<TruthSample> out;
  read_numeric_csv(path, kTruthHeader, 13, [&](const std::vector<double>& v, std::size_t line) {
    check_increasing(path, out, v[0], line);
    const Quaternion q1{v[2], v[3], v[4], v[5]};
    const Quaternion q2{v[6], v[7], v[8], v[9]};
    if (std::abs(q1.norm() - 1.0) > 1e-6) throw ParseError(path.string(), line, 3, "quaternion is not unit");
    if (std::abs(q2.norm() - 1.0) > 1e-6) throw ParseError(path.string(), line, 7, "quaternion is not unit");
    out.push_back({v[0], q1.normalized(), q2.normalized(), deg2rad(v[1]),
                   {deg2rad(v[10]), deg2rad(v[11]), deg2rad(v[12])}});
  });
  return out;
}

DeltaTimeline load_timeline_csv(const fs::path& path) {
  DeltaTimeline timeline;
  read_numeric_csv(path, kTimelineHeader, 4, [&](const std::vector<double>& v, std::size_t line) {
    if (!timeline.empty() && !(v[0] > timeline.estimates().back().t_w)) {
      throw ParseError(path.string(), line, 1, "t_w does not strictly increase");
    }
    if (v[3] < 0.0) throw ParseError(path.string(), line, 4, "violation_count must be >= 0");
    HeadingEstimate e;
    e.t_w = v[0];
    e.delta_hat = wrap_two_pi(deg2rad(v[1]));
    e.cost = v[2];
    e.violation_count = static_cast<std::size_t>(v[3]);
    timeline.append(e);
  });
  return timeline;
}

void write_imu_csv(const fs::path& path, std::span<const ImuSample> samples) {
  auto out = open_out(path);
  out.print("{}\n", kImuHeader);
  for (const auto& s : samples) {
    out.print("{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", s.t, s.gyro.x(), s.gyro.y(), s.gyro.z(),
              s.accel.x(), s.accel.y(), s.accel.z());
  }
}

void write_orientation_csv(const fs::path& path, std::span<const OrientationSample> samples) {
  auto out = open_out(path);
  out.print("{}\n", kOrientationHeader);
  for (const auto& s : samples) out.print("{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", s.t, s.q.w, s.q.x, s.q.y, s.q.z);
}

void write_truth_csv(const fs::path& path, std::span<const TruthSample> samples) {
  auto out = open_out(path);
  out.print("{}\n", kTruthHeader);
  for (const auto& s : samples) {
    out.print("{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", s.t,
              rad2deg(s.delta), s.q1.w, s.q1.x, s.q1.y, s.q1.z, s.q2.w, s.q2.x, s.q2.y, s.q2.z,
              rad2deg(s.angles[0]), rad2deg(s.angles[1]), rad2deg(s.angles[2]));
  }
}

void write_timeline_csv(const fs::path& path, const DeltaTimeline& timeline) {
  auto out = open_out(path);
  out.print("{}\n", kTimelineHeader);
  for (const auto& e : timeline.estimates()) {
    out.print("{:.9g},{:.9g},{:.9g},{}\n", e.t_w, rad2deg(e.delta_hat), e.cost, e.violation_count);
  }
}

std::string format_summary(const ErrorReport& report) {
  std::string s;
  s += "error              RMS_deg   (max_deg)\n";
  s += fmt::format("epsilon        {:>10.3f}   ({:.3f})\n", rad2deg(report.epsilon_rms), rad2deg(report.epsilon_max));
  s += fmt::format("epsilon_delta  {:>10.3f}   ({:.3f})\n", rad2deg(report.epsilon_delta_rms),
                   rad2deg(report.epsilon_delta_max));
  return s;
}

void emit_results(const DeltaTimeline& timeline, const ErrorReport* report, const fs::path& directory) {
  fs::create_directories(directory);
  write_timeline_csv(directory / "timeline.csv", timeline);
  if (report == nullptr) return;

  {
    auto out = open_out(directory / "errors.csv");
    out.print("{}\n", kErrorsHeader);
    for (std::size_t k = 0; k < report->t.size(); ++k) {
      out.print("{:.9g},{:.9g},{:.9g}\n", report->t[k], rad2deg(report->epsilon[k]),
                rad2deg(report->epsilon_delta[k]));
    }
  }
  {
    auto out = open_out(directory / "summary.txt");
    out.print("{}", format_summary(*report));
  }
  {
    auto out = open_out(directory / "report.csv");
    out.print("metric,value\n");
    out.print("epsilon_rms_deg,{:.9g}\n", rad2deg(report->epsilon_rms));
    out.print("epsilon_delta_rms_deg,{:.9g}\n", rad2deg(report->epsilon_delta_rms));
    out.print("epsilon_max_deg,{:.9g}\n", rad2deg(report->epsilon_max));
    out.print("epsilon_delta_max_deg,{:.9g}\n", rad2deg(report->epsilon_delta_max));
    out.print("sample_count,{}\n", report->sample_count());
    if (report->convergence_time) {
      out.print("convergence_time_s,{:.9g}\n", *report->convergence_time);
    } else {
      out.print("convergence_time_s,\n");
    }
  }
}

}  // namespace romheading
