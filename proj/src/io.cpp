#include "pdmp/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>

#include <json.hpp>

#include "pdmp/errors.hpp"

namespace pdmp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SimulationError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw SimulationError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

void append_state_row(std::ostringstream& os, std::size_t segment_index, double t,
                      std::span<const double> full, int d, int m) {
  os << segment_index << ',' << format_double(t);
  for (int i = 0; i < d + m; ++i) os << ',' << format_double(full[static_cast<std::size_t>(i)]);
  os << ',' << format_double(full[static_cast<std::size_t>(d + m)]) << '\n';
}

}  // namespace

void write_trajectory_csv(const fs::path& path, const Trajectory& traj,
                          bool dense_rows) {
  const int d = traj.dim_d;
  const int m = traj.dim_m;
  std::ostringstream os;
  os << "segment,t";
  for (int i = 1; i <= d; ++i) os << ",y" << i;
  for (int i = 1; i <= m; ++i) os << ",theta" << i;
  os << ",w\n";

  for (std::size_t s = 0; s < traj.segments.size(); ++s) {
    const DenseSegment& seg = traj.segments[s];
    if (dense_rows) {
      for (const StepRecord& rec : seg.steps) {
        std::vector<double> full(static_cast<std::size_t>(d + m + 1));
        if (seg.theta_is_constant()) {
          for (int i = 0; i < d; ++i) full[static_cast<std::size_t>(i)] = rec.state_left[static_cast<std::size_t>(i)];
          for (int i = 0; i < m; ++i) full[static_cast<std::size_t>(d + i)] = seg.theta[static_cast<std::size_t>(i)];
          full[static_cast<std::size_t>(d + m)] = rec.state_left[static_cast<std::size_t>(d)];
        } else {
          full = rec.state_left;
        }
        append_state_row(os, s, rec.t_left, full, d, m);
      }
    } else if (!seg.steps.empty()) {
      std::vector<double> full(static_cast<std::size_t>(d + m + 1));
      const StepRecord& rec = seg.steps.front();
      if (seg.theta_is_constant()) {
        for (int i = 0; i < d; ++i) full[static_cast<std::size_t>(i)] = rec.state_left[static_cast<std::size_t>(i)];
        for (int i = 0; i < m; ++i) full[static_cast<std::size_t>(d + i)] = seg.theta[static_cast<std::size_t>(i)];
        full[static_cast<std::size_t>(d + m)] = rec.state_left[static_cast<std::size_t>(d)];
      } else {
        full = rec.state_left;
      }
      append_state_row(os, s, rec.t_left, full, d, m);
    } else if (s < traj.post_jump_states.size()) {
      // Analytic segments carry no steps; emit the segment's start state.
      std::vector<double> full = traj.post_jump_states[s].packed();
      full.push_back(0.0);
      append_state_row(os, s, seg.t_start, full, d, m);
    }
    if (!seg.end_state.empty())
      append_state_row(os, s, seg.t_end, seg.end_state, d, m);
  }
  write_text_atomic(path, os.str());
}

void write_jumps_csv(const fs::path& path, const Trajectory& traj) {
  const int d = traj.dim_d;
  const int m = traj.dim_m;
  std::ostringstream os;
  os << "n,t";
  for (int i = 1; i <= d; ++i) os << ",pre_y" << i;
  for (int i = 1; i <= m; ++i) os << ",pre_theta" << i;
  for (int i = 1; i <= d; ++i) os << ",post_y" << i;
  for (int i = 1; i <= m; ++i) os << ",post_theta" << i;
  os << ",height_index\n";

  for (std::size_t n = 1; n < traj.jump_times.size(); ++n) {
    os << n << ',' << format_double(traj.jump_times[n]);
    const PdmpState& pre = traj.pre_jump_states[n - 1];
    const PdmpState& post = traj.post_jump_states[n];
    for (double v : pre.y) os << ',' << format_double(v);
    for (double v : pre.theta) os << ',' << format_double(v);
    for (double v : post.y) os << ',' << format_double(v);
    for (double v : post.theta) os << ',' << format_double(v);
    os << ',' << traj.height_indices[n - 1] << '\n';
  }
  write_text_atomic(path, os.str());
}

void write_run_manifest(const fs::path& path, const std::string& model_id,
                        const std::string& tableau, double h, double horizon,
                        std::uint64_t seed, const Trajectory& traj) {
  json j;
  j["model"] = model_id;
  j["tableau"] = tableau;
  j["h"] = h;
  j["T"] = horizon;
  j["seed"] = seed;
  j["draws_consumed"] = traj.draws_consumed;
  j["n_jumps"] = traj.n_jumps();
  write_text_atomic(path, j.dump(2) + "\n");
}

void write_study_outputs(const fs::path& dir, const std::string& model_id,
                         const StudyConfig& config, const StudyResult& result) {
  // Error table. Timings live in slopes.json so the CSV is byte-reproducible.
  {
    std::ostringstream os;
    os << "model,tableau,h,err_phase_jumps,err_jump_times,err_endpoint,"
          "err_sup_continuous,mismatches,n_jumps\n";
    for (const StudyRow& row : result.rows) {
      os << model_id << ',' << tableau_cli_name(row.method) << ','
         << format_double(row.h) << ',' << format_double(row.report.err_phase_jumps)
         << ',' << format_double(row.report.err_jump_times) << ','
         << format_double(row.report.err_endpoint) << ','
         << format_double(row.report.err_sup_continuous) << ','
         << row.report.discrete_mismatch_count << ',' << row.report.n_jumps_compared
         << '\n';
    }
    write_text_atomic(dir / "errors.csv", os.str());
  }

  // Slopes, h*, reference floor and wall times.
  {
    json j;
    j["model"] = model_id;
    j["T"] = config.horizon;
    j["seed"] = config.seed;
    j["n_eval_points"] = config.n_eval_points;
    if (config.reference.kind == ReferenceSpec::Kind::Analytic) {
      j["reference"] = {{"kind", "analytic"}};
    } else {
      j["reference"] = {{"kind", "numeric"},
                        {"tableau", tableau_cli_name(config.reference.tableau)},
                        {"h_ref", config.reference.h_ref},
                        {"richardson_floor", config.reference.richardson_floor}};
    }
    j["reference_jumps"] = result.reference_jumps;
    j["reference_wall_time_s"] = result.reference_wall_time_s;
    j["reference_floor"] = {
        {"err_phase_jumps", result.reference_floor.err_phase_jumps},
        {"err_jump_times", result.reference_floor.err_jump_times},
        {"err_endpoint", result.reference_floor.err_endpoint},
        {"err_sup_continuous", result.reference_floor.err_sup_continuous}};

    json methods = json::object();
    for (const auto& [method, slopes] : result.slopes) {
      json m;
      auto put = [&m](const char* key, const std::optional<double>& v) {
        if (v.has_value())
          m[key] = *v;
        else
          m[key] = nullptr;
      };
      put("slope_phase_jumps", slopes.phase_jumps);
      put("slope_jump_times", slopes.jump_times);
      put("slope_endpoint", slopes.endpoint);
      put("slope_sup_continuous", slopes.sup_continuous);
      put("h_star", slopes.h_star);
      json wall = json::array();
      for (const StudyRow& row : result.rows)
        if (row.method == method)
          wall.push_back({{"h", row.h}, {"wall_time_s", row.wall_time_s}});
      m["runs"] = wall;
      methods[tableau_cli_name(method)] = m;
    }
    j["methods"] = methods;
    write_text_atomic(dir / "slopes.json", j.dump(2) + "\n");
  }

  // Log-log data per method plus guide lines of slopes 1..4, anchored below
  // the smallest clean error of each order's method.
  for (const auto& [method, slopes] : result.slopes) {
    (void)slopes;
    std::ostringstream os;
    os << "# h err_phase_jumps err_jump_times err_endpoint err_sup_continuous "
          "mismatches\n";
    for (const StudyRow& row : result.rows) {
      if (row.method != method) continue;
      os << format_double(row.h) << ' ' << format_double(row.report.err_phase_jumps)
         << ' ' << format_double(row.report.err_jump_times) << ' '
         << format_double(row.report.err_endpoint) << ' '
         << format_double(row.report.err_sup_continuous) << ' '
         << row.report.discrete_mismatch_count << '\n';
    }
    write_text_atomic(dir / ("loglog_" + tableau_cli_name(method) + ".dat"), os.str());
  }
  {
    std::ostringstream os;
    os << "# h guide_slope_1 guide_slope_2 guide_slope_3 guide_slope_4\n";
    // Anchor each guide line so it passes below every positive phase error
    // of the method with the matching declared order (when present).
    std::array<double, 4> anchor = {0.0, 0.0, 0.0, 0.0};
    for (const StudyRow& row : result.rows) {
      const int p = builtin_tableau(row.method).declared_order;
      const double err = row.report.err_phase_jumps;
      if (err <= 0.0) continue;
      const double c = 0.5 * err / std::pow(row.h, p);
      double& a = anchor[static_cast<std::size_t>(p - 1)];
      a = (a == 0.0) ? c : std::min(a, c);
    }
    for (const StudyRow& row : result.rows) {
      if (row.method != result.rows.front().method) continue;
      os << format_double(row.h);
      for (int p = 1; p <= 4; ++p) {
        const double c = anchor[static_cast<std::size_t>(p - 1)];
        os << ' ' << format_double(c > 0.0 ? c * std::pow(row.h, p) : 0.0);
      }
      os << '\n';
    }
    write_text_atomic(dir / "guides.dat", os.str());
  }
}

}  // namespace pdmp
