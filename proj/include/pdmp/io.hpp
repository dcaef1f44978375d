#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "pdmp/metrics.hpp"
#include "pdmp/trajectory.hpp"

namespace pdmp {

/// Shortest-round-trip decimal rendering at 17 significant digits; the fixed
/// formatting is what makes output files byte-reproducible.
std::string format_double(double v);

/// Writes content to path via a temporary file and rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Grid-point samples of the augmented state:
/// segment_index, t, y_1..y_d, theta_1..theta_m, w. With dense_rows every
/// step's left grid point is emitted, otherwise only segment boundaries.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          bool dense_rows);

/// Jump records: n, t_n, pre-jump state, post-jump state, height_index.
void write_jumps_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Run manifest: model id, tableau, h, T, seed, draws_consumed, n_jumps.
void write_run_manifest(const std::filesystem::path& path, const std::string& model_id,
                        const std::string& tableau, double h, double horizon,
                        std::uint64_t seed, const Trajectory& traj);

/// Study outputs: errors.csv (error table), slopes.json (slopes, h*, floor,
/// timings), per-method log-log data files and slope guide lines for
/// plotting.
void write_study_outputs(const std::filesystem::path& dir, const std::string& model_id,
                         const StudyConfig& config, const StudyResult& result);

}  // namespace pdmp
