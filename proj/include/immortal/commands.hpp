// commands.hpp: the `immortal` command-line surface (track, eval, simulate, ablate)

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace immortal
{

/// Exit codes.
enum ExitCode : int
{
  kExitOk = 0,
  kExitUsage = 1,  ///< bad arguments, unreadable or malformed input
  kExitData = 2,  ///< inputs parse but are inconsistent
};

struct TrackArgs
{
  std::filesystem::path dets;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out;
};

struct EvalArgs
{
  std::filesystem::path gt;
  std::filesystem::path tracks;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> json;
};

struct SimulateArgs
{
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dets;
  std::filesystem::path out_gt;
};

struct AblateArgs
{
  std::filesystem::path dets;
  std::filesystem::path gt;
  std::optional<std::filesystem::path> config;
  std::string sweep;  ///< KEY=v1,v2,...
  std::optional<std::filesystem::path> plot;
};

struct AblationRow
{
  double value = 0.0;
  double mota = 0.0;
  double fp_pct = 0.0;
  double miss_pct = 0.0;
  double mismatch_pct = 0.0;
  std::size_t ids = 0;
  std::size_t ids_early_termination = 0;
  std::size_t ids_wrong_association = 0;
};

int cmd_track(const TrackArgs& args, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_ablate(const AblateArgs& args, std::ostream& out, std::ostream& err);

/// Parses "KEY=v1,v2,..."; throws std::invalid_argument on bad syntax or an unknown key.
std::pair<std::string, std::vector<double>> parse_sweep(const std::string& spec);

/// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace immortal
