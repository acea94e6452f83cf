#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cli/config.hpp"

namespace circreg::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRefused = 3;
inline constexpr int kExitCheckFailed = 4;
inline constexpr int kExitInsufficient = 5;

struct RunContext {
  Config config;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = ".";
  std::size_t chains = 0;  // 0: take the config value
  std::size_t max_edges_enumerate = 20;
  bool strict = false;
};

int run_sample(const RunContext& ctx);
int run_wulff(const RunContext& ctx);
int run_condition(const RunContext& ctx);
int run_surgery_check(const RunContext& ctx);
int run_oracle(const RunContext& ctx);
int run_geom_test(const RunContext& ctx);

// Text for --help describing every CSV the tool writes.
const char* csv_schemas();

}  // namespace circreg::cli
