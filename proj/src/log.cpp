#include "trirl/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace trirl {

void init_logging_from_env() {
  auto logger = spdlog::get("trirl");
  if (!logger)
    logger = spdlog::stderr_color_mt("trirl");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");

  const char *env = std::getenv("TRIRL_LOG");
  const std::string level = env ? env : "error";
  if (level == "trace")
    spdlog::set_level(spdlog::level::trace);
  else if (level == "debug")
    spdlog::set_level(spdlog::level::debug);
  else if (level == "info")
    spdlog::set_level(spdlog::level::info);
  else
    spdlog::set_level(spdlog::level::err);
}

} // namespace trirl
