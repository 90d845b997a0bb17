#ifndef TRIRL_LOG_HPP
#define TRIRL_LOG_HPP

namespace trirl {

/// Routes diagnostics to stderr at the level named by TRIRL_LOG
/// (error, info, debug, trace; default error).
void init_logging_from_env();

} // namespace trirl

#endif // TRIRL_LOG_HPP
