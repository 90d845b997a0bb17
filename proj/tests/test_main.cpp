#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "trirl/log.hpp"

int main(int argc, char **argv) {
  trirl::init_logging_from_env();
  return doctest::Context(argc, argv).run();
}
