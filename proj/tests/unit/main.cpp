#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "wafm/linalg.hpp"

int main(int argc, char** argv) {
  wafm::linalg::pin_blas_kernel(argc, argv);
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
