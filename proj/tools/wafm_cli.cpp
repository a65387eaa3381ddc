#include <iostream>

#include "wafm/cli.hpp"
#include "wafm/linalg.hpp"

int main(int argc, char** argv) {
  wafm::linalg::pin_blas_kernel(argc, argv);
  return wafm::run_cli(argc, argv, std::cout, std::cerr);
}
