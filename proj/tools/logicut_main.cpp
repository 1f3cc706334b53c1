#include <string>
#include <vector>

#include "logicut/report.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return logicut::run_cli(args);
}
