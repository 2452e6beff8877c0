#include <iostream>
#include <string>
#include <vector>

#include "vanilla/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string stdin_text;
  for (const std::string& a : args) {
    if (a == "-") {
      std::ostringstream ss;
      ss << std::cin.rdbuf();
      stdin_text = ss.str();
      break;
    }
  }
  vanilla::cli::RunResult r = vanilla::cli::run(args, stdin_text);
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}
