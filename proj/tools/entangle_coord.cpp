#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "entangle_coord/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  entangle::cli::Environment env;
  if (const char* seed = std::getenv(entangle::cli::kSeedEnvVar)) env.seed = seed;
  return entangle::cli::run(args, std::cout, std::cerr, env);
}
