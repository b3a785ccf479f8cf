#include "criteria.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

namespace {

int usage() {
  std::fprintf(stderr, "usage: pwsgd_acceptance [--only N] [--list]\n");
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--list") {
      for (const auto& c : acceptance::registry()) std::printf("%d %s\n", c.id, c.name.c_str());
      return 0;
    } else {
      return usage();
    }
  }
  int failed = 0;
  int ran = 0;
  for (const auto& c : acceptance::registry()) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    acceptance::Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = "runtime " + std::to_string(secs) + " s";
    if (c.runtime_limit_sec > 0.0) {
      timing += " (limit " + std::to_string(c.runtime_limit_sec) + " s)";
      if (secs >= c.runtime_limit_sec) {
        out.pass = false;
        timing += " over limit";
      }
    }
    std::printf("criterion %d %s: %s; %s; %s\n", c.id, c.name.c_str(), out.pass ? "PASS" : "FAIL",
                out.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion with id %d\n", only);
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
