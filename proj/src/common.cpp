#include "mba/common.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace mba {

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Feasible: return "Feasible";
    case Status::TimeLimit: return "TimeLimit";
    case Status::Infeasible: return "Infeasible";
  }
  return "?";
}

int log_level() {
  static int level = [] {
    const char* v = std::getenv("MBA_LOG");
    if (v == nullptr || *v == '\0' || std::strcmp(v, "0") == 0) return 0;
    if (std::strcmp(v, "2") == 0 || std::strcmp(v, "debug") == 0) return 2;
    return 1;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[mba] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::fprintf(stderr, "[mba] %s\n", msg.c_str());
}

}  // namespace mba
