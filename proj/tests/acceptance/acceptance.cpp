// Runs the acceptance checks and prints one PASS/FAIL line per check.
// Usage: qrev_acceptance [id ...]   (all checks when no id is given)

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "qrev/validation.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long id = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || id < 1 || id > qrev::validation_count()) {
      std::fprintf(stderr, "usage: %s [id ...] with ids in 1..%d\n", argv[0], qrev::validation_count());
      return 64;
    }
    ids.push_back(static_cast<int>(id));
  }
  if (ids.empty())
    for (int id = 1; id <= qrev::validation_count(); ++id) ids.push_back(id);

  bool all = true;
  for (int id : ids) {
    const qrev::ValidationRow row = qrev::run_validation(id);
    std::printf("%s\n", qrev::format_row(row).c_str());
    std::fflush(stdout);
    all = all && row.pass;
  }
  return all ? 0 : 1;
}
