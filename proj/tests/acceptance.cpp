#include <cstdio>
#include <cstdlib>

#include "fracspec/fracspec.h"

int main(int argc, char** argv) {
  const unsigned long long seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 0;
  fs_validation* v = nullptr;
  if (fs_validate(seed, 0.0, &v) != FS_OK) {
    std::fprintf(stderr, "validation failed to run: %s\n", fs_last_error());
    return 2;
  }
  size_t count = 0;
  fs_validation_count(v, &count);
  int failed = 0;
  for (size_t i = 0; i < count; ++i) {
    int id = 0, pass = 0;
    const char* name = nullptr;
    const char* detail = nullptr;
    fs_validation_criterion(v, i, &id, &name, &pass, &detail);
    std::printf("%s criterion %2d %s%s%s\n", pass ? "PASS" : "FAIL", id, name, *detail ? ": " : "", detail);
    if (!pass) ++failed;
  }
  const char* json = nullptr;
  fs_validation_json(v, &json);
  std::printf("%s\n", json);
  fs_validation_free(v);
  std::printf("%d of %zu criteria failed\n", failed, count);
  return failed == 0 ? 0 : 1;
}
