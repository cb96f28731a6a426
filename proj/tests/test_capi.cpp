// Exercises the shared-library interface end to end: load, check, eval,
// valid, complete, dualize, error paths, and string ownership.

#include <cstdio>
#include <cstring>
#include <string>

#include "posskit.h"

static int failures = 0;

#define EXPECT(cond, msg)                              \
  do {                                                 \
    if (!(cond)) {                                     \
      std::fprintf(stderr, "FAIL: %s\n", msg);         \
      ++failures;                                      \
    }                                                  \
  } while (0)

static std::string path(const char* name) {
  return std::string(POSSKIT_TESTDATA) + "/" + name;
}

int main() {
  EXPECT(posskit_version() != nullptr, "version string");

  posskit_structure* sea = nullptr;
  char* err = nullptr;
  int rc = posskit_load_file(path("sea.psk").c_str(), &sea, &err);
  EXPECT(rc == POSSKIT_OK, "load sea");
  EXPECT(sea != nullptr, "sea handle");
  EXPECT(std::strcmp(posskit_kind(sea), "relframe") == 0, "sea kind");

  char* report = nullptr;
  rc = posskit_check(sea, 0, &report);
  EXPECT(rc == POSSKIT_OK, "check sea");
  EXPECT(report && std::strstr(report, "up-R[f]"), "check report rows");
  posskit_free_string(report);

  report = nullptr;
  rc = posskit_eval(sea, "present", "<>f s", 0, &report);
  EXPECT(rc == POSSKIT_FAIL, "open future unsettled");
  EXPECT(report && std::strstr(report, "false"), "eval text");
  posskit_free_string(report);

  report = nullptr;
  rc = posskit_eval(sea, "present", "<>f s | ~<>f s", POSSKIT_OPT_JSON, &report);
  EXPECT(rc == POSSKIT_OK, "excluded middle settled");
  EXPECT(report && std::strstr(report, "\"result\": true"), "json result");
  posskit_free_string(report);

  report = nullptr;
  rc = posskit_valid(sea, "[]f p -> p", 0, &report);
  EXPECT(rc == POSSKIT_FAIL, "reflexive axiom fails");
  EXPECT(report && std::strstr(report, "countermodel"), "countermodel dump");
  posskit_free_string(report);

  posskit_set_search_cap(sea, 2);
  report = nullptr;
  rc = posskit_valid(sea, "p & q", 0, &report);
  EXPECT(rc == POSSKIT_ERR_CAP, "cap reported");
  posskit_free_string(report);
  posskit_set_search_cap(sea, 0);
  posskit_free(sea);

  posskit_structure* b4 = nullptr;
  rc = posskit_load_file(path("b4.psk").c_str(), &b4, &err);
  EXPECT(rc == POSSKIT_OK, "load b4");
  report = nullptr;
  rc = posskit_complete(b4, "macneille", 0, &report);
  EXPECT(rc == POSSKIT_OK, "macneille");
  EXPECT(report && std::strstr(report, "kind ba"), "completion dump");
  posskit_free_string(report);
  report = nullptr;
  rc = posskit_dualize(b4, 0, &report);
  EXPECT(rc == POSSKIT_OK, "dualize");
  EXPECT(report && std::strstr(report, "kind frame"), "frame dump");
  posskit_free_string(report);
  posskit_free(b4);

  posskit_structure* nope = nullptr;
  err = nullptr;
  rc = posskit_load_file(path("missing.psk").c_str(), &nope, &err);
  EXPECT(rc == POSSKIT_ERR_INPUT, "missing file");
  EXPECT(nope == nullptr, "no handle on failure");
  EXPECT(err != nullptr, "error message");
  posskit_free_string(err);

  err = nullptr;
  rc = posskit_load_string("kind poset\nelements a b\nle a b\nle b a\n", &nope, &err);
  EXPECT(rc == POSSKIT_ERR_INPUT, "cyclic order rejected");
  posskit_free_string(err);

  EXPECT(posskit_check(nullptr, 0, nullptr) == POSSKIT_ERR_INPUT, "null handle");

  if (failures == 0) std::puts("all C interface checks passed");
  return failures == 0 ? 0 : 1;
}
