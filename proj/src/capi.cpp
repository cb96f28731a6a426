#include "posskit.h"

#include <cstring>
#include <new>

#include "commands.hpp"

using namespace posskit;

struct posskit_structure {
  Structure s;
  Caps caps;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int deliver(const CmdResult& r, unsigned opts, char** report) {
  if (report) *report = dup_string(opts & POSSKIT_OPT_JSON ? r.json : r.text);
  return r.status;
}

}  // namespace

extern "C" {

const char* posskit_version(void) { return "1.0.0"; }

int posskit_load_file(const char* path, posskit_structure** out, char** errmsg) {
  if (!path || !out) return POSSKIT_ERR_INPUT;
  *out = nullptr;
  try {
    auto* handle = new posskit_structure{load_structure(path), Caps{}};
    *out = handle;
    return POSSKIT_OK;
  } catch (const Error& e) {
    if (errmsg) *errmsg = dup_string(e.what());
    return e.kind() == Error::Kind::cap ? POSSKIT_ERR_CAP : POSSKIT_ERR_INPUT;
  } catch (const std::exception& e) {
    if (errmsg) *errmsg = dup_string(e.what());
    return POSSKIT_ERR_INPUT;
  }
}

int posskit_load_string(const char* text, posskit_structure** out, char** errmsg) {
  if (!text || !out) return POSSKIT_ERR_INPUT;
  *out = nullptr;
  try {
    auto* handle = new posskit_structure{parse_structure(text), Caps{}};
    *out = handle;
    return POSSKIT_OK;
  } catch (const Error& e) {
    if (errmsg) *errmsg = dup_string(e.what());
    return e.kind() == Error::Kind::cap ? POSSKIT_ERR_CAP : POSSKIT_ERR_INPUT;
  } catch (const std::exception& e) {
    if (errmsg) *errmsg = dup_string(e.what());
    return POSSKIT_ERR_INPUT;
  }
}

void posskit_free(posskit_structure* s) { delete s; }

void posskit_free_string(char* s) { delete[] s; }

const char* posskit_kind(const posskit_structure* s) {
  if (!s) return "";
  static thread_local std::string kind;
  kind = kind_name(s->s.kind);
  return kind.c_str();
}

void posskit_set_search_cap(posskit_structure* s, long long cap) {
  if (!s) return;
  s->caps.valid_space = cap > 0 ? cap : default_caps().valid_space;
}

int posskit_check(const posskit_structure* s, unsigned opts, char** report) {
  if (!s) return POSSKIT_ERR_INPUT;
  return deliver(cmd_check(s->s, s->caps), opts, report);
}

int posskit_eval(const posskit_structure* s, const char* point, const char* formula,
                 unsigned opts, char** report) {
  if (!s || !point || !formula) return POSSKIT_ERR_INPUT;
  return deliver(cmd_eval(s->s, point, formula, opts & POSSKIT_OPT_VERBOSE, s->caps), opts,
                 report);
}

int posskit_valid(const posskit_structure* s, const char* formula, unsigned opts,
                  char** report) {
  if (!s || !formula) return POSSKIT_ERR_INPUT;
  return deliver(cmd_valid(s->s, formula, s->caps), opts, report);
}

int posskit_complete(const posskit_structure* s, const char* what, unsigned opts,
                     char** report) {
  if (!s || !what) return POSSKIT_ERR_INPUT;
  return deliver(cmd_complete(s->s, what, s->caps), opts, report);
}

int posskit_dualize(const posskit_structure* s, unsigned opts, char** report) {
  if (!s) return POSSKIT_ERR_INPUT;
  return deliver(cmd_dualize(s->s, s->caps), opts, report);
}

}  // extern "C"
