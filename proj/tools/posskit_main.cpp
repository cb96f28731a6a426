// Command-line front end; all work happens behind the C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "posskit.h"

namespace {

posskit_structure* load_or_die(const std::string& path, long long cap) {
  posskit_structure* s = nullptr;
  char* err = nullptr;
  int rc = posskit_load_file(path.c_str(), &s, &err);
  if (rc != POSSKIT_OK) {
    std::fprintf(stderr, "error: %s\n", err ? err : "cannot load structure");
    posskit_free_string(err);
    std::exit(rc);
  }
  if (cap > 0) posskit_set_search_cap(s, cap);
  return s;
}

int finish(posskit_structure* s, int rc, char* report) {
  if (report) {
    std::fputs(report, stdout);
    if (report[0] && report[std::strlen(report) - 1] != '\n') std::fputc('\n', stdout);
    posskit_free_string(report);
  }
  posskit_free(s);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"possibility-semantics toolkit"};
  app.require_subcommand(1);

  std::string path, point, formula, what;
  bool json = false, verbose = false;
  long long cap = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("path", path, "structure file")->required();
    cmd->add_flag("--json", json, "machine-readable report");
    cmd->add_option("--cap", cap, "valuation-space guard for searches");
  };

  CLI::App* check = app.add_subcommand("check", "run every applicable validator");
  add_common(check);

  CLI::App* eval = app.add_subcommand("eval", "force a formula at a point");
  add_common(eval);
  eval->add_option("-x,--point", point, "possibility to evaluate at")->required();
  eval->add_option("-f,--formula", formula, "formula text")->required();
  eval->add_flag("--verbose", verbose, "list forced sets of subformulas");

  CLI::App* valid = app.add_subcommand("valid", "search for a countermodel");
  add_common(valid);
  valid->add_option("-f,--formula", formula, "formula text")->required();

  CLI::App* complete = app.add_subcommand("complete", "run a completion construction");
  complete->add_option("what", what, "macneille|canonical|ro|dragalin")->required();
  add_common(complete);

  CLI::App* dualize = app.add_subcommand("dualize", "cross between frames and algebras");
  add_common(dualize);

  CLI11_PARSE(app, argc, argv);

  unsigned opts = (json ? POSSKIT_OPT_JSON : 0u) | (verbose ? POSSKIT_OPT_VERBOSE : 0u);
  posskit_structure* s = load_or_die(path, cap);
  char* report = nullptr;
  int rc = POSSKIT_ERR_INPUT;
  if (check->parsed()) rc = posskit_check(s, opts, &report);
  else if (eval->parsed()) rc = posskit_eval(s, point.c_str(), formula.c_str(), opts, &report);
  else if (valid->parsed()) rc = posskit_valid(s, formula.c_str(), opts, &report);
  else if (complete->parsed()) rc = posskit_complete(s, what.c_str(), opts, &report);
  else if (dualize->parsed()) rc = posskit_dualize(s, opts, &report);
  return finish(s, rc, report);
}
